#pragma once

#include <cstddef>
#include <vector>

namespace mcflab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

// Polygonal plane curve stored as coordinate columns. Closed curves wrap
// around; open curves have two endpoints with zero curvature.
class DiscreteCurve {
 public:
  DiscreteCurve() = default;
  DiscreteCurve(std::vector<double> xs, std::vector<double> ys, bool closed = true);

  static DiscreteCurve circle(double radius, std::size_t n, Point center = {}, double phase = 0.0);
  static DiscreteCurve ellipse(double a, double b, std::size_t n);
  // limacon r = (1 - loop) + cos(theta); inner loop of extent `loop`
  static DiscreteCurve limacon(double loop, std::size_t n, double gamma = 8.0);
  static DiscreteCurve figure_eight(std::size_t n);
  static DiscreteCurve segment(Point a, Point b, std::size_t n);

  std::size_t size() const { return xs_.size(); }
  bool closed() const { return closed_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  Point point(std::size_t i) const { return {xs_[i], ys_[i]}; }

  double curvature(std::size_t i) const { return k_[i]; }
  const std::vector<double>& curvatures() const { return k_; }
  Point tangent(std::size_t i) const { return {tx_[i], ty_[i]}; }
  Point normal(std::size_t i) const { return {-ty_[i], tx_[i]}; }
  Point mean_curvature(std::size_t i) const { return k_[i] * normal(i); }

  std::size_t edge_count() const { return closed_ ? size() : size() - 1; }
  double edge_length(std::size_t e) const { return edge_[e]; }
  const std::vector<double>& arc() const { return arc_; }  // cumulative length at vertices
  double length() const { return length_; }

  std::size_t next(std::size_t i) const { return i + 1 == size() ? 0 : i + 1; }
  std::size_t prev(std::size_t i) const { return i == 0 ? size() - 1 : i - 1; }

  int turning_number() const;
  double induced_distance(std::size_t i, std::size_t j) const;
  double sup_curvature() const;
  std::size_t argmax_curvature() const;

  DiscreteCurve transformed(double scale, Point shift) const;  // scale * (p - shift)

 private:
  void derive();

  std::vector<double> xs_, ys_;
  bool closed_ = true;
  std::vector<double> k_, tx_, ty_, edge_, arc_;
  double length_ = 0.0;
};

// Equal-chord redistribution along the polyline with vertex 0 kept fixed.
DiscreteCurve resample_arclength(const DiscreteCurve& c, std::size_t n);
// Chords equidistributed against the weight 1 + gamma |k| L / (2 pi).
DiscreteCurve resample_adaptive(const DiscreteCurve& c, std::size_t n, double gamma);

// closest point on the polyline: segment index and fraction
struct PolylineHit {
  std::size_t segment = 0;
  double fraction = 0.0;
  Point point;
  double distance = 0.0;
};
PolylineHit closest_point(const DiscreteCurve& c, Point q);

bool self_intersects(const DiscreteCurve& c);

}  // namespace mcflab
