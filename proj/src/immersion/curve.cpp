#include "mcflab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mcflab/kernels.hpp"

namespace mcflab {

double norm(Point a) { return std::hypot(a.x, a.y); }

DiscreteCurve::DiscreteCurve(std::vector<double> xs, std::vector<double> ys, bool closed)
    : xs_(std::move(xs)), ys_(std::move(ys)), closed_(closed) {
  derive();
}

void DiscreteCurve::derive() {
  const std::size_t n = xs_.size();
  if (ys_.size() != n) throw std::invalid_argument("curve coordinate columns differ in length");
  if (closed_ && n < 16) throw std::invalid_argument("closed curve needs at least 16 vertices");
  if (!closed_ && n < 3) throw std::invalid_argument("open curve needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i]))
      throw std::invalid_argument("curve has non-finite coordinates");

  const std::size_t ne = edge_count();
  edge_.resize(ne);
  arc_.assign(n, 0.0);
  length_ = 0.0;
  for (std::size_t e = 0; e < ne; ++e) {
    const std::size_t j = next(e);
    edge_[e] = std::hypot(xs_[j] - xs_[e], ys_[j] - ys_[e]);
    if (!(edge_[e] > 0.0)) throw std::invalid_argument("curve has a zero-length edge");
    if (e + 1 < n) arc_[e + 1] = arc_[e] + edge_[e];
    length_ += edge_[e];
  }

  k_.assign(n, 0.0);
  const auto& K = kernels::active();
  K.menger(xs_.data(), ys_.data(), xs_.data() + 1, ys_.data() + 1, xs_.data() + 2,
           ys_.data() + 2, n - 2, k_.data() + 1);
  if (closed_) {
    const double ax[2] = {xs_[n - 1], xs_[n - 2]}, ay[2] = {ys_[n - 1], ys_[n - 2]};
    const double bx[2] = {xs_[0], xs_[n - 1]}, by[2] = {ys_[0], ys_[n - 1]};
    const double cx[2] = {xs_[1], xs_[0]}, cy[2] = {ys_[1], ys_[0]};
    double kk[2];
    K.menger(ax, ay, bx, by, cx, cy, 2, kk);
    k_[0] = kk[0];
    k_[n - 1] = kk[1];
  }

  tx_.resize(n);
  ty_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point t;
    const bool has_prev = closed_ || i > 0, has_next = closed_ || i + 1 < n;
    Point u1{}, u2{};
    if (has_prev) {
      const std::size_t p = prev(i);
      u1 = (1.0 / edge_[p]) * (point(i) - point(p));
    }
    if (has_next) {
      const std::size_t q = next(i);
      u2 = (1.0 / edge_[i]) * (point(q) - point(i));
    }
    t = u1 + u2;
    double l = norm(t);
    if (l < 1e-12) {
      t = has_next ? u2 : u1;
      l = 1.0;
    }
    tx_[i] = t.x / l;
    ty_[i] = t.y / l;
  }
}

DiscreteCurve DiscreteCurve::circle(double radius, std::size_t n, Point center, double phase) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    xs[i] = center.x + radius * std::cos(a);
    ys[i] = center.y + radius * std::sin(a);
  }
  return DiscreteCurve(std::move(xs), std::move(ys), true);
}

namespace {

template <class F>
DiscreteCurve dense(F f, std::size_t n) {
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = f(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    xs[i] = p.x;
    ys[i] = p.y;
  }
  return DiscreteCurve(std::move(xs), std::move(ys), true);
}

}  // namespace

DiscreteCurve DiscreteCurve::ellipse(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("ellipse semi-axes must be positive");
  const auto d = dense([&](double t) { return Point{a * std::cos(t), b * std::sin(t)}; }, 16 * n);
  return resample_arclength(d, n);
}

DiscreteCurve DiscreteCurve::limacon(double loop, std::size_t n, double gamma) {
  if (!(loop > 0.0 && loop < 1.0)) throw std::invalid_argument("limacon loop must be in (0,1)");
  const double b = 1.0 - loop;
  const auto d = dense(
      [&](double t) {
        const double r = b + std::cos(t);
        return Point{r * std::cos(t), r * std::sin(t)};
      },
      32 * n);
  return resample_adaptive(d, n, gamma);
}

DiscreteCurve DiscreteCurve::figure_eight(std::size_t n) {
  const auto d = dense([](double t) { return Point{std::sin(t), std::sin(t) * std::cos(t)}; }, 16 * n + 1);
  return resample_arclength(d, n);
}

DiscreteCurve DiscreteCurve::segment(Point a, Point b, std::size_t n) {
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    xs[i] = a.x + s * (b.x - a.x);
    ys[i] = a.y + s * (b.y - a.y);
  }
  return DiscreteCurve(std::move(xs), std::move(ys), false);
}

int DiscreteCurve::turning_number() const {
  if (!closed_) return 0;
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const Point e1 = point(i) - point(prev(i)), e2 = point(next(i)) - point(i);
    total += std::atan2(cross(e1, e2), dot(e1, e2));
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

double DiscreteCurve::induced_distance(std::size_t i, std::size_t j) const {
  const double d = std::fabs(arc_[j] - arc_[i]);
  return closed_ ? std::min(d, length_ - d) : d;
}

double DiscreteCurve::sup_curvature() const {
  double s = 0.0;
  for (double k : k_) s = std::max(s, std::fabs(k));
  return s;
}

std::size_t DiscreteCurve::argmax_curvature() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < k_.size(); ++i)
    if (std::fabs(k_[i]) > std::fabs(k_[best])) best = i;
  return best;
}

DiscreteCurve DiscreteCurve::transformed(double scale, Point shift) const {
  std::vector<double> xs(size()), ys(size());
  for (std::size_t i = 0; i < size(); ++i) {
    xs[i] = scale * (xs_[i] - shift.x);
    ys[i] = scale * (ys_[i] - shift.y);
  }
  return DiscreteCurve(std::move(xs), std::move(ys), closed_);
}

namespace {

struct Param {
  const DiscreteCurve& c;
  Point at(double s) const {
    const auto& arc = c.arc();
    const double L = c.length();
    s = std::clamp(s, 0.0, L);
    std::size_t e = static_cast<std::size_t>(std::upper_bound(arc.begin(), arc.end(), s) - arc.begin());
    e = e == 0 ? 0 : e - 1;
    if (e >= c.edge_count()) e = c.edge_count() - 1;
    const double f = (s - arc[e]) / c.edge_length(e);
    const Point a = c.point(e), b = c.point(c.next(e));
    return a + f * (b - a);
  }
  double curvature_at(double s) const {
    const auto& arc = c.arc();
    s = std::clamp(s, 0.0, c.length());
    std::size_t e = static_cast<std::size_t>(std::upper_bound(arc.begin(), arc.end(), s) - arc.begin());
    e = e == 0 ? 0 : e - 1;
    if (e >= c.edge_count()) e = c.edge_count() - 1;
    const double f = (s - arc[e]) / c.edge_length(e);
    return (1.0 - f) * std::fabs(c.curvature(e)) + f * std::fabs(c.curvature(c.next(e)));
  }
};

template <class W>
DiscreteCurve equidistribute(const DiscreteCurve& c, std::size_t n, W weight) {
  if (!c.closed()) throw std::invalid_argument("resampling requires a closed curve");
  if (n < 16) throw std::invalid_argument("resampling needs at least 16 vertices");
  const Param P{c};
  const double L = c.length();
  std::vector<double> sig(n + 1), C(n + 1);
  for (std::size_t i = 0; i <= n; ++i) sig[i] = L * static_cast<double>(i) / static_cast<double>(n);
  std::vector<Point> Y(n);
  for (int it = 0; it < 100; ++it) {
    for (std::size_t i = 0; i < n; ++i) Y[i] = P.at(sig[i]);
    C[0] = 0.0;
    double cmin = 1e300, cmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = weight(0.5 * (sig[i] + sig[i + 1]));
      const double ch = w * norm(Y[(i + 1) % n] - Y[i]);
      cmin = std::min(cmin, ch);
      cmax = std::max(cmax, ch);
      C[i + 1] = C[i] + ch;
    }
    if (cmax - cmin <= 1e-14 * cmax) break;
    std::vector<double> ns(n + 1);
    ns[0] = 0.0;
    ns[n] = L;
    std::size_t seg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const double target = C[n] * static_cast<double>(i) / static_cast<double>(n);
      while (seg + 1 < n && C[seg + 1] < target) ++seg;
      const double f = (target - C[seg]) / (C[seg + 1] - C[seg]);
      ns[i] = sig[seg] + f * (sig[seg + 1] - sig[seg]);
    }
    sig.swap(ns);
  }
  for (std::size_t i = 0; i < n; ++i) Y[i] = P.at(sig[i]);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = Y[i].x;
    ys[i] = Y[i].y;
  }
  xs[0] = c.point(0).x;
  ys[0] = c.point(0).y;
  return DiscreteCurve(std::move(xs), std::move(ys), true);
}

}  // namespace

DiscreteCurve resample_arclength(const DiscreteCurve& c, std::size_t n) {
  return equidistribute(c, n, [](double) { return 1.0; });
}

DiscreteCurve resample_adaptive(const DiscreteCurve& c, std::size_t n, double gamma) {
  const Param P{c};
  const double scale = gamma * c.length() / (2.0 * std::numbers::pi);
  return equidistribute(c, n, [&](double s) { return 1.0 + scale * P.curvature_at(s); });
}

PolylineHit closest_point(const DiscreteCurve& c, Point q) {
  PolylineHit best;
  best.distance = 1e300;
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    const Point a = c.point(e), b = c.point(c.next(e));
    const Point d = b - a;
    const double f = std::clamp(dot(q - a, d) / dot(d, d), 0.0, 1.0);
    const Point p = a + f * d;
    const double dist = norm(q - p);
    if (dist < best.distance) best = {e, f, p, dist};
  }
  return best;
}

namespace {

int orient(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_meet(Point a, Point b, Point c, Point d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool self_intersects(const DiscreteCurve& c) {
  const std::size_t ne = c.edge_count();
  for (std::size_t e = 0; e < ne; ++e) {
    const Point a = c.point(e), b = c.point(c.next(e));
    for (std::size_t f = e + 2; f < ne; ++f) {
      if (c.closed() && e == 0 && f == ne - 1) continue;
      if (segments_meet(a, b, c.point(f), c.point(c.next(f)))) return true;
    }
  }
  return false;
}

}  // namespace mcflab
