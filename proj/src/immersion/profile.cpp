#include "mcflab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mcflab {

double sphere_area(int k) {
  const double a = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, a) / std::tgamma(a);
}

AxisymProfile::AxisymProfile(int m, std::vector<double> grid, std::vector<double> values,
                             ProfileBoundary bc, double period)
    : m_(m), chart_(ProfileChart::Graph), bc_(bc), period_(period), grid_(std::move(grid)),
      vals_(std::move(values)) {
  derive();
}

AxisymProfile AxisymProfile::radial(int m, std::vector<double> rho, double z_center) {
  AxisymProfile p;
  p.m_ = m;
  p.chart_ = ProfileChart::Radial;
  p.bc_ = ProfileBoundary::Neumann;
  p.zc_ = z_center;
  const std::size_t n = rho.size();
  p.grid_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    p.grid_[i] = (static_cast<double>(i) + 0.5) * std::numbers::pi / static_cast<double>(n);
  p.vals_ = std::move(rho);
  p.derive();
  return p;
}

AxisymProfile AxisymProfile::sphere(double radius, int m, std::size_t n) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  return radial(m, std::vector<double>(n, radius));
}

AxisymProfile AxisymProfile::cylinder(double radius, int m, double length, std::size_t n) {
  if (!(radius > 0.0 && length > 0.0)) throw std::invalid_argument("cylinder needs positive radius and length");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = -0.5 * length + length * static_cast<double>(i) / static_cast<double>(n);
  return AxisymProfile(m, std::move(x), std::vector<double>(n, radius), ProfileBoundary::Periodic, length);
}

AxisymProfile AxisymProfile::dumbbell(double neck, double bulb, double half_length, int m,
                                      std::size_t n, double stretch) {
  if (!(neck > 0.0 && bulb > neck && half_length > 0.0 && stretch > 0.0))
    throw std::invalid_argument("dumbbell needs 0 < neck < bulb and positive length, stretch");
  std::vector<double> x(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    x[i] = half_length * std::sinh(stretch * xi) / std::sinh(stretch);
    u[i] = neck + (bulb - neck) * 0.5 * (1.0 - std::cos(std::numbers::pi * x[i] / half_length));
  }
  return AxisymProfile(m, std::move(x), std::move(u), ProfileBoundary::Neumann);
}

AxisymProfile AxisymProfile::with_values(std::vector<double> v) const {
  AxisymProfile p = *this;
  p.vals_ = std::move(v);
  p.derive();
  return p;
}

void AxisymProfile::derive() {
  const std::size_t n = vals_.size();
  if (m_ < 1) throw std::invalid_argument("profile dimension must be at least 1");
  if (grid_.size() != n) throw std::invalid_argument("profile grid and values differ in length");
  if (n < 8) throw std::invalid_argument("profile needs at least 8 nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(vals_[i]) || !(vals_[i] > 0.0))
      throw std::domain_error("profile radius must stay positive");
    if (i > 0 && !(grid_[i] > grid_[i - 1])) throw std::invalid_argument("profile grid must increase");
  }
  if (chart_ == ProfileChart::Graph && bc_ == ProfileBoundary::Periodic &&
      !(period_ > grid_.back() - grid_.front()))
    throw std::invalid_argument("periodic profile needs a period longer than the grid span");

  d1_.resize(n);
  d2_.resize(n);
  z_.resize(n);
  r_.resize(n);
  nz_.resize(n);
  nr_.resize(n);
  kp_.resize(n);
  ka_.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    double xm, xp, um, up;
    const double x = grid_[i], u = vals_[i];
    if (chart_ == ProfileChart::Radial) {
      const double h = std::numbers::pi / static_cast<double>(n);
      xm = x - h;
      xp = x + h;
      um = i == 0 ? vals_[0] : vals_[i - 1];
      up = i + 1 == n ? vals_[n - 1] : vals_[i + 1];
    } else if (bc_ == ProfileBoundary::Periodic) {
      xm = i == 0 ? grid_[n - 1] - period_ : grid_[i - 1];
      xp = i + 1 == n ? grid_[0] + period_ : grid_[i + 1];
      um = vals_[i == 0 ? n - 1 : i - 1];
      up = vals_[i + 1 == n ? 0 : i + 1];
    } else {
      xm = i == 0 ? 2.0 * x - grid_[1] : grid_[i - 1];
      xp = i + 1 == n ? 2.0 * x - grid_[n - 2] : grid_[i + 1];
      um = i == 0 ? vals_[1] : vals_[i - 1];
      up = i + 1 == n ? vals_[n - 2] : vals_[i + 1];
    }
    const double hm = x - xm, hp = xp - x;
    d1_[i] = (hm * hm * (up - u) + hp * hp * (u - um)) / (hm * hp * (hm + hp));
    d2_[i] = 2.0 * (hm * (up - u) - hp * (u - um)) / (hm * hp * (hm + hp));

    if (chart_ == ProfileChart::Graph) {
      const double w = 1.0 + d1_[i] * d1_[i], sw = std::sqrt(w);
      z_[i] = x;
      r_[i] = u;
      nz_[i] = -d1_[i] / sw;
      nr_[i] = 1.0 / sw;
      kp_[i] = -d2_[i] / (w * sw);
      ka_[i] = 1.0 / (u * sw);
    } else {
      const double rt = d1_[i], rtt = d2_[i];
      const double c = std::cos(x), s = std::sin(x);
      const double S2 = u * u + rt * rt, S = std::sqrt(S2);
      z_[i] = zc_ + u * c;
      r_[i] = u * s;
      const double tz = rt * c - u * s, tr = rt * s + u * c;
      nz_[i] = tr / S;
      nr_[i] = -tz / S;
      kp_[i] = (u * u + 2.0 * rt * rt - u * rtt) / (S2 * S);
      ka_[i] = (1.0 - (rt / u) * (c / s)) / S;
    }
  }
}

double AxisymProfile::ii_norm(std::size_t i) const {
  return std::sqrt(kp_[i] * kp_[i] + (m_ - 1) * ka_[i] * ka_[i]);
}

double AxisymProfile::sup_ii() const { return ii_norm(argmax_ii()); }

std::size_t AxisymProfile::argmax_ii() const {
  std::size_t best = 0;
  double bv = -1.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double v = ii_norm(i);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

double AxisymProfile::area() const {
  const std::size_t n = size();
  std::vector<Point> q;
  if (chart_ == ProfileChart::Radial) q.push_back({zc_ + (9.0 * vals_[0] - vals_[1]) / 8.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) q.push_back(point(i));
  if (chart_ == ProfileChart::Radial) q.push_back({zc_ - (9.0 * vals_[n - 1] - vals_[n - 2]) / 8.0, 0.0});
  if (chart_ == ProfileChart::Graph && bc_ == ProfileBoundary::Periodic) q.push_back({z_[0] + period_, r_[0]});
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i)
    a += 0.5 * (std::pow(q[i].y, m_ - 1) + std::pow(q[i + 1].y, m_ - 1)) * norm(q[i + 1] - q[i]);
  return sphere_area(m_ - 1) * a;
}

DiscreteCurve AxisymProfile::meridian() const {
  const std::size_t n = size();
  if (chart_ == ProfileChart::Graph) return DiscreteCurve(z_, r_, false);
  std::vector<double> xs(2 * n), ys(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = z_[i];
    ys[i] = r_[i];
    xs[2 * n - 1 - i] = z_[i];
    ys[2 * n - 1 - i] = -r_[i];
  }
  return DiscreteCurve(std::move(xs), std::move(ys), true);
}

AxisymProfile AxisymProfile::rescaled(double scale, double z0) const {
  if (!(scale > 0.0)) throw std::invalid_argument("rescale factor must be positive");
  std::vector<double> v(vals_);
  for (double& x : v) x *= scale;
  if (chart_ == ProfileChart::Radial) return radial(m_, std::move(v), scale * (zc_ - z0));
  std::vector<double> g(grid_);
  for (double& x : g) x = scale * (x - z0);
  return AxisymProfile(m_, std::move(g), std::move(v), bc_, scale * period_);
}

}  // namespace mcflab
