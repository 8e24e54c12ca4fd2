#include "mcflab/immersion.hpp"

#include <cmath>
#include <stdexcept>

namespace mcflab {

namespace {
template <class... F>
struct overload : F... {
  using F::operator()...;
};
template <class... F>
overload(F...) -> overload<F...>;
}  // namespace

int dimension(const Immersion& f) {
  return std::visit(overload{[](const DiscreteCurve&) { return 1; },
                             [](const AxisymProfile& p) { return p.m(); }},
                    f);
}

std::size_t vertex_count(const Immersion& f) {
  return std::visit([](const auto& g) { return g.size(); }, f);
}

double ii_at(const Immersion& f, std::size_t i) {
  return std::visit(overload{[&](const DiscreteCurve& c) { return std::fabs(c.curvature(i)); },
                             [&](const AxisymProfile& p) { return p.ii_norm(i); }},
                    f);
}

std::vector<double> ii_norms(const Immersion& f) {
  std::vector<double> v(vertex_count(f));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = ii_at(f, i);
  return v;
}

double sup_ii(const Immersion& f) { return ii_at(f, argmax_ii(f)); }

std::size_t argmax_ii(const Immersion& f) {
  return std::visit(overload{[](const DiscreteCurve& c) { return c.argmax_curvature(); },
                             [](const AxisymProfile& p) { return p.argmax_ii(); }},
                    f);
}

Point position(const Immersion& f, std::size_t i) {
  return std::visit([&](const auto& g) { return g.point(i); }, f);
}

double measure(const Immersion& f) {
  return std::visit(overload{[](const DiscreteCurve& c) { return c.length(); },
                             [](const AxisymProfile& p) { return p.area(); }},
                    f);
}

DiscreteCurve meridian(const Immersion& f) {
  return std::visit(overload{[](const DiscreteCurve& c) { return c; },
                             [](const AxisymProfile& p) { return p.meridian(); }},
                    f);
}

Immersion rescale(const Immersion& f, double q, Point center) {
  return std::visit(
      overload{[&](const DiscreteCurve& c) -> Immersion { return c.transformed(q, center); },
               [&](const AxisymProfile& p) -> Immersion { return p.rescaled(q, center.x); }},
      f);
}

Immersion lerp(const Immersion& a, const Immersion& b, double lambda) {
  if (a.index() != b.index() || vertex_count(a) != vertex_count(b))
    throw std::invalid_argument("cannot interpolate immersions of different shape");
  auto mix = [&](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = (1.0 - lambda) * u[i] + lambda * v[i];
    return w;
  };
  if (is_curve(a)) {
    const auto& ca = std::get<DiscreteCurve>(a);
    const auto& cb = std::get<DiscreteCurve>(b);
    return DiscreteCurve(mix(ca.xs(), cb.xs()), mix(ca.ys(), cb.ys()), ca.closed());
  }
  const auto& pa = std::get<AxisymProfile>(a);
  const auto& pb = std::get<AxisymProfile>(b);
  return pa.with_values(mix(pa.values(), pb.values()));
}

SurfaceSamples surface_samples(const Immersion& f) {
  SurfaceSamples s;
  auto push = [&](Point p, Point n, double h, double d) {
    s.px.push_back(p.x);
    s.py.push_back(p.y);
    s.nx.push_back(n.x);
    s.ny.push_back(n.y);
    s.h.push_back(h);
    s.density.push_back(d);
  };
  if (is_curve(f)) {
    const auto& c = std::get<DiscreteCurve>(f);
    s.m = 1;
    s.closed = c.closed();
    for (std::size_t i = 0; i < c.size(); ++i) push(c.point(i), c.normal(i), c.curvature(i), 1.0);
    return s;
  }
  const auto& p = std::get<AxisymProfile>(f);
  s.m = p.m();
  s.closed = false;
  const double omega = sphere_area(p.m() - 1);
  const std::size_t n = p.size();
  // radial charts reach the axis at the poles
  auto pole = [&](std::size_t i0, std::size_t i1, double dir) {
    const double rho = (9.0 * p.values()[i0] - p.values()[i1]) / 8.0;
    const double h = (9.0 * p.mean_curvature(i0) - p.mean_curvature(i1)) / 8.0;
    push({p.z_center() + dir * rho, 0.0}, {dir, 0.0}, -h, omega * std::pow(0.0, p.m() - 1));
  };
  if (p.chart() == ProfileChart::Radial) pole(0, 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Point x = p.point(i);
    push(x, p.outward_normal(i), -p.mean_curvature(i), omega * std::pow(x.y, p.m() - 1));
  }
  if (p.chart() == ProfileChart::Radial) pole(n - 1, n - 2, -1.0);
  if (p.chart() == ProfileChart::Graph && p.boundary() == ProfileBoundary::Periodic) {
    const Point x = p.point(0);
    push({x.x + p.period(), x.y}, p.outward_normal(0), -p.mean_curvature(0),
         omega * std::pow(x.y, p.m() - 1));
  }
  return s;
}

}  // namespace mcflab
