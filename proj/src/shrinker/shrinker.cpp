#include "mcflab/shrinker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "mcflab/kernels.hpp"

namespace mcflab::shrinker {

std::string to_string(ShrinkerClass c) {
  switch (c) {
    case ShrinkerClass::Sphere: return "Sphere";
    case ShrinkerClass::Cylinder: return "Cylinder";
    case ShrinkerClass::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

struct Columns {
  std::vector<double> px, py, nx, ny, h, w;
  void push(Point p, Point n, double hv, double wv) {
    px.push_back(p.x);
    py.push_back(p.y);
    nx.push_back(n.x);
    ny.push_back(n.y);
    h.push_back(hv);
    w.push_back(wv);
  }
  kernels::Samples view() const {
    return {px.data(), py.data(), nx.data(), ny.data(), h.data(), w.data(), px.size()};
  }
};

bool on_axis_required(const Immersion& f) { return !is_curve(f); }

// parameter interval of p + lambda d, lambda in [0, 1], inside the ball
bool clip_segment(Point p, Point d, const Ball& b, double& lo, double& hi) {
  lo = 0.0;
  hi = 1.0;
  if (!std::isfinite(b.radius)) return true;
  const Point w = p - b.center;
  const double A = dot(d, d), B = 2.0 * dot(w, d), C = dot(w, w) - b.radius * b.radius;
  if (A == 0.0) return C <= 0.0;
  const double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0) return false;
  const double sq = std::sqrt(disc);
  lo = std::max(0.0, (-B - sq) / (2.0 * A));
  hi = std::min(1.0, (-B + sq) / (2.0 * A));
  return hi > lo;
}

}  // namespace

KernelIntegrals kernel_integrals(const Immersion& f, Point x0, double tau, const Quadrature& q,
                                 const std::optional<Ball>& clip) {
  if (!(tau > 0.0)) throw std::invalid_argument("kernel needs t < t0");
  if (on_axis_required(f) && x0.y != 0.0) throw std::invalid_argument("profile kernels need a center on the axis");
  const SurfaceSamples ss = surface_samples(f);
  const bool curve = is_curve(f);
  const int m = ss.m;
  const double omega = curve ? 1.0 : sphere_area(m - 1);
  const double inv4tau = 1.0 / (4.0 * tau);
  const double emax = -std::log(q.cutoff);
  const std::size_t n = ss.size();
  const std::size_t segs = ss.closed ? n : n - 1;

  // periodic profiles stand for an infinite surface: add axial images
  double period = 0.0;
  int images = 0;
  if (!curve) {
    const auto& p = std::get<AxisymProfile>(f);
    if (p.chart() == ProfileChart::Graph && p.boundary() == ProfileBoundary::Periodic && p.period() > 0.0) {
      period = p.period();
      images = static_cast<int>(std::ceil(std::sqrt(4.0 * tau * emax) / period)) + 1;
    }
  }

  Columns col;
  for (int img = -images; img <= images; ++img)
  for (std::size_t i = 0; i < segs; ++i) {
    const std::size_t k = i + 1 == n ? 0 : i + 1;
    const Point P{ss.px[i] + img * period, ss.py[i]}, D{ss.px[k] - ss.px[i], ss.py[k] - ss.py[i]};
    double lo, hi;
    if (clip && !clip_segment(P, D, *clip, lo, hi)) continue;
    if (!clip) {
      lo = 0.0;
      hi = 1.0;
    }
    const double len = norm(D);
    if (len == 0.0) continue;
    auto E = [&](double l) {
      const Point x = P + l * D - x0;
      return dot(x, x) * inv4tau;
    };
    const double lstar = std::clamp(-dot(P - x0, D) / dot(D, D), lo, hi);
    const double emin = E(lstar);
    if (emin > emax) continue;
    const double var = (E(lo) - emin) + (E(hi) - emin);
    const double arc = len * (hi - lo) / (q.max_arc_step * std::sqrt(4.0 * tau));
    std::size_t nsub = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(std::max(var / q.max_exponent_step, arc))), 1, 100000);
    nsub += nsub % 2;  // Simpson
    const double ds = len * (hi - lo) / static_cast<double>(nsub);
    for (std::size_t s = 0; s <= nsub; ++s) {
      const double l = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(nsub);
      const Point x = P + l * D;
      Point nv{(1.0 - l) * ss.nx[i] + l * ss.nx[k], (1.0 - l) * ss.ny[i] + l * ss.ny[k]};
      nv = (1.0 / norm(nv)) * nv;
      const double hv = (1.0 - l) * ss.h[i] + l * ss.h[k];
      const double dens = curve ? 1.0 : omega * std::pow(std::max(0.0, x.y), m - 1);
      const double w = (s == 0 || s == nsub) ? ds / 3.0 : (s % 2 ? 4.0 * ds / 3.0 : 2.0 * ds / 3.0);
      col.push(x, nv, hv, w * dens);
    }
  }
  KernelIntegrals out;
  out.nodes = col.px.size();
  if (col.px.empty()) return out;
  const kernels::GaussianSums g = kernels::active().gaussian(col.view(), x0.x, x0.y, inv4tau, 0.5 / tau);
  const double norm_c = std::pow(4.0 * std::numbers::pi * tau, -0.5 * m);
  out.theta = norm_c * g.mass;
  out.residual = norm_c * g.residual;
  return out;
}

double theta(const Immersion& f, Point x0, double t0, double t, const Quadrature& q) {
  if (!(t < t0)) throw std::invalid_argument("theta needs t < t0");
  return kernel_integrals(f, x0, t0 - t, q).theta;
}

double theta_derivative_rhs(const Immersion& f, Point x0, double t0, double t, const Quadrature& q) {
  if (!(t < t0)) throw std::invalid_argument("theta derivative needs t < t0");
  return -kernel_integrals(f, x0, t0 - t, q).residual;
}

MonotoneSeries monotonicity_check(const flow::FlowTrajectory& traj, Point x0, double t0,
                                  const MonotoneOptions& opt) {
  const auto& s = traj.snapshots();
  if (s.empty()) throw std::invalid_argument("empty trajectory");
  if (!(s.back().t < t0)) throw std::invalid_argument("t0 must exceed the last snapshot time");
  MonotoneSeries out;
  out.x0 = x0;
  out.t0 = t0;
  out.quadrature = opt.quadrature;
  out.derivative_tol = opt.derivative_tol;
  Quadrature coarse = opt.quadrature;
  coarse.max_exponent_step *= 4.0;
  coarse.max_arc_step *= 4.0;
  const std::size_t stride = std::max<std::size_t>(opt.stride, 1);
  for (std::size_t k = 0; k < s.size(); k += stride) {
    const double tau = t0 - s[k].t;
    const KernelIntegrals a = kernel_integrals(s[k].geom, x0, tau, opt.quadrature);
    const KernelIntegrals b = kernel_integrals(s[k].geom, x0, tau, coarse);
    MonotoneSample m;
    m.t = s[k].t;
    m.theta = a.theta;
    m.rhs = -a.residual;
    m.quad_err = std::fabs(a.theta - b.theta);
    out.samples.push_back(m);
  }
  auto& v = out.samples;
  const double span = t0 - v.front().t;
  double rhs_max = 0.0;
  for (const auto& m : v)
    if (t0 - m.t >= opt.smooth_tau_fraction * span) rhs_max = std::max(rhs_max, std::fabs(m.rhs));
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double inc = v[k + 1].theta - v[k].theta;
    v[k].fd = inc / (v[k + 1].t - v[k].t);
    const double tol = opt.step_tol + std::max(v[k].quad_err, v[k + 1].quad_err);
    out.worst_increase = std::max(out.worst_increase, inc);
    if (inc > tol) {
      ++out.violations;
      out.monotone = false;
    }
    const double avg = 0.5 * (v[k].rhs + v[k + 1].rhs);
    if (t0 - v[k + 1].t >= opt.smooth_tau_fraction * span && std::fabs(avg) >= opt.rhs_floor * rhs_max &&
        std::fabs(avg) * (v[k + 1].t - v[k].t) >= opt.min_change) {
      const double rel = std::fabs(v[k].fd - avg) / std::fabs(avg);
      ++out.derivative_steps;
      out.worst_derivative_rel = std::max(out.worst_derivative_rel, rel);
      if (rel > opt.derivative_tol) out.derivative_ok = false;
    }
  }
  return out;
}

ScalingIdentity scaling_identity_check(const flow::FlowTrajectory& traj, double Q, Point x_j, double t_j, Point x0,
                                       double T, double a, double b, double k_radius, double tol,
                                       int time_intervals) {
  if (!(Q > 0.0)) throw std::invalid_argument("scale must be positive");
  if (!(a < b)) throw std::invalid_argument("scaling identity needs a < b");
  const double alpha = Q * Q * (T - t_j);
  if (!(b < alpha)) throw std::invalid_argument("upper time must precede the rescaled singular time");
  if (time_intervals < 2 || time_intervals % 2) throw std::invalid_argument("Simpson rule needs an even interval count");
  const auto& s = traj.snapshots();
  const double ta = t_j + a / (Q * Q), tb = t_j + b / (Q * Q);
  if (ta < s.front().t || tb > s.back().t) throw std::out_of_range("time window outside the trajectory");
  if (!is_curve(s.front().geom)) {
    x_j.y = 0.0;
    x0.y = 0.0;
  }
  ScalingIdentity out;
  out.tol = tol;
  out.time_nodes = static_cast<std::size_t>(time_intervals) + 1;
  const Point xbar = Q * (x0 - x_j);
  const Ball big{{0.0, 0.0}, k_radius};
  const Ball small{x_j, k_radius / Q};
  const double hs = (b - a) / time_intervals;
  for (int i = 0; i <= time_intervals; ++i) {
    const double w = (i == 0 || i == time_intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double sv = a + hs * i;
    const double t = t_j + sv / (Q * Q);
    const Immersion orig = flow::state_at(traj, t);
    const Immersion resc = rescale(orig, Q, x_j);
    out.lhs += w * kernel_integrals(resc, xbar, alpha - sv, {}, big).residual;
    out.rhs += w * kernel_integrals(orig, x0, T - t, {}, small).residual;
  }
  out.lhs *= hs / 3.0;
  out.rhs *= hs / (3.0 * Q * Q);
  const double scale = std::max(std::fabs(out.lhs), std::fabs(out.rhs));
  if (scale <= 1e-12) {
    out.rel = 0.0;
    out.note = "both sides vanish";
  } else {
    out.rel = std::fabs(out.lhs - out.rhs) / scale;
  }
  if (std::isfinite(k_radius)) out.note += out.note.empty() ? "ball clipped exactly at segment crossings" : "";
  out.pass = out.rel <= tol;
  return out;
}

ShrinkerReport shrinker_residual(const Immersion& f, Point center, const ShrinkerOptions& opt) {
  ShrinkerReport rep;
  const SurfaceSamples ss = surface_samples(f);
  const bool curve = is_curve(f);
  if (!curve) center.y = 0.0;
  const bool graph = !curve && std::get<AxisymProfile>(f).chart() == ProfileChart::Graph;
  const std::size_t n = ss.size();
  const std::size_t segs = ss.closed ? n : n - 1;
  std::vector<double> w(n, 0.0);
  // coarse grids: widen to the three nearest samples
  double window = opt.window;
  if (graph && n >= 3) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = std::fabs(ss.px[i] - center.x);
    std::nth_element(d.begin(), d.begin() + 2, d.end());
    window = std::max(window, d[2]);
  }
  auto inside = [&](std::size_t i) { return !graph || std::fabs(ss.px[i] - center.x) <= window; };
  for (std::size_t i = 0; i < segs; ++i) {
    const std::size_t k = i + 1 == n ? 0 : i + 1;
    if (!inside(i) || !inside(k)) continue;
    const double len = std::hypot(ss.px[k] - ss.px[i], ss.py[k] - ss.py[i]);
    w[i] += 0.5 * len * ss.density[i];
    w[k] += 0.5 * len * ss.density[k];
  }
  const kernels::Samples view{ss.px.data(), ss.py.data(), ss.nx.data(), ss.ny.data(), ss.h.data(), w.data(), n};
  const kernels::MomentSums mo = kernels::active().moments(view, center.x, center.y);
  double wsum = 0.0;
  for (double x : w) wsum += x;
  if (!(wsum > 0.0)) {
    rep.flagged = true;
    rep.reason = "no samples inside the window";
    return rep;
  }
  if (!(mo.dd > 1e-24 * wsum)) {
    rep.flagged = true;
    rep.reason = "x^perp vanishes; alpha is unidentifiable";
    return rep;
  }
  rep.alpha = mo.hd / mo.dd;
  rep.residual = mo.hh > 0.0 ? std::max(0.0, (mo.hh - 2.0 * rep.alpha * mo.hd + rep.alpha * rep.alpha * mo.dd) / mo.hh)
                             : 0.0;
  if (!(rep.alpha < 0.0)) {
    rep.flagged = true;
    rep.reason = "fitted alpha is not negative";
    return rep;
  }

  const int m = ss.m;
  ShrinkerClass candidate = ShrinkerClass::Unknown;
  int k = 0;
  if (curve ? ss.closed : !graph) {
    candidate = ShrinkerClass::Sphere;
    k = m;
  } else if (graph && m >= 2) {
    candidate = ShrinkerClass::Cylinder;
    k = m - 1;
  } else {
    rep.reason = "no template for this geometry";
    return rep;
  }
  rep.radius_fit = std::sqrt(-static_cast<double>(k) / rep.alpha);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    const double r = candidate == ShrinkerClass::Sphere ? std::hypot(ss.px[i] - center.x, ss.py[i] - center.y)
                                                        : ss.py[i];
    acc += w[i] * r;
    rep.shape_deviation = std::max(rep.shape_deviation, std::fabs(r / rep.radius_fit - 1.0));
  }
  rep.radius_measured = acc / wsum;
  if (rep.residual <= opt.residual_tol && rep.shape_deviation <= opt.shape_tol) {
    rep.cls = candidate;
  } else {
    rep.reason = rep.residual > opt.residual_tol ? "residual above tolerance" : "shape deviates from the template";
  }
  return rep;
}

BlowupVerdict classify_blowup(const blowup::CentralSequence& cs, const blowup::BlowupFrame& frame,
                              const blowup::LimitReport& limit, Point xbar, const ShrinkerOptions& opt) {
  BlowupVerdict v;
  v.mode = cs.mode;
  const Point c = xbar - limit.shift;
  v.report = shrinker_residual(limit.limit, c, opt);
  const auto& e = *std::find_if(cs.entries.begin(), cs.entries.end(),
                                [&](const blowup::CentralEntry& x) { return x.j == frame.j; });
  v.flow_extinction_time = e.Q * e.Q * (cs.t_hat - e.t) - frame.s;
  const int m = dimension(limit.limit);
  const int k = v.report.cls == ShrinkerClass::Cylinder ? m - 1 : m;
  v.template_radius = std::sqrt(2.0 * k * std::max(0.0, v.flow_extinction_time));
  if (v.report.alpha < 0.0) {
    v.extinction_time = -1.0 / (2.0 * v.report.alpha);
    v.extinct = std::isfinite(v.extinction_time);
  }
  if (cs.mode == blowup::Mode::TypeI) {
    v.pass = (v.report.cls == ShrinkerClass::Sphere || v.report.cls == ShrinkerClass::Cylinder) && v.extinct;
    v.detail = v.pass ? to_string(v.report.cls) + " shrinker, extinct at rescaled time " + std::to_string(v.extinction_time)
                      : "type I limit is not a sphere or cylinder shrinker";
  } else {
    v.pass = v.report.cls == ShrinkerClass::Unknown || v.report.residual >= opt.residual_tol;
    v.detail = v.pass ? "type II limit is not a compact shrinker" : "type II limit matched a compact shrinker";
  }
  return v;
}

std::string to_json(const ShrinkerReport& r) {
  nlohmann::json j{{"alpha", r.alpha},
                   {"residual", r.residual},
                   {"class", to_string(r.cls)},
                   {"radius_fit", r.radius_fit},
                   {"radius_measured", r.radius_measured},
                   {"shape_deviation", r.shape_deviation},
                   {"flagged", r.flagged},
                   {"reason", r.reason}};
  return j.dump(2);
}

}  // namespace mcflab::shrinker
