#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mcflab/mcflow.hpp"
#include "tridiag.hpp"

namespace mcflab::flow {

using Vecd = std::vector<double>;

std::string to_string(TerminalEvent e) {
  switch (e) {
    case TerminalEvent::Running: return "running";
    case TerminalEvent::CurvatureCap: return "curvature_cap";
    case TerminalEvent::TimeLimit: return "time_limit";
    case TerminalEvent::StepLimit: return "step_limit";
    case TerminalEvent::SingularState: return "singular_state";
  }
  return "unknown";
}

Snapshot make_snapshot(double t, Immersion geom, std::optional<Immersion> arrival) {
  Snapshot s;
  s.t = t;
  s.sup_ii = sup_ii(geom);
  s.argmax = argmax_ii(geom);
  s.measure = measure(geom);
  s.geom = std::move(geom);
  s.arrival = std::move(arrival);
  return s;
}

void FlowTrajectory::append(Snapshot s) {
  if (!snaps_.empty() && !(s.t > snaps_.back().t))
    throw std::invalid_argument("snapshot times must increase");
  snaps_.push_back(std::move(s));
}

namespace {

// linearly implicit Euler for curve shortening on a closed polygon
Vecd curve_substep(const Vecd& st, double dt) {
  const std::size_t n = st.size() / 2;
  const double* x = st.data();
  const double* y = st.data() + n;
  Vecd h(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + 1 == n ? 0 : i + 1;
    h[i] = std::hypot(x[j] - x[i], y[j] - y[i]);
    if (!(h[i] > 0.0)) throw std::domain_error("polygon edge collapsed");
  }
  Vecd a(n), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hm = h[i == 0 ? n - 1 : i - 1], hp = h[i];
    const double cm = 2.0 / ((hm + hp) * hm), cp = 2.0 / ((hm + hp) * hp);
    a[i] = -dt * cm;
    c[i] = -dt * cp;
    b[i] = 1.0 + dt * (cm + cp);
  }
  Vecd dx(x, x + n), dy(y, y + n);
  detail::cyclic_thomas(a, b, c, dx);
  detail::cyclic_thomas(a, b, c, dy);
  Vecd out(2 * n);
  std::copy(dx.begin(), dx.end(), out.begin());
  std::copy(dy.begin(), dy.end(), out.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

// u_t = u_xx / (1 + u_x^2) - (m - 1) / u, diffusion implicit
Vecd graph_substep(const AxisymProfile& shape, const Vecd& u, double dt) {
  const AxisymProfile p = shape.with_values(u);
  const std::size_t n = u.size();
  const auto& x = p.grid();
  const bool periodic = p.boundary() == ProfileBoundary::Periodic;
  const int m = p.m();
  Vecd a(n, 0.0), b(n), c(n, 0.0), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double hm, hp;
    if (periodic) {
      hm = x[i] - (i == 0 ? x[n - 1] - p.period() : x[i - 1]);
      hp = (i + 1 == n ? x[0] + p.period() : x[i + 1]) - x[i];
    } else {
      hm = i == 0 ? x[1] - x[0] : x[i] - x[i - 1];
      hp = i + 1 == n ? x[n - 1] - x[n - 2] : x[i + 1] - x[i];
    }
    const double ux = p.first_derivative(i);
    const double k = dt / (1.0 + ux * ux);
    const double wm = 2.0 / (hm * (hm + hp)), wp = 2.0 / (hp * (hm + hp));
    b[i] = 1.0 + k * (wm + wp);
    double lo = -k * wm, up = -k * wp;
    if (!periodic && i == 0) {
      up += lo;
      lo = 0.0;
    }
    if (!periodic && i + 1 == n) {
      lo += up;
      up = 0.0;
    }
    a[i] = lo;
    c[i] = up;
    d[i] = u[i] - dt * (m - 1) / u[i];
  }
  if (periodic)
    detail::cyclic_thomas(a, b, c, d);
  else
    detail::thomas(a, b, c, d);
  return d;
}

// radial chart; the theta-derivative terms are implicit with frozen coefficients
Vecd radial_substep(const AxisymProfile& shape, const Vecd& rho, double dt) {
  const AxisymProfile p = shape.with_values(rho);
  const std::size_t n = rho.size();
  const int m = p.m();
  const double h = std::numbers::pi / static_cast<double>(n);
  Vecd a(n, 0.0), b(n), c(n, 0.0), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rho[i], rt = p.first_derivative(i);
    const double th = p.grid()[i];
    const double S2 = r * r + rt * rt;
    const double beta = (m - 1) * (std::cos(th) / std::sin(th)) / (r * r);
    const double dd = 1.0 / (S2 * h * h);
    double lo = dd - beta / (2.0 * h), up = dd + beta / (2.0 * h);
    double diag = -2.0 * dd;
    if (i == 0) {
      diag += lo;
      lo = 0.0;
    }
    if (i + 1 == n) {
      diag += up;
      up = 0.0;
    }
    a[i] = -dt * lo;
    c[i] = -dt * up;
    b[i] = 1.0 - dt * diag;
    d[i] = r + dt * (-(r * r + 2.0 * rt * rt) / (r * S2) - (m - 1) / r);
  }
  detail::thomas(a, b, c, d);
  return d;
}

template <class Phi>
Vecd extrapolate(const Vecd& y0, double dt, int depth, Phi phi) {
  std::vector<Vecd> prev, row;
  for (int k = 1; k <= depth; ++k) {
    Vecd y = y0;
    for (int s = 0; s < k; ++s) y = phi(y, dt / k);
    row.assign(1, std::move(y));
    for (int j = 1; j < k; ++j) {
      const double r = static_cast<double>(k) / static_cast<double>(k - j) - 1.0;
      Vecd t(row[j - 1]);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] += (row[j - 1][i] - prev[j - 1][i]) / r;
      row.push_back(std::move(t));
    }
    prev.swap(row);
  }
  return prev.back();
}

void validate(const FlowConfig& cfg) {
  if (!(cfg.c_cfl > 0.0)) throw std::invalid_argument("c_cfl must be positive");
  if (cfg.extrapolation_depth < 1 || cfg.extrapolation_depth > 8)
    throw std::invalid_argument("extrapolation depth must be in [1, 8]");
  if (!(cfg.curvature_cap > 0.0)) throw std::invalid_argument("curvature cap must be positive");
}

}  // namespace

Immersion step(const Immersion& f, double dt, const FlowConfig& cfg) {
  validate(cfg);
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (is_curve(f)) {
    const auto& c = std::get<DiscreteCurve>(f);
    if (!c.closed()) throw std::invalid_argument("only closed curves can be flowed");
    const std::size_t n = c.size();
    Vecd st(2 * n);
    std::copy(c.xs().begin(), c.xs().end(), st.begin());
    std::copy(c.ys().begin(), c.ys().end(), st.begin() + static_cast<std::ptrdiff_t>(n));
    const Vecd out = extrapolate(st, dt, cfg.extrapolation_depth, curve_substep);
    return DiscreteCurve(Vecd(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n)),
                         Vecd(out.begin() + static_cast<std::ptrdiff_t>(n), out.end()), true);
  }
  const auto& p = std::get<AxisymProfile>(f);
  Vecd out;
  if (p.chart() == ProfileChart::Graph)
    out = extrapolate(p.values(), dt, cfg.extrapolation_depth,
                      [&](const Vecd& u, double h) { return graph_substep(p, u, h); });
  else
    out = extrapolate(p.values(), dt, cfg.extrapolation_depth,
                      [&](const Vecd& u, double h) { return radial_substep(p, u, h); });
  return p.with_values(std::move(out));
}

FlowTrajectory run(const Immersion& initial, const FlowConfig& cfg) {
  validate(cfg);
  FlowTrajectory traj(cfg);
  traj.append(make_snapshot(0.0, initial));
  std::size_t steps = 0;
  while (true) {
    const Snapshot& cur = traj.back();
    if (cur.sup_ii >= cfg.curvature_cap) {
      traj.terminal = TerminalEvent::CurvatureCap;
      break;
    }
    if (cur.t >= cfg.t_max) {
      traj.terminal = TerminalEvent::TimeLimit;
      break;
    }
    if (steps >= cfg.max_steps) {
      traj.terminal = TerminalEvent::StepLimit;
      break;
    }
    if (!(cur.sup_ii > 0.0)) {
      traj.terminal = TerminalEvent::TimeLimit;
      traj.terminal_detail = "flat configuration is stationary";
      break;
    }
    double dt = cfg.c_cfl / (cur.sup_ii * cur.sup_ii);
    if (cur.t + dt > cfg.t_max) dt = cfg.t_max - cur.t;
    Immersion next;
    try {
      next = step(cur.geom, dt, cfg);
    } catch (const std::domain_error& e) {
      traj.terminal = TerminalEvent::SingularState;
      traj.terminal_detail = e.what();
      break;
    } catch (const std::invalid_argument& e) {
      traj.terminal = TerminalEvent::SingularState;
      traj.terminal_detail = e.what();
      break;
    }
    ++steps;
    const double t = cur.t + dt;
    if (is_curve(next) && cfg.resample_every > 0 && steps % cfg.resample_every == 0) {
      const auto& c = std::get<DiscreteCurve>(next);
      Immersion rs = cfg.resample_gamma > 0.0 ? resample_adaptive(c, c.size(), cfg.resample_gamma)
                                              : resample_arclength(c, c.size());
      traj.append(make_snapshot(t, std::move(rs), std::move(next)));
    } else {
      traj.append(make_snapshot(t, std::move(next)));
    }
  }
  return traj;
}

Immersion state_at(const FlowTrajectory& traj, double t) {
  const auto& s = traj.snapshots();
  if (s.empty()) throw std::invalid_argument("empty trajectory");
  if (t < s.front().t || t > s.back().t) throw std::out_of_range("time outside the trajectory");
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const Snapshot& x) { return v < x.t; });
  const std::size_t k = static_cast<std::size_t>(it - s.begin()) - 1;
  if (s[k].t == t || k + 1 == s.size()) return s[k].geom;
  const double lam = (t - s[k].t) / (s[k + 1].t - s[k].t);
  const Immersion& nxt = s[k + 1].arrival ? *s[k + 1].arrival : s[k + 1].geom;
  return lerp(s[k].geom, nxt, lam);
}

}  // namespace mcflab::flow
