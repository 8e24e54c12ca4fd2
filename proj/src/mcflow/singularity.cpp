#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mcflab/mcflow.hpp"

namespace mcflab::flow {

std::string to_string(SingularityType t) {
  switch (t) {
    case SingularityType::TypeI: return "TypeI";
    case SingularityType::TypeII: return "TypeII";
    case SingularityType::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

namespace {

struct LineFit {
  double intercept = 0, slope = 0;
  double var_a = 0, var_b = 0, cov_ab = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    rss += e * e;
  }
  const double s2 = n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
  f.var_b = s2 / sxx;
  f.var_a = s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx);
  f.cov_ab = -mx * s2 / sxx;
  return f;
}

SingularTimeEstimate fit_tail(const FlowTrajectory& traj, std::size_t begin) {
  const auto& s = traj.snapshots();
  std::vector<double> t, y;
  for (std::size_t k = begin; k < s.size(); ++k) {
    t.push_back(s[k].t);
    y.push_back(1.0 / (s[k].sup_ii * s[k].sup_ii));
  }
  const LineFit f = fit_line(t, y);
  if (!(f.slope < 0.0)) throw EstimationError("curvature does not grow along the tail");
  SingularTimeEstimate e;
  e.slope = f.slope;
  e.intercept = f.intercept;
  e.t_hat = -f.intercept / f.slope;
  const double T = e.t_hat;
  const double var = (f.var_a + T * T * f.var_b + 2.0 * T * f.cov_ab) / (f.slope * f.slope);
  e.sigma = std::sqrt(std::max(0.0, var));
  e.tail_begin = begin;
  e.tail_count = s.size() - begin;
  return e;
}

}  // namespace

SingularTimeEstimate estimate_singular_time(const FlowTrajectory& traj) {
  const auto& s = traj.snapshots();
  const FlowConfig& cfg = traj.config();
  if (s.size() < std::max<std::size_t>(cfg.min_snapshots, 5))
    throw EstimationError("too few snapshots to estimate the singular time");
  for (const Snapshot& x : s)
    if (!(x.sup_ii > 0.0)) throw EstimationError("flat snapshot: no curvature growth");

  const std::size_t n = s.size();
  const std::size_t min_tail = 5;
  auto clamp_begin = [&](std::size_t b) { return std::min(b, n - min_tail); };
  std::size_t begin = clamp_begin(n - static_cast<std::size_t>(std::ceil(cfg.tail_fraction * n)));

  auto check_growth = [&](std::size_t b) {
    double run_max = 0.0;
    for (std::size_t k = b; k < n; ++k) {
      run_max = std::max(run_max, s[k].sup_ii);
      if (s[k].sup_ii < 0.9 * run_max) throw EstimationError("curvature is not monotone along the tail");
    }
    if (!(s[n - 1].sup_ii > 1.01 * s[b].sup_ii)) throw EstimationError("no curvature growth along the tail");
  };
  check_growth(begin);
  SingularTimeEstimate est = fit_tail(traj, begin);

  // tail = last fraction of the range of log(T - t)
  for (int it = 0; it < 50; ++it) {
    if (!(est.t_hat > s[n - 1].t)) throw EstimationError("fitted singular time precedes the last snapshot");
    const double lo = std::log(est.t_hat - s[n - 1].t);
    const double hi = std::log(est.t_hat - s[0].t);
    const double cut = lo + cfg.tail_fraction * (hi - lo);
    std::size_t b = n - 1;
    while (b > 0 && std::log(est.t_hat - s[b - 1].t) <= cut) --b;
    b = clamp_begin(b);
    if (b == begin) break;
    begin = b;
    check_growth(begin);
    est = fit_tail(traj, begin);
  }
  if (!(est.t_hat > s[n - 1].t)) throw EstimationError("fitted singular time precedes the last snapshot");
  return est;
}

std::size_t tie_aware_argmax(const Immersion& f, std::optional<Point> near, double rel_tol) {
  const std::size_t top = argmax_ii(f);
  if (!near) return top;
  const double thr = (1.0 - rel_tol) * ii_at(f, top);
  std::size_t best = top;
  double bd = norm(position(f, top) - *near);
  for (std::size_t i = 0; i < vertex_count(f); ++i) {
    if (ii_at(f, i) < thr) continue;
    const double d = norm(position(f, i) - *near);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

SingularityClass classify_singularity(const FlowTrajectory& traj, const SingularTimeEstimate& est) {
  const auto& s = traj.snapshots();
  const FlowConfig& cfg = traj.config();
  SingularityClass out;
  out.tail_begin = est.tail_begin;
  std::vector<double> lam;
  for (std::size_t k = est.tail_begin; k < s.size(); ++k) {
    const double tau = est.t_hat - s[k].t;
    out.s_values.push_back(s[k].sup_ii * s[k].sup_ii * tau);
    lam.push_back(-std::log(tau));
  }
  const auto& v = out.s_values;
  out.s_min = *std::min_element(v.begin(), v.end());
  out.s_max = *std::max_element(v.begin(), v.end());
  out.s_mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  out.s_last = v.back();
  out.ratio = out.s_max / out.s_min;
  out.trend = v.size() >= 3 ? fit_line(lam, v).slope : 0.0;
  out.floor_ok = out.s_min >= cfg.c_floor;

  if (out.s_max > cfg.growth_threshold && out.trend > 0.0 && v.back() > v.front())
    out.type = SingularityType::TypeII;
  else if (out.ratio <= cfg.band_ratio)
    out.type = SingularityType::TypeI;
  else
    out.type = SingularityType::Indeterminate;

  // tie-aware argmax along the tail, projected to the last snapshot
  std::optional<Point> prev;
  for (std::size_t k = est.tail_begin; k < s.size(); ++k) {
    const std::size_t p = tie_aware_argmax(s[k].geom, prev);
    out.picks.push_back(p);
    prev = position(s[k].geom, p);
  }
  const DiscreteCurve last = meridian(s.back().geom);
  const double L = last.length();
  std::vector<double> a;
  for (std::size_t j = 0; j < out.picks.size(); ++j) {
    const PolylineHit hit = closest_point(last, position(s[est.tail_begin + j].geom, out.picks[j]));
    a.push_back(last.arc()[hit.segment] + hit.fraction * last.edge_length(hit.segment));
  }
  auto dist = [&](double x, double y) {
    const double d = std::fabs(x - y);
    return last.closed() ? std::min(d, L - d) : d;
  };
  auto diam = [&](std::size_t lo, std::size_t hi) {
    double d = 0;
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = i + 1; j < hi; ++j) d = std::max(d, dist(a[i], a[j]));
    return d;
  };
  const std::size_t half = a.size() / 2;
  const double d1 = diam(0, half), d2 = diam(half, a.size());
  out.compact_type = d2 <= 0.5 * d1 + 1e-6 * L;

  // induced-distance Frechet mean on the last snapshot
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t v2 = 0; v2 < last.size(); ++v2) {
    double acc = 0;
    for (double x : a) {
      const double d = dist(last.arc()[v2], x);
      acc += d * d;
    }
    if (acc < best) {
      best = acc;
      out.pbar_vertex = v2;
    }
  }
  out.pbar = last.point(out.pbar_vertex);
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertex_count(s.back().geom); ++i) {
    const double d = norm(position(s.back().geom, i) - out.pbar);
    if (d < bd) {
      bd = d;
      out.pbar_vertex = i;
    }
  }
  return out;
}

}  // namespace mcflab::flow
