#include "mcflab/langer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "mcflab/kernels.hpp"

namespace mcflab::langer {

namespace {

struct Frame {
  Point o, t, n;
  double u(Point p) const { return dot(p - o, t); }
  double w(Point p) const { return dot(p - o, n); }
};

ChartFailure fail(ChartFailure::Kind k, std::size_t q, std::size_t a, std::size_t b, double slope,
                  std::string why) {
  ChartFailure f;
  f.kind = k;
  f.center = q;
  f.witness_a = a;
  f.witness_b = b;
  f.slope = slope;
  f.reason = std::move(why);
  return f;
}

}  // namespace

ChartResult langer_chart(const DiscreteCurve& c, std::size_t q, double r, double alpha) {
  if (q >= c.size()) throw std::out_of_range("chart centre out of range");
  if (!(r > 0.0) || !(alpha > 0.0)) throw std::invalid_argument("chart radius and slope must be positive");
  const std::size_t n = c.size();
  const Frame F{c.point(q), c.tangent(q), c.normal(q)};

  std::vector<std::size_t> fwd, bwd;
  std::optional<std::size_t> exit_f, exit_b;
  bool wrapped = false;
  std::vector<char> seen(n, 0);
  seen[q] = 1;
  for (std::size_t v = q;;) {
    if (!c.closed() && v + 1 == n) break;
    const std::size_t w = c.next(v);
    if (seen[w]) {
      wrapped = true;
      break;
    }
    if (std::fabs(F.u(c.point(w))) >= r) {
      exit_f = w;
      break;
    }
    seen[w] = 1;
    fwd.push_back(w);
    v = w;
  }
  for (std::size_t v = q; !wrapped;) {
    if (!c.closed() && v == 0) break;
    const std::size_t w = c.prev(v);
    if (seen[w]) {
      wrapped = true;
      break;
    }
    if (std::fabs(F.u(c.point(w))) >= r) {
      exit_b = w;
      break;
    }
    seen[w] = 1;
    bwd.push_back(w);
    v = w;
  }

  std::vector<std::size_t> run(bwd.rbegin(), bwd.rend());
  run.push_back(q);
  run.insert(run.end(), fwd.begin(), fwd.end());

  for (std::size_t i = 0; i + 1 < run.size(); ++i)
    if (!(F.u(c.point(run[i + 1])) > F.u(c.point(run[i]))))
      return fail(ChartFailure::Kind::NotGraph, q, run[i], run[i + 1], 0.0,
                  "projection onto the tangent line is not injective");
  if (wrapped)
    return fail(ChartFailure::Kind::NotGraph, q, run.front(), run.back(), 0.0,
                "closed curve lies inside the chart cylinder");
  if (exit_f && !(F.u(c.point(*exit_f)) > 0.0))
    return fail(ChartFailure::Kind::NotGraph, q, run.back(), *exit_f, 0.0,
                "curve folds back before leaving the chart");
  if (exit_b && !(F.u(c.point(*exit_b)) < 0.0))
    return fail(ChartFailure::Kind::NotGraph, q, *exit_b, run.front(), 0.0,
                "curve folds back before leaving the chart");

  LangerChart ch;
  ch.center = q;
  ch.radius = r;
  ch.alpha = alpha;
  ch.origin = F.o;
  ch.e1 = F.t;
  ch.e2 = F.n;
  ch.members = run;

  std::vector<Point> pts;
  if (exit_b) pts.push_back({F.u(c.point(*exit_b)), F.w(c.point(*exit_b))});
  for (std::size_t v : run) pts.push_back({F.u(c.point(v)), F.w(c.point(v))});
  if (exit_f) pts.push_back({F.u(c.point(*exit_f)), F.w(c.point(*exit_f))});

  const std::size_t qpos = (exit_b ? 1 : 0) + bwd.size();
  double sup = 0.0;
  std::size_t wa = q, wb = q;
  std::vector<double> slopes(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    slopes[i] = (pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x);
    if (std::fabs(slopes[i]) > sup) {
      sup = std::fabs(slopes[i]);
      wa = i;
      wb = i + 1;
    }
  }
  ch.slope_sup = sup;
  if (qpos > 0 && qpos < slopes.size())
    ch.df0 = 0.5 * (slopes[qpos - 1] + slopes[qpos]);
  else if (!slopes.empty())
    ch.df0 = qpos > 0 ? slopes[qpos - 1] : slopes[0];

  // clip the outer segments to |u| = r
  if (exit_b) {
    const Point a = pts[0], b = pts[1];
    pts[0] = {-r, a.y + (b.y - a.y) * (-r - a.x) / (b.x - a.x)};
  }
  if (exit_f) {
    const std::size_t k = pts.size() - 1;
    const Point a = pts[k - 1], b = pts[k];
    pts[k] = {r, a.y + (b.y - a.y) * (r - a.x) / (b.x - a.x)};
  }
  for (const Point& p : pts) {
    ch.u.push_back(p.x);
    ch.f.push_back(p.y);
  }
  ch.u_min = ch.u.front();
  ch.u_max = ch.u.back();

  if (sup > alpha * (1.0 + 1e-12)) {
    auto idx = [&](std::size_t i) {
      const std::size_t off = exit_b ? 1 : 0;
      if (i < off) return *exit_b;
      if (i - off < run.size()) return run[i - off];
      return *exit_f;
    };
    return fail(ChartFailure::Kind::SlopeExceeded, q, idx(wa), idx(wb), sup,
                "graph slope exceeds alpha");
  }
  return ch;
}

double r_max(double alpha, double sup_ii) {
  if (!(sup_ii > 0.0)) return std::numeric_limits<double>::infinity();
  return alpha * std::pow(1.0 + alpha * alpha, -1.5) / sup_ii;
}

CertReport check_r_alpha(const DiscreteCurve& c, double r, double alpha) {
  CertReport rep;
  rep.r = r;
  rep.alpha = alpha;
  rep.sup_ii = c.sup_curvature();
  rep.r_max = r_max(alpha, rep.sup_ii);
  for (std::size_t q = 0; q < c.size(); ++q) {
    ChartResult res = langer_chart(c, q, r, alpha);
    ++rep.charts_checked;
    if (auto* f = std::get_if<ChartFailure>(&res)) {
      rep.pass = false;
      rep.failure = *f;
      return rep;
    }
    const auto& ch = std::get<LangerChart>(res);
    if (ch.slope_sup > rep.worst_slope) {
      rep.worst_slope = ch.slope_sup;
      rep.worst_center = q;
    }
  }
  return rep;
}

double injectivity_lower_bound(const DiscreteCurve& c) {
  const double k = c.sup_curvature();
  if (!(k > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * std::sqrt(2.0) * k);
}

double embedding_constant(const DiscreteCurve& c) {
  if (self_intersects(c)) return std::numeric_limits<double>::infinity();
  const auto& K = kernels::active();
  double best = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    best = std::max(best, K.arc_chord(c.xs().data(), c.ys().data(), c.arc().data(), c.size(),
                                      c.length(), c.closed(), i));
  return best;
}

long covering_constant(int m, double alpha) {
  const double s = std::sqrt(1.0 + alpha * alpha);
  if (m == 1) return static_cast<long>(std::ceil(8.0 * s - 1e-12));
  if (m == 2) {
    const long side = static_cast<long>(std::ceil(8.0 * std::sqrt(2.0) * s - 1e-12));
    return side * side;
  }
  throw std::invalid_argument("covering constant implemented for m <= 2");
}

LangerAtlas cover_ball(const DiscreteCurve& c, std::size_t q0, double rho, int ell, double r,
                       double alpha) {
  if (!(alpha > 0.0) || alpha > std::sqrt(3.0) * (1.0 + 1e-12))
    throw std::invalid_argument("covering needs 0 < alpha <= sqrt(3)");
  if (!(rho > 0.0) || rho > 0.5 * r * (1.0 + 1e-12))
    throw std::invalid_argument("covering needs 0 < rho <= r / 2");
  if (ell < 1) throw std::invalid_argument("covering needs ell >= 1");
  if (q0 >= c.size()) throw std::out_of_range("covering centre out of range");

  LangerAtlas at;
  at.alpha = alpha;
  at.r = r;
  at.rho = rho;
  at.ell = ell;
  at.q0 = q0;
  at.ball_radius = ell * rho / 2.0;
  at.k_constant = covering_constant(1, alpha);
  at.count_bound = std::pow(static_cast<double>(at.k_constant), ell);

  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> d(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) d[i] = c.induced_distance(q0, i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  std::vector<char> covered(c.size(), 0);
  for (std::size_t v : order) {
    if (d[v] > at.ball_radius) break;
    if (covered[v]) continue;
    ChartResult res = langer_chart(c, v, rho / 4.0, alpha);
    if (auto* f = std::get_if<ChartFailure>(&res))
      throw std::runtime_error("curve is not (r, alpha)-certified at vertex " +
                               std::to_string(f->center) + ": " + f->reason);
    auto& ch = std::get<LangerChart>(res);
    for (std::size_t m : ch.members) covered[m] = 1;
    at.charts.push_back(std::move(ch));
  }
  at.covers = true;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (d[i] <= at.ball_radius && !covered[i]) at.covers = false;
  return at;
}

namespace {

// piecewise-linear value at x of increasing knots (u, f); the slope is the
// linear interpolant of knot slopes, each the mean of its adjacent segments
std::pair<double, double> pl_eval(const std::vector<double>& u, const std::vector<double>& f, double x) {
  std::size_t k = static_cast<std::size_t>(std::upper_bound(u.begin(), u.end(), x) - u.begin());
  k = std::clamp<std::size_t>(k, 1, u.size() - 1);
  auto seg = [&](std::size_t i) { return (f[i + 1] - f[i]) / (u[i + 1] - u[i]); };
  auto knot = [&](std::size_t i) {
    if (i == 0) return seg(0);
    if (i + 1 == u.size()) return seg(i - 1);
    return 0.5 * (seg(i - 1) + seg(i));
  };
  const double lam = (x - u[k - 1]) / (u[k] - u[k - 1]);
  return {f[k - 1] + seg(k - 1) * (x - u[k - 1]), (1.0 - lam) * knot(k - 1) + lam * knot(k)};
}

}  // namespace

namespace {

// component of c around j0 inside the chart cylinder, one vertex past each
// side, as knots over the chart's tangent line; empty if not a graph
bool chart_knots(const DiscreteCurve& c, std::size_t j0, const Frame& F, double rr, std::vector<double>& u,
                 std::vector<double>& f) {
  std::vector<std::size_t> run{j0};
  for (std::size_t v = j0, steps = 0; steps < c.size(); ++steps) {
    if (!c.closed() && v + 1 == c.size()) break;
    v = c.next(v);
    if (v == j0) break;
    run.push_back(v);
    if (std::fabs(F.u(c.point(v))) >= rr) break;
  }
  std::vector<std::size_t> back;
  for (std::size_t v = j0, steps = 0; steps < c.size(); ++steps) {
    if (!c.closed() && v == 0) break;
    v = c.prev(v);
    if (v == j0) break;
    back.push_back(v);
    if (std::fabs(F.u(c.point(v))) >= rr) break;
  }
  std::vector<std::size_t> comp(back.rbegin(), back.rend());
  comp.insert(comp.end(), run.begin(), run.end());
  u.clear();
  f.clear();
  for (std::size_t v : comp) {
    u.push_back(F.u(c.point(v)));
    f.push_back(F.w(c.point(v)));
  }
  if (u.size() >= 2 && u.back() < u.front()) {
    std::reverse(u.begin(), u.end());
    std::reverse(f.begin(), f.end());
  }
  bool mono = u.size() >= 2;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) mono = mono && u[i + 1] > u[i];
  return mono;
}

}  // namespace

GraphDistance graph_over(const DiscreteCurve& a, const DiscreteCurve& b, const LangerAtlas& atlas_b) {
  GraphDistance out;
  auto failure = [&](std::size_t ci, std::string why) {
    out.ok = false;
    out.worst_chart = ci;
    out.reason = std::move(why) + " " + std::to_string(ci);
    return out;
  };
  for (std::size_t ci = 0; ci < atlas_b.charts.size(); ++ci) {
    const LangerChart& ch = atlas_b.charts[ci];
    const Frame F{ch.origin, ch.e1, ch.e2};
    const double rr = ch.radius;
    std::size_t j0 = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double dist = norm(a.point(j) - F.o);
      if (dist < best) {
        best = dist;
        j0 = j;
      }
    }
    if (best > rr) return failure(ci, "curve does not pass through chart");
    std::vector<double> ua, fa, ub, fb;
    if (!chart_knots(a, j0, F, rr, ua, fa)) return failure(ci, "curve is not a graph over chart");
    if (!chart_knots(b, ch.center, F, rr, ub, fb)) return failure(ci, "reference is not a graph over chart");
    const double lo = std::max({ub.front(), ua.front(), -0.9 * rr});
    const double hi = std::min({ub.back(), ua.back(), 0.9 * rr});
    if (!(hi > lo)) return failure(ci, "no common domain in chart");
    double c0 = 0.0, c1 = 0.0;
    const int samples = 33;
    for (int s = 0; s < samples; ++s) {
      const double x = lo + (hi - lo) * s / (samples - 1);
      const auto [va, sa] = pl_eval(ua, fa, x);
      const auto [vb, sb] = pl_eval(ub, fb, x);
      c0 = std::max(c0, std::fabs(va - vb));
      c1 = std::max(c1, std::fabs(sa - sb));
    }
    if (c0 + c1 > out.distance) out.worst_chart = ci;
    out.c0 = std::max(out.c0, c0);
    out.c1 = std::max(out.c1, c1);
    out.distance = std::max(out.distance, c0 + c1);
  }
  return out;
}

std::string to_json(const CertReport& r) {
  nlohmann::json j;
  j["pass"] = r.pass;
  j["r"] = r.r;
  j["alpha"] = r.alpha;
  j["sup_ii"] = r.sup_ii;
  j["r_max"] = r.r_max;
  j["charts_checked"] = r.charts_checked;
  j["worst_slope"] = r.worst_slope;
  j["worst_center"] = r.worst_center;
  if (r.failure) {
    j["failure"] = {{"center", r.failure->center},
                    {"witness", {r.failure->witness_a, r.failure->witness_b}},
                    {"slope", r.failure->slope},
                    {"reason", r.failure->reason}};
  }
  return j.dump();
}

std::string to_json(const LangerAtlas& a) {
  nlohmann::json j;
  j["alpha"] = a.alpha;
  j["r"] = a.r;
  j["rho"] = a.rho;
  j["ell"] = a.ell;
  j["q0"] = a.q0;
  j["ball_radius"] = a.ball_radius;
  j["chart_count"] = a.charts.size();
  j["K"] = a.k_constant;
  j["count_bound"] = a.count_bound;
  j["covers"] = a.covers;
  nlohmann::json charts = nlohmann::json::array();
  for (const auto& c : a.charts)
    charts.push_back({{"center", c.center}, {"slope_sup", c.slope_sup}, {"members", c.members.size()}});
  j["charts"] = charts;
  return j.dump();
}

}  // namespace mcflab::langer
