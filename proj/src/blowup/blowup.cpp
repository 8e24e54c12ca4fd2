#include "mcflab/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "mcflab/langer.hpp"

namespace mcflab::blowup {

std::string to_string(Mode m) { return m == Mode::TypeI ? "TypeI" : "TypeII"; }
std::string to_string(Centering c) { return c == Centering::SmoothBlowup ? "smooth" : "tangent"; }

std::vector<double> geometric_schedule(double t_hat, double t0, double q, int count) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("schedule ratio must lie in (0, 1)");
  if (!(t_hat > t0)) throw std::invalid_argument("schedule needs t0 < t_hat");
  if (count < 1) throw std::invalid_argument("schedule needs at least one entry");
  std::vector<double> t;
  for (int j = 1; j <= count; ++j) t.push_back(t_hat - (t_hat - t0) * std::pow(q, j));
  return t;
}

namespace {

std::size_t snapshot_at_or_before(const flow::FlowTrajectory& traj, double t) {
  const auto& s = traj.snapshots();
  if (s.empty()) throw std::invalid_argument("empty trajectory");
  if (t < s.front().t || t > s.back().t) throw std::out_of_range("schedule outside trajectory range");
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const flow::Snapshot& x) { return v < x.t; });
  return static_cast<std::size_t>(it - s.begin()) - 1;
}

}  // namespace

CentralSequence central_sequence_typeI(const flow::FlowTrajectory& traj, const std::vector<double>& times,
                                       double t_hat) {
  const auto& s = traj.snapshots();
  CentralSequence cs;
  cs.mode = Mode::TypeI;
  cs.t_hat = t_hat;
  std::vector<std::size_t> best(s.size());
  for (std::size_t k = 0; k < s.size(); ++k)
    best[k] = (k == 0 || s[k].sup_ii >= s[best[k - 1]].sup_ii) ? k : best[k - 1];
  std::optional<Point> prev;
  int j = 0;
  for (double tj : times) {
    const std::size_t k = best[snapshot_at_or_before(traj, tj)];
    CentralEntry e;
    e.j = ++j;
    e.snapshot = k;
    e.t = s[k].t;
    e.vertex = flow::tie_aware_argmax(s[k].geom, prev);
    e.Q = ii_at(s[k].geom, e.vertex);
    prev = position(s[k].geom, e.vertex);
    cs.entries.push_back(e);
  }
  return cs;
}

CentralSequence central_sequence_typeII(const flow::FlowTrajectory& traj, const std::vector<double>& ttilde,
                                        double t_hat) {
  const auto& s = traj.snapshots();
  CentralSequence cs;
  cs.mode = Mode::TypeII;
  cs.t_hat = t_hat;
  std::vector<std::vector<double>> ii(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) ii[k] = ii_norms(s[k].geom);
  int j = 0;
  for (double tt : ttilde) {
    const std::size_t last = snapshot_at_or_before(traj, tt);
    CentralEntry e;
    e.j = ++j;
    e.ttilde = tt;
    double bv = -1.0;
    for (std::size_t k = 0; k <= last; ++k) {
      const double w = tt - s[k].t;
      for (std::size_t i = 0; i < ii[k].size(); ++i) {
        const double v = w * ii[k][i] * ii[k][i];
        if (v > bv || (v == bv && ii[k][i] > ii[e.snapshot][e.vertex])) {
          bv = v;
          e.snapshot = k;
          e.vertex = i;
        }
      }
    }
    e.t = s[e.snapshot].t;
    e.Q = ii[e.snapshot][e.vertex];
    if (!cs.entries.empty() && e.A() < cs.entries.back().A())
      cs.warnings.push_back("(ttilde_j - t_j) Q_j^2 decreases at j = " + std::to_string(e.j));
    cs.entries.push_back(e);
  }
  return cs;
}

std::vector<Point> track_point(const flow::FlowTrajectory& traj, std::size_t vertex) {
  const auto& s = traj.snapshots();
  std::vector<Point> path(s.size());
  path.back() = position(s.back().geom, vertex);
  for (std::size_t k = s.size() - 1; k-- > 0;) path[k] = closest_point(meridian(s[k].geom), path[k + 1]).point;
  return path;
}

Point fit_singular_point(const flow::FlowTrajectory& traj, const std::vector<Point>& path, std::size_t begin,
                         double t_hat) {
  const auto& s = traj.snapshots();
  if (path.size() != s.size() || begin + 2 > s.size()) throw std::invalid_argument("too few points to fit x0");
  double n = 0, mr = 0, mx = 0, my = 0;
  for (std::size_t k = begin; k < s.size(); ++k) {
    const double r = std::sqrt(std::max(0.0, t_hat - s[k].t));
    n += 1;
    mr += r;
    mx += path[k].x;
    my += path[k].y;
  }
  mr /= n;
  mx /= n;
  my /= n;
  double srr = 0, srx = 0, sry = 0;
  for (std::size_t k = begin; k < s.size(); ++k) {
    const double r = std::sqrt(std::max(0.0, t_hat - s[k].t)) - mr;
    srr += r * r;
    srx += r * (path[k].x - mx);
    sry += r * (path[k].y - my);
  }
  if (!(srr > 0.0)) return {mx, my};
  return {mx - srx / srr * mr, my - sry / srr * mr};
}

std::vector<BlowupFrame> rescale(const flow::FlowTrajectory& traj, const CentralSequence& cs, std::size_t j,
                                 const std::vector<double>& s_grid, const FrameOptions& opt) {
  if (j >= cs.entries.size()) throw std::out_of_range("central sequence index out of range");
  const CentralEntry& e = cs.entries[j];
  const auto& snaps = traj.snapshots();
  Point center;
  if (opt.centering == Centering::TangentFlow) {
    center = opt.x0;
  } else {
    if (opt.pbar_path.size() != snaps.size()) throw std::invalid_argument("smooth centering needs the tracked pbar path");
    center = opt.pbar_path[e.snapshot];
  }
  const double Q2 = e.Q * e.Q;
  const double s_lo = (snaps.front().t - e.t) * Q2;
  const double s_hi = cs.mode == Mode::TypeII ? std::min(e.A(), (snaps.back().t - e.t) * Q2) : 0.0;
  const Point target = position(rescale(snaps[e.snapshot].geom, e.Q, center), e.vertex);

  std::vector<BlowupFrame> out;
  for (double s : s_grid) {
    if (s < s_lo || s > s_hi) throw std::out_of_range("s outside the frame's valid interval");
    BlowupFrame f;
    f.j = e.j;
    f.s = s;
    f.t = s == 0.0 ? e.t : std::clamp(e.t + s / Q2, snaps.front().t, snaps.back().t);
    f.Q = e.Q;
    f.center = center;
    f.geom = rescale(flow::state_at(traj, f.t), e.Q, center);
    f.sup_ii = sup_ii(f.geom);
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertex_count(f.geom); ++i) {
      const double d = norm(position(f.geom, i) - target);
      if (d < bd) {
        bd = d;
        f.central = i;
      }
    }
    f.central_ii = ii_at(f.geom, f.central);
    f.s_lo = s_lo;
    f.s_hi = s_hi;
    out.push_back(std::move(f));
  }
  return out;
}

BoundCheck check_rescaled_bound(const std::vector<BlowupFrame>& frames, const CentralSequence& cs, std::size_t j,
                                double tol) {
  if (cs.mode != Mode::TypeII || j >= cs.entries.size())
    throw std::invalid_argument("rescaled bound needs a type II central sequence entry");
  const double A = cs.entries[j].A();
  BoundCheck r;
  r.tol = tol;
  for (const BlowupFrame& f : frames) {
    if (f.j != cs.entries[j].j) continue;
    ++r.frames;
    if (!(f.s < A)) continue;
    const double rhs = A / (A - f.s);
    const double lhs = f.sup_ii * f.sup_ii;
    if (lhs / rhs > r.max_ratio) {
      r.max_ratio = lhs / rhs;
      r.worst_s = f.s;
    }
    if (lhs > rhs + tol) r.pass = false;
  }
  return r;
}

LimitReport extract_limit(const std::vector<BlowupFrame>& frames, double tol, double floor) {
  if (frames.size() < 3) throw std::invalid_argument("limit extraction needs at least three frames");
  for (const BlowupFrame& f : frames)
    if (f.s != frames.front().s) throw std::invalid_argument("frames must share the rescaled time");
  LimitReport rep;
  rep.s = frames.front().s;
  rep.tol = tol;
  std::vector<Immersion> aligned;
  for (const BlowupFrame& f : frames) aligned.push_back(rescale(f.geom, 1.0, position(f.geom, f.central)));

  rep.cauchy = true;
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    const DiscreteCurve b = meridian(aligned[k]);
    const DiscreteCurve a = meridian(aligned[k + 1]);
    const double sup = b.sup_curvature();
    const double r = 0.99 * langer::r_max(1.0, sup > 0.0 ? sup : 1.0);
    langer::GraphDistance d;
    try {
      const langer::LangerAtlas atlas = langer::cover_ball(b, frames[k].central, 0.5 * r, 8, r, 1.0);
      d = langer::graph_over(a, b, atlas);
    } catch (const std::exception& e) {
      d.ok = false;
      d.reason = e.what();
    }
    if (!d.ok) {
      rep.cauchy = false;
      rep.reason = "frame " + std::to_string(frames[k + 1].j) + ": " + d.reason;
      break;
    }
    rep.distances.push_back(d.distance);
  }
  for (std::size_t k = 1; rep.cauchy && k < rep.distances.size(); ++k)
    if (rep.distances[k] > rep.distances[k - 1] && rep.distances[k] > floor) {
      rep.cauchy = false;
      rep.reason = "successive distances grow at frame " + std::to_string(frames[k + 1].j);
    }

  const BlowupFrame& last = frames.back();
  rep.shift = position(last.geom, last.central);
  rep.limit = aligned.back();
  rep.central_ii = ii_at(rep.limit, last.central);
  rep.central_ok = rep.s != 0.0 || std::fabs(rep.central_ii - 1.0) <= tol;
  return rep;
}

std::string to_json(const CentralSequence& cs) {
  nlohmann::json j;
  j["mode"] = to_string(cs.mode);
  j["t_hat"] = cs.t_hat;
  for (const CentralEntry& e : cs.entries) {
    nlohmann::json x{{"j", e.j}, {"t_j", e.t}, {"Q_j", e.Q}, {"vertex", e.vertex}, {"snapshot", e.snapshot}};
    x["ttilde_j"] = e.ttilde ? nlohmann::json(*e.ttilde) : nlohmann::json(nullptr);
    j["entries"].push_back(x);
  }
  j["warnings"] = cs.warnings;
  return j.dump(2);
}

}  // namespace mcflab::blowup
