#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "mcflab/cli.hpp"
#include "mcflab/graphgeom.hpp"
#include "mcflab/kernels.hpp"
#include "mcflab/langer.hpp"
#include "mcflab/shrinker.hpp"

namespace mcflab::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kCorpusSeed = 20240611;
constexpr int kCorpusSize = 1000;

void write_text(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

json pt(Point p) { return json::array({p.x, p.y}); }

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kUsage;
}

// ---- verify suites -------------------------------------------------------

json suite_lemmas() {
  using namespace graphgeom;
  const std::string path = std::string(MCFLAB_DATA_DIR) + "/corpus.txt";
  std::vector<PatchSpec> specs;
  std::string source = fs::path(path).filename().string();
  if (fs::exists(path)) {
    specs = read_corpus(path);
  } else {
    specs = random_corpus(kCorpusSeed, kCorpusSize);
    source = "generated";
  }
  const auto t0 = std::chrono::steady_clock::now();

  std::size_t hess_fail = 0, third_fail = 0, sandwich_fail = 0, ident_fail = 0, ident_nodes = 0, nodes = 0;
  double hess_worst = 0.0, third_worst = 0.0, sandwich_worst = 0.0, ident_worst = 0.0;
  std::vector<std::string> failed;
  for (const auto& s : specs) {
    const GraphPatch p = GraphPatch::sample(s);
    const BoundReport h = check_hessian_bound(p, 1e-8);
    const BoundReport t = check_third_derivative_bound(p, 1e-6);
    const MetricData md = induced_metric(p);
    nodes += md.jets.size();
    hess_worst = std::min(hess_worst, h.worst_slack);
    third_worst = std::min(third_worst, t.worst_slack);
    bool ok = h.pass && t.pass;
    hess_fail += !h.pass;
    third_fail += !t.pass;

    bool sw = true;
    for (std::size_t q = 0; q < md.jets.size(); ++q) {
      const NodeMetric& nm = md.nodes[q];
      const double hi = 1.0 + md.jets[q].df2;
      for (double e : {nm.g_eig_min, nm.g_eig_max, nm.gn_eig_min, nm.gn_eig_max}) {
        const double out = std::max(1.0 - e, e - hi);
        sandwich_worst = std::max(sandwich_worst, out);
        if (out > 1e-10) sw = false;
      }
    }
    sandwich_fail += !sw;
    ok = ok && sw;

    if (p.m() == 1 && p.n() == 1) {
      for (std::size_t q = 0; q < h.lhs.size(); ++q) {
        const double scale = std::max(std::abs(h.lhs[q]), std::abs(h.rhs[q]));
        if (scale < 1e-300) continue;
        ++ident_nodes;
        const double rel = std::abs(h.lhs[q] - h.rhs[q]) / scale;
        ident_worst = std::max(ident_worst, rel);
        if (rel > 1e-9) {
          ++ident_fail;
          ok = false;
        }
      }
    }
    if (!ok && failed.size() < 20) failed.push_back(s.id);
  }

  // f(x) = x^3 / 6 at the origin
  const GraphPatch cubic = GraphPatch::sample(1, 1, 1.0, 9, [](const Vec& x) {
    Vec v{};
    v[0] = x[0] * x[0] * x[0] / 6.0;
    return v;
  });
  const BoundReport cr = check_third_derivative_bound(cubic, 1e-6);
  const auto cj = jets(cubic);
  double c_lhs = std::nan(""), c_rhs = std::nan("");
  for (std::size_t q = 0; q < cj.size(); ++q)
    if (std::abs(cj[q].x[0]) < 1e-12) {
      c_lhs = cr.lhs[q];
      c_rhs = cr.rhs[q];
    }
  const bool cubic_ok = std::abs(c_lhs - 1.0) <= 1e-9 && std::abs(c_rhs - 1.0) <= 1e-9;

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json j;
  j["corpus"] = source;
  j["patches"] = specs.size();
  j["nodes"] = nodes;
  j["hessian"] = {{"eps", 1e-8}, {"failures", hess_fail}, {"worst_slack", hess_worst}};
  j["third_derivative"] = {{"eps", 1e-6}, {"failures", third_fail}, {"worst_slack", third_worst}};
  j["eigen_sandwich"] = {{"tol", 1e-10}, {"failures", sandwich_fail}, {"worst_excess", sandwich_worst}};
  j["curve_identity"] = {{"tol", 1e-9}, {"nodes", ident_nodes}, {"failures", ident_fail}, {"worst_rel", ident_worst}};
  j["cubic_origin"] = {{"lhs", num(c_lhs)}, {"rhs", num(c_rhs)}, {"pass", cubic_ok}};
  j["failed_patches"] = failed;
  j["seconds"] = secs;
  j["pass"] = hess_fail == 0 && third_fail == 0 && sandwich_fail == 0 && ident_fail == 0 && cubic_ok;
  return j;
}

json atlas_report(const DiscreteCurve& c, const std::string& name) {
  json j;
  j["fixture"] = name;
  const double sup = c.sup_curvature();
  j["sup_II"] = sup;
  bool pass = true;
  json certs = json::array();
  for (double a : {0.5, 1.0, std::sqrt(3.0)}) {
    const double r = 0.99 * langer::r_max(a, sup);
    const auto rep = langer::check_r_alpha(c, r, a);
    pass = pass && rep.pass;
    certs.push_back(json::parse(langer::to_json(rep)));
  }
  j["r_alpha"] = certs;
  j["r_max_alpha1"] = langer::r_max(1.0, sup);
  const double inj = langer::injectivity_lower_bound(c);
  j["injectivity_lower_bound"] = inj;
  j["embedding_constant"] = num(langer::embedding_constant(c));

  const double r = 0.99 * langer::r_max(1.0, sup);
  const std::size_t q0 = c.argmax_curvature();
  json cov = json::array();
  std::vector<std::size_t> prev;
  bool nested = true, counts = true;
  for (int ell = 1; ell <= 3; ++ell) {
    const auto at = langer::cover_ball(c, q0, 0.5 * r, ell, r, 1.0);
    std::vector<std::size_t> centers;
    for (const auto& ch : at.charts) centers.push_back(ch.center);
    const bool prefix = prev.size() <= centers.size() && std::equal(prev.begin(), prev.end(), centers.begin());
    nested = nested && prefix;
    const bool within = at.covers && static_cast<double>(at.charts.size()) <= at.count_bound;
    counts = counts && within;
    cov.push_back({{"ell", ell},
                   {"count", at.charts.size()},
                   {"K", at.k_constant},
                   {"bound", at.count_bound},
                   {"covers", at.covers},
                   {"nested", prefix}});
    prev = centers;
  }
  j["covering"] = cov;
  j["covering_ok"] = counts && nested;
  j["pass"] = pass && counts && nested;
  return j;
}

json suite_atlas() {
  json j;
  const DiscreteCurve circle = DiscreteCurve::circle(1.0, 256);
  json c = atlas_report(circle, "unit_circle");
  const double inj = c["injectivity_lower_bound"];
  const bool inj_ok = std::abs(inj - 1.0 / (2.0 * std::sqrt(2.0))) <= 1e-6 && inj <= M_PI;
  c["injectivity_ok"] = inj_ok;
  c["pass"] = c["pass"].get<bool>() && inj_ok;
  const DiscreteCurve lim = DiscreteCurve::limacon(0.2, 512);
  json l = atlas_report(lim, "limacon");
  j["fixtures"] = {c, l};
  j["r_max_alpha1"] = c["r_max_alpha1"];
  j["pass"] = c["pass"].get<bool>() && l["pass"].get<bool>();
  return j;
}

json suite_monotonicity() {
  json j;
  bool pass = true;
  auto check = [&](const std::string& name, double got, double want, double tol) {
    const double err = std::abs(got - want);
    const bool ok = err <= tol;
    pass = pass && ok;
    j["oracles"].push_back({{"name", name}, {"value", got}, {"expected", want}, {"tol", tol}, {"pass", ok}});
  };
  const Immersion line = DiscreteCurve::segment({-20.0, 0.0}, {20.0, 0.0}, 4001);
  check("line_density", shrinker::kernel_integrals(line, {0, 0}, 1.0).theta, 1.0, 1e-6);
  check("offset_line_density", shrinker::kernel_integrals(line, {0, 1.0}, 1.0).theta, std::exp(-0.25), 1e-6);
  const Immersion shrinking = DiscreteCurve::circle(std::sqrt(2.0), 1024);
  check("self_shrinking_circle", shrinker::kernel_integrals(shrinking, {0, 0}, 1.0).theta,
        std::sqrt(2.0 * M_PI) * std::exp(-0.5), 1e-5);
  const Immersion unit = DiscreteCurve::circle(1.0, 1024);
  check("static_circle_rhs", shrinker::theta_derivative_rhs(unit, {0, 0}, 1.0, 0.0),
        -std::sqrt(M_PI) * std::exp(-0.25) / 4.0, 1e-5);

  for (const auto& [name, f] : std::vector<std::pair<std::string, Immersion>>{
           {"circle", DiscreteCurve::circle(1.0, 512)},
           {"sphere_profile", AxisymProfile::sphere(1.0, 2, 128)},
           {"cylinder_profile", AxisymProfile::cylinder(1.0, 2, 4.0, 128)}}) {
    const Point c = is_curve(f) ? Point{0, 0} : Point{std::get<AxisymProfile>(f).z_center(), 0};
    const auto r = shrinker::shrinker_residual(f, c);
    const bool ok = r.residual <= 1e-8 && r.alpha < 0;
    pass = pass && ok;
    j["templates"].push_back({{"name", name}, {"alpha", r.alpha}, {"residual", r.residual}, {"pass", ok}});
  }

  flow::FlowConfig cfg;
  const auto tr = flow::run(DiscreteCurve::circle(1.0, 128), cfg);
  const auto est = flow::estimate_singular_time(tr);
  const auto ms = shrinker::monotonicity_check(tr, {0, 0}, est.t_hat);
  const double want = std::sqrt(2.0 * M_PI) * std::exp(-0.5);
  double dev = 0.0;
  for (const auto& s : ms.samples) dev = std::max(dev, std::abs(s.theta - want) / want);
  const auto ms2 = shrinker::monotonicity_check(tr, {0, 0}, est.t_hat + 0.1);
  const bool flow_ok = ms.monotone && dev <= 5e-3 && ms2.monotone && ms2.derivative_ok;
  pass = pass && flow_ok;
  j["circle_flow"] = {{"t_hat", est.t_hat},
                      {"theta_max_rel_dev", dev},
                      {"monotone", ms.monotone},
                      {"shifted_monotone", ms2.monotone},
                      {"shifted_derivative_ok", ms2.derivative_ok},
                      {"shifted_derivative_rel", ms2.worst_derivative_rel},
                      {"pass", flow_ok}};
  j["pass"] = pass;
  return j;
}

// ---- helpers for store-based commands -----------------------------------

struct Centering {
  std::vector<Point> path;
  Point x0;
};

Centering singular_point(const Store& st) {
  const auto& est = *st.info.estimate;
  const auto& cls = *st.info.classification;
  Centering c;
  c.path = blowup::track_point(st.traj, cls.pbar_vertex);
  c.x0 = blowup::fit_singular_point(st.traj, c.path, est.tail_begin, est.t_hat);
  if (!is_curve(st.traj[0].geom)) c.x0.y = 0.0;
  return c;
}

}  // namespace

// ---- commands -------------------------------------------------------------

int cmd_verify(const std::string& suite, const std::optional<fs::path>& out) {
  static const std::vector<std::string> names = {"lemmas", "atlas", "monotonicity"};
  std::vector<std::string> run;
  if (suite == "all") run = names;
  else if (std::find(names.begin(), names.end(), suite) != names.end()) run = {suite};
  else return usage("unknown suite '" + suite + "' (expected lemmas, atlas, monotonicity, all)");

  json j;
  j["version"] = kVersion;
  j["kernels"] = std::string(kernels::backend_name(kernels::active_backend()));
  bool pass = true;
  for (const auto& s : run) {
    json r = s == "lemmas" ? suite_lemmas() : s == "atlas" ? suite_atlas() : suite_monotonicity();
    pass = pass && r["pass"].get<bool>();
    j["suites"][s] = r;
  }
  j["pass"] = pass;
  const std::string text = j.dump(2) + "\n";
  if (out) write_text(*out / ("verify_" + suite + ".json"), text);
  std::cout << text;
  return pass ? kPass : kCheckFailed;
}

int cmd_flow(const fs::path& config, const std::optional<fs::path>& out) {
  ScenarioConfig cfg;
  try {
    cfg = load_config(config);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config " << config.string() << ":\n";
    for (const auto& p : e.problems) std::cerr << "  - " << p << "\n";
    return kUsage;
  } catch (const NotFound& e) {
    return usage(e.what());
  }
  const fs::path dir = out ? *out : fs::path(cfg.output);
  const auto start = std::chrono::steady_clock::now();
  const auto traj = flow::run(build_initial(cfg), cfg.flow);

  StoreInfo info;
  info.config = cfg;
  try {
    info.estimate = flow::estimate_singular_time(traj);
    info.classification = flow::classify_singularity(traj, *info.estimate);
  } catch (const flow::EstimationError& e) {
    info.estimate_error = e.what();
  }
  const auto files = write_store(dir, traj, info);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, config_to_json(cfg), files, wall);

  json j;
  j["store"] = dir.string();
  j["scenario"] = cfg.scenario;
  j["snapshots"] = traj.size();
  j["terminal"] = flow::to_string(traj.terminal);
  j["t_last"] = traj.back().t;
  j["sup_II_last"] = traj.back().sup_ii;
  if (info.estimate) {
    j["t_hat"] = info.estimate->t_hat;
    j["sigma"] = info.estimate->sigma;
  } else {
    j["estimate_error"] = info.estimate_error;
  }
  if (info.classification) {
    j["type"] = flow::to_string(info.classification->type);
    j["s_last"] = info.classification->s_last;
    j["s_max"] = info.classification->s_max;
  }
  std::cout << j.dump(2) << "\n";
  return kPass;
}

int cmd_blowup(const fs::path& store, const BlowupOptions& opt, const std::optional<fs::path>& out) {
  Store st;
  try {
    st = load_store(store);
  } catch (const NotFound& e) {
    return usage(e.what());
  }
  if (!st.info.estimate || !st.info.classification)
    return usage("store " + store.string() + " is not classified" +
                 (st.info.estimate_error.empty() ? "" : " (" + st.info.estimate_error + ")") +
                 "; rerun flow with a higher curvature_cap or finer discretization");
  const auto& est = *st.info.estimate;
  const auto& cls = *st.info.classification;
  blowup::Mode mode;
  if (opt.mode) mode = *opt.mode;
  else if (cls.type == flow::SingularityType::TypeI) mode = blowup::Mode::TypeI;
  else if (cls.type == flow::SingularityType::TypeII) mode = blowup::Mode::TypeII;
  else return usage("store classification is Indeterminate; pass --mode typeI or --mode typeII");

  const fs::path dir = out ? *out : store / "blowup";
  const auto& traj = st.traj;
  const Centering cen = singular_point(st);

  // schedule trimmed to the stored time range, last j_count entries
  const int count = opt.j_count.value_or(st.info.config.j_count);
  if (count < 2) return usage("--j must be at least 2");
  auto times = blowup::geometric_schedule(est.t_hat, st.info.config.t0, st.info.config.rate, 200);
  while (!times.empty() && times.back() > traj.back().t) times.pop_back();
  if (times.size() < 2) return usage("stored trajectory is too short for a blow-up schedule");
  const std::size_t first = times.size() > static_cast<std::size_t>(count) ? times.size() - count : 0;
  times.erase(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(first));

  auto cs = mode == blowup::Mode::TypeI ? blowup::central_sequence_typeI(traj, times, est.t_hat)
                                        : blowup::central_sequence_typeII(traj, times, est.t_hat);
  for (auto& e : cs.entries) e.j += static_cast<int>(first);

  blowup::FrameOptions fo;
  fo.centering = opt.centering;
  fo.pbar_path = cen.path;
  fo.x0 = cen.x0;

  json rep;
  rep["mode"] = blowup::to_string(mode);
  rep["centering"] = blowup::to_string(opt.centering);
  rep["t_hat"] = est.t_hat;
  rep["x0"] = pt(cen.x0);
  rep["central_sequence"] = json::parse(blowup::to_json(cs));
  rep["frames"] = json::array();
  rep["bound_checks"] = json::array();
  std::vector<blowup::BlowupFrame> at_zero;
  bool bounds_ok = true;
  double drift = 0.0;
  for (std::size_t k = 0; k < cs.entries.size(); ++k) {
    const auto& e = cs.entries[k];
    std::vector<double> grid = mode == blowup::Mode::TypeI
                                   ? std::vector<double>{-3.0, -2.0, -1.0, -0.5, 0.0}
                                   : std::vector<double>{-1.0, -0.5, 0.0, 0.25 * e.A(), 0.5 * e.A(), 0.75 * e.A()};
    const double s_lo = (traj[0].t - e.t) * e.Q * e.Q;
    const double s_hi = mode == blowup::Mode::TypeI ? 0.0 : std::min(e.A(), (traj.back().t - e.t) * e.Q * e.Q);
    std::vector<double> g;
    for (double s : grid)
      if (s >= s_lo && s <= s_hi && std::find(g.begin(), g.end(), s) == g.end()) g.push_back(s);
    std::sort(g.begin(), g.end());
    const auto frames = blowup::rescale(traj, cs, k, g, fo);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& f = frames[i];
      char name[64];
      std::snprintf(name, sizeof name, "frames/j%03d_s%02zu.csv", f.j, i);
      write_text(dir / name, geometry_csv(f.geom));
      rep["frames"].push_back({{"j", f.j},
                               {"s", f.s},
                               {"t", f.t},
                               {"Q", f.Q},
                               {"center", pt(f.center)},
                               {"sup_II", f.sup_ii},
                               {"central_vertex", f.central},
                               {"central_II", f.central_ii},
                               {"file", name}});
      if (f.s == 0.0) at_zero.push_back(f);
    }
    if (mode == blowup::Mode::TypeII) {
      const auto b = blowup::check_rescaled_bound(frames, cs, k);
      bounds_ok = bounds_ok && b.pass;
      rep["bound_checks"].push_back({{"j", e.j},
                                     {"A", e.A()},
                                     {"pass", b.pass},
                                     {"tol", b.tol},
                                     {"max_ratio", b.max_ratio},
                                     {"worst_s", b.worst_s},
                                     {"frames", b.frames}});
    }
    if (!frames.empty()) drift = std::max(drift, norm(frames.back().Q * (cen.x0 - frames.back().center)));
  }
  rep["rescaled_singular_point_max"] = drift;
  if (at_zero.size() < 2) return usage("fewer than two frames at s = 0; increase --j");

  const auto lim = blowup::extract_limit(at_zero);
  rep["limit"] = {{"s", lim.s},
                  {"cauchy", lim.cauchy},
                  {"distances", lim.distances},
                  {"central_II", lim.central_ii},
                  {"central_ok", lim.central_ok},
                  {"tol", lim.tol},
                  {"shift", pt(lim.shift)},
                  {"reason", lim.reason}};
  write_text(dir / "limit.csv", geometry_csv(lim.limit));

  const auto& last = at_zero.back();
  const Point xbar = last.Q * (cen.x0 - last.center);
  const auto v = shrinker::classify_blowup(cs, last, lim, xbar);
  rep["shrinker"] = json::parse(shrinker::to_json(v.report));
  rep["verdict"] = {{"pass", v.pass},
                    {"detail", v.detail},
                    {"extinct", v.extinct},
                    {"extinction_time", num(v.extinction_time)},
                    {"flow_extinction_time", v.flow_extinction_time},
                    {"template_radius", v.template_radius}};

  // change of variables for the residual integral on the last entry
  const auto& e = cs.entries.back();
  const double a = std::max(-1.0, (traj[0].t - e.t) * e.Q * e.Q);
  json sij;
  try {
    const auto si = shrinker::scaling_identity_check(traj, e.Q, last.center, e.t, cen.x0, est.t_hat, a, 0.0, 3.0);
    sij = {{"lhs", si.lhs}, {"rhs", si.rhs}, {"rel", si.rel}, {"pass", si.pass}, {"tol", si.tol}, {"note", si.note}};
  } catch (const std::exception& ex) {
    sij = {{"pass", false}, {"note", ex.what()}};
  }
  rep["scaling_identity"] = sij;

  const bool pass = lim.cauchy && lim.central_ok && v.pass && bounds_ok && sij["pass"].get<bool>();
  rep["pass"] = pass;
  write_text(dir / "shrinker_report.json", shrinker::to_json(v.report) + "\n");
  write_text(dir / "blowup_report.json", rep.dump(2) + "\n");
  json brief = {{"report", (dir / "blowup_report.json").string()},
                {"mode", rep["mode"]},
                {"class", rep["shrinker"]["class"]},
                {"central_II", lim.central_ii},
                {"cauchy", lim.cauchy},
                {"verdict", v.detail},
                {"pass", pass}};
  std::cout << brief.dump(2) << "\n";
  return pass ? kPass : kCheckFailed;
}

int cmd_monotone(const fs::path& store, const MonotoneOptions& opt, const std::optional<fs::path>& out) {
  Store st;
  try {
    st = load_store(store);
  } catch (const NotFound& e) {
    return usage(e.what());
  }
  const auto& traj = st.traj;
  const bool curve = is_curve(traj[0].geom);
  Point x0;
  if (opt.x0) {
    x0 = *opt.x0;
    if (!curve && x0.y != 0.0) return usage("x0 must lie on the symmetry axis (y = 0) for profiles");
  } else {
    if (!st.info.estimate || !st.info.classification)
      return usage("store has no singular-time estimate; pass --x0 and --t0");
    x0 = singular_point(st).x0;
  }
  double t0;
  if (opt.t0) t0 = *opt.t0;
  else if (st.info.estimate) t0 = st.info.estimate->t_hat;
  else return usage("store has no singular-time estimate; pass --t0");
  t0 += opt.t0_shift;
  if (!(t0 > traj.back().t))
    return usage("t0 = " + fmt17(t0) + " lies inside the trajectory range (last t = " + fmt17(traj.back().t) + ")");

  const auto ms = shrinker::monotonicity_check(traj, x0, t0);
  const fs::path dir = out ? *out : store / "monotone";
  std::string csv = "t,theta,rhs,fd_dtheta\n";
  for (const auto& s : ms.samples)
    csv += fmt17(s.t) + "," + fmt17(s.theta) + "," + fmt17(s.rhs) + "," + (std::isfinite(s.fd) ? fmt17(s.fd) : "") +
           "\n";
  write_text(dir / "monotone.csv", csv);

  double lo = ms.samples.front().theta, hi = lo;
  for (const auto& s : ms.samples) {
    lo = std::min(lo, s.theta);
    hi = std::max(hi, s.theta);
  }
  const bool pass = ms.monotone && ms.derivative_ok;
  json j = {{"x0", pt(x0)},
            {"t0", t0},
            {"samples", ms.samples.size()},
            {"theta_first", ms.samples.front().theta},
            {"theta_last", ms.samples.back().theta},
            {"theta_min", lo},
            {"theta_max", hi},
            {"monotone", ms.monotone},
            {"violations", ms.violations},
            {"worst_increase", ms.worst_increase},
            {"derivative_ok", ms.derivative_ok},
            {"derivative_steps", ms.derivative_steps},
            {"worst_derivative_rel", ms.worst_derivative_rel},
            {"derivative_tol", ms.derivative_tol},
            {"pass", pass}};
  write_text(dir / "monotone.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return pass ? kPass : kCheckFailed;
}

int cmd_atlas(const fs::path& store, std::optional<std::size_t> snapshot, const std::optional<fs::path>& out) {
  Store st;
  try {
    st = load_store(store);
  } catch (const NotFound& e) {
    return usage(e.what());
  }
  const std::size_t k = snapshot.value_or(st.traj.size() - 1);
  if (k >= st.traj.size()) return usage("snapshot " + std::to_string(k) + " out of range");
  const DiscreteCurve c = meridian(st.traj[k].geom);
  json j = atlas_report(c, "snapshot " + std::to_string(k));
  j["snapshot"] = k;
  j["t"] = st.traj[k].t;
  const std::string text = j.dump(2) + "\n";
  if (out) write_text(*out / ("atlas_" + std::to_string(k) + ".json"), text);
  std::cout << text;
  return j["pass"].get<bool>() ? kPass : kCheckFailed;
}

int cmd_corpus(const fs::path& out, std::uint64_t seed, int count) {
  if (count <= 0) return usage("--count must be positive");
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  graphgeom::write_corpus(out.string(), graphgeom::random_corpus(seed, count));
  std::cout << "wrote " << count << " patches to " << out.string() << "\n";
  return kPass;
}

}  // namespace mcflab::cli
