// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mcflab/cli.hpp"
#include "mcflab/graphgeom.hpp"
#include "mcflab/langer.hpp"
#include "mcflab/shrinker.hpp"

using namespace mcflab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path g_work;
const fs::path kConfigs = MCFLAB_CONFIG_DIR;

struct Line {
  int id;
  bool pass;
  std::string detail;
};
std::vector<Line> g_lines;

void report(int id, bool pass, const std::string& detail) {
  g_lines.push_back({id, pass, detail});
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  json j;
  in >> j;
  return j;
}

// silence command chatter on stdout
template <class F>
int quiet(F&& f) {
  std::ostringstream sink;
  auto* old = std::cout.rdbuf(sink.rdbuf());
  const int rc = f();
  std::cout.rdbuf(old);
  return rc;
}

fs::path store(const std::string& name) { return g_work / name; }

double flow_seconds(const std::string& name) {
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = quiet([&] { return cli::cmd_flow(kConfigs / (name + ".json"), store(name)); });
  if (rc != cli::kPass) throw std::runtime_error("flow failed for " + name);
  return seconds_since(t0);
}

double max_radius_error(const Immersion& f, double want) {
  const auto m = meridian(f);
  Point c{};
  for (std::size_t i = 0; i < m.size(); ++i) c = c + (1.0 / m.size()) * m.point(i);
  double e = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) e = std::max(e, std::abs(norm(m.point(i) - c) - want));
  return e;
}

// ---------------------------------------------------------------------------

void lemma_suites() {
  using namespace graphgeom;
  const auto specs = read_corpus(std::string(MCFLAB_DATA_DIR) + "/corpus.txt");
  bool shape = specs.size() == 1000;
  for (const auto& s : specs) shape = shape && s.f.m <= 3 && s.f.n <= 3 && s.f.degree() <= 4;

  const auto t0 = std::chrono::steady_clock::now();
  double hess_min = 0, third_min = 0, ident = 0, eig_out = 0;
  for (const auto& s : specs) {
    const GraphPatch p = GraphPatch::sample(s);
    const auto h = check_hessian_bound(p);
    const auto t = check_third_derivative_bound(p);
    for (double v : h.slack) hess_min = std::min(hess_min, v);
    for (double v : t.slack) third_min = std::min(third_min, v);
    if (p.m() == 1 && p.n() == 1)
      for (std::size_t q = 0; q < h.lhs.size(); ++q) {
        const double sc = std::max(std::abs(h.lhs[q]), std::abs(h.rhs[q]));
        if (sc > 0) ident = std::max(ident, std::abs(h.lhs[q] - h.rhs[q]) / sc);
      }
    const MetricData md = induced_metric(p);
    for (std::size_t q = 0; q < md.nodes.size(); ++q) {
      const double hi = 1.0 + md.jets[q].df2;
      for (double e : {md.nodes[q].g_eig_min, md.nodes[q].g_eig_max, md.nodes[q].gn_eig_min, md.nodes[q].gn_eig_max})
        eig_out = std::max(eig_out, std::max(1.0 - e, e - hi));
    }
  }
  const double secs = seconds_since(t0);
  report(1, shape && hess_min >= -1e-8 && ident <= 1e-9 && secs <= 30.0,
         "patches " + std::to_string(specs.size()) + ", min slack " + fmt("%.3g", hess_min) + ", m=n=1 identity rel " +
             fmt("%.3g", ident) + ", " + fmt("%.2f", secs) + " s");

  const GraphPatch cubic = GraphPatch::sample(1, 1, 1.0, 9, [](const Vec& x) {
    Vec v{};
    v[0] = x[0] * x[0] * x[0] / 6.0;
    return v;
  });
  const auto cr = check_third_derivative_bound(cubic);
  const auto cj = jets(cubic);
  double lhs = NAN, rhs = NAN;
  for (std::size_t q = 0; q < cj.size(); ++q)
    if (std::abs(cj[q].x[0]) < 1e-12) {
      lhs = cr.lhs[q];
      rhs = cr.rhs[q];
    }
  report(2, third_min >= -1e-6 && std::abs(lhs - 1) <= 1e-9 && std::abs(rhs - 1) <= 1e-9,
         "min slack " + fmt("%.3g", third_min) + ", cubic LHS " + fmt("%.12g", lhs) + " RHS " + fmt("%.12g", rhs));
  report(3, eig_out <= 1e-10, "max excursion outside [1, 1+|Df|^2] " + fmt("%.3g", eig_out));
}

void atlas_criteria(const std::vector<std::string>& names) {
  bool ok = true;
  std::size_t snaps = 0;
  std::string worst;
  for (const auto& n : names) {
    const auto st = cli::load_store(store(n));
    for (std::size_t k = 0; k < st.traj.size(); ++k) {
      const DiscreteCurve c = meridian(st.traj[k].geom);
      const double sup = c.sup_curvature();
      for (double a : {0.5, 1.0, std::sqrt(3.0)}) {
        const auto r = langer::check_r_alpha(c, 0.99 * langer::r_max(a, sup), a);
        if (!r.pass && worst.empty()) worst = n + " snapshot " + std::to_string(k);
        ok = ok && r.pass;
      }
      ++snaps;
    }
  }
  const double inj = langer::injectivity_lower_bound(DiscreteCurve::circle(1.0, 256));
  const bool inj_ok = std::abs(inj - 0.353553) <= 1e-6 && inj <= M_PI;
  report(4, ok && inj_ok,
         std::to_string(snaps) + " snapshots certified at 0.99 r_max" + (worst.empty() ? "" : ", first failure " + worst) +
             "; unit circle injectivity bound " + fmt("%.6f", inj));

  bool cov = langer::covering_constant(1, 1.0) == 12;
  std::size_t checked = 0;
  for (const auto& n : {std::string("circle"), std::string("limacon")}) {
    const auto st = cli::load_store(store(n));
    const std::size_t stride = std::max<std::size_t>(1, st.traj.size() / 50);
    for (std::size_t k = 0; k < st.traj.size(); k += stride) {
      const DiscreteCurve& c = std::get<DiscreteCurve>(st.traj[k].geom);
      const double r = 0.99 * langer::r_max(1.0, c.sup_curvature());
      std::vector<std::size_t> prev;
      for (int ell = 1; ell <= 3; ++ell) {
        const auto at = langer::cover_ball(c, c.argmax_curvature(), 0.5 * r, ell, r, 1.0);
        cov = cov && at.covers && at.k_constant == 12 &&
              static_cast<double>(at.charts.size()) <= std::pow(12.0, ell);
        for (std::size_t i = 0; i < prev.size(); ++i) cov = cov && i < at.charts.size() && at.charts[i].center == prev[i];
        prev.clear();
        for (const auto& ch : at.charts) prev.push_back(ch.center);
      }
      ++checked;
    }
  }
  report(5, cov, "K = 12, " + std::to_string(checked) + " circle/limacon snapshots covered and nested for ell = 1..3");
}

void circle_criteria(double secs) {
  const auto st = cli::load_store(store("circle"));
  const double T = 0.5;
  double err = 0.0;
  for (const auto& s : st.traj.snapshots())
    if (s.t <= 0.99 * T) err = std::max(err, max_radius_error(s.geom, std::sqrt(1 - 2 * s.t)));
  const bool has = st.info.estimate && st.info.classification;
  const double that = has ? st.info.estimate->t_hat : NAN;
  const double s = has ? st.info.classification->s_last : NAN;
  const bool type1 = has && st.info.classification->type == flow::SingularityType::TypeI;
  report(6, err <= 1e-3 && std::abs(that - 0.5) <= 1e-3 && type1 && std::abs(s - 0.5) <= 0.025 && secs <= 60,
         "radius error " + fmt("%.3g", err) + ", T_hat " + fmt("%.8f", that) + ", " +
             (type1 ? "TypeI" : "not TypeI") + ", s " + fmt("%.5f", s) + ", " + fmt("%.1f", secs) + " s");
}

json run_blowup(const std::string& name, std::optional<mcflab::blowup::Mode> mode, int* rc = nullptr) {
  cli::BlowupOptions o;
  o.mode = mode;
  const int r = quiet([&] { return cli::cmd_blowup(store(name), o, store(name) / "blowup"); });
  if (rc) *rc = r;
  if (r == cli::kUsage) throw std::runtime_error("blowup usage error for " + name);
  return read_json(store(name) / "blowup" / "blowup_report.json");
}

void profile_criteria() {
  bool ok = true;
  std::string d;
  for (const auto& [name, want] : {std::pair<std::string, double>{"sphere_profile", 1.0 / 4.0},
                                   std::pair<std::string, double>{"cylinder_profile", 1.0 / 2.0}}) {
    const auto st = cli::load_store(store(name));
    const bool has = st.info.estimate && st.info.classification;
    const double that = has ? st.info.estimate->t_hat : NAN, s = has ? st.info.classification->s_last : NAN;
    ok = ok && std::abs(that - want) <= 1e-3 && std::abs(s - 0.5) <= 0.025;
    d += name + " T_hat " + fmt("%.6f", that) + " s " + fmt("%.4f", s) + "; ";
  }
  const auto st = cli::load_store(store("dumbbell"));
  const bool t1 = st.info.classification && st.info.classification->type == flow::SingularityType::TypeI;
  const json b = run_blowup("dumbbell", std::nullopt);
  const double rfit = b["shrinker"]["radius_fit"], tr = b["verdict"]["template_radius"];
  const bool cyl = b["shrinker"]["class"] == "Cylinder" && b["verdict"]["pass"].get<bool>();
  const double rel = std::abs(rfit - tr) / tr;
  ok = ok && t1 && cyl && rel <= 0.05;
  d += std::string("dumbbell ") + (t1 ? "TypeI" : "not TypeI") + ", limit " + b["shrinker"]["class"].get<std::string>() +
       ", R_fit " + fmt("%.4f", rfit) + " vs template " + fmt("%.4f", tr) + " (" + fmt("%.2f", 100 * rel) + "%)";
  report(7, ok, d);
}

void normalization_criteria(std::vector<std::pair<std::string, json>>& reports) {
  bool ok = true;
  std::string d;
  for (const auto& [name, rep] : reports) {
    const double c = rep["limit"]["central_II"];
    ok = ok && std::abs(c - 1.0) <= 0.02 && rep["limit"]["s"].get<double>() == 0.0;
    d += name + " " + fmt("%.6f", c) + ", ";
  }
  const auto st = cli::load_store(store("circle"));
  const json& rep = reports.front().second;
  double err = 0.0;
  std::size_t frames = 0;
  for (const auto& f : rep["frames"]) {
    const double s = f["s"];
    if (s < -3 || s > 0) continue;
    std::ifstream in(store("circle") / "blowup" / f["file"].get<std::string>());
    std::string line;
    std::getline(in, line);
    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
      double i, x, y, k;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &i, &x, &y, &k) == 4) {
        xs.push_back(x);
        ys.push_back(y);
      }
    }
    err = std::max(err, max_radius_error(DiscreteCurve(xs, ys), std::sqrt(1 - 2 * s)));
    ++frames;
  }
  ok = ok && frames > 0 && err <= 1e-3;
  report(8, ok, "central |II| at s=0: " + d + "circle frames " + std::to_string(frames) + " radius error " + fmt("%.3g", err));
}

void type2_criteria() {
  const auto st = cli::load_store(store("limacon"));
  const auto& cls = st.info.classification;
  const bool t2 = cls && cls->type == flow::SingularityType::TypeII;
  const bool grows = cls && cls->s_max > 10 && cls->trend > 0;
  int rc = 0;
  const json b = run_blowup("limacon", mcflab::blowup::Mode::TypeII, &rc);

  // independent re-scan of (ttilde - t) |II|^2
  bool picks = true;
  for (const auto& e : b["central_sequence"]["entries"]) {
    const double tt = e["ttilde_j"];
    double best = -1;
    std::size_t bs = 0, bv = 0;
    for (std::size_t i = 0; i < st.traj.size() && st.traj[i].t <= tt; ++i) {
      const auto ii = ii_norms(st.traj[i].geom);
      for (std::size_t v = 0; v < ii.size(); ++v) {
        const double x = (tt - st.traj[i].t) * ii[v] * ii[v];
        if (x > best) {
          best = x;
          bs = i;
          bv = v;
        }
      }
    }
    const double A = (tt - e["t_j"].get<double>()) * std::pow(e["Q_j"].get<double>(), 2);
    picks = picks && e["snapshot"] == bs && std::abs(A - best) <= 1e-9 * best &&
            std::abs(ii_norms(st.traj[bs].geom)[e["vertex"].get<std::size_t>()] - ii_norms(st.traj[bs].geom)[bv]) <=
                1e-6 * ii_norms(st.traj[bs].geom)[bv];
  }
  bool bounds = !b["bound_checks"].empty();
  double ratio = 0;
  for (const auto& c : b["bound_checks"]) {
    bounds = bounds && c["pass"].get<bool>() && c["tol"].get<double>() == 0.05;
    ratio = std::max(ratio, c["max_ratio"].get<double>());
  }
  report(9, t2 && grows && picks && bounds,
         std::string("classification ") + (cls ? flow::to_string(cls->type) : "none") + ", s_max " +
             fmt("%.3f", cls ? cls->s_max : NAN) + " trend " + fmt("%.3f", cls ? cls->trend : NAN) +
             ", picks match re-scan: " + (picks ? "yes" : "no") + ", rescaled bound: " + (bounds ? "pass" : "fail") +
             " (max ratio " + fmt("%.4f", ratio) + "), verdict: " + b["verdict"]["detail"].get<std::string>());
}

void monotone_criteria(const std::vector<std::string>& names) {
  bool ok = true;
  std::string d;
  for (const auto& n : names) {
    for (double shift : {0.0, 0.1}) {
      cli::MonotoneOptions o;
      o.t0_shift = shift;
      const fs::path out = store(n) / (shift == 0.0 ? "monotone" : "monotone_shifted");
      const int rc = quiet([&] { return cli::cmd_monotone(store(n), o, out); });
      const json j = read_json(out / "monotone.json");
      ok = ok && rc == cli::kPass && j["monotone"].get<bool>() && j["derivative_ok"].get<bool>();
      if (shift > 0) {
        ok = ok && j["derivative_steps"].get<std::size_t>() > 0;
        d += n + " fd rel " + fmt("%.3g", j["worst_derivative_rel"]) + "; ";
      }
      if (!j["monotone"].get<bool>()) d += n + " violations " + std::to_string(j["violations"].get<int>()) + "; ";
    }
  }
  const double want = std::sqrt(2 * M_PI) * std::exp(-0.5);
  const json c = read_json(store("circle") / "monotone" / "monotone.json");
  const double dev = std::max(std::abs(c["theta_min"].get<double>() - want), std::abs(c["theta_max"].get<double>() - want)) / want;
  ok = ok && dev <= 5e-3;
  report(10, ok, d + "self-shrinking circle theta deviation " + fmt("%.3g", dev));
}

void residual_criteria(const json& circle_blowup) {
  bool ok = true;
  std::string d;
  const std::vector<std::pair<std::string, Immersion>> templates = {
      {"circle", DiscreteCurve::circle(1.0, 512)},
      {"shrinking circle", DiscreteCurve::circle(std::sqrt(2.0), 512)},
      {"sphere", AxisymProfile::sphere(1.0, 2, 128)},
      {"cylinder", AxisymProfile::cylinder(1.0, 2, 4.0, 64)}};
  double worst = 0;
  for (const auto& [n, f] : templates) {
    const Point c = is_curve(f) ? Point{} : Point{std::get<AxisymProfile>(f).z_center(), 0};
    const auto r = shrinker::shrinker_residual(f, c);
    ok = ok && r.residual <= 1e-8 && r.alpha < 0;
    worst = std::max(worst, r.residual);
  }
  const double lres = circle_blowup["shrinker"]["residual"];
  ok = ok && lres <= 1e-2;
  const auto st = cli::load_store(store("circle"));
  const auto si = shrinker::scaling_identity_check(st.traj, std::sqrt(3.0), {0.05, 0.0}, 0.25, {0.0, 0.0}, st.info.estimate->t_hat,
                                                    -0.5, 0.0, 2.0);
  const double brel = circle_blowup["scaling_identity"]["rel"];
  ok = ok && si.rel <= 1e-3 && brel <= 1e-3;
  report(11, ok,
         "template residual max " + fmt("%.3g", worst) + ", circle limit residual " + fmt("%.3g", lres) +
             ", scaling identity rel " + fmt("%.3g", si.rel) + " (Q=sqrt 3), " + fmt("%.3g", brel) + " (blow-up entry)");
}

void determinism() {
  const fs::path a = g_work / "det_a", b = g_work / "det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  quiet([&] { return cli::cmd_flow(kConfigs / "circle.json", a); });
  quiet([&] { return cli::cmd_flow(kConfigs / "circle.json", b); });
  bool same = true;
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    const fs::path rel = fs::relative(e.path(), a);
    same = same && fs::exists(b / rel) && slurp(e.path()) == slurp(b / rel);
    ++n;
  }
  report(12, same && n > 0, std::to_string(n) + " CSV files compared byte for byte");
}

}  // namespace

int main(int argc, char** argv) {
  g_work = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_runs");
  fs::create_directories(g_work);
  auto guard = [](int id, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  };

  guard(1, lemma_suites);
  double circle_secs = 0;
  const std::vector<std::string> names = {"circle", "ellipse", "sphere_profile", "cylinder_profile", "dumbbell",
                                          "limacon"};
  guard(6, [&] {
    circle_secs = flow_seconds("circle");
    for (std::size_t i = 1; i < names.size(); ++i) flow_seconds(names[i]);
  });
  guard(4, [&] { atlas_criteria(names); });
  guard(6, [&] { circle_criteria(circle_secs); });
  guard(7, profile_criteria);

  std::vector<std::pair<std::string, json>> reps;
  guard(8, [&] {
    for (const auto& n : {"circle", "sphere_profile", "cylinder_profile", "dumbbell"})
      reps.emplace_back(n, run_blowup(n, std::nullopt));
    reps.emplace_back("limacon", run_blowup("limacon", mcflab::blowup::Mode::TypeII));
    normalization_criteria(reps);
  });
  guard(9, type2_criteria);
  guard(10, [&] { monotone_criteria(names); });
  guard(11, [&] { residual_criteria(reps.at(0).second); });
  guard(12, determinism);

  int failed = 0;
  for (int id = 1; id <= 12; ++id) {
    bool seen = false, pass = true;
    for (const auto& l : g_lines)
      if (l.id == id) {
        seen = true;
        pass = pass && l.pass;
      }
    if (!seen || !pass) ++failed;
  }
  std::printf("%d of 12 criteria passed\n", 12 - failed);
  return failed == 0 ? 0 : 1;
}
