#include <cstdlib>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "mcflab/cli.hpp"

using namespace mcflab;
using namespace mcflab::cli;

namespace {

fs::path tmp_dir(const std::string& name) {
  const char* base = std::getenv("MCFLAB_TMP");
  fs::path p = fs::path(base ? base : "test_tmp") / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config defaults and round trip") {
    const auto c = parse_config(R"({"scenario": "circle"})");
    CHECK(c.N == 256);
    CHECK(c.flow.curvature_cap == 1e3);
    const auto back = parse_config(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    const auto l = parse_config(R"({"scenario": "limacon"})");
    CHECK(l.N == 512);
    CHECK(l.flow.resample_every == 1);
  }

  TEST_CASE("config problems are reported together") {
    try {
      parse_config(R"({"scenario": "circle", "geometry": {"radius": -1}, "discretization": {"N": 8}, "bogus": 1})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.problems.size() >= 3);
    }
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "circle", "caps": {"curvature_cap": 0.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "torus"})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), NotFound);
  }

  TEST_CASE("store round trip and manifest") {
    const fs::path dir = tmp_dir("store");
    auto cfg = parse_config(R"({"scenario": "circle", "discretization": {"N": 64}, "caps": {"curvature_cap": 20}})");
    const auto tr = flow::run(build_initial(cfg), cfg.flow);
    StoreInfo info;
    info.config = cfg;
    info.estimate = flow::estimate_singular_time(tr);
    info.classification = flow::classify_singularity(tr, *info.estimate);
    const auto files = write_store(dir, tr, info);
    write_manifest(dir, config_to_json(cfg), files, 0.0);
    std::string why;
    CHECK(verify_manifest(dir, &why));

    const Store st = load_store(dir);
    REQUIRE(st.traj.size() == tr.size());
    const auto& a = std::get<DiscreteCurve>(tr.back().geom);
    const auto& b = std::get<DiscreteCurve>(st.traj.back().geom);
    CHECK(a.xs() == b.xs());
    CHECK(a.ys() == b.ys());
    CHECK(st.traj.back().t == tr.back().t);
    CHECK(st.info.estimate->t_hat == info.estimate->t_hat);
    CHECK(st.info.classification->type == info.classification->type);

    std::ofstream(dir / "series.csv", std::ios::app) << "tampered\n";
    CHECK_FALSE(verify_manifest(dir, &why));
    CHECK(why.find("series.csv") != std::string::npos);
  }

  TEST_CASE("fmt17 round trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) CHECK(std::stod(fmt17(v)) == v);
  }

  TEST_CASE("exit codes") {
    CHECK(cmd_verify("nope", std::nullopt) == kUsage);
    CHECK(cmd_monotone(tmp_dir("missing") / "none", {}, std::nullopt) == kUsage);
    CHECK(cmd_blowup("/nonexistent/store", {}, std::nullopt) == kUsage);
    CHECK(cmd_flow("/nonexistent/config.json", std::nullopt) == kUsage);

    // unclassified store
    const fs::path dir = tmp_dir("unclassified");
    auto cfg = parse_config(R"({"scenario": "circle", "discretization": {"N": 32}, "caps": {"t_max": 0.01}})");
    const auto tr = flow::run(build_initial(cfg), cfg.flow);
    StoreInfo info;
    info.config = cfg;
    info.estimate_error = "not enough growth";
    write_store(dir, tr, info);
    CHECK(cmd_blowup(dir, {}, std::nullopt) == kUsage);

    // t0 inside the stored range
    MonotoneOptions mo;
    mo.x0 = Point{0, 0};
    mo.t0 = 0.005;
    CHECK(cmd_monotone(dir, mo, tmp_dir("mono_out")) == kUsage);
    mo.t0 = 0.6;
    CHECK(cmd_monotone(dir, mo, tmp_dir("mono_out")) == kPass);
  }

  TEST_CASE("flow command is deterministic") {
    const fs::path a = tmp_dir("det_a"), b = tmp_dir("det_b");
    const fs::path cfg = fs::path(MCFLAB_CONFIG_DIR) / "ellipse.json";
    REQUIRE(cmd_flow(cfg, a) == kPass);
    REQUIRE(cmd_flow(cfg, b) == kPass);
    CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
    CHECK(slurp(a / "snapshots/index.csv") == slurp(b / "snapshots/index.csv"));
    CHECK(slurp(a / "snapshots/snap_00100.csv") == slurp(b / "snapshots/snap_00100.csv"));
    CHECK(verify_manifest(a));
  }
}
