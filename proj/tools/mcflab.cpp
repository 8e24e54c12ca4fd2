#include <iostream>

#include <CLI11.hpp>

#include "mcflab/cli.hpp"

using namespace mcflab;

namespace {

std::optional<cli::fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return cli::fs::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean curvature flow singularity lab"};
  app.set_version_flag("--version", cli::kVersion);
  app.require_subcommand(1);

  std::string out, suite = "all", config, store, centering = "smooth", mode, x0s;
  int j = 0, count = 1000;
  double t0 = 0.0, t0_shift = 0.0;
  std::size_t snapshot = 0;
  std::uint64_t seed = 20240611;

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("--suite", suite, "lemmas | atlas | monotonicity | all");
  verify->add_option("--out", out);

  auto* flow = app.add_subcommand("flow", "run a scenario and write a trajectory store");
  flow->add_option("--config", config)->required();
  flow->add_option("--out", out, "store directory (overrides config output)");

  auto* blow = app.add_subcommand("blowup", "central sequence, rescaled frames and limit verdict");
  blow->add_option("--store", store)->required();
  auto* jopt = blow->add_option("--j", j, "number of schedule entries");
  blow->add_option("--centering", centering)->check(CLI::IsMember({"smooth", "tangent"}));
  blow->add_option("--mode", mode)->check(CLI::IsMember({"typeI", "typeII"}));
  blow->add_option("--out", out);

  auto* mono = app.add_subcommand("monotone", "Gaussian density along a stored trajectory");
  mono->add_option("--store", store)->required();
  auto* xopt = mono->add_option("--x0", x0s, "x,y");
  auto* topt = mono->add_option("--t0", t0);
  mono->add_option("--t0-shift", t0_shift);
  mono->add_option("--out", out);

  auto* atlas = app.add_subcommand("atlas", "Langer chart report on a stored snapshot");
  atlas->add_option("--store", store)->required();
  auto* sopt = atlas->add_option("--snapshot", snapshot);
  atlas->add_option("--out", out);

  auto* corpus = app.add_subcommand("corpus", "write a random polynomial patch corpus");
  corpus->add_option("--out", out)->required();
  corpus->add_option("--seed", seed);
  corpus->add_option("--count", count);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kUsage;
  }

  try {
    if (*verify) return cli::cmd_verify(suite, opt_path(out));
    if (*flow) return cli::cmd_flow(config, opt_path(out));
    if (*blow) {
      cli::BlowupOptions o;
      if (*jopt) o.j_count = j;
      o.centering = centering == "tangent" ? blowup::Centering::TangentFlow : blowup::Centering::SmoothBlowup;
      if (mode == "typeI") o.mode = blowup::Mode::TypeI;
      if (mode == "typeII") o.mode = blowup::Mode::TypeII;
      return cli::cmd_blowup(store, o, opt_path(out));
    }
    if (*mono) {
      cli::MonotoneOptions o;
      if (*xopt) {
        const auto comma = x0s.find(',');
        if (comma == std::string::npos) {
          std::cerr << "error: --x0 expects x,y\n";
          return cli::kUsage;
        }
        o.x0 = Point{std::stod(x0s.substr(0, comma)), std::stod(x0s.substr(comma + 1))};
      }
      if (*topt) o.t0 = t0;
      o.t0_shift = t0_shift;
      return cli::cmd_monotone(store, o, opt_path(out));
    }
    if (*atlas) return cli::cmd_atlas(store, *sopt ? std::optional<std::size_t>(snapshot) : std::nullopt, opt_path(out));
    if (*corpus) return cli::cmd_corpus(out, seed, count);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const cli::NotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kCheckFailed;
  }
  return cli::kUsage;
}
