#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcflab/blowup.hpp"
#include "mcflab/immersion.hpp"
#include "mcflab/mcflow.hpp"

namespace mcflab::cli {

namespace fs = std::filesystem;

inline constexpr const char* kVersion = "0.3.0";

enum Exit : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

struct ConfigError : std::runtime_error {
  std::vector<std::string> problems;
  explicit ConfigError(std::vector<std::string> p);
};

struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string scenario = "circle";
  // geometry
  double radius = 1.0;
  double center_x = 0.0, center_y = 0.0;
  double axis_a = 2.0, axis_b = 1.0;  // ellipse semi-axes
  double loop = 0.2;
  double gamma = 8.0;  // initial limacon vertex clustering
  int m = 2;
  double neck = 0.3, bulb = 1.0, half_length = 2.0, stretch = 8.0;
  double length = 4.0;  // cylinder period
  std::string file;
  // discretization
  std::size_t N = 256;
  flow::FlowConfig flow;
  // blow-up schedule
  int j_count = 6;
  double rate = 0.5;
  double t0 = 0.0;
  std::uint64_t seed = 0;
  std::string output = "out";
};

// Parses and validates; every problem is reported in one ConfigError.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const fs::path& path);
std::string config_to_json(const ScenarioConfig& c);
Immersion build_initial(const ScenarioConfig& c);

// Trajectory store on disk.
struct StoreInfo {
  ScenarioConfig config;
  std::optional<flow::SingularTimeEstimate> estimate;
  std::string estimate_error;
  std::optional<flow::SingularityClass> classification;
};

struct Store {
  flow::FlowTrajectory traj;
  StoreInfo info;
};

std::vector<std::string> write_store(const fs::path& dir, const flow::FlowTrajectory& traj, const StoreInfo& info);
Store load_store(const fs::path& dir);

// SHA-256 hex digest of a file
std::string sha256_file(const fs::path& p);
void write_manifest(const fs::path& dir, const std::string& config_json, const std::vector<std::string>& files,
                    double wall_seconds);
// every listed file exists and matches its hash
bool verify_manifest(const fs::path& dir, std::string* why = nullptr);

std::string fmt17(double v);
// index,x,y,k for curves; index,x,u for profiles
std::string geometry_csv(const Immersion& f);

struct BlowupOptions {
  std::optional<int> j_count;
  blowup::Centering centering = blowup::Centering::SmoothBlowup;
  std::optional<blowup::Mode> mode;
};

struct MonotoneOptions {
  std::optional<Point> x0;
  std::optional<double> t0;
  double t0_shift = 0.0;
};

int cmd_verify(const std::string& suite, const std::optional<fs::path>& out);
int cmd_flow(const fs::path& config, const std::optional<fs::path>& out);
int cmd_blowup(const fs::path& store, const BlowupOptions& opt, const std::optional<fs::path>& out);
int cmd_monotone(const fs::path& store, const MonotoneOptions& opt, const std::optional<fs::path>& out);
int cmd_atlas(const fs::path& store, std::optional<std::size_t> snapshot, const std::optional<fs::path>& out);
int cmd_corpus(const fs::path& out, std::uint64_t seed, int count);

}  // namespace mcflab::cli
