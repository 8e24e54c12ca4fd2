#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcflab/immersion.hpp"

namespace mcflab::flow {

struct FlowConfig {
  double c_cfl = 0.02;           // dt = c_cfl / sup|II|^2
  int extrapolation_depth = 4;   // harmonic substep sequence 1..depth
  double curvature_cap = 1e3;
  double t_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 1000000;
  std::size_t resample_every = 10;  // curves only; 0 disables
  double resample_gamma = 0.0;      // 0 gives equal chords
  // singular-time estimation and classification
  double tail_fraction = 0.3;
  std::size_t min_snapshots = 10;
  double band_ratio = 4.0;
  double growth_threshold = 10.0;
  double c_floor = 0.1;
};

enum class TerminalEvent { Running, CurvatureCap, TimeLimit, StepLimit, SingularState };
std::string to_string(TerminalEvent e);

struct Snapshot {
  double t = 0.0;
  Immersion geom;
  // configuration at t in the vertex labelling of the previous snapshot, set
  // when resampling changed the labelling
  std::optional<Immersion> arrival;
  double sup_ii = 0.0;
  std::size_t argmax = 0;
  double measure = 0.0;
};

Snapshot make_snapshot(double t, Immersion geom, std::optional<Immersion> arrival = std::nullopt);

class FlowTrajectory {
 public:
  FlowTrajectory() = default;
  explicit FlowTrajectory(FlowConfig cfg) : config_(cfg) {}

  const FlowConfig& config() const { return config_; }
  const std::vector<Snapshot>& snapshots() const { return snaps_; }
  const Snapshot& operator[](std::size_t i) const { return snaps_[i]; }
  std::size_t size() const { return snaps_.size(); }
  const Snapshot& back() const { return snaps_.back(); }
  void append(Snapshot s);

  TerminalEvent terminal = TerminalEvent::Running;
  std::string terminal_detail;

 private:
  FlowConfig config_;
  std::vector<Snapshot> snaps_;
};

// One macro step of size dt.
Immersion step(const Immersion& f, double dt, const FlowConfig& cfg);
FlowTrajectory run(const Immersion& initial, const FlowConfig& cfg);

// Configuration at time t, linear in time between stored snapshots.
Immersion state_at(const FlowTrajectory& traj, double t);

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularTimeEstimate {
  double t_hat = 0.0;
  double sigma = 0.0;
  double slope = 0.0, intercept = 0.0;  // sup|II|^-2 ~ intercept + slope t
  std::size_t tail_begin = 0;           // first snapshot of the fitted tail
  std::size_t tail_count = 0;
};

SingularTimeEstimate estimate_singular_time(const FlowTrajectory& traj);

enum class SingularityType { TypeI, TypeII, Indeterminate };
std::string to_string(SingularityType t);

struct SingularityClass {
  SingularityType type = SingularityType::Indeterminate;
  double s_min = 0, s_max = 0, s_mean = 0, s_last = 0;
  double ratio = 0;
  double trend = 0;  // least-squares slope of s against -log(T - t)
  bool floor_ok = false;
  bool compact_type = false;
  std::size_t tail_begin = 0;
  std::vector<double> s_values;
  std::vector<std::size_t> picks;  // tie-aware argmax vertex per tail snapshot
  std::size_t pbar_vertex = 0;     // vertex of the last snapshot
  Point pbar;
};

SingularityClass classify_singularity(const FlowTrajectory& traj, const SingularTimeEstimate& est);

// argmax of |II| preferring, among near-ties, the vertex closest to `near`
std::size_t tie_aware_argmax(const Immersion& f, std::optional<Point> near, double rel_tol = 1e-6);

}  // namespace mcflab::flow
