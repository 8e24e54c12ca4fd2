#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mcflab/immersion.hpp"
#include "mcflab/mcflow.hpp"

namespace mcflab::blowup {

enum class Mode { TypeI, TypeII };
enum class Centering { SmoothBlowup, TangentFlow };
std::string to_string(Mode m);
std::string to_string(Centering c);

struct CentralEntry {
  int j = 0;
  std::size_t snapshot = 0;  // index of the snapshot at t_j
  std::size_t vertex = 0;    // p_j in that snapshot's labelling
  double t = 0.0;
  double Q = 0.0;
  std::optional<double> ttilde;
  double A() const { return ttilde ? (*ttilde - t) * Q * Q : 0.0; }
};

struct CentralSequence {
  Mode mode = Mode::TypeI;
  std::vector<CentralEntry> entries;
  double t_hat = 0.0;
  std::vector<std::string> warnings;
};

// t_j = t_hat - (t_hat - t0) q^j for j = 1..count
std::vector<double> geometric_schedule(double t_hat, double t0, double q, int count);

// Q_j is the running max of sup|II| over snapshots with t <= scheduled time;
// t_j and p_j are where it is attained.
CentralSequence central_sequence_typeI(const flow::FlowTrajectory& traj, const std::vector<double>& times,
                                       double t_hat);
// exhaustive max of (ttilde_j - t)|II(p, t)|^2 over stored snapshots with t <= ttilde_j
CentralSequence central_sequence_typeII(const flow::FlowTrajectory& traj, const std::vector<double>& ttilde,
                                        double t_hat);

// Position of one material point traced backwards through every snapshot by
// closest-point projection, starting from `vertex` of the last snapshot.
std::vector<Point> track_point(const flow::FlowTrajectory& traj, std::size_t vertex);

// x(t) = x0 + b sqrt(t_hat - t) fitted over snapshots [begin, end)
Point fit_singular_point(const flow::FlowTrajectory& traj, const std::vector<Point>& path,
                         std::size_t begin, double t_hat);

struct BlowupFrame {
  int j = 0;
  double s = 0.0;
  double t = 0.0;  // t_j + s / Q_j^2
  double Q = 0.0;
  Point center;
  Immersion geom;
  double sup_ii = 0.0;
  std::size_t central = 0;  // vertex nearest the rescaled p_j
  double central_ii = 0.0;
  double s_lo = 0.0, s_hi = 0.0;  // valid interval (s_lo, s_hi]
};

struct FrameOptions {
  Centering centering = Centering::SmoothBlowup;
  std::vector<Point> pbar_path;  // F(pbar, t) per snapshot, for SmoothBlowup
  Point x0;                      // for TangentFlow
};

// frames of entry j on the rescaled time grid
std::vector<BlowupFrame> rescale(const flow::FlowTrajectory& traj, const CentralSequence& cs, std::size_t j,
                                 const std::vector<double>& s_grid, const FrameOptions& opt);

struct BoundCheck {
  bool pass = true;
  double tol = 0.05;
  double max_ratio = 0.0;  // max of sup|II|^2 / (A / (A - s))
  double worst_s = 0.0;
  std::size_t frames = 0;
};

// sup|II_j|^2 <= A / (A - s) + tol with A = (ttilde_j - t_j) Q_j^2
BoundCheck check_rescaled_bound(const std::vector<BlowupFrame>& frames, const CentralSequence& cs,
                                std::size_t j, double tol = 0.05);

struct LimitReport {
  bool cauchy = false;
  bool central_ok = false;
  double s = 0.0;
  std::vector<double> distances;  // graph_over distance of frame k+1 over frame k
  double central_ii = 0.0;
  double tol = 0.02;
  Immersion limit;
  Point shift;  // translation applied to put the central vertex at the origin
  std::string reason;
};

// Frames must share s. Distances below `floor` count as converged.
LimitReport extract_limit(const std::vector<BlowupFrame>& frames, double tol = 0.02, double floor = 1e-3);

std::string to_json(const CentralSequence& cs);

}  // namespace mcflab::blowup
