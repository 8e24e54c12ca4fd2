#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mcflab/blowup.hpp"
#include "mcflab/immersion.hpp"
#include "mcflab/mcflow.hpp"

namespace mcflab::shrinker {

// Backward heat kernel rho = (4 pi tau)^(-m/2) exp(-|x - x0|^2 / (4 tau)).
// Profiles need x0 on the axis (x0.y == 0).
struct Quadrature {
  double max_exponent_step = 0.01;  // per sub-segment variation of |x - x0|^2 / (4 tau)
  double cutoff = 1e-12;            // drop sub-segments whose weight stays below this
  double max_arc_step = 0.005;      // sub-segment length in units of sqrt(4 tau)
};

struct Ball {
  Point center;
  double radius = std::numeric_limits<double>::infinity();
};

struct KernelIntegrals {
  double theta = 0.0;     // int rho
  double residual = 0.0;  // int |H + (x - x0)^perp / (2 tau)|^2 rho
  std::size_t nodes = 0;
};

KernelIntegrals kernel_integrals(const Immersion& f, Point x0, double tau, const Quadrature& q = {},
                                 const std::optional<Ball>& clip = std::nullopt);

double theta(const Immersion& f, Point x0, double t0, double t, const Quadrature& q = {});
double theta_derivative_rhs(const Immersion& f, Point x0, double t0, double t, const Quadrature& q = {});

struct MonotoneSample {
  double t = 0.0, theta = 0.0, rhs = 0.0;
  double fd = std::numeric_limits<double>::quiet_NaN();  // forward difference to the next sample
  double quad_err = 0.0;
};

struct MonotoneSeries {
  Point x0;
  double t0 = 0.0;
  std::vector<MonotoneSample> samples;
  Quadrature quadrature;
  // verdict
  bool monotone = true;
  double worst_increase = 0.0;  // max over steps of theta_{k+1} - theta_k - tolerance
  std::size_t violations = 0;
  bool derivative_ok = true;
  double worst_derivative_rel = 0.0;
  std::size_t derivative_steps = 0;
  double derivative_tol = 0.05;
};

struct MonotoneOptions {
  double step_tol = 1e-4;            // allowed per-step increase on top of the quadrature error
  double derivative_tol = 0.05;      // relative mismatch of fd against the endpoint mean of rhs
  double smooth_tau_fraction = 0.1;  // derivative check only while t0 - t >= fraction (t0 - t_first)
  double rhs_floor = 1e-2;           // and |rhs| >= floor * max|rhs| over that window
  double min_change = 1e-8;          // and the predicted step change |rhs| dt resolves above theta noise
  std::size_t stride = 1;            // use every stride-th snapshot
  Quadrature quadrature;
};

MonotoneSeries monotonicity_check(const flow::FlowTrajectory& traj, Point x0, double t0,
                                  const MonotoneOptions& opt = {});

struct ScalingIdentity {
  double lhs = 0.0, rhs = 0.0;
  double rel = 0.0;
  bool pass = false;
  double tol = 1e-3;
  std::size_t time_nodes = 0;
  std::string note;
};

// Both sides of the change of variables t = t_j + s / Q^2, x = x_j + y / Q for the
// residual integral over [a, b] x K; K is a ball about the rescaling center.
ScalingIdentity scaling_identity_check(const flow::FlowTrajectory& traj, double Q, Point x_j, double t_j, Point x0,
                                       double T, double a, double b, double k_radius, double tol = 1e-3,
                                       int time_intervals = 64);

enum class ShrinkerClass { Sphere, Cylinder, Unknown };
std::string to_string(ShrinkerClass c);

struct ShrinkerReport {
  double alpha = 0.0;
  double residual = 0.0;  // int (h - alpha d)^2 / int h^2
  ShrinkerClass cls = ShrinkerClass::Unknown;
  double radius_fit = 0.0;       // template radius sqrt(-k / alpha)
  double radius_measured = 0.0;  // mean |x| (sphere) or mean u (cylinder)
  double shape_deviation = 0.0;  // max relative deviation of |x| or u from radius_fit
  bool flagged = false;
  std::string reason;
};

struct ShrinkerOptions {
  double residual_tol = 1e-2;
  double shape_tol = 0.05;
  double window = 1.0;  // axial half-width about the center, graph profiles only
};

// Least-squares alpha in H = alpha x^perp about `center`, then template matching.
ShrinkerReport shrinker_residual(const Immersion& f, Point center, const ShrinkerOptions& opt = {});

struct BlowupVerdict {
  blowup::Mode mode = blowup::Mode::TypeI;
  ShrinkerReport report;
  double extinction_time = 0.0;       // -1 / (2 alpha), rescaled time left for the shrinker
  double flow_extinction_time = 0.0;  // Q^2 (t_hat - t_j)
  double template_radius = 0.0;       // sqrt(2 k Q^2 (t_hat - t_j))
  bool extinct = false;
  bool pass = false;
  std::string detail;
};

// `xbar` is the rescaled singular point Q_j (x0 - x_center) of the limit frame.
BlowupVerdict classify_blowup(const blowup::CentralSequence& cs, const blowup::BlowupFrame& frame,
                              const blowup::LimitReport& limit, Point xbar, const ShrinkerOptions& opt = {});

std::string to_json(const ShrinkerReport& r);

}  // namespace mcflab::shrinker
