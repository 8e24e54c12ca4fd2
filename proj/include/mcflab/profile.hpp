#pragma once

#include <cstddef>
#include <vector>

#include "mcflab/curve.hpp"

namespace mcflab {

enum class ProfileChart {
  Graph,   // r = u(x) over an axial grid
  Radial,  // rho(theta), theta in (0, pi) cell-centred, poles on the axis
};

enum class ProfileBoundary { Periodic, Neumann };

// Rotationally symmetric hypersurface in R^{m+1}, described by its meridian in
// the half plane (z, r), r > 0.
class AxisymProfile {
 public:
  AxisymProfile() = default;
  // Graph chart: strictly increasing grid, values u > 0. `period` is the axial
  // length of one period when bc == Periodic.
  AxisymProfile(int m, std::vector<double> grid, std::vector<double> values, ProfileBoundary bc,
                double period = 0.0);
  // Radial chart on the cell-centred grid theta_i = (i + 1/2) pi / n.
  static AxisymProfile radial(int m, std::vector<double> rho, double z_center = 0.0);

  static AxisymProfile sphere(double radius, int m, std::size_t n);
  static AxisymProfile cylinder(double radius, int m, double length, std::size_t n);
  // half-cosine neck between two bulbs on [-half_length, half_length]; the
  // grid is sinh-stretched towards x = 0
  static AxisymProfile dumbbell(double neck, double bulb, double half_length, int m, std::size_t n,
                                double stretch);

  int m() const { return m_; }
  ProfileChart chart() const { return chart_; }
  ProfileBoundary boundary() const { return bc_; }
  double period() const { return period_; }
  double z_center() const { return zc_; }
  std::size_t size() const { return vals_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return vals_; }

  AxisymProfile with_values(std::vector<double> v) const;

  // derived meridian quantities
  Point point(std::size_t i) const { return {z_[i], r_[i]}; }
  Point outward_normal(std::size_t i) const { return {nz_[i], nr_[i]}; }
  double kappa_profile(std::size_t i) const { return kp_[i]; }
  double kappa_axis(std::size_t i) const { return ka_[i]; }
  double mean_curvature(std::size_t i) const { return kp_[i] + (m_ - 1) * ka_[i]; }
  double ii_norm(std::size_t i) const;
  double first_derivative(std::size_t i) const { return d1_[i]; }
  double second_derivative(std::size_t i) const { return d2_[i]; }

  double sup_ii() const;
  std::size_t argmax_ii() const;
  double area() const;

  // meridian as a plane curve; radial profiles are mirrored into a closed curve
  DiscreteCurve meridian() const;
  // scale about the axis point (z0, 0)
  AxisymProfile rescaled(double scale, double z0) const;

 private:
  void derive();

  int m_ = 2;
  ProfileChart chart_ = ProfileChart::Graph;
  ProfileBoundary bc_ = ProfileBoundary::Neumann;
  double period_ = 0.0;
  double zc_ = 0.0;
  std::vector<double> grid_, vals_;
  std::vector<double> d1_, d2_, z_, r_, nz_, nr_, kp_, ka_;
};

// surface measure of the unit (k)-sphere
double sphere_area(int k);

}  // namespace mcflab
