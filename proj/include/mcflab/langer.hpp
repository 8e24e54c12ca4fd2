#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mcflab/curve.hpp"

namespace mcflab::langer {

// Local graph representation of a curve over its tangent line at a vertex.
struct LangerChart {
  std::size_t center = 0;
  double radius = 0.0;
  double alpha = 0.0;
  Point origin, e1, e2;              // affine frame: tangent e1, normal e2
  std::vector<std::size_t> members;  // component vertices, increasing projection
  std::vector<double> u, f;          // projection and height of each member
  double u_min = 0.0, u_max = 0.0;   // covered part of (-radius, radius)
  double slope_sup = 0.0;
  double df0 = 0.0;  // mean of the one-sided slopes at the centre
};

struct ChartFailure {
  enum class Kind { NotGraph, SlopeExceeded, NoOverlap };
  Kind kind = Kind::NotGraph;
  std::size_t center = 0;
  std::size_t witness_a = 0, witness_b = 0;
  double slope = 0.0;
  std::string reason;
};

using ChartResult = std::variant<LangerChart, ChartFailure>;

ChartResult langer_chart(const DiscreteCurve& c, std::size_t q, double r, double alpha);

// alpha (1 + alpha^2)^(-3/2) / sup|II|
double r_max(double alpha, double sup_ii);

struct CertReport {
  bool pass = true;
  double r = 0.0, alpha = 0.0;
  double sup_ii = 0.0, r_max = 0.0;
  std::size_t charts_checked = 0;
  double worst_slope = 0.0;
  std::size_t worst_center = 0;
  std::optional<ChartFailure> failure;
};

CertReport check_r_alpha(const DiscreteCurve& c, double r, double alpha);

double injectivity_lower_bound(const DiscreteCurve& c);
// max ratio of induced to chordal distance; +inf when the curve crosses itself
double embedding_constant(const DiscreteCurve& c);

// ceil(8 sqrt(1 + alpha^2)) for m = 1, square-lattice count for m = 2
long covering_constant(int m, double alpha);

struct LangerAtlas {
  double alpha = 0.0, r = 0.0, rho = 0.0;
  int ell = 1;
  std::size_t q0 = 0;
  double ball_radius = 0.0;
  std::vector<LangerChart> charts;
  long k_constant = 0;
  double count_bound = 0.0;  // K^ell
  bool covers = false;
};

// Greedy cover of B(q0, ell rho / 2) by charts of radius rho / 4; the chart
// sequence does not depend on ell, so smaller balls give a prefix.
LangerAtlas cover_ball(const DiscreteCurve& c, std::size_t q0, double rho, int ell, double r,
                       double alpha);

struct GraphDistance {
  bool ok = true;
  double c0 = 0.0, c1 = 0.0;
  double distance = 0.0;  // c0 + c1
  std::size_t worst_chart = 0;
  std::string reason;
};

// C^1 distance of `a` written as a graph over the charts of `atlas_b`.
GraphDistance graph_over(const DiscreteCurve& a, const DiscreteCurve& b, const LangerAtlas& atlas_b);

std::string to_json(const CertReport& r);
std::string to_json(const LangerAtlas& a);

}  // namespace mcflab::langer
