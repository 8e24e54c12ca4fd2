#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mcflab/polynomial.hpp"
#include "mcflab/symmat.hpp"

namespace mcflab::graphgeom {

// Samples of f : D_r -> R^n on a uniform tensor grid over [-r, r]^m.
class GraphPatch {
 public:
  GraphPatch(int m, int n, double r, int nodes, std::vector<double> values);

  static GraphPatch sample(int m, int n, double r, int nodes,
                           const std::function<Vec(const Vec&)>& f);
  static GraphPatch sample(const PatchSpec& s);

  int m() const { return m_; }
  int n() const { return n_; }
  double radius() const { return r_; }
  int nodes_per_axis() const { return nodes_; }
  double spacing() const { return h_; }
  std::size_t node_count() const { return count_; }

  Vec coords(std::size_t node) const;
  double value(std::size_t node, int alpha) const { return values_[node * n_ + alpha]; }
  // nodes whose stencils fit in the grid and which lie in the closed disc
  const std::vector<std::size_t>& interior() const { return interior_; }
  std::size_t index(const std::array<int, kMaxDim>& multi) const;
  std::array<int, kMaxDim> multi_index(std::size_t node) const;

 private:
  int m_, n_;
  double r_;
  int nodes_;
  double h_;
  std::size_t count_;
  std::vector<double> values_;
  std::vector<std::size_t> interior_;
};

// Finite-difference jet at one node; component index first.
struct Jet {
  std::size_t node = 0;
  Vec x{};
  double d1[kMaxDim][kMaxDim]{};                      // [a][i]
  double d2[kMaxDim][kMaxDim][kMaxDim]{};             // [a][i][j]
  double d3[kMaxDim][kMaxDim][kMaxDim][kMaxDim]{};    // [a][i][j][k]
  double df2 = 0, d2f2 = 0, d3f2 = 0;                 // squared Euclidean norms
};

std::vector<Jet> jets(const GraphPatch& p);

struct NodeMetric {
  Mat g{}, g_inv{};    // tangent
  Mat gn{}, gn_inv{};  // normal
  double g_eig_min = 0, g_eig_max = 0;
  double gn_eig_min = 0, gn_eig_max = 0;
};

struct MetricData {
  int m = 1, n = 1;
  std::vector<Jet> jets;
  std::vector<NodeMetric> nodes;
};

MetricData induced_metric(const GraphPatch& p);

struct NodeSff {
  double ii2 = 0;        // |II|_g^2
  double nabla_ii2 = 0;  // |nabla II|_g^2
  double gamma_tan[kMaxDim][kMaxDim][kMaxDim]{};  // [k][i][j]
  double gamma_nor[kMaxDim][kMaxDim][kMaxDim]{};  // [i][a][b]
};

struct SffData {
  std::vector<NodeSff> nodes;
};

SffData second_fundamental_form(const GraphPatch& p, const MetricData& md);

struct BoundStats {
  std::size_t count = 0;
  double min = 0, max = 0, mean = 0;
};

// Slack = right side minus left side per interior node; a node passes when
// slack >= -eps * max(1, right side).
struct BoundReport {
  std::string bound;
  bool pass = true;
  double eps = 0;
  double worst_slack = 0;
  std::size_t worst_node = 0;
  std::vector<double> lhs, rhs, slack;
  BoundStats stats;
};

BoundReport check_hessian_bound(const GraphPatch& p, double eps = 1e-8);
BoundReport check_third_derivative_bound(const GraphPatch& p, double eps = 1e-6);

// constant in the third-derivative bound: 2 sqrt(2m + 4 sqrt(mn) + n)
double third_bound_constant(int m, int n);

std::string to_json(const BoundReport& r);

}  // namespace mcflab::graphgeom
