#include "mcflab/graphgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace mcflab::graphgeom {

GraphPatch::GraphPatch(int m, int n, double r, int nodes, std::vector<double> values)
    : m_(m), n_(n), r_(r), nodes_(nodes), values_(std::move(values)) {
  if (m < 1 || m > kMaxDim || n < 1 || n > kMaxDim)
    throw std::invalid_argument("patch dimensions out of range");
  if (nodes < 5 || !(r > 0.0)) throw std::invalid_argument("invalid patch grid");
  h_ = 2.0 * r / (nodes - 1);
  count_ = 1;
  for (int i = 0; i < m; ++i) count_ *= static_cast<std::size_t>(nodes);
  if (values_.size() != count_ * static_cast<std::size_t>(n))
    throw std::invalid_argument("patch value count does not match grid");
  for (std::size_t k = 0; k < count_; ++k) {
    const auto mi = multi_index(k);
    bool ok = true;
    double rr = 0.0;
    for (int i = 0; i < m; ++i) {
      ok = ok && mi[i] >= 2 && mi[i] <= nodes - 3;
      const double xi = -r + mi[i] * h_;
      rr += xi * xi;
    }
    if (ok && std::sqrt(rr) <= r * (1.0 + 1e-12)) interior_.push_back(k);
  }
}

GraphPatch GraphPatch::sample(int m, int n, double r, int nodes,
                              const std::function<Vec(const Vec&)>& f) {
  std::size_t count = 1;
  for (int i = 0; i < m; ++i) count *= static_cast<std::size_t>(nodes);
  std::vector<double> v(count * n);
  const double h = 2.0 * r / (nodes - 1);
  for (std::size_t k = 0; k < count; ++k) {
    Vec x{};
    std::size_t rem = k;
    for (int i = m - 1; i >= 0; --i) {
      x[i] = -r + static_cast<double>(rem % nodes) * h;
      rem /= nodes;
    }
    const Vec y = f(x);
    for (int a = 0; a < n; ++a) v[k * n + a] = y[a];
  }
  return GraphPatch(m, n, r, nodes, std::move(v));
}

GraphPatch GraphPatch::sample(const PatchSpec& s) {
  return sample(s.f.m, s.f.n, s.radius, s.nodes, [&](const Vec& x) { return s.f(x); });
}

std::array<int, kMaxDim> GraphPatch::multi_index(std::size_t node) const {
  std::array<int, kMaxDim> mi{};
  for (int i = m_ - 1; i >= 0; --i) {
    mi[i] = static_cast<int>(node % nodes_);
    node /= nodes_;
  }
  return mi;
}

std::size_t GraphPatch::index(const std::array<int, kMaxDim>& mi) const {
  std::size_t k = 0;
  for (int i = 0; i < m_; ++i) k = k * nodes_ + mi[i];
  return k;
}

Vec GraphPatch::coords(std::size_t node) const {
  const auto mi = multi_index(node);
  Vec x{};
  for (int i = 0; i < m_; ++i) x[i] = -r_ + mi[i] * h_;
  return x;
}

std::vector<Jet> jets(const GraphPatch& p) {
  const int m = p.m(), n = p.n();
  const double h = p.spacing();
  std::vector<Jet> out;
  out.reserve(p.interior().size());
  for (std::size_t node : p.interior()) {
    Jet J;
    J.node = node;
    J.x = p.coords(node);
    const auto base = p.multi_index(node);
    auto at = [&](std::initializer_list<std::pair<int, int>> shifts, int a) {
      auto mi = base;
      for (auto [ax, d] : shifts) mi[ax] += d;
      return p.value(p.index(mi), a);
    };
    for (int a = 0; a < n; ++a) {
      const double f0 = p.value(node, a);
      for (int i = 0; i < m; ++i) {
        J.d1[a][i] = (at({{i, 1}}, a) - at({{i, -1}}, a)) / (2.0 * h);
        J.d2[a][i][i] = (at({{i, 1}}, a) - 2.0 * f0 + at({{i, -1}}, a)) / (h * h);
        J.d3[a][i][i][i] =
            (at({{i, 2}}, a) - 2.0 * at({{i, 1}}, a) + 2.0 * at({{i, -1}}, a) - at({{i, -2}}, a)) /
            (2.0 * h * h * h);
        for (int j = 0; j < m; ++j) {
          if (j == i) continue;
          if (j > i) {
            const double v = (at({{i, 1}, {j, 1}}, a) - at({{i, 1}, {j, -1}}, a) -
                              at({{i, -1}, {j, 1}}, a) + at({{i, -1}, {j, -1}}, a)) /
                             (4.0 * h * h);
            J.d2[a][i][j] = J.d2[a][j][i] = v;
          }
          // d_j of the pure second difference in i
          auto dii = [&](int s) {
            return (at({{i, 1}, {j, s}}, a) - 2.0 * at({{j, s}}, a) + at({{i, -1}, {j, s}}, a)) /
                   (h * h);
          };
          const double v = (dii(1) - dii(-1)) / (2.0 * h);
          J.d3[a][i][i][j] = J.d3[a][i][j][i] = J.d3[a][j][i][i] = v;
        }
        for (int j = i + 1; j < m; ++j)
          for (int k = j + 1; k < m; ++k) {
            double s = 0.0;
            for (int si : {1, -1})
              for (int sj : {1, -1})
                for (int sk : {1, -1}) s += si * sj * sk * at({{i, si}, {j, sj}, {k, sk}}, a);
            const double v = s / (8.0 * h * h * h);
            const int idx[3] = {i, j, k};
            int perm[3] = {0, 1, 2};
            do {
              J.d3[a][idx[perm[0]]][idx[perm[1]]][idx[perm[2]]] = v;
            } while (std::next_permutation(perm, perm + 3));
          }
      }
      for (int i = 0; i < m; ++i) {
        J.df2 += J.d1[a][i] * J.d1[a][i];
        for (int j = 0; j < m; ++j) {
          J.d2f2 += J.d2[a][i][j] * J.d2[a][i][j];
          for (int k = 0; k < m; ++k) J.d3f2 += J.d3[a][i][j][k] * J.d3[a][i][j][k];
        }
      }
    }
    out.push_back(J);
  }
  return out;
}

MetricData induced_metric(const GraphPatch& p) {
  MetricData md;
  md.m = p.m();
  md.n = p.n();
  md.jets = jets(p);
  const int m = md.m, n = md.n;
  md.nodes.reserve(md.jets.size());
  for (const Jet& J : md.jets) {
    NodeMetric nm;
    nm.g = identity(m);
    nm.gn = identity(n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int a = 0; a < n; ++a) nm.g[i][j] += J.d1[a][i] * J.d1[a][j];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int i = 0; i < m; ++i) nm.gn[a][b] += J.d1[a][i] * J.d1[b][i];
    nm.g_inv = spd_inverse(nm.g, m);
    nm.gn_inv = spd_inverse(nm.gn, n);
    const Vec eg = sym_eigenvalues(nm.g, m), en = sym_eigenvalues(nm.gn, n);
    nm.g_eig_min = eg[0];
    nm.g_eig_max = eg[m - 1];
    nm.gn_eig_min = en[0];
    nm.gn_eig_max = en[n - 1];
    md.nodes.push_back(nm);
  }
  return md;
}

SffData second_fundamental_form(const GraphPatch& p, const MetricData& md) {
  (void)p;
  const int m = md.m, n = md.n;
  SffData sd;
  sd.nodes.resize(md.jets.size());
  for (std::size_t q = 0; q < md.jets.size(); ++q) {
    const Jet& J = md.jets[q];
    const NodeMetric& nm = md.nodes[q];
    NodeSff& s = sd.nodes[q];
    const Mat& gi = nm.g_inv;
    const Mat& ni = nm.gn_inv;

    // |II|^2 = h_ija h_klb g^ik g^jl gn^ab
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double t = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
              for (int l = 0; l < m; ++l) t += J.d2[a][i][j] * J.d2[b][k][l] * gi[i][k] * gi[j][l];
        s.ii2 += ni[a][b] * t;
      }

    // Christoffel symbols of the tangent and normal connections
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double P[kMaxDim]{};
        for (int l = 0; l < m; ++l)
          for (int a = 0; a < n; ++a) P[l] += J.d2[a][i][j] * J.d1[a][l];
        for (int k = 0; k < m; ++k) {
          double v = 0.0;
          for (int l = 0; l < m; ++l) v += gi[k][l] * P[l];
          s.gamma_tan[k][i][j] = v;
        }
      }
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < n; ++a) {
        double R[kMaxDim]{};
        for (int c = 0; c < n; ++c)
          for (int r = 0; r < m; ++r) R[c] += J.d2[a][i][r] * J.d1[c][r];
        for (int b = 0; b < n; ++b) {
          double v = 0.0;
          for (int c = 0; c < n; ++c) v += ni[b][c] * R[c];
          s.gamma_nor[i][a][b] = v;
        }
      }

    // covariant derivative with lowered normal index
    double nab[kMaxDim][kMaxDim][kMaxDim][kMaxDim]{};  // [i][j][k][b]
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int b = 0; b < n; ++b) {
            double v = J.d3[b][i][j][k];
            for (int l = 0; l < m; ++l)
              v -= s.gamma_tan[l][i][j] * J.d2[b][l][k] + s.gamma_tan[l][i][k] * J.d2[b][j][l];
            for (int c = 0; c < n; ++c) v -= s.gamma_nor[i][b][c] * J.d2[c][j][k];
            nab[i][j][k][b] = v;
          }
    // raise all indices and contract
    double t1[kMaxDim][kMaxDim][kMaxDim][kMaxDim]{}, t2[kMaxDim][kMaxDim][kMaxDim][kMaxDim]{};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int b = 0; b < n; ++b) {
            double v = 0.0;
            for (int c = 0; c < n; ++c) v += ni[b][c] * nab[i][j][k][c];
            t1[i][j][k][b] = v;
          }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int b = 0; b < n; ++b) {
            double v = 0.0;
            for (int r = 0; r < m; ++r) v += gi[k][r] * t1[i][j][r][b];
            t2[i][j][k][b] = v;
          }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int b = 0; b < n; ++b) {
            double v = 0.0;
            for (int r = 0; r < m; ++r) v += gi[j][r] * t2[i][r][k][b];
            t1[i][j][k][b] = v;
          }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int b = 0; b < n; ++b) {
            double v = 0.0;
            for (int r = 0; r < m; ++r) v += gi[i][r] * t1[r][j][k][b];
            s.nabla_ii2 += v * nab[i][j][k][b];
          }
  }
  return sd;
}

double third_bound_constant(int m, int n) {
  return 2.0 * std::sqrt(2.0 * m + 4.0 * std::sqrt(static_cast<double>(m) * n) + n);
}

namespace {

void finish(BoundReport& r) {
  r.pass = true;
  r.worst_slack = std::numeric_limits<double>::infinity();
  double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t q = 0; q < r.slack.size(); ++q) {
    const double s = r.slack[q];
    if (s < -r.eps * std::max(1.0, r.rhs[q])) r.pass = false;
    if (s < r.worst_slack) {
      r.worst_slack = s;
      r.worst_node = q;
    }
    sum += s;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  r.stats.count = r.slack.size();
  if (!r.slack.empty()) {
    r.stats.min = lo;
    r.stats.max = hi;
    r.stats.mean = sum / static_cast<double>(r.slack.size());
  } else {
    r.worst_slack = 0.0;
  }
}

}  // namespace

BoundReport check_hessian_bound(const GraphPatch& p, double eps) {
  const MetricData md = induced_metric(p);
  const SffData sd = second_fundamental_form(p, md);
  BoundReport r;
  r.bound = "hessian";
  r.eps = eps;
  for (std::size_t q = 0; q < md.jets.size(); ++q) {
    const Jet& J = md.jets[q];
    const double w = 1.0 + J.df2;
    const double rhs = w * w * w * sd.nodes[q].ii2;
    r.lhs.push_back(J.d2f2);
    r.rhs.push_back(rhs);
    r.slack.push_back(rhs - J.d2f2);
  }
  finish(r);
  if (!md.jets.empty()) r.worst_node = md.jets[r.worst_node].node;
  return r;
}

BoundReport check_third_derivative_bound(const GraphPatch& p, double eps) {
  const MetricData md = induced_metric(p);
  const SffData sd = second_fundamental_form(p, md);
  const double c = third_bound_constant(p.m(), p.n());
  BoundReport r;
  r.bound = "third_derivative";
  r.eps = eps;
  for (std::size_t q = 0; q < md.jets.size(); ++q) {
    const Jet& J = md.jets[q];
    const double w = 1.0 + J.df2;
    const double lhs = std::sqrt(J.d3f2);
    const double rhs = w * w * std::sqrt(std::max(0.0, sd.nodes[q].nabla_ii2)) +
                       c * J.d2f2 * std::sqrt(J.df2);
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    r.slack.push_back(rhs - lhs);
  }
  finish(r);
  if (!md.jets.empty()) r.worst_node = md.jets[r.worst_node].node;
  return r;
}

std::string to_json(const BoundReport& r) {
  nlohmann::json j;
  j["bound"] = r.bound;
  j["pass"] = r.pass;
  j["eps"] = r.eps;
  j["worst_slack"] = r.worst_slack;
  j["worst_node"] = r.worst_node;
  j["stats"] = {{"count", r.stats.count}, {"min", r.stats.min}, {"max", r.stats.max},
                {"mean", r.stats.mean}};
  return j.dump();
}

}  // namespace mcflab::graphgeom
