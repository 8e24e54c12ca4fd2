#include <cmath>
#include <random>

#include <doctest.h>

#ifdef MCFLAB_TEST_EIGEN
#include <Eigen/Dense>
#endif

#include "mcflab/graphgeom.hpp"

using namespace mcflab::graphgeom;

namespace {

// exact partial derivative of a monomial map, by multi-index
double d_exact(const PolyMap& f, int a, const Vec& x, std::array<int, kMaxDim> order) {
  double s = 0.0;
  for (const auto& t : f.terms) {
    if (t.component != a) continue;
    double v = t.coef;
    for (int i = 0; i < f.m && v != 0.0; ++i) {
      int e = t.exps[i];
      for (int k = 0; k < order[i]; ++k) v *= e--;
      if (e < 0) v = 0.0;
      else v *= std::pow(x[i], e);
    }
    s += v;
  }
  return s;
}

PolyMap quadratic_map(int m, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  PolyMap f;
  f.m = m;
  f.n = n;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        Monomial t;
        t.component = a;
        t.coef = U(rng);
        t.exps[i] += 1;
        t.exps[j] += 1;
        f.terms.push_back(t);
      }
  return f;
}

}  // namespace

TEST_SUITE("graphgeom") {
  TEST_CASE("eigenvalues agree with an independent solver") {
#ifdef MCFLAB_TEST_EIGEN
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int d = 1; d <= kMaxDim; ++d)
      for (int rep = 0; rep < 200; ++rep) {
        Mat a{};
        Eigen::MatrixXd e(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = i; j < d; ++j) {
            a[i][j] = a[j][i] = U(rng);
            e(i, j) = e(j, i) = a[i][j];
          }
        const Vec ours = sym_eigenvalues(a, d);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
        for (int i = 0; i < d; ++i) CHECK(ours[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-12));
      }
#else
    MESSAGE("Eigen not available; skipped");
#endif
  }

  TEST_CASE("spd inverse") {
    Mat a{};
    a[0] = {4, 1, 0.5, 0};
    a[1] = {1, 3, 0.2, 0};
    a[2] = {0.5, 0.2, 2, 0};
    const Mat inv = spd_inverse(a, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a[i][k] * inv[k][j];
        CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14).scale(1.0));
      }
  }

  TEST_CASE("jets of quadratic maps match symbolic derivatives") {
    std::mt19937_64 rng(11);
    for (int m = 1; m <= 3; ++m)
      for (int n = 1; n <= 3; ++n) {
        const PolyMap f = quadratic_map(m, n, rng);
        const GraphPatch p = GraphPatch::sample(m, n, 1.0, 9, f);
        for (const Jet& J : jets(p)) {
          for (int a = 0; a < n; ++a)
            for (int i = 0; i < m; ++i) {
              std::array<int, kMaxDim> o{};
              o[i] = 1;
              CHECK(J.d1[a][i] == doctest::Approx(d_exact(f, a, J.x, o)).scale(1.0).epsilon(1e-10));
              for (int j = 0; j < m; ++j) {
                std::array<int, kMaxDim> o2{};
                o2[i] += 1;
                o2[j] += 1;
                CHECK(J.d2[a][i][j] == doctest::Approx(d_exact(f, a, J.x, o2)).scale(1.0).epsilon(1e-10));
              }
            }
        }
      }
  }

  TEST_CASE("third differences are exact on cubics") {
    PolyMap f;
    f.m = 2;
    f.n = 1;
    Monomial t;
    t.coef = 0.7;
    t.exps = {2, 1, 0, 0};
    f.terms.push_back(t);
    t.coef = -0.3;
    t.exps = {0, 3, 0, 0};
    f.terms.push_back(t);
    const GraphPatch p = GraphPatch::sample(2, 1, 1.0, 11, f);
    for (const Jet& J : jets(p)) {
      CHECK(J.d3[0][0][0][1] == doctest::Approx(1.4).epsilon(1e-9));
      CHECK(J.d3[0][1][1][1] == doctest::Approx(-1.8).epsilon(1e-9));
      CHECK(J.d3[0][0][0][0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("metric eigenvalues lie in [1, 1 + |Df|^2]") {
    const auto specs = random_corpus(3, 40);
    for (const auto& s : specs) {
      const MetricData md = induced_metric(GraphPatch::sample(s));
      for (std::size_t q = 0; q < md.nodes.size(); ++q) {
        CHECK(md.nodes[q].g_eig_min >= 1.0 - 1e-10);
        CHECK(md.nodes[q].g_eig_max <= 1.0 + md.jets[q].df2 + 1e-10);
      }
    }
  }

  TEST_CASE("circle arc: |II|^2 = 1/R^2 and nabla II = 0") {
    const double R = 2.0;
    const GraphPatch p = GraphPatch::sample(1, 1, 0.5, 201, [&](const Vec& x) {
      Vec v{};
      v[0] = std::sqrt(R * R - x[0] * x[0]) - R;
      return v;
    });
    const MetricData md = induced_metric(p);
    const SffData sd = second_fundamental_form(p, md);
    for (const auto& s : sd.nodes) {
      CHECK(s.ii2 == doctest::Approx(1.0 / (R * R)).epsilon(1e-4));
      CHECK(s.nabla_ii2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("sphere cap: |II|^2 = 2/R^2") {
    const double R = 3.0;
    const GraphPatch p = GraphPatch::sample(2, 1, 0.5, 41, [&](const Vec& x) {
      Vec v{};
      v[0] = std::sqrt(R * R - x[0] * x[0] - x[1] * x[1]) - R;
      return v;
    });
    const SffData sd = second_fundamental_form(p, induced_metric(p));
    for (const auto& s : sd.nodes) CHECK(s.ii2 == doctest::Approx(2.0 / (R * R)).epsilon(1e-3));
  }

  TEST_CASE("plane curve identity |f''|^2 = (1 + f'^2)^3 |II|^2") {
    const GraphPatch p = GraphPatch::sample(1, 1, 1.0, 21, [](const Vec& x) {
      Vec v{};
      v[0] = 0.4 * x[0] * x[0] - 0.3 * x[0] * x[0] * x[0] * x[0];
      return v;
    });
    const BoundReport r = check_hessian_bound(p);
    CHECK(r.pass);
    for (std::size_t q = 0; q < r.lhs.size(); ++q)
      CHECK(r.lhs[q] == doctest::Approx(r.rhs[q]).epsilon(1e-12).scale(1e-300));
  }

  TEST_CASE("cubic at the origin gives equality in the third-derivative bound") {
    const GraphPatch p = GraphPatch::sample(1, 1, 1.0, 9, [](const Vec& x) {
      Vec v{};
      v[0] = x[0] * x[0] * x[0] / 6.0;
      return v;
    });
    const BoundReport r = check_third_derivative_bound(p);
    const auto J = jets(p);
    bool seen = false;
    for (std::size_t q = 0; q < J.size(); ++q)
      if (std::abs(J[q].x[0]) < 1e-12) {
        seen = true;
        CHECK(r.lhs[q] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.rhs[q] == doctest::Approx(1.0).epsilon(1e-12));
      }
    CHECK(seen);
    CHECK(third_bound_constant(1, 1) == doctest::Approx(2.0 * std::sqrt(7.0)));
  }

  TEST_CASE("bounds hold on a random corpus") {
    for (const auto& s : random_corpus(99, 100)) {
      const GraphPatch p = GraphPatch::sample(s);
      CHECK_MESSAGE(check_hessian_bound(p, 1e-8).pass, s.id);
      CHECK_MESSAGE(check_third_derivative_bound(p, 1e-6).pass, s.id);
    }
  }

  TEST_CASE("corpus round trip") {
    const auto specs = random_corpus(5, 10);
    const std::string path = "graphgeom_corpus_roundtrip.txt";
    write_corpus(path, specs);
    const auto back = read_corpus(path);
    REQUIRE(back.size() == specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
      CHECK(back[i].id == specs[i].id);
      CHECK(back[i].f.terms.size() == specs[i].f.terms.size());
      Vec x{0.3, -0.2, 0.1, 0};
      const Vec a = specs[i].f(x), b = back[i].f(x);
      for (int k = 0; k < specs[i].f.n; ++k) CHECK(a[k] == b[k]);
    }
    std::remove(path.c_str());
  }
}
