#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "mcflab/kernels.hpp"

using namespace mcflab::kernels;

namespace {

struct Cols {
  std::vector<double> px, py, nx, ny, h, w;
  Samples view() const { return {px.data(), py.data(), nx.data(), ny.data(), h.data(), w.data(), px.size()}; }
};

Cols random_cols(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  Cols c;
  for (std::size_t i = 0; i < n; ++i) {
    c.px.push_back(U(rng));
    c.py.push_back(U(rng));
    const double a = U(rng);
    c.nx.push_back(std::cos(a));
    c.ny.push_back(std::sin(a));
    c.h.push_back(U(rng));
    c.w.push_back(std::abs(U(rng)) * 0.01);
  }
  return c;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar and avx2 backends agree") {
    const Table* v = avx2_table();
    if (!v) {
      MESSAGE("avx2 backend unavailable; skipped");
      return;
    }
    const Table& s = scalar_table();
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 1003u}) {
      const Cols c = random_cols(n, 42 + n);
      const GaussianSums gs = s.gaussian(c.view(), 0.3, -0.1, 0.37, 0.5);
      const GaussianSums gv = v->gaussian(c.view(), 0.3, -0.1, 0.37, 0.5);
      CHECK(rel_close(gv.mass, gs.mass, 1e-13));
      CHECK(rel_close(gv.residual, gs.residual, 1e-13));

      const MomentSums ms = s.moments(c.view(), 0.2, 0.1);
      const MomentSums mv = v->moments(c.view(), 0.2, 0.1);
      CHECK(rel_close(mv.hd, ms.hd, 1e-13));
      CHECK(rel_close(mv.dd, ms.dd, 1e-13));
      CHECK(rel_close(mv.hh, ms.hh, 1e-13));

      if (n >= 3) {
        std::vector<double> ks(n), kv(n);
        s.menger(c.px.data(), c.py.data(), c.nx.data(), c.ny.data(), c.h.data(), c.w.data(), n, ks.data());
        v->menger(c.px.data(), c.py.data(), c.nx.data(), c.ny.data(), c.h.data(), c.w.data(), n, kv.data());
        for (std::size_t i = 0; i < n; ++i) CHECK(rel_close(kv[i], ks[i], 1e-12));
      }
    }
  }

  TEST_CASE("arc/chord scan agrees across backends") {
    const Table* v = avx2_table();
    if (!v) return;
    const std::size_t n = 101;
    std::vector<double> xs(n), ys(n), arc(n);
    double L = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = 2.0 * M_PI * static_cast<double>(i) / n;
      xs[i] = 2.0 * std::cos(t);
      ys[i] = std::sin(t) + 0.2 * std::sin(3 * t);
    }
    for (std::size_t i = 0; i < n; ++i) {
      arc[i] = L;
      const std::size_t k = (i + 1) % n;
      L += std::hypot(xs[k] - xs[i], ys[k] - ys[i]);
    }
    for (bool closed : {true, false})
      for (std::size_t i : {0u, 7u, 50u, 99u}) {
        const double a = scalar_table().arc_chord(xs.data(), ys.data(), arc.data(), n, L, closed, i);
        const double b = v->arc_chord(xs.data(), ys.data(), arc.data(), n, L, closed, i);
        CHECK(rel_close(b, a, 1e-13));
      }
  }

  TEST_CASE("gaussian kernel closed form") {
    // single sample at distance 1 with tau = 1
    const double px = 1.0, py = 0.0, nx = 1.0, ny = 0.0, h = -1.0, w = 1.0;
    const Samples s{&px, &py, &nx, &ny, &h, &w, 1};
    for (const Table* t : {&scalar_table(), avx2_table()}) {
      if (!t) continue;
      const GaussianSums g = t->gaussian(s, 0.0, 0.0, 0.25, 0.5);
      CHECK(g.mass == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
      CHECK(g.residual == doctest::Approx(0.25 * std::exp(-0.25)).epsilon(1e-15));
    }
  }

  TEST_CASE("menger curvature of a circle") {
    const double R = 2.5;
    double ax = R, ay = 0, bx = R * std::cos(0.1), by = R * std::sin(0.1), cx = R * std::cos(0.2),
           cy = R * std::sin(0.2), k = 0;
    scalar_table().menger(&ax, &ay, &bx, &by, &cx, &cy, 1, &k);
    CHECK(std::abs(k) == doctest::Approx(1.0 / R).epsilon(1e-13));
  }

  TEST_CASE("backend selection") {
    CHECK(backend_available(Backend::Scalar));
    const Backend before = active_backend();
    set_backend(Backend::Scalar);
    CHECK(active_backend() == Backend::Scalar);
    CHECK(&active() == &scalar_table());
    set_backend(before);
    CHECK(backend_name(Backend::Scalar) == "scalar");
  }
}
