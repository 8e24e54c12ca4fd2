#include <cmath>

#include <doctest.h>

#include "mcflab/blowup.hpp"

using namespace mcflab;
using namespace mcflab::blowup;

namespace {

const flow::FlowTrajectory& circle_run() {
  static const auto tr = flow::run(DiscreteCurve::circle(1.0, 256), flow::FlowConfig{});
  return tr;
}

double mean_radius(const Immersion& f) {
  const auto m = meridian(f);
  Point c{};
  for (std::size_t i = 0; i < m.size(); ++i) c = c + (1.0 / m.size()) * m.point(i);
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += norm(m.point(i) - c);
  return s / static_cast<double>(m.size());
}

// shrinking circles r^2 = 1 - 2t sampled at the given times
flow::FlowTrajectory synthetic_circles(const std::vector<double>& ts) {
  flow::FlowTrajectory tr;
  for (double t : ts) tr.append(flow::make_snapshot(t, DiscreteCurve::circle(std::sqrt(1 - 2 * t), 64)));
  return tr;
}

}  // namespace

TEST_SUITE("blowup") {
  TEST_CASE("geometric schedule") {
    const auto s = geometric_schedule(0.5, 0.0, 0.5, 4);
    REQUIRE(s.size() == 4);
    for (int j = 1; j <= 4; ++j) CHECK(s[j - 1] == doctest::Approx(0.5 * (1 - std::pow(0.5, j))));
  }

  TEST_CASE("type I central sequence on the circle: Q_j = (2(T - t_j))^(-1/2)") {
    const auto& tr = circle_run();
    const auto cs = central_sequence_typeI(tr, geometric_schedule(0.5, 0.0, 0.5, 6), 0.5);
    REQUIRE(cs.entries.size() == 6);
    for (const auto& e : cs.entries) CHECK(e.Q == doctest::Approx(1.0 / std::sqrt(2 * (0.5 - e.t))).epsilon(1e-3));
  }

  TEST_CASE("type I central sequence on the sphere: Q_j = sqrt(2) / r") {
    const auto tr = flow::run(AxisymProfile::sphere(1.0, 2, 64), flow::FlowConfig{});
    const auto cs = central_sequence_typeI(tr, geometric_schedule(0.25, 0.0, 0.5, 5), 0.25);
    for (const auto& e : cs.entries)
      CHECK(e.Q == doctest::Approx(std::sqrt(2.0) / std::sqrt(4 * (0.25 - e.t))).epsilon(1e-3));
  }

  TEST_CASE("type II picking matches an independent re-scan") {
    const auto tr = synthetic_circles({0.0, 0.05, 0.1, 0.2, 0.3, 0.35, 0.4});
    const std::vector<double> tt{0.1, 0.3, 0.4};
    const auto cs = central_sequence_typeII(tr, tt, 0.5);
    REQUIRE(cs.entries.size() == tt.size());
    for (std::size_t k = 0; k < tt.size(); ++k) {
      double best = -1;
      std::size_t bs = 0;
      for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr[i].t > tt[k]) continue;
        for (std::size_t v = 0; v < vertex_count(tr[i].geom); ++v) {
          const double x = (tt[k] - tr[i].t) * std::pow(ii_at(tr[i].geom, v), 2);
          if (x > best) {
            best = x;
            bs = i;
          }
        }
      }
      CHECK(cs.entries[k].snapshot == bs);
      CHECK(cs.entries[k].snapshot == 0);  // type I profile: maximum at t = 0
      CHECK(cs.entries[k].A() == doctest::Approx(best).epsilon(1e-12));
    }
  }

  TEST_CASE("single snapshot trajectory returns its argmax") {
    flow::FlowTrajectory tr;
    tr.append(flow::make_snapshot(0.0, DiscreteCurve::ellipse(2.0, 1.0, 128)));
    const auto cs = central_sequence_typeII(tr, {0.0}, 1.0);
    CHECK_THROWS_AS(central_sequence_typeII(tr, {0.1}, 1.0), std::out_of_range);
    REQUIRE(cs.entries.size() == 1);
    CHECK(ii_at(tr[0].geom, cs.entries[0].vertex) == doctest::Approx(tr[0].sup_ii));
  }

  TEST_CASE("rescaled circle frames follow sqrt(1 - 2s)") {
    const auto& tr = circle_run();
    const auto est = flow::estimate_singular_time(tr);
    const auto cls = flow::classify_singularity(tr, est);
    const auto cs = central_sequence_typeI(tr, geometric_schedule(est.t_hat, 0.0, 0.5, 6), est.t_hat);
    FrameOptions opt;
    opt.pbar_path = track_point(tr, cls.pbar_vertex);
    opt.x0 = fit_singular_point(tr, opt.pbar_path, est.tail_begin, est.t_hat);
    CHECK(norm(opt.x0) < 1e-3);
    std::vector<BlowupFrame> zero;
    for (std::size_t j = 2; j < cs.entries.size(); ++j) {
      const auto fr = rescale(tr, cs, j, {-3, -2, -1, 0}, opt);
      for (const auto& f : fr) CHECK(std::abs(mean_radius(f.geom) - std::sqrt(1 - 2 * f.s)) <= 1e-3);
      zero.push_back(fr.back());
      CHECK(fr.back().central_ii == doctest::Approx(1.0).epsilon(1e-9));
      CHECK_THROWS_AS(rescale(tr, cs, j, {0.1}, opt), std::out_of_range);
    }
    const auto lim = extract_limit(zero);
    CHECK(lim.cauchy);
    CHECK(lim.central_ok);
    for (double d : lim.distances) CHECK(d < 1e-6);

    // tangent-flow centering differs by the bounded translation Q (x0 - F(pbar, t_j))
    FrameOptions tan = opt;
    tan.centering = Centering::TangentFlow;
    const auto j = cs.entries.size() - 1;
    const auto a = rescale(tr, cs, j, {0.0}, opt).front();
    const auto b = rescale(tr, cs, j, {0.0}, tan).front();
    const Point shift = a.Q * (opt.x0 - a.center);
    const Point pa = position(a.geom, 0), pb = position(b.geom, 0);
    CHECK(norm(pa - pb - shift) < 1e-9);
    CHECK(norm(shift) < 1.0);
  }

  TEST_CASE("rescaled bound on synthetic circles") {
    const auto tr = synthetic_circles({0.0, 0.1, 0.2, 0.3, 0.35, 0.4, 0.42, 0.44});
    const auto cs = central_sequence_typeII(tr, {0.4, 0.44}, 0.5);
    FrameOptions opt;
    opt.centering = Centering::TangentFlow;
    for (std::size_t j = 0; j < cs.entries.size(); ++j) {
      const auto& e = cs.entries[j];
      const auto fr = rescale(tr, cs, j, {0.0, 0.5 * e.A()}, opt);
      const auto b = check_rescaled_bound(fr, cs, j);
      CHECK(b.pass);
      CHECK(b.max_ratio <= 1.0 + 1e-9);
    }
  }
}
