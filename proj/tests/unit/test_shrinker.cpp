#include <cmath>

#include <doctest.h>

#include "mcflab/shrinker.hpp"

using namespace mcflab;
using namespace mcflab::shrinker;

namespace {
const double kCircleTheta = std::sqrt(2.0 * M_PI) * std::exp(-0.5);
}

TEST_SUITE("shrinker") {
  TEST_CASE("line through x0 has density one and zero residual") {
    const Immersion line = DiscreteCurve::segment({-30, 0}, {30, 0}, 601);
    for (double tau : {0.1, 1.0, 4.0}) {
      CHECK(theta(line, {0.0, 0.0}, tau, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(theta_derivative_rhs(line, {0.0, 0.0}, tau, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("line at distance d: exp(-d^2 / 4 tau)") {
    const Immersion line = DiscreteCurve::segment({-30, 0}, {30, 0}, 601);
    for (double d : {0.5, 1.0, 2.0}) CHECK(theta(line, {0.3, d}, 1.0, 0.0) == doctest::Approx(std::exp(-d * d / 4)).epsilon(1e-9));
  }

  TEST_CASE("self-shrinking circle: sqrt(2 pi) e^(-1/2) and zero rhs") {
    for (double tau : {0.25, 1.0}) {
      const Immersion c = DiscreteCurve::circle(std::sqrt(2 * tau), 2048, {1.0, -2.0});
      CHECK(theta(c, {1.0, -2.0}, tau, 0.0) == doctest::Approx(kCircleTheta).epsilon(1e-5));
      CHECK(std::abs(theta_derivative_rhs(c, {1.0, -2.0}, tau, 0.0)) < 1e-5);
    }
  }

  TEST_CASE("static unit circle: rhs = -sqrt(pi) e^(-1/4) / 4") {
    const Immersion c = DiscreteCurve::circle(1.0, 4096);
    CHECK(theta_derivative_rhs(c, {0, 0}, 1.0, 0.0) == doctest::Approx(-std::sqrt(M_PI) * std::exp(-0.25) / 4).epsilon(1e-5));
  }

  TEST_CASE("self-shrinking sphere and cylinder profiles") {
    // S^2 of radius 2 sqrt(tau): (4 pi tau)^-1 4 pi 4 tau e^-1 = 4/e
    const Immersion s = AxisymProfile::sphere(2.0, 2, 512);
    CHECK(theta(s, {0, 0}, 1.0, 0.0) == doctest::Approx(4.0 / std::exp(1.0)).epsilon(1e-4));
    // S^1 x R of radius sqrt(2 tau): same density as the circle
    const Immersion c = AxisymProfile::cylinder(std::sqrt(2.0), 2, 3.0, 64);
    CHECK(theta(c, {0, 0}, 1.0, 0.0) == doctest::Approx(kCircleTheta).epsilon(1e-9));
  }

  TEST_CASE("profiles need an axis centre") {
    const Immersion s = AxisymProfile::sphere(1.0, 2, 32);
    CHECK_THROWS(kernel_integrals(s, {0.0, 0.5}, 1.0));
  }

  TEST_CASE("monotonicity on the circle flow") {
    const auto tr = flow::run(DiscreteCurve::circle(1.0, 256), flow::FlowConfig{});
    const auto est = flow::estimate_singular_time(tr);
    const auto a = monotonicity_check(tr, {0, 0}, est.t_hat);
    CHECK(a.monotone);
    for (const auto& s : a.samples) CHECK(s.theta == doctest::Approx(kCircleTheta).epsilon(5e-3));
    const auto b = monotonicity_check(tr, {0, 0}, est.t_hat + 0.1);
    CHECK(b.monotone);
    CHECK(b.derivative_ok);
    CHECK(b.derivative_steps > 0);
    for (std::size_t k = 0; k + 1 < b.samples.size(); ++k) CHECK(b.samples[k + 1].theta < b.samples[k].theta);
    CHECK_THROWS(monotonicity_check(tr, {0, 0}, tr.back().t));
  }

  TEST_CASE("scaling identity on the circle flow") {
    const auto tr = flow::run(DiscreteCurve::circle(1.0, 256), flow::FlowConfig{});
    const auto si = scaling_identity_check(tr, 2.0, {0.3, 0.0}, 0.2, {0, 0}, 0.5, -0.5, 0.0, 1.5);
    CHECK(si.pass);
    CHECK(si.rel <= 1e-3);
    const auto id = scaling_identity_check(tr, 1.0, {0, 0}, 0.2, {0.1, 0}, 0.5, -0.1, 0.0, 100.0);
    CHECK(id.rel <= 1e-12);
  }

  TEST_CASE("shrinker residual templates") {
    const auto a = shrinker_residual(DiscreteCurve::circle(std::sqrt(2.0), 512), {0, 0});
    CHECK(a.alpha == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(a.residual <= 1e-8);
    CHECK(a.cls == ShrinkerClass::Sphere);
    const auto b = shrinker_residual(DiscreteCurve::circle(1.0, 512), {0, 0});
    CHECK(b.alpha == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(b.radius_fit == doctest::Approx(1.0).epsilon(1e-9));
    const auto line = shrinker_residual(DiscreteCurve::segment({-5, 1}, {5, 1}, 101), {0, 0});
    CHECK(line.flagged);
    CHECK(line.cls == ShrinkerClass::Unknown);
    const auto flat = shrinker_residual(DiscreteCurve::segment({-5, 0}, {5, 0}, 101), {0, 0});
    CHECK(flat.flagged);
    const auto s = shrinker_residual(AxisymProfile::sphere(2.0, 2, 128), {0, 0});
    CHECK(s.cls == ShrinkerClass::Sphere);
    CHECK(s.alpha == doctest::Approx(-0.5).epsilon(1e-9));
    const auto c = shrinker_residual(AxisymProfile::cylinder(2.0, 3, 4.0, 64), {0, 0});
    CHECK(c.cls == ShrinkerClass::Cylinder);
    CHECK(c.radius_fit == doctest::Approx(2.0).epsilon(1e-9));
    const auto e = shrinker_residual(DiscreteCurve::ellipse(2.0, 1.0, 512), {0, 0});
    CHECK(e.cls == ShrinkerClass::Unknown);
  }
}
