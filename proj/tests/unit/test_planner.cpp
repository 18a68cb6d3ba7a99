#include "ccq/planner.hpp"

#include <cmath>

#include "ccq/errors.hpp"
#include "ccq/mm.hpp"
#include "doctest.h"

using namespace ccq;

TEST_CASE("solve_maincond") {
  const auto triv = OmegaCurve::trivial();
  const double g = solve_maincond(0, 1, triv);
  CHECK(g == doctest::Approx(1).epsilon(1e-9));
  CHECK(maincond_f(0, 1, 1, triv) == doctest::Approx(4.0 / 3));
  CHECK(maincond_g(0, 1, triv) == doctest::Approx(4.0 / 3));
  const auto cw = OmegaCurve::constant(2.3729);
  const auto est = theorem1_exponent(0, 1, cw);
  CHECK(est.regime == Regime::medium_m);
  CHECK(est.exponent < 0.1572);
  CHECK(est.exponent == doctest::Approx(1 - 2 / 2.3729).epsilon(1e-9));
  CHECK_THROWS_AS(solve_maincond(0, 0.4, triv), regime_error);
  CHECK_THROWS_AS(solve_maincond(0.5, 1.5, triv), regime_error);
  CHECK_THROWS_AS(solve_maincond(1.2, 1.0, triv), regime_error);
  // Residual bound over the whole medium regime.
  for (const auto& curve : {triv, cw, OmegaCurve::from_square(std::log2(7.0))})
    for (double a = 0; a <= 1.0; a += 0.05)
      for (double b = (1 + a) / 2; b < 2 - a - 1e-6; b += 0.05) {
        const double x = solve_maincond(a, b, curve);
        if (x > 0) CHECK(std::abs(maincond_f(a, b, x, curve) - maincond_g(a, x, curve)) <= 1e-9);
      }
}

TEST_CASE("theorem1_exponent") {
  for (const auto& curve : {OmegaCurve::trivial(), OmegaCurve::constant(2.3729)}) {
    CHECK(theorem1_exponent(0, 0.5, curve).exponent == doctest::Approx(0));
    CHECK(theorem1_exponent(0, 2, curve).exponent == doctest::Approx(1));
    CHECK(theorem1_exponent(0, 2, curve).regime == Regime::large_m);
    CHECK(theorem1_exponent(0.5, 0.6, curve).regime == Regime::small_m);
  }
  CHECK(theorem1_exponent(0, 1, OmegaCurve::trivial()).exponent == doctest::Approx(1.0 / 3));
  // k = n: every regime collapses to linear in k.
  for (double b : {0.5, 1.0, 1.5, 2.0}) CHECK(theorem1_exponent(1, b, OmegaCurve::trivial()).exponent >= 1 - 1e-9);
  CHECK(theorem1_exponent(1, 1, OmegaCurve::trivial()).exponent == doctest::Approx(1));
}

TEST_CASE("theorem1_exponent is continuous across regime boundaries") {
  // At b = (1 + a)/2 the crossing is gamma = 0, so continuity needs omega(0) = 2;
  // the constant curves used for the square-case examples do not have it.
  for (const auto& curve : {OmegaCurve::trivial(), OmegaCurve::from_square(2.3729), OmegaCurve::from_square(2.807)})
    for (double a = 0; a < 1.0; a += 0.05) {
      CAPTURE(a);
      for (double b : {(1 + a) / 2, 2 - a}) {
        const double lo = theorem1_exponent(a, b - 1e-6, curve).exponent;
        const double hi = theorem1_exponent(a, b + 1e-6, curve).exponent;
        CHECK(std::abs(lo - hi) <= 1e-3);
      }
    }
}

TEST_CASE("zwick_exponent") {
  const auto t = zwick_exponent(OmegaCurve::trivial());
  CHECK(t.exponent == doctest::Approx(1.0 / 3).epsilon(1e-4));
  const auto two = zwick_exponent(OmegaCurve::constant(2.0));
  CHECK(two.sigma == doctest::Approx(0.2).epsilon(1e-4));
  CHECK(two.exponent == doctest::Approx(0.2).epsilon(1e-4));
  for (const auto& curve : {OmegaCurve::constant(2.3729), OmegaCurve::from_square(2.807), OmegaCurve::constant(2.1)})
    CHECK(zwick_exponent(curve).exponent <= 1.0 / 3 + 1e-4);
  CHECK(zwick_left(0) == doctest::Approx(1.0 / 3));
  CHECK(zwick_left(0.6) == 0);
}

TEST_CASE("sampled curves") {
  const auto f = parse_sampled("# gamma omega\n0 2\n0.5 2.1\n1 2.3729\n");
  CHECK(f(0.25) == doctest::Approx(2.05));
  CHECK(f(-1) == doctest::Approx(2));
  const auto c = OmegaCurve::sampled(f);
  CHECK(c(2) == doctest::Approx(3.3729));
  CHECK_THROWS_AS(parse_sampled("0 2\n1\n"), std::runtime_error);
  try {
    parse_sampled("0 2\n0.5 x\n", "curve.dat");
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("curve.dat:2") != std::string::npos);
  }
  CHECK_THROWS_AS(OmegaCurve::sampled(parse_sampled("0 2.5\n1 2.1\n")), std::invalid_argument);
  CHECK_THROWS_AS(SampledFunction({{0, 1}, {0, 2}}), std::invalid_argument);
}

TEST_CASE("measured mm slope tracks the trivial-curve exponent") {
  // k = 1, m = n: exponent 1/3.
  std::vector<double> xs, ys;
  for (std::size_t n : {16, 32, 64, 128, 256}) {
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(static_cast<double>(predict_mm_rounds(n, n, 1, KernelFamily::trivial))));
  }
  double num = 0, den = 0, my = 0, sx = 0;
  for (double y : ys) my += y / static_cast<double>(ys.size());
  for (double x : xs) sx += x / static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - sx) * (ys[i] - my);
    den += (xs[i] - sx) * (xs[i] - sx);
  }
  CHECK(std::abs(num / den - theorem1_exponent(0, 1, OmegaCurve::trivial()).exponent) <= 0.1);
}

TEST_CASE("distance product exponents") {
  const auto triv = OmegaCurve::trivial();
  CHECK(dis_exponent(1024, 2, 1, triv).exponent == doctest::Approx(0.0));
  const auto e = dis_exponent(1 << 20, 1 << 20, 1, triv);
  const double a = std::log(20.0) / std::log(double(1 << 20));
  CHECK(e.exponent == doctest::Approx(theorem1_exponent(a, 1, triv).exponent));
  CHECK(e.exponent > 1.0 / 3);
  CHECK(dis_semiring_exponent(1024, 32) == 0.0);
  CHECK(dis_semiring_exponent(1024, 1024) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(dis_exponent(1, 4, 1, triv), std::invalid_argument);
}
