#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <boost/math/special_functions/laguerre.hpp>
#include <cmath>
#include <numbers>

#include "taclab/error.hpp"
#include "taclab/quadrature.hpp"
#include "taclab/specfun.hpp"

using namespace taclab;

TEST_CASE("Airy values") {
  CHECK(std::abs(airy_ai(0.0) - 0.3550280539) < 1e-10);
  CHECK(std::abs(airy_ai_prime(0.0) + 0.2588194038) < 1e-10);
  CHECK(std::abs(airy_ai(5.0) - 1.0834e-4) < 1e-8);
  for (double x = -10.0; x <= 10.0; x += 0.37) {
    const double ref = boost::math::airy_ai(x);
    const double refp = boost::math::airy_ai_prime(x);
    CHECK(std::abs(airy_ai(x) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)) + 1e-300);
    CHECK(std::abs(airy_ai_prime(x) - refp) <= 1e-10 * std::max(1.0, std::abs(refp)));
  }
  // Tail relative accuracy.
  for (double x : {6.0, 12.0, 25.0}) {
    CHECK(std::abs(airy_ai(x) / boost::math::airy_ai(x) - 1.0) < 1e-10);
  }
}

TEST_CASE("Airy equation") {
  const double h = 1e-3;
  for (double x = -10.0; x <= 10.0; x += 0.25) {
    const double second = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
    CHECK(std::abs(second - x * airy_ai(x)) < 1e-5);
    const double d = (airy_ai_prime(x + h) - airy_ai_prime(x - h)) / (2.0 * h);
    CHECK(std::abs(d - x * airy_ai(x)) < 1e-6 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("Airy switchover continuity") {
  for (double x : {-8.0, 4.5}) {
    for (double y : {std::nextafter(x, -100.0), std::nextafter(x, 100.0)}) {
      CHECK(std::abs(airy_ai(y) - boost::math::airy_ai(y)) < 1e-10 * std::abs(boost::math::airy_ai(y)) + 1e-13);
      CHECK(std::abs(airy_ai_prime(y) - boost::math::airy_ai_prime(y)) <
            1e-10 * std::abs(boost::math::airy_ai_prime(y)) + 1e-13);
    }
  }
}

TEST_CASE("ScaledValue") {
  CHECK(ScaledValue::from_double(0.0).sign == 0);
  CHECK(std::isinf(ScaledValue::from_double(0.0).log_magnitude));
  const ScaledValue a = ScaledValue::from_double(-3.0);
  CHECK(a.sign == -1);
  CHECK(a.value() == doctest::Approx(-3.0));
  CHECK((a * ScaledValue::from_double(2.0)).value() == doctest::Approx(-6.0));
}

TEST_CASE("Hermite values") {
  const double pi14 = std::pow(std::numbers::pi, -0.25);
  CHECK(std::abs(hermite_weighted(0, 0.0).value() - pi14) < 1e-14);
  CHECK(std::abs(hermite_weighted(1, 1.0).value() - std::sqrt(2.0) * pi14 * std::exp(-0.5)) < 1e-14);
  CHECK(std::abs(hermite_weighted(2, 0.0).value() + pi14 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(hermite_weighted(0, 0.0).value() - 0.7511255) < 1e-7);
  CHECK(std::abs(hermite_weighted(1, 1.0).value() - 0.6442888) < 1e-6);
  CHECK(std::abs(hermite_weighted(2, 0.0).value() + 0.5311259) < 1e-7);
  CHECK_THROWS_AS(hermite_weighted(-1, 0.0), DomainError);
  // Physicists' Hermite normalised: h_n = H_n / sqrt(2^n n! sqrt(pi)).
  for (int n : {3, 10, 30}) {
    for (double x : {-2.3, 0.4, 3.1}) {
      const double ref = boost::math::hermite(n, x) /
                         std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(std::numbers::pi)) *
                         std::exp(-x * x / 2.0);
      CHECK(std::abs(hermite_weighted(n, x).value() - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
  // Large degree does not overflow.
  const ScaledValue big = hermite_weighted(5000, 40.0);
  CHECK(std::isfinite(big.log_magnitude));
}

TEST_CASE("Laguerre values") {
  CHECK(std::abs(laguerre1_weighted(0, 0.0).value() - 1.0) < 1e-14);
  CHECK(std::abs(laguerre1_weighted(1, 0.0).value() + std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(laguerre1_weighted(1, 2.0).value()) < 1e-14);
  CHECK_THROWS_AS(laguerre1_weighted(1, -1.0), DomainError);
  for (int n : {2, 7, 25}) {
    for (double x : {0.3, 5.0, 40.0}) {
      const double ref = std::pow(-1.0, n) * boost::math::laguerre(n, 1, x) / std::sqrt(n + 1.0) * std::exp(-x / 2.0);
      CHECK(std::abs(laguerre1_weighted(n, x).value() - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("Hermite orthonormality") {
  const GaussRule gl = gauss_legendre(200);
  const double L = 12.0;
  for (int n = 0; n <= 20; n += 4) {
    for (int m = 0; m <= 20; m += 5) {
      double s = 0.0;
      for (int k = 0; k < 200; ++k) {
        const double x = L * gl.nodes[k];
        s += L * gl.weights[k] * hermite_weighted(n, x).value() * hermite_weighted(m, x).value();
      }
      CHECK(std::abs(s - (n == m ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("Laguerre orthonormality") {
  const GaussRule gl = gauss_legendre(300);
  const double L = 120.0;
  for (int n = 0; n <= 20; n += 4) {
    for (int m = 0; m <= 20; m += 5) {
      double s = 0.0;
      for (int k = 0; k < 300; ++k) {
        const double x = 0.5 * L * (gl.nodes[k] + 1.0);
        s += 0.5 * L * gl.weights[k] * x * laguerre1_weighted(n, x).value() * laguerre1_weighted(m, x).value();
      }
      CHECK(std::abs(s - (n == m ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("Hermite contour representations") {
  CHECK(hermite_from_contour(0, 1.0, 0.0).relative_gap() < 1e-10);
  CHECK(hermite_from_contour(1, 1.0, 1.0).relative_gap() < 1e-9);
  CHECK(hermite_from_contour(25, 0.7, 2.0).relative_gap() < 1e-8);
  for (int n : {1, 5, 12, 50}) {
    for (double A : {0.3, 1.0, 2.5}) {
      for (double B : {-1.0, 0.5, 3.0}) {
        // A + B = 0 puts the Hermite argument at the origin, where odd degrees vanish.
        for (const IdentitySides& s : {hermite_from_contour(n, A, B, 1024), hermite_from_contour_pole(n, A, B, 512)}) {
          if (s.rhs == 0.0) {
            CHECK(std::abs(s.lhs) < 1e-15);
          } else {
            CHECK(s.relative_gap() < 1e-8);
          }
        }
      }
    }
  }
  CHECK_THROWS(hermite_from_contour(3, 0.0, 1.0));
}

TEST_CASE("Laguerre contour representation") {
  const IdentitySides one = laguerre_from_contour(1, 0.0);
  CHECK(std::abs(one.lhs + 2.0) < 1e-12);
  CHECK(std::abs(one.rhs + 2.0) < 1e-12);
  CHECK(laguerre_from_contour(1, 3.7).relative_gap() < 1e-9);
  CHECK(laguerre_from_contour(10, 4.0).relative_gap() < 1e-8);
  for (int n : {2, 20, 50}) {
    for (double x : {0.5, 10.0, 60.0}) CHECK(laguerre_from_contour(n, x, 512).relative_gap() < 1e-8);
  }
  CHECK_THROWS_AS(laguerre_from_contour(0, 1.0), DomainError);
}

TEST_CASE("edge scaling") {
  const double h_lim = std::pow(2.0, 0.25) * airy_ai(0.0);
  const double l_lim = std::pow(2.0, -4.0 / 3.0) * airy_ai(0.0);
  CHECK(std::abs(h_lim - 0.4222) < 1e-4);
  CHECK(std::abs(l_lim - 0.1409) < 1e-4);
  CHECK(std::abs(hermite_edge_scaled(100, 0.0) - h_lim) < 0.05);
  CHECK(std::abs(laguerre_edge_scaled(100, 0.0) - l_lim) < 0.05);
  // Envelope past the edge.
  CHECK(std::abs(hermite_edge_scaled(100, 3.0)) < 2.0 * std::exp(-std::pow(3.0, 1.5)));
  CHECK(std::abs(laguerre_edge_scaled(100, 3.0)) < 2.0 * std::exp(-std::pow(3.0, 1.5)));

  double prev_h = 1e300, prev_l = 1e300;
  for (int n : {25, 50, 100, 200}) {
    double eh = 0.0, el = 0.0;
    for (double xi = -2.0; xi <= 2.0 + 1e-12; xi += 0.05) {
      eh = std::max(eh, std::abs(hermite_edge_scaled(n, xi) - std::pow(2.0, 0.25) * airy_ai(2.0 * xi)));
      el = std::max(el, std::abs(laguerre_edge_scaled(n, xi) -
                                 std::pow(2.0, -4.0 / 3.0) * airy_ai(std::pow(2.0, 2.0 / 3.0) * xi)));
    }
    CHECK(eh < prev_h);
    CHECK(el < prev_l);
    prev_h = eh;
    prev_l = el;
  }
}
