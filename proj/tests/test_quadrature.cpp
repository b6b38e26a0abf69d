#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "taclab/error.hpp"
#include "taclab/quadrature.hpp"

using namespace taclab;

TEST_CASE("gauss_legendre small orders") {
  const GaussRule r1 = gauss_legendre(1);
  REQUIRE(r1.nodes.size() == 1);
  CHECK(r1.nodes[0] == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(2.0));
  const GaussRule r2 = gauss_legendre(2);
  CHECK(std::abs(std::abs(r2.nodes[0]) - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(r2.nodes[0] == doctest::Approx(-r2.nodes[1]));
  CHECK(r2.weights[0] == doctest::Approx(1.0));
  CHECK(r2.weights[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("gauss_legendre symmetry, weights and moments") {
  for (int order : {3, 7, 16, 64, 200}) {
    const GaussRule r = gauss_legendre(order);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) {
      sum += r.weights[i];
      CHECK(std::abs(r.nodes[i] + r.nodes[order - 1 - i]) < 1e-14);
    }
    CHECK(std::abs(sum - 2.0) < 1e-14);
  }
  const GaussRule r = gauss_legendre(16);
  double m30 = 0.0;
  for (int i = 0; i < 16; ++i) m30 += r.weights[i] * std::pow(r.nodes[i], 30);
  CHECK(std::abs(m30 - 2.0 / 31.0) < 1e-13);
}

TEST_CASE("halfline_grid") {
  auto integrate = [](const HalfLineGrid& g, auto f) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * f(g.nodes[i]);
    return s;
  };
  const HalfLineGrid g = halfline_grid(1.0, 2.0, 64);
  CHECK(std::abs(integrate(g, [](double x) { return 2.0 * std::exp(-2.0 * (x - 1.0)); }) - 1.0) < 1e-10);
  CHECK(std::abs(integrate(g, [](double x) { return 2.0 * std::exp(-2.0 * x); }) - std::exp(-2.0)) < 1e-10);
  const HalfLineGrid g0 = halfline_grid(0.0, 1.0, 64);
  CHECK(std::abs(integrate(g0, [](double x) { return std::exp(-x); }) - 1.0) < 1e-10);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.nodes[i] >= 1.0);
    CHECK(g.weights[i] > 0.0);
    if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
  }
  CHECK_THROWS_AS(halfline_grid(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(halfline_grid(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(halfline_grid(0.0, 1.0, 4), DomainError);
}

TEST_CASE("ContourSpec validation") {
  CHECK_THROWS_AS(ContourSpec::circle(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(ContourSpec::circle(0.0, 1.0, 3), DomainError);
  CHECK_THROWS_AS(ContourSpec::vertical_line(0.0, 0.0), DomainError);
  ContourSpec bad = ContourSpec::circle(0.0, 1.0);
  bad.truncation_halfwidth = 1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("single contour integrals") {
  const cplx one = integrate_contour([](cplx z) { return 1.0 / (z - 1.0); }, ContourSpec::circle(1.0, 0.5));
  CHECK(std::abs(one - 1.0) < 1e-13);
  const cplx zero = integrate_contour([](cplx) { return cplx(1.0); }, ContourSpec::circle(0.3, 2.0));
  CHECK(std::abs(zero) < 1e-14);
  const ContourSpec line = ContourSpec::vertical_line(0.0, gaussian_halfwidth(1.0));
  const cplx g = integrate_contour([](cplx w) { return std::exp(w * w); }, line);
  CHECK(std::abs(g - 1.0 / (2.0 * std::sqrt(std::numbers::pi))) < 1e-12);
  // Shifting the line inside the analytic strip leaves the integral unchanged.
  const cplx shifted = integrate_contour([](cplx w) { return std::exp(w * w); },
                                         ContourSpec::vertical_line(0.7, gaussian_halfwidth(1.0)));
  CHECK(std::abs(shifted - g) < 1e-12);
}

TEST_CASE("non-finite integrand names the node") {
  bool named = false;
  try {
    integrate_contour([](cplx z) { return 1.0 / (z - 1.5); }, ContourSpec::circle(1.0, 0.5, 4));
  } catch (const NumericalError& e) {
    named = std::string(e.what()).find("node") != std::string::npos;
  }
  CHECK(named);
}

TEST_CASE("double contour integrals") {
  const ContourSpec c1 = ContourSpec::circle(1.0, 0.5);
  const ContourSpec c2 = ContourSpec::circle(-1.0, 0.5);
  const cplx half =
      integrate_double([](cplx z, cplx w) { return 1.0 / ((z - 1.0) * (w + 1.0) * (z - w)); }, c1, c2);
  CHECK(std::abs(half - 0.5) < 1e-13);
  CHECK(std::abs(integrate_double([](cplx, cplx) { return cplx(1.0); }, c1, c2)) < 1e-14);
  CHECK(std::abs(integrate_double([](cplx z, cplx w) { return 1.0 / (z - w); }, c1, c2)) < 1e-13);
  // Iterated single integrals give the same value.
  const cplx iter = integrate_contour(
      [&](cplx z) {
        return integrate_contour([&](cplx w) { return 1.0 / ((z - 1.0) * (w + 1.0) * (z - w)); }, c2);
      },
      c1);
  CHECK(std::abs(iter - half) < 1e-13);
  CHECK_THROWS_AS(integrate_double([](cplx z, cplx w) { return 1.0 / (z - w); }, c1, c1), DomainError);
}

TEST_CASE("circle radius invariance and node doubling") {
  auto f = [](cplx z) { return std::exp(z) / (z - 0.2); };
  const cplx r1 = integrate_contour(f, ContourSpec::circle(0.0, 0.5));
  const cplx r2 = integrate_contour(f, ContourSpec::circle(0.0, 1.7));
  const cplx r3 = integrate_contour(f, ContourSpec::circle(0.0, 0.5, 512));
  CHECK(std::abs(r1 - std::exp(0.2)) < 1e-12);
  CHECK(std::abs(r2 - r1) / std::abs(r1) < 1e-10);
  CHECK(std::abs(r3 - r1) < 1e-9);
}

TEST_CASE("enclosing_circle stays in its half plane") {
  const ContourSpec c = enclosing_circle({-1.0, -0.2}, -1);
  CHECK(c.anchor.real() + c.radius < 0.0);
  CHECK(std::abs(c.anchor - cplx(-0.2)) < c.radius);
  CHECK(std::abs(c.anchor - cplx(-1.0)) < c.radius);
  CHECK_THROWS_AS(enclosing_circle({-1.0, 0.5}, -1), DomainError);
}
