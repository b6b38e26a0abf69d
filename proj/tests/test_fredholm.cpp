#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "taclab/error.hpp"
#include "taclab/fredholm.hpp"
#include "taclab/specfun.hpp"
#include "taclab/tacnode.hpp"

using namespace taclab;

namespace {

IntegralOperator rank_one_exp(double c = 2.0) {
  return {[c](double x, double y) { return c * std::exp(-(x + y)); }, 1.0, 1.0};
}

IntegralOperator airy_op(double s) { return {[](double x, double y) { return airy_kernel(x, y); }, s, 1.0}; }

}  // namespace

TEST_CASE("det_nystrom closed forms") {
  const HalfLineGrid g = halfline_grid(1.0, 1.0);
  const IntegralOperator zero{[](double, double) { return 0.0; }, 1.0, 1.0};
  CHECK(det_nystrom(zero, g).value == doctest::Approx(1.0));
  const FredholmResult r = det_nystrom(rank_one_exp(), g);
  CHECK(std::abs(r.value - (1.0 - std::exp(-2.0))) < 1e-12);
  CHECK(r.richardson_estimate >= 0.0);
  CHECK(r.grid_size == static_cast<int>(g.size()));
  CHECK(std::abs(det_nystrom(airy_op(8.0), halfline_grid(8.0, 1.0)).value - 1.0) < 1e-6);
}

TEST_CASE("grid refinement 64 -> 128") {
  for (double s : {-2.0, 0.0, 2.0}) {
    const double d64 = det_nystrom(airy_op(s), halfline_grid(s, 1.0, 64)).value;
    const double d128 = det_nystrom(airy_op(s), halfline_grid(s, 1.0, 128)).value;
    CHECK(std::abs(d64 - d128) < 1e-8);
  }
  const IntegralOperator k{[](double x, double y) { return 0.3 * std::exp(-0.5 * (x + y)) * std::cos(x - y); }, 0.0, 0.5};
  CHECK(std::abs(det_nystrom(k, halfline_grid(0.0, 0.5, 64)).value - det_nystrom(k, halfline_grid(0.0, 0.5, 128)).value) <
        1e-8);
}

TEST_CASE("rank-one perturbed determinant") {
  const HalfLineGrid g0 = halfline_grid(0.0, 1.0);
  const IntegralOperator zero{[](double, double) { return 0.0; }, 0.0, 1.0};
  auto e = [](double x) { return std::exp(-x); };
  CHECK(std::abs(det_rank_one_perturbed(zero, e, e, g0) - 1.5) < 1e-12);
  const HalfLineGrid g1 = halfline_grid(1.0, 1.0);
  auto z = [](double) { return 0.0; };
  CHECK(std::abs(det_rank_one_perturbed(rank_one_exp(), z, z, g1) - (1.0 - std::exp(-2.0))) < 1e-12);

  // Agrees with the determinant of the combined kernel M - phi psi.
  auto phi = [](double x) { return std::exp(-1.3 * x) * (1.0 + x); };
  auto psi = [](double y) { return 0.4 * std::exp(-0.7 * y); };
  const IntegralOperator m = rank_one_exp(0.7);
  const IntegralOperator combined{[&](double x, double y) { return m.kernel(x, y) - phi(x) * psi(y); }, 1.0, 1.0};
  CHECK(std::abs(det_rank_one_perturbed(m, phi, psi, g1) - det_nystrom(combined, g1).value) < 1e-12);

  const Eigen::MatrixXd mv = kernel_matrix(m.kernel, g1);
  Eigen::VectorXd ph(g1.size()), ps(g1.size()), zv = Eigen::VectorXd::Zero(g1.size());
  for (std::size_t i = 0; i < g1.size(); ++i) {
    ph[i] = phi(g1.nodes[i]);
    ps[i] = psi(g1.nodes[i]);
  }
  CHECK(std::abs(rank_one_ratio_minus_one(mv, zv, ps, g1)) < 1e-15);
  const double ratio = det_rank_one_perturbed(m, phi, psi, g1) / det_nystrom(m, g1).value - 1.0;
  CHECK(std::abs(rank_one_ratio_minus_one(mv, ph, ps, g1) - ratio) < 1e-12);
}

TEST_CASE("resolvent") {
  const HalfLineGrid g = halfline_grid(0.0, 1.0);
  const IntegralOperator zero{[](double, double) { return 0.0; }, 0.0, 1.0};
  CHECK(resolvent(zero, g).cwiseAbs().maxCoeff() == 0.0);

  // lambda = c <phi, phi> = 1/2 with phi = e^{-x} on [0, inf): c = 1.
  const IntegralOperator k{[](double x, double y) { return std::exp(-(x + y)); }, 0.0, 1.0};
  const Eigen::MatrixXd r = resolvent(k, g);
  const Eigen::MatrixXd kv = kernel_matrix(k.kernel, g);
  CHECK((r - 2.0 * kv).cwiseAbs().maxCoeff() < 1e-12);

  const double st = 2.0;
  const HalfLineGrid ga = halfline_grid(st, 1.0);
  const Eigen::MatrixXd ka = kernel_matrix(airy_op(st).kernel, ga);
  const Eigen::MatrixXd ra = resolvent(airy_op(st), ga);
  CHECK(resolvent_residual(ka, ra, ga) < 1e-8);

  const IntegralOperator singular{[](double x, double y) { return 2.0 * std::exp(-(x + y)); }, 0.0, 1.0};
  CHECK_THROWS_AS(resolvent(singular, g), NumericalError);
}

TEST_CASE("Fredholm series oracle") {
  const HalfLineGrid g1 = halfline_grid(1.0, 1.0);
  const IntegralOperator zero{[](double, double) { return 0.0; }, 1.0, 1.0};
  CHECK(fredholm_series_det(zero, g1, 4) == doctest::Approx(1.0));
  CHECK(std::abs(fredholm_series_det(rank_one_exp(), g1, 2) - (1.0 - std::exp(-2.0))) < 1e-13);
  const HalfLineGrid g4 = halfline_grid(4.0, 1.0);
  CHECK(std::abs(fredholm_series_det(airy_op(4.0), g4, 4) - det_nystrom(airy_op(4.0), g4).value) < 1e-8);
  for (double s : {2.0, 3.0, 5.0, 8.0}) {
    const HalfLineGrid g = halfline_grid(s, 1.0);
    CHECK(std::abs(fredholm_series_det(airy_op(s), g, 8) - det_nystrom(airy_op(s), g).value) < 1e-7);
  }
}

TEST_CASE("numerical rank") {
  const HalfLineGrid g = halfline_grid(0.0, 1.0);
  const Eigen::MatrixXd two = kernel_matrix(
      [](double x, double y) { return std::exp(-(x + y)) + std::exp(-2.0 * (x + y)) * x * y; }, g);
  CHECK(numerical_rank(symmetrized(two, g)) == 2);
}
