#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "taclab/error.hpp"
#include "taclab/fredholm.hpp"
#include "taclab/prelimit.hpp"
#include "taclab/finite_kernel.hpp"
#include "taclab/symmetric.hpp"

using namespace taclab;

namespace {

ModelParams make(int n, int m, double a1, double a2, std::vector<double> nu) {
  ModelParams p;
  p.n = n;
  p.m = m;
  p.a1 = a1;
  p.a2 = a2;
  p.nu = std::move(nu);
  return p;
}

ModelParams desk() { return make(1, 1, -1.0, 1.0, {-1.0, 1.0}); }
ModelParams desk2() { return make(2, 2, -1.0, 1.0, {-2.0, -1.0, 1.0, 1.5}); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("q weight") {
  CHECK(q_weight({0.5, 1.0, 0.5, 0.0}) == 0.0);
  CHECK(std::abs(q_weight({0.0, 0.0, 0.5, 0.0}) - 1.0 / std::sqrt(std::numbers::pi)) < 1e-15);
  // e^{1/2 - 1/2} p_{3/4}(1, 1/2)
  const double expected = std::exp(0.5 - 0.5 - 0.25 / 1.5) / std::sqrt(2.0 * std::numbers::pi * 0.75);
  CHECK(std::abs(q_weight({0.0, 1.0, 0.75, 0.5}) - expected) < 1e-15);
  CHECK(std::abs(q_weight({0.0, 1.0, 0.75, 0.5}) - 0.38993931144548233) < 1e-14);
}

TEST_CASE("M0 closed form and method agreement") {
  const ModelParams p = make(1, 1, -0.5, 0.5, {-1.0, 1.0});
  const double closed = 2.0 * std::exp(-2.0);
  CHECK(std::abs(m0_eval(1.0, 1.0, p, Side::left, M0Method::contour) - closed) < 1e-12);
  CHECK(std::abs(m0_eval(1.0, 1.0, p, Side::left, M0Method::residue) - closed) < 1e-14);
  CHECK(std::abs(m0_eval(1.3, 2.1, p, Side::left) - 2.0 * std::exp(-3.4)) < 1e-12);
  const SideKernel k(p, Side::left);
  CHECK(std::abs(k.det_i_minus_m0() - (1.0 - std::exp(-2.0))) < 1e-9);

  const ModelParams q = desk2();
  for (Side side : {Side::left, Side::right}) {
    for (double x : {1.0, 1.7, 3.2}) {
      for (double y : {1.0, 2.5}) {
        const double c = m0_eval(x, y, q, side, M0Method::contour);
        const double r = m0_eval(x, y, q, side, M0Method::residue);
        CHECK(std::abs(c - r) < 1e-9 * std::max(1.0, std::abs(r)));
      }
    }
  }
  // Coincident endpoints are refused by the residue sum.
  const ModelParams coincide = symmetric_params(2, 3.0);
  CHECK_THROWS_AS(m0_eval(1.0, 1.0, coincide, Side::left, M0Method::residue), DomainError);
  CHECK(std::isfinite(m0_eval(1.0, 1.0, coincide, Side::left, M0Method::contour)));
  CHECK_THROWS_AS(m0_eval(0.5, 1.0, q, Side::left), DomainError);
}

TEST_CASE("M0 vanishes without an opposite group") {
  const ModelParams p = make(2, 0, -1.0, 1.0, {-1.5, -0.5});
  CHECK(m0_eval(1.0, 1.4, p, Side::left) == 0.0);
  const SideKernel k(p, Side::left);
  CHECK(!k.coupled());
  const auto c = k.script_c({1.0, 2.0}, {0.3, 0.1, 0.6, 0.2});
  CHECK(c.cwiseAbs().maxCoeff() == 0.0);
  CHECK(k.det_i_minus_m0() == 1.0);
}

TEST_CASE("M0 decays and has finite rank") {
  const ModelParams q = desk2();
  const SideKernel k(q, Side::left);
  double prev = std::abs(k.m0(1.0, 1.0));
  for (double x = 2.0; x <= 8.0; x += 1.0) {
    const double v = std::abs(k.m0(x, x));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(numerical_rank(symmetrized(k.m0_grid(), k.grid())) <= 2);
}

TEST_CASE("M^(z,w) and its rank-one decomposition") {
  const ModelParams q = desk2();
  const SideKernel k(q, Side::left);
  const cplx z(-0.5, 0.2), w(-0.3, -0.4);
  CHECK(std::abs(k.m_zw(1.2, 1.9, z, z) - k.m0(1.2, 1.9)) < 1e-12);
  for (double x : {1.0, 1.5, 2.7}) {
    for (double y : {1.1, 2.2}) {
      const cplx lhs = k.m_zw(x, y, z, w);
      const cplx rhs = k.m0(x, y) - (w - z) * k.b1(x, w) * k.b2(y, z);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
  CHECK_THROWS_AS(k.m_zw(1.0, 1.0, cplx(0.5, 0.0), w), DomainError);
  const SideKernel r(q, Side::right);
  const cplx zr(0.5, 0.2), wr(0.3, -0.4);
  CHECK(std::abs(r.m_zw(1.2, 1.9, zr, zr) - r.m0(1.2, 1.9)) < 1e-12);
  // The hatted family carries the opposite orientation.
  CHECK(std::abs(r.m_zw(1.2, 1.9, zr, wr) - (r.m0(1.2, 1.9) + (wr - zr) * r.b1(1.2, wr) * r.b2(1.9, zr))) < 1e-10);
}

TEST_CASE("B through the line integral of G b1") {
  const EvalPoint pt{0.3, 0.1, 0.5, -0.2};
  for (const ModelParams& p : {desk(), desk2()}) {
    for (Side side : {Side::left, Side::right}) {
      const SideKernel k(p, side);
      const std::vector<double> xs{1.0, 1.6, 2.5};
      const Eigen::VectorXd direct = k.script_b(xs, pt) + k.small_beta(xs, pt);
      const Eigen::VectorXd line = k.g_b1_integral(xs, pt);
      for (Eigen::Index i = 0; i < direct.size(); ++i) CHECK(rel(line[i], direct[i]) < 1e-8);
    }
  }
}

TEST_CASE("dual evaluation paths and the rank-one identity") {
  const EvalPoint pt{0.4, 0.2, 0.6, -0.1};
  const SideKernel k(desk(), Side::left);
  CHECK(rel(k.l_part_line(pt), k.l_part(pt)) < 1e-7);
  const auto sides = k.rank_one_identity(pt);
  CHECK(sides.relative_gap() < 1e-8);
  const SideKernel kr(desk(), Side::right);
  CHECK(rel(kr.l_part_line(pt), kr.l_part(pt)) < 1e-7);
  CHECK(kr.rank_one_identity(pt).relative_gap() < 1e-8);
}

TEST_CASE("frozen kernel values") {
  // One path per group: the two-particle transition formula is exact.
  const EvalPoint pt{0.4, 0.2, 0.6, -0.1};
  CHECK(std::abs(kernel_limit(pt, desk()) - kernel_direct(pt, {-1.0, 1.0}, {-1.0, 1.0})) < 1e-11);
  CHECK(std::abs(kernel_limit(pt, desk()) - (-0.511494574487)) < 1e-10);
  const EvalPoint back{0.6, 0.3, 0.4, -0.2};
  CHECK(std::abs(kernel_limit(back, desk()) - kernel_direct(back, {-1.0, 1.0}, {-1.0, 1.0})) < 1e-11);
  // Regression value for two paths per group.
  CHECK(std::abs(kernel_limit({0.3, 0.1, 0.5, -0.2}, desk2()) - (-0.256243425825)) < 1e-10);
}

TEST_CASE("reflection symmetry") {
  const EvalPoint pt{0.35, 0.15, 0.55, -0.25};
  const ModelParams p = make(2, 1, -1.5, 1.5, {-2.0, -0.5, 1.2});
  const ModelParams hat = make(1, 2, -1.5, 1.5, {-1.2, 0.5, 2.0});
  const EvalPoint mirrored{pt.s, -pt.u, pt.t, -pt.v};
  CHECK(rel(l_part(pt, p, Side::right), l_part(mirrored, hat, Side::left)) < 1e-8);
  CHECK(rel(l_part(pt, p, Side::left), l_part(mirrored, hat, Side::right)) < 1e-8);
  // Symmetric endpoints: the hatted part is the mirrored unhatted one.
  const ModelParams s = symmetric_params(2, 3.0);
  CHECK(rel(l_part(pt, s, Side::right), l_part(mirrored, s, Side::left)) < 1e-8);
}

TEST_CASE("single bridge density") {
  const ModelParams p = make(1, 0, -1.0, 1.0, {-0.5});
  const LimitKernel k(p);
  for (double t : {0.2, 0.5, 0.8}) {
    const double mean = -1.0 + 0.5 * t;
    const double var = t * (1.0 - t);
    for (double x : {-1.5, -0.8, 0.0}) {
      const double g = std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
      CHECK(std::abs(equal_time_density(t, x, k) - g) < 1e-10);
    }
  }
}

TEST_CASE("density conservation and positivity on the desk instance") {
  const LimitKernel k(desk());
  const double h = 0.1;
  double mass = 0.0;
  for (double x = -6.0; x <= 6.0 + 1e-9; x += h) {
    const double d = equal_time_density(0.5, x, k);
    CHECK(d >= -1e-12);
    mass += (std::abs(std::abs(x) - 6.0) < 1e-9 ? 0.5 : 1.0) * h * d;
  }
  CHECK(std::abs(mass - 2.0) < 1e-4);
}

TEST_CASE("far tails stay accurate") {
  // Strong exponential growth on the contours; the density must come out tiny, not garbage.
  const LimitKernel k(make(2, 1, -1.5, 1.5, {-2.0, -0.5, 1.2}));
  for (double x : {-8.0, -6.5, 7.0}) {
    const double d = equal_time_density(0.8, x, k);
    CHECK(std::abs(d) < 1e-10);
  }
  const LimitKernel k3(make(1, 2, -0.5, 1.0, {-1.0, 0.5, 2.0}));
  CHECK(std::abs(equal_time_density(0.5, 5.6, k3)) < 1e-8);
  CHECK(std::abs(equal_time_density(0.8, -8.0, k3)) < 1e-10);
}

TEST_CASE("conjugation neutrality of correlation determinants") {
  ModelParams a = desk2();
  ModelParams b = desk2();
  b.d1 = 2.0;
  b.d2 = 0.5;
  const LimitKernel ka(a), kb(b);
  const std::vector<std::pair<double, double>> pts{{0.3, -0.5}, {0.5, 0.4}, {0.7, 1.1}};
  Eigen::Matrix3d ma, mb;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const EvalPoint e{pts[i].first, pts[i].second, pts[j].first, pts[j].second};
      ma(i, j) = ka(e);
      mb(i, j) = kb(e);
    }
  }
  CHECK(std::abs(ma.determinant() - mb.determinant()) < 1e-12);
  CHECK(std::abs(ka.side(Side::left).l_part({0.3, 0.1, 0.6, 0.2}) / kb.side(Side::left).l_part({0.3, 0.1, 0.6, 0.2}) -
                 1.0) < 1e-12);
}

TEST_CASE("contour radius invariance") {
  const EvalPoint pt{0.3, 0.1, 0.5, -0.2};
  const double base = kernel_limit(pt, desk2());
  for (double scale : {0.7, 1.3}) {
    FiniteOptions o;
    o.radius_scale = scale;
    CHECK(rel(kernel_limit(pt, desk2(), o), base) < 1e-8);
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(kernel_limit({0.3, 0.0, 0.0, 0.0}, desk()), DomainError);
  CHECK_THROWS_AS(kernel_limit({1.2, 0.0, 0.5, 0.0}, desk()), DomainError);
  ModelParams bad = desk();
  bad.nu = {0.5, 1.0};
  CHECK_THROWS_AS(kernel_limit({0.3, 0.0, 0.5, 0.0}, bad), DomainError);
}
