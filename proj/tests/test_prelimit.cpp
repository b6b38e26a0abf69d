#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "taclab/error.hpp"
#include "taclab/finite_kernel.hpp"
#include "taclab/prelimit.hpp"

using namespace taclab;

namespace {

ModelParams desk(int K) {
  ModelParams p;
  p.n = 1;
  p.m = 1;
  p.a1 = -1.0;
  p.a2 = 1.0;
  p.nu = {-1.0, 1.0};
  p.K = K;
  return p;
}

// (1 + c zeta) / (1 + d zeta) expanded on |zeta| = 1.
LaurentSymbol ratio_series(cplx c, cplx d, int terms) {
  LaurentSymbol s;
  if (std::abs(d) < 1.0) {
    s.coefficients[0] = 1.0;
    cplx pw = 1.0;
    for (int j = 0; j < terms; ++j) {
      s.coefficients[j + 1] = (c - d) * pw;
      pw *= -d;
    }
  } else {
    const cplx pre = c / d;
    s.coefficients[0] = pre;
    cplx pw = 1.0;
    for (int j = 0; j < terms; ++j) {
      s.coefficients[-(j + 1)] = pre * (1.0 / c - 1.0 / d) * pw;
      pw *= -1.0 / d;
    }
  }
  return s;
}

std::vector<cplx> xs(const ModelParams& p) {
  std::vector<cplx> x;
  for (double nu : p.nu) x.emplace_back(std::exp(p.a() * nu / p.K));
  return x;
}

}  // namespace

TEST_CASE("elementary symmetric polynomials") {
  auto e = elementary_symmetric({1.0, 1.0});
  REQUIRE(e.size() == 3);
  CHECK(std::abs(e[0] - 1.0) + std::abs(e[1] - 2.0) + std::abs(e[2] - 1.0) < 1e-15);
  CHECK(elementary_symmetric({}).size() == 1);
  e = elementary_symmetric({2.0, 3.0});
  CHECK(std::abs(e[1] - 5.0) + std::abs(e[2] - 6.0) < 1e-15);
}

TEST_CASE("rectangular Schur polynomials") {
  CHECK(std::abs(schur_rect(2, 1, {1.0, 1.0}) - 3.0) < 1e-12);
  CHECK(std::abs(schur_rect(4, 0, {0.3, 2.0}) - 1.0) < 1e-14);
  const cplx t = schur_rect(3, 2, {2.0, 1.0, 0.5});
  const cplx b = schur_bialternant(3, 2, {2.0, 1.0, 0.5});
  CHECK(std::abs(t - b) / std::abs(b) < 1e-9);
  // Coincident arguments fall back to the Toeplitz path.
  CHECK(std::abs(schur_bialternant(2, 1, {1.0, 1.0}) - 3.0) < 1e-12);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int N = 2 + trial % 4;
    const int m = 1 + trial % (N - 1);
    const int K = 1 + trial % 8;
    std::vector<cplx> x;
    for (int j = 0; j < N; ++j) x.emplace_back(u(rng), 0.3 * (u(rng) - 1.0));
    const cplx a = schur_rect(K, m, x);
    const cplx c = schur_bialternant(K, m, x);
    CHECK(std::abs(a - c) / std::abs(c) < 1e-9);
  }
}

TEST_CASE("Toeplitz determinants") {
  CHECK(std::abs(toeplitz_det(LaurentSymbol::constant(1.0), 7) - 1.0) < 1e-14);
  const double e1 = std::exp(-1.0);
  CHECK(std::abs(toeplitz_det(LaurentSymbol::from_factors({e1}, {e1}), 1) - (1.0 + e1 * e1)) < 1e-14);
  const double c = 0.3, d = 0.2;
  CHECK(std::abs(toeplitz_det(LaurentSymbol::from_factors({c}, {d}), 2) - 1.0636) < 1e-14);
  CHECK_THROWS_AS(toeplitz_det(LaurentSymbol::constant(1.0), kMaxToeplitzSize + 1), DomainError);
}

TEST_CASE("GCBO identity") {
  ModelParams p = desk(2);
  p.a1 = -1.0;
  p.a2 = 1.0;
  CHECK(gcbo_check(p, -0.5, -0.5, 60).relative_gap() < 1e-10);
  // w = z gives the symbol g_K itself.
  const GcboSides same = gcbo_check(p, cplx(-0.4, 0.3), cplx(-0.4, 0.3), 60);
  CHECK(std::abs(same.lhs - toeplitz_det(g_symbol(p), p.K)) < 1e-12);
  CHECK(same.relative_gap() < 1e-10);
  // Doubling the truncation changes nothing.
  const GcboSides g60 = gcbo_check(desk(6), cplx(-0.3, 0.2), cplx(-0.7, -0.4), 60);
  const GcboSides g120 = gcbo_check(desk(6), cplx(-0.3, 0.2), cplx(-0.7, -0.4), 120);
  CHECK(std::abs(g60.rhs - g120.rhs) / std::abs(g60.rhs) < 1e-12);
  CHECK_THROWS_AS(gcbo_check(p, 0.5, -0.5, 60), DomainError);
}

TEST_CASE("symbol reflection identity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    ModelParams p;
    p.n = 1 + trial % 3;
    p.m = 1 + (trial / 3) % 3;
    p.a1 = -0.5 - u(rng);
    p.a2 = 0.5 + u(rng);
    p.K = 3 + trial % 6;
    for (int j = 0; j < p.n; ++j) p.nu.push_back(-0.2 - 1.5 * u(rng));
    for (int j = 0; j < p.m; ++j) p.nu.push_back(0.2 + 1.5 * u(rng));
    std::sort(p.nu.begin(), p.nu.begin() + p.n);
    std::sort(p.nu.begin() + p.n, p.nu.end());
    const double aK = p.a() / p.K;
    const cplx w(-2.0 * u(rng), 2.0 * (u(rng) - 0.5));
    const int k = trial % p.N();
    std::vector<cplx> plus, minus, plus_r, minus_r;
    for (int j = 0; j < p.n; ++j) {
      plus.emplace_back(std::exp(aK * p.nu[j]));
      minus_r.emplace_back(std::exp(aK * p.nu[j]));
    }
    for (int j = p.n; j < p.N(); ++j) {
      minus.emplace_back(std::exp(-aK * p.nu[j]));
      plus_r.emplace_back(std::exp(-aK * p.nu[j]));
    }
    const LaurentSymbol g = LaurentSymbol::from_factors(plus, minus);
    const LaurentSymbol g_inv = LaurentSymbol::from_factors(plus_r, minus_r);
    const int terms = p.K + p.N() + 400;
    const cplx lhs = toeplitz_det(ratio_series(std::exp(aK * w), std::exp(aK * p.nu[k]), terms) * g, p.K);
    const cplx rhs = std::exp(p.a() * (w - p.nu[k])) *
                     toeplitz_det(ratio_series(std::exp(-aK * w), std::exp(-aK * p.nu[k]), terms) * g_inv, p.K);
    CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-10);
  }
}

TEST_CASE("F_K ratios and bounds") {
  ModelParams p = desk(2);
  CHECK(std::abs(f_k(-1.0, 1, p) - 1.0) < 1e-13);
  const cplx direct = f_k(-0.5, 1, p);
  CHECK(std::abs(direct - f_k_gcbo(-0.5, 1, p)) / std::abs(direct) < 1e-10);
  CHECK_THROWS_AS(f_k(-0.5, 3, p), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ModelParams q;
  q.n = 2;
  q.m = 2;
  q.a1 = -1.0;
  q.a2 = 1.5;
  q.nu = {-1.3, -0.4, 0.6, 1.1};
  q.K = 12;
  for (int i = 0; i < 100; ++i) {
    const cplx w(2.0 * u(rng), 3.0 * u(rng));
    const int k = 1 + i % q.N();
    const double env = std::exp((k <= q.n ? 1.0 : 2.0) * q.a() * (std::abs(w.real()) + std::abs(q.nu[k - 1])));
    CHECK(std::abs(f_k(w, k, q)) <= env * (1.0 + 1e-12));
  }
}

TEST_CASE("Schur perturbation bound and product ratio estimate") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ModelParams q;
  q.n = 2;
  q.m = 1;
  q.a1 = -0.7;
  q.a2 = 1.2;
  q.nu = {-1.1, -0.3, 0.8};
  std::vector<double> sup_ratio;
  for (int K : {10, 20, 40}) {
    q.K = K;
    const auto x = xs(q);
    const cplx s0 = schur_rect(K, q.m, x);
    double sup = 0.0;
    std::mt19937_64 local(21);
    for (int i = 0; i < 60; ++i) {
      const cplx w(1.5 * u(local), 2.0 * u(local));
      const int k = i % q.N();
      auto xk = x;
      xk[k] = std::exp(q.a() * w / double(K));
      CHECK(std::abs(schur_rect(K, q.m, xk)) <= std::exp(q.a() * (std::abs(w.real()) + std::abs(q.nu[k]))) *
                                                     std::abs(s0) * (1.0 + 1e-10));
      cplx prod = 1.0;
      double bound = 1.0;
      for (int j = 0; j < q.N(); ++j) {
        if (j == k) continue;
        prod *= (std::exp(q.a() * w / double(K)) - x[j]) / (x[k] - x[j]);
        bound *= std::abs(w - q.nu[j]) * std::exp(q.a() * std::abs(w.real()));
      }
      sup = std::max(sup, std::abs(prod) / bound);
    }
    sup_ratio.push_back(sup);
  }
  // A K-independent constant exists: the suprema stay bounded as K grows.
  for (double s : sup_ratio) CHECK(s <= 2.0 * sup_ratio.front());
  (void)rng;
}

TEST_CASE("finite-K kernel") {
  const EvalPoint pt{0.4, 0.2, 0.6, -0.1};
  ModelParams p = desk(10);
  const double k10 = kernel_at_K(pt, p);
  CHECK(std::abs(k10 - kernel_direct(pt, prelimit_starts(p), p.nu)) < 1e-9);

  // The line abscissa is free inside the admissible strips.
  PrelimitOptions shifted;
  shifted.c_left = -0.25;
  shifted.c_right = 0.3;
  CHECK(std::abs(kernel_at_K(pt, p, shifted) - k10) < 1e-9);

  // For t <= s the heat term is absent, and the kernel still matches the direct formula.
  const EvalPoint back{0.6, 0.3, 0.4, -0.2};
  CHECK(q_weight(back) == 0.0);
  CHECK(std::abs(kernel_at_K(back, p) - kernel_direct(back, prelimit_starts(p), p.nu)) < 1e-9);

  // Convergence toward the K = infinity kernel.
  const double lim = kernel_limit(pt, p);
  const double e40 = std::abs(kernel_at_K(pt, desk(40)) - lim);
  const double e80 = std::abs(kernel_at_K(pt, desk(80)) - lim);
  CHECK(e80 < e40);
  CHECK_THROWS_AS(kernel_at_K(pt, desk(0)), DomainError);
}
