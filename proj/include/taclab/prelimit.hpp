#pragma once

#include <limits>
#include <map>
#include <vector>

#include "taclab/model.hpp"
#include "taclab/quadrature.hpp"

namespace taclab {

// Finitely supported Laurent series sum_k c_k zeta^k.
struct LaurentSymbol {
  std::map<int, cplx> coefficients;

  cplx coefficient(int k) const;
  static LaurentSymbol constant(cplx c);
  // prod_j (1 + x_j zeta) * prod_j (1 + y_j / zeta)
  static LaurentSymbol from_factors(const std::vector<cplx>& plus, const std::vector<cplx>& minus);
  LaurentSymbol operator*(const LaurentSymbol& o) const;
};

// e_0..e_N of x, the coefficients of prod (1 + x_j zeta).
std::vector<cplx> elementary_symmetric(const std::vector<cplx>& x);

inline constexpr int kMaxToeplitzSize = 512;

// D_K[f] = det(f_{j-i})_{K x K}.
cplx toeplitz_det(const LaurentSymbol& symbol, int K);

// s_{<K^m>}(x) as a K x K Toeplitz determinant; x has n + m entries, the last m non-zero.
cplx schur_rect(int K, int m, const std::vector<cplx>& x);
// Same value from the bialternant formula; falls back to schur_rect for coincident x.
cplx schur_bialternant(int K, int m, const std::vector<cplx>& x);

struct GcboSides {
  cplx lhs;  // D_K[phi]
  cplx rhs;  // e^Z det(I - K) on l^2({K, ..., K + truncation - 1})
  double relative_gap() const;
};

// Laurent symbol g_K of the model.
LaurentSymbol g_symbol(const ModelParams& p);

// Both sides of the GCBO identity for phi = (1 + alpha zeta) / (1 + beta zeta) g_K,
// alpha = e^{a w / K}, beta = e^{a z / K}; requires Re z < 0 and Re w < 0.
GcboSides gcbo_check(const ModelParams& p, cplx z, cplx w, int truncation = 60);

// e^Z of the GCBO identity for the symbol above.
cplx gcbo_ez(const ModelParams& p, cplx z, cplx w);

// F_K(w, k) for 1 <= k <= n + m (k is 1-based) as a ratio of Toeplitz determinants.
cplx f_k(cplx w, int k, const ModelParams& p);
// Same ratio for k <= n evaluated through the GCBO right-hand sides.
cplx f_k_gcbo(cplx w, int k, const ModelParams& p, int truncation = 60);

struct PrelimitOptions {
  int line_nodes = 256;
  // Real parts of the vertical lines for the left and right sums; NaN selects b1/2 and b2/2.
  double c_left = std::numeric_limits<double>::quiet_NaN();
  double c_right = std::numeric_limits<double>::quiet_NaN();
};

// The finite-K kernel assembled from Toeplitz determinant ratios, conjugated by exp(u^2/2(1-s) - v^2/2(1-t)).
double kernel_at_K(const EvalPoint& pt, const ModelParams& p, const PrelimitOptions& opt = {});

// Starting points of the finite-K model.
std::vector<double> prelimit_starts(const ModelParams& p);

// The same kernel from the N x N transition-matrix formula with the same conjugation.
double kernel_direct(const EvalPoint& pt, const std::vector<double>& mu, const std::vector<double>& nu);

}  // namespace taclab
