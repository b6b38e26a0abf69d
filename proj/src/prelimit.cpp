#include "taclab/prelimit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "taclab/error.hpp"
#include "taclab/parallel.hpp"

namespace taclab {

namespace {

using Series = std::vector<cplx>;

// Power series coefficients of num / prod_j (1 + x_j zeta), truncated to length len.
Series divide_series(Series num, const std::vector<cplx>& x, std::size_t len) {
  num.resize(len, cplx(0.0));
  for (const cplx& xj : x) {
    for (std::size_t k = 1; k < len; ++k) num[k] -= xj * num[k - 1];
  }
  return num;
}

Series poly_from_roots(const std::vector<cplx>& x) { return elementary_symmetric(x); }

double max_abs(const std::vector<cplx>& v) {
  double r = 0.0;
  for (const auto& z : v) r = std::max(r, std::abs(z));
  return r;
}

std::vector<cplx> left_gammas(const ModelParams& p) {
  std::vector<cplx> g;
  for (int j = 0; j < p.n; ++j) g.emplace_back(std::exp(p.a() * p.nu[j] / p.K));
  return g;
}

std::vector<cplx> right_deltas(const ModelParams& p) {
  std::vector<cplx> d;
  for (int j = 0; j < p.m; ++j) d.emplace_back(std::exp(-p.a() * p.nu[p.n + j] / p.K));
  return d;
}

void require_prelimit(const ModelParams& p) {
  p.validate();
  if (p.K < 1) throw DomainError("prelimit: K must be >= 1");
  if (p.K > kMaxToeplitzSize) throw DomainError("prelimit: K above the Toeplitz size guard 512");
}

// Checks that circle radii obeying the GCBO annulus conditions exist.
void check_radii(const ModelParams& p, cplx z, cplx w) {
  const double aK = p.a() / p.K;
  double s1_max = std::exp(-aK * w.real());
  for (int i = 0; i < p.n; ++i) s1_max = std::min(s1_max, std::exp(-aK * p.nu[i]));
  double s2_min = 0.0;
  for (int j = 0; j < p.m; ++j) s2_min = std::max(s2_min, std::exp(-aK * p.nu[p.n + j]));
  const double s2_max = std::min(s1_max, std::exp(-aK * z.real()));
  if (!(s2_min < s2_max)) {
    throw DomainError(
        "gcbo: no radii with exp(-a nu_{n+j}/K) < s2 < min(s1, exp(-a Re z/K)), "
        "s1 < min(exp(-a Re w/K), exp(-a nu_i/K))");
  }
}

// det(I - K) for the GCBO operator on {K, ..., K + T - 1}.
cplx gcbo_fredholm(const ModelParams& p, cplx alpha, cplx beta, int truncation) {
  const std::vector<cplx> gam = left_gammas(p);
  const std::vector<cplx> del = right_deltas(p);
  double rho = std::max(std::abs(alpha), std::abs(beta));
  rho = std::max({rho, max_abs(gam), max_abs(del)});
  if (!(rho < 1.0)) throw DomainError("gcbo: symbol parameters must lie inside the unit disk");
  const int tail = static_cast<int>(std::ceil(48.0 / -std::log(rho))) + 4;
  const std::size_t len = static_cast<std::size_t>(p.K + truncation + 2 * tail + p.m + 2);

  // 1/phi_+ = (1 + beta zeta) / ((1 + alpha zeta) prod (1 + gamma_i zeta))
  std::vector<cplx> den = gam;
  den.push_back(alpha);
  const Series inv_plus = divide_series({cplx(1.0), beta}, den, len);
  // phi_+ = (1 + alpha zeta) prod (1 + gamma_i zeta) / (1 + beta zeta)
  std::vector<cplx> num_roots = gam;
  num_roots.push_back(alpha);
  const Series plus = divide_series(poly_from_roots(num_roots), {beta}, len);
  // phi_- = prod (1 + delta_j / zeta): coefficients at zeta^{-l}
  const Series minus = poly_from_roots(del);
  // 1/phi_-: coefficients at zeta^{-l}
  const Series inv_minus = divide_series({cplx(1.0)}, del, len);

  // A_r = (phi_-/phi_+)_r for r > 0
  const std::size_t max_index = static_cast<std::size_t>(p.K + truncation + tail);
  std::vector<cplx> A(max_index + 1, cplx(0.0));
  for (std::size_t r = 1; r <= max_index; ++r) {
    cplx acc = 0.0;
    for (std::size_t l = 0; l < minus.size(); ++l) {
      if (r + l < len) acc += minus[l] * inv_plus[r + l];
    }
    A[r] = acc;
  }
  // B_q = (phi_+/phi_-)_{-q} for q > 0
  std::vector<cplx> B(max_index + 1, cplx(0.0));
  for (std::size_t q = 1; q <= max_index; ++q) {
    cplx acc = 0.0;
    for (std::size_t k = 0; q + k < len; ++k) acc += plus[k] * inv_minus[q + k];
    B[q] = acc;
  }
  const int T = truncation;
  Eigen::MatrixXcd op(T, T);
  for (int i = 0; i < T; ++i) {
    for (int j = 0; j < T; ++j) {
      const std::size_t r = static_cast<std::size_t>(p.K + i);
      const std::size_t s = static_cast<std::size_t>(p.K + j);
      cplx acc = 0.0;
      for (std::size_t l = 1; r + l <= max_index && s + l <= max_index; ++l) acc += A[r + l] * B[l + s];
      op(i, j) = acc;
    }
  }
  return (Eigen::MatrixXcd::Identity(T, T) - op).partialPivLu().determinant();
}

cplx ez_from(const ModelParams& p, cplx alpha, cplx beta) {
  const std::vector<cplx> gam = left_gammas(p);
  const std::vector<cplx> del = right_deltas(p);
  cplx ez = 1.0;
  for (const cplx& d : del) {
    ez *= (1.0 - beta * d) / (1.0 - alpha * d);
    for (const cplx& g : gam) ez /= (1.0 - g * d);
  }
  return ez;
}

// Laurent polynomial prod (1 + x zeta) prod (1 + y / zeta) without the factors at the given indices.
LaurentSymbol ratio_symbol_left(const ModelParams& p, cplx alpha, int k) {
  std::vector<cplx> plus{alpha};
  const auto gam = left_gammas(p);
  for (int j = 0; j < p.n; ++j) {
    if (j != k) plus.push_back(gam[j]);
  }
  return LaurentSymbol::from_factors(plus, right_deltas(p));
}

LaurentSymbol ratio_symbol_right(const ModelParams& p, cplx alpha_inv, int k) {
  // (1 + e^{-aw/K} zeta)/(1 + e^{-a nu_k/K} zeta) g_K(1/zeta)
  std::vector<cplx> plus{alpha_inv};
  const auto del = right_deltas(p);
  for (int j = 0; j < p.m; ++j) {
    if (j != k) plus.push_back(del[j]);
  }
  return LaurentSymbol::from_factors(plus, left_gammas(p));
}

}  // namespace

cplx LaurentSymbol::coefficient(int k) const {
  const auto it = coefficients.find(k);
  return it == coefficients.end() ? cplx(0.0) : it->second;
}

LaurentSymbol LaurentSymbol::constant(cplx c) {
  LaurentSymbol s;
  s.coefficients[0] = c;
  return s;
}

LaurentSymbol LaurentSymbol::operator*(const LaurentSymbol& o) const {
  LaurentSymbol r;
  for (const auto& [i, a] : coefficients) {
    for (const auto& [j, b] : o.coefficients) r.coefficients[i + j] += a * b;
  }
  return r;
}

LaurentSymbol LaurentSymbol::from_factors(const std::vector<cplx>& plus, const std::vector<cplx>& minus) {
  LaurentSymbol s;
  const std::vector<cplx> ep = elementary_symmetric(plus);
  const std::vector<cplx> em = elementary_symmetric(minus);
  for (std::size_t i = 0; i < ep.size(); ++i) {
    for (std::size_t j = 0; j < em.size(); ++j) {
      s.coefficients[static_cast<int>(i) - static_cast<int>(j)] += ep[i] * em[j];
    }
  }
  return s;
}

std::vector<cplx> elementary_symmetric(const std::vector<cplx>& x) {
  std::vector<cplx> e{cplx(1.0)};
  for (const cplx& xj : x) {
    e.push_back(cplx(0.0));
    for (std::size_t r = e.size() - 1; r >= 1; --r) e[r] += xj * e[r - 1];
  }
  return e;
}

cplx toeplitz_det(const LaurentSymbol& symbol, int K) {
  if (K < 1) throw DomainError("toeplitz_det: K must be >= 1");
  if (K > kMaxToeplitzSize) throw DomainError("toeplitz_det: K above the size guard 512");
  Eigen::MatrixXcd t(K, K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) t(i, j) = symbol.coefficient(j - i);
  }
  return t.partialPivLu().determinant();
}

cplx schur_rect(int K, int m, const std::vector<cplx>& x) {
  const int N = static_cast<int>(x.size());
  if (m < 0 || m > N) throw DomainError("schur_rect: need 0 <= m <= len(x)");
  if (m == 0) return 1.0;
  const int n = N - m;
  std::vector<cplx> plus(x.begin(), x.begin() + n);
  std::vector<cplx> minus;
  cplx pref = 1.0;
  for (int j = n; j < N; ++j) {
    if (x[j] == cplx(0.0)) throw DomainError("schur_rect: last m variables must be non-zero");
    pref *= x[j];
    minus.push_back(1.0 / x[j]);
  }
  // The constant factor sits inside the symbol, so it enters as pref^K.
  return std::pow(pref, K) * toeplitz_det(LaurentSymbol::from_factors(plus, minus), K);
}

cplx schur_bialternant(int K, int m, const std::vector<cplx>& x) {
  const int N = static_cast<int>(x.size());
  if (m < 0 || m > N) throw DomainError("schur_bialternant: need 0 <= m <= len(x)");
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      if (std::abs(x[i] - x[j]) < 1e-12 * (1.0 + std::abs(x[i]))) return schur_rect(K, m, x);
    }
  }
  Eigen::MatrixXcd num(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const int lambda = j < m ? K : 0;
      num(i, j) = std::pow(x[i], lambda + N - 1 - j);
    }
  }
  cplx vandermonde = 1.0;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) vandermonde *= x[i] - x[j];
  }
  return num.partialPivLu().determinant() / vandermonde;
}

double GcboSides::relative_gap() const { return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300); }

LaurentSymbol g_symbol(const ModelParams& p) {
  return LaurentSymbol::from_factors(left_gammas(p), right_deltas(p));
}

cplx gcbo_ez(const ModelParams& p, cplx z, cplx w) {
  require_prelimit(p);
  return ez_from(p, std::exp(p.a() * w / static_cast<double>(p.K)), std::exp(p.a() * z / static_cast<double>(p.K)));
}

GcboSides gcbo_check(const ModelParams& p, cplx z, cplx w, int truncation) {
  require_prelimit(p);
  if (!(z.real() < 0.0) || !(w.real() < 0.0)) throw DomainError("gcbo: need Re z < 0 and Re w < 0");
  if (truncation < 1) throw DomainError("gcbo: truncation must be positive");
  check_radii(p, z, w);
  const cplx alpha = std::exp(p.a() * w / static_cast<double>(p.K));
  const cplx beta = std::exp(p.a() * z / static_cast<double>(p.K));
  // Fourier coefficients of phi with |j| < K, exact up to the series length.
  const std::vector<cplx> gam = left_gammas(p);
  const std::vector<cplx> del = right_deltas(p);
  std::vector<cplx> roots = gam;
  roots.push_back(alpha);
  const std::size_t len = static_cast<std::size_t>(p.K + p.m + 1);
  const Series plus = divide_series(poly_from_roots(roots), {beta}, len);
  const Series minus = poly_from_roots(del);
  Eigen::MatrixXcd t(p.K, p.K);
  for (int i = 0; i < p.K; ++i) {
    for (int j = 0; j < p.K; ++j) {
      const int k = j - i;
      cplx acc = 0.0;
      for (std::size_t l = 0; l < minus.size(); ++l) {
        const int idx = k + static_cast<int>(l);
        if (idx >= 0 && static_cast<std::size_t>(idx) < len) acc += plus[idx] * minus[l];
      }
      t(i, j) = acc;
    }
  }
  GcboSides sides;
  sides.lhs = t.partialPivLu().determinant();
  sides.rhs = ez_from(p, alpha, beta) * gcbo_fredholm(p, alpha, beta, truncation);
  return sides;
}

cplx f_k(cplx w, int k, const ModelParams& p) {
  require_prelimit(p);
  if (k < 1 || k > p.N()) throw DomainError("f_k: k out of range");
  const double K = p.K;
  const cplx base = toeplitz_det(g_symbol(p), p.K);
  if (k <= p.n) {
    return toeplitz_det(ratio_symbol_left(p, std::exp(p.a() * w / K), k - 1), p.K) / base;
  }
  return toeplitz_det(ratio_symbol_right(p, std::exp(-p.a() * w / K), k - 1 - p.n), p.K) / base;
}

cplx f_k_gcbo(cplx w, int k, const ModelParams& p, int truncation) {
  require_prelimit(p);
  if (k < 1 || k > p.n) throw DomainError("f_k_gcbo: k must index the left group");
  const cplx z = p.nu[k - 1];
  const GcboSides num = gcbo_check(p, z, w, truncation);
  const GcboSides den = gcbo_check(p, w, w, truncation);
  return num.rhs / den.rhs;
}

std::vector<double> prelimit_starts(const ModelParams& p) {
  std::vector<double> mu(p.N());
  for (int j = 1; j <= p.N(); ++j) {
    mu[j - 1] = (j <= p.n ? p.a1 : p.a2) + p.a() * (j - 1) / static_cast<double>(p.K);
  }
  return mu;
}

double kernel_direct(const EvalPoint& pt, const std::vector<double>& mu, const std::vector<double>& nu) {
  pt.validate();
  const int N = static_cast<int>(mu.size());
  if (static_cast<int>(nu.size()) != N) throw DomainError("kernel_direct: mu and nu sizes differ");
  Eigen::MatrixXd A(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) A(i, j) = heat_kernel(1.0, mu[i], nu[j]);
  }
  Eigen::VectorXd left(N), right(N);
  for (int k = 0; k < N; ++k) left[k] = heat_kernel(1.0 - pt.s, pt.u, nu[k]);
  for (int j = 0; j < N; ++j) right[j] = heat_kernel(pt.t, mu[j], pt.v);
  // sum_{j,k} left_k (A^{-1})_{kj} right_j
  const Eigen::VectorXd sol = A.partialPivLu().solve(right);
  const double sum = left.dot(sol);
  const double raw = -heat_kernel(pt.t - pt.s, pt.u, pt.v) + sum;
  return std::exp(pt.u * pt.u / (2.0 * (1.0 - pt.s)) - pt.v * pt.v / (2.0 * (1.0 - pt.t))) * raw;
}

double kernel_at_K(const EvalPoint& pt, const ModelParams& p, const PrelimitOptions& opt) {
  require_prelimit(p);
  pt.validate();
  if (p.K < p.N()) throw DomainError("kernel_at_K: need K >= n + m");
  if (!p.distinct_endpoints()) throw DomainError("kernel_at_K: endpoints must be distinct at finite K");
  if (!(pt.t > 0.0)) throw DomainError("kernel_at_K: t must be positive for the vertical-line integral");
  const double s = pt.s, t = pt.t, u = pt.u, v = pt.v;
  const double K = p.K;
  const double aK = p.a() / K;
  const double coef = t / (2.0 * (1.0 - t));
  const double half = gaussian_halfwidth(coef);
  const cplx base = toeplitz_det(g_symbol(p), p.K);

  std::vector<double> ex(p.N());
  for (int j = 0; j < p.N(); ++j) ex[j] = std::exp(aK * p.nu[j]);

  auto side_integral = [&](bool left, double c) {
    const ContourRule rule = discretize(ContourSpec::vertical_line(c, half, opt.line_nodes));
    const double ai = left ? p.a1 : p.a2;
    const int k0 = left ? 0 : p.n;
    const int k1 = left ? p.n : p.N();
    std::vector<cplx> vals(rule.size());
    parallel_for(rule.size(), [&](std::size_t q) {
      const cplx w = rule.points[q];
      const cplx ew = std::exp(aK * w);
      cplx acc = 0.0;
      for (int k = k0; k < k1; ++k) {
        const double nk = p.nu[k];
        const double pref = std::exp(-s / (2.0 * (1.0 - s)) * nk * nk - ai * nk + u * nk / (1.0 - s));
        const cplx dk = left ? toeplitz_det(ratio_symbol_left(p, ew, k), p.K)
                             : toeplitz_det(ratio_symbol_right(p, 1.0 / ew, k - p.n), p.K);
        cplx prod = 1.0;
        for (int j = 0; j < p.N(); ++j) {
          if (j != k) prod *= (ew - ex[j]) / (ex[k] - ex[j]);
        }
        acc += pref * (dk / base) * prod;
      }
      vals[q] = std::exp(coef * w * w + ai * w - v * w / (1.0 - t)) * acc;
    });
    cplx sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      if (!std::isfinite(vals[q].real()) || !std::isfinite(vals[q].imag())) {
        throw NumericalError("kernel_at_K: integrand not finite on the vertical line");
      }
      sum += rule.weights[q] * vals[q];
    }
    return sum;
  };

  cplx total = 0.0;
  if (p.n > 0) total += side_integral(true, std::isnan(opt.c_left) ? 0.5 * p.b1() : opt.c_left);
  if (p.m > 0) total += side_integral(false, std::isnan(opt.c_right) ? 0.5 * p.b2() : opt.c_right);
  total /= std::sqrt((1.0 - s) * (1.0 - t));
  if (std::abs(total.imag()) > 1e-6 * std::max(1.0, std::abs(total.real()))) {
    throw NumericalError("kernel_at_K: imaginary residue above 1e-6, quadrature misconfigured");
  }
  return total.real() - q_weight(pt);
}

}  // namespace taclab
