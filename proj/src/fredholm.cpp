#include "taclab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "taclab/error.hpp"
#include "taclab/parallel.hpp"

namespace taclab {

namespace {

Eigen::VectorXd sqrt_weights(const HalfLineGrid& grid) {
  Eigen::VectorXd s(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) s[i] = std::sqrt(grid.weights[i]);
  return s;
}

template <class Matrix>
void check_matrix_finite(const Matrix& m) {
  if (!m.allFinite()) throw NumericalError("kernel matrix contains NaN or Inf entries");
}

}  // namespace

Eigen::MatrixXd kernel_matrix(const RealKernel& k, const HalfLineGrid& grid) {
  const std::size_t n = grid.size();
  Eigen::MatrixXd m(n, n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = k(grid.nodes[i], grid.nodes[j]);
  });
  return m;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& values, const HalfLineGrid& grid) {
  const Eigen::VectorXd s = sqrt_weights(grid);
  return s.asDiagonal() * values * s.asDiagonal();
}

double det_i_minus(const Eigen::MatrixXd& values, const HalfLineGrid& grid) {
  check_matrix_finite(values);
  const Eigen::MatrixXd a = symmetrized(values, grid);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  return (id - a).partialPivLu().determinant();
}

cplx det_i_minus(const Eigen::MatrixXcd& values, const HalfLineGrid& grid) {
  check_matrix_finite(values);
  const Eigen::VectorXcd s = sqrt_weights(grid).cast<cplx>();
  const Eigen::MatrixXcd a = s.asDiagonal() * values * s.asDiagonal();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  return (id - a).partialPivLu().determinant();
}

FredholmResult det_nystrom(const IntegralOperator& op, const HalfLineGrid& grid) {
  if (std::abs(grid.left_endpoint - op.left_endpoint) > 1e-12 * (1.0 + std::abs(op.left_endpoint))) {
    throw DomainError("det_nystrom: grid does not start at the operator's left endpoint");
  }
  FredholmResult res;
  res.grid_size = static_cast<int>(grid.size());
  res.value = det_i_minus(kernel_matrix(op.kernel, grid), grid);
  const int coarse_n = std::max(8, static_cast<int>(2 * grid.size() / 3));
  const HalfLineGrid coarse = halfline_grid(grid.left_endpoint, grid.decay_rate, coarse_n);
  const double coarse_value = det_i_minus(kernel_matrix(op.kernel, coarse), coarse);
  res.richardson_estimate = std::abs(res.value - coarse_value);
  return res;
}

double det_rank_one_perturbed(const IntegralOperator& op, const RealFunction& phi, const RealFunction& psi,
                              const HalfLineGrid& grid) {
  Eigen::MatrixXd m = kernel_matrix(op.kernel, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = phi(grid.nodes[i]);
    for (std::size_t j = 0; j < grid.size(); ++j) m(i, j) -= p * psi(grid.nodes[j]);
  }
  return det_i_minus(m, grid);
}

template <class Matrix, class Vector>
static typename Matrix::Scalar rank_one_impl(const Matrix& m_values, const Vector& phi, const Vector& psi,
                                             const HalfLineGrid& grid) {
  using S = typename Matrix::Scalar;
  check_matrix_finite(m_values);
  if (!phi.allFinite() || !psi.allFinite()) throw NumericalError("rank-one factors contain NaN or Inf");
  const Eigen::Matrix<S, Eigen::Dynamic, 1> s = sqrt_weights(grid).template cast<S>();
  const Matrix a = s.asDiagonal() * m_values * s.asDiagonal();
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Vector sphi = s.cwiseProduct(phi);
  const Vector spsi = s.cwiseProduct(psi);
  const Vector sol = (id - a).partialPivLu().solve(sphi);
  return spsi.cwiseProduct(sol).sum();
}

double rank_one_ratio_minus_one(const Eigen::MatrixXd& m_values, const Eigen::VectorXd& phi,
                                const Eigen::VectorXd& psi, const HalfLineGrid& grid) {
  return rank_one_impl(m_values, phi, psi, grid);
}

cplx rank_one_ratio_minus_one(const Eigen::MatrixXcd& m_values, const Eigen::VectorXcd& phi,
                              const Eigen::VectorXcd& psi, const HalfLineGrid& grid) {
  return rank_one_impl(m_values, phi, psi, grid);
}

Eigen::MatrixXd resolvent_from_values(const Eigen::MatrixXd& values, const HalfLineGrid& grid) {
  check_matrix_finite(values);
  const Eigen::MatrixXd a = symmetrized(values, grid);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const auto lu = (id - a).partialPivLu();
  const double det = lu.determinant();
  if (!(std::abs(det) >= kResolventGuard)) {
    std::ostringstream os;
    os << "resolvent: det(I-K) = " << det << " is below the singularity guard " << kResolventGuard;
    throw NumericalError(os.str());
  }
  const Eigen::MatrixXd rs = lu.solve(a);
  const Eigen::VectorXd inv_s = sqrt_weights(grid).cwiseInverse();
  return inv_s.asDiagonal() * rs * inv_s.asDiagonal();
}

Eigen::MatrixXd resolvent(const IntegralOperator& op, const HalfLineGrid& grid) {
  return resolvent_from_values(kernel_matrix(op.kernel, grid), grid);
}

double resolvent_residual(const Eigen::MatrixXd& k_values, const Eigen::MatrixXd& r_values,
                          const HalfLineGrid& grid) {
  Eigen::VectorXd w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) w[i] = grid.weights[i];
  const Eigen::MatrixXd kr = k_values * w.asDiagonal() * r_values;
  return (r_values - k_values - kr).cwiseAbs().maxCoeff();
}

double fredholm_series_from_values(const Eigen::MatrixXd& values, const HalfLineGrid& grid, int max_order) {
  if (max_order < 0 || max_order > 8) throw DomainError("fredholm_series_det: max_order must be in [0, 8]");
  check_matrix_finite(values);
  const Eigen::MatrixXd a = symmetrized(values, grid);
  // traces[k] = int K(x1,x2) K(x2,x3) ... K(xk,x1)
  std::vector<double> traces(max_order + 1, 0.0);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  for (int k = 1; k <= max_order; ++k) {
    power = power * a;
    traces[k] = power.trace();
  }
  // e[m] = (1/m!) int det(K(x_i, x_j))_{m x m}, via Newton's identities.
  std::vector<double> e(max_order + 1, 0.0);
  e[0] = 1.0;
  double det = 1.0;
  for (int m = 1; m <= max_order; ++m) {
    double acc = 0.0;
    for (int k = 1; k <= m; ++k) acc += ((k % 2 == 1) ? 1.0 : -1.0) * e[m - k] * traces[k];
    e[m] = acc / m;
    det += ((m % 2 == 1) ? -1.0 : 1.0) * e[m];
  }
  return det;
}

double fredholm_series_det(const IntegralOperator& op, const HalfLineGrid& grid, int max_order) {
  return fredholm_series_from_values(kernel_matrix(op.kernel, grid), grid, max_order);
}

int numerical_rank(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > rel_tol * sv[0]) ++r;
  }
  return r;
}

}  // namespace taclab
