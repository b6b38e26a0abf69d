#pragma once

#include <Eigen/Dense>
#include <functional>

#include "taclab/quadrature.hpp"

namespace taclab {

using RealKernel = std::function<double(double, double)>;
using RealFunction = std::function<double(double)>;

struct IntegralOperator {
  RealKernel kernel;
  double left_endpoint = 0.0;
  double decay_hint = 1.0;
};

struct FredholmResult {
  double value = 0.0;
  int grid_size = 0;
  double richardson_estimate = 0.0;  // |det on this grid - det on a coarser grid|
};

// Kernel values K(x_i, x_j) on the grid nodes.
Eigen::MatrixXd kernel_matrix(const RealKernel& k, const HalfLineGrid& grid);

// sqrt(w_i) K_ij sqrt(w_j); similar to the weighted Nystrom matrix, so determinants agree.
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& values, const HalfLineGrid& grid);

// det(I - K) from kernel values on a grid.
double det_i_minus(const Eigen::MatrixXd& values, const HalfLineGrid& grid);
cplx det_i_minus(const Eigen::MatrixXcd& values, const HalfLineGrid& grid);

FredholmResult det_nystrom(const IntegralOperator& op, const HalfLineGrid& grid);

// det(I - M + phi (x) psi), with (phi (x) psi)(x, y) = phi(x) psi(y).
double det_rank_one_perturbed(const IntegralOperator& op, const RealFunction& phi, const RealFunction& psi,
                              const HalfLineGrid& grid);

// det(I - M + phi (x) psi) / det(I - M) - 1 = <psi, (I - M)^{-1} phi>, from values on the grid.
double rank_one_ratio_minus_one(const Eigen::MatrixXd& m_values, const Eigen::VectorXd& phi,
                                const Eigen::VectorXd& psi, const HalfLineGrid& grid);
cplx rank_one_ratio_minus_one(const Eigen::MatrixXcd& m_values, const Eigen::VectorXcd& phi,
                              const Eigen::VectorXcd& psi, const HalfLineGrid& grid);

inline constexpr double kResolventGuard = 1e-8;

// R = (I - K)^{-1} K sampled at (x_i, x_j). Throws NumericalError when |det(I - K)| < 1e-8.
Eigen::MatrixXd resolvent(const IntegralOperator& op, const HalfLineGrid& grid);
Eigen::MatrixXd resolvent_from_values(const Eigen::MatrixXd& values, const HalfLineGrid& grid);

// max |R - K - K R| over the grid, composition by quadrature.
double resolvent_residual(const Eigen::MatrixXd& k_values, const Eigen::MatrixXd& r_values,
                          const HalfLineGrid& grid);

// Truncated Fredholm series sum_{m <= max_order} (-1)^m / m! int det(K(x_i, x_j)) d^m x,
// with the m-fold integrals obtained from trace integrals of K^k.
double fredholm_series_det(const IntegralOperator& op, const HalfLineGrid& grid, int max_order);
double fredholm_series_from_values(const Eigen::MatrixXd& values, const HalfLineGrid& grid, int max_order);

// Count of singular values above rel_tol * largest.
int numerical_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

}  // namespace taclab
