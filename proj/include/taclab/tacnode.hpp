#pragma once

#include <Eigen/Dense>

#include "taclab/model.hpp"
#include "taclab/quadrature.hpp"

namespace taclab {

struct TacnodeCoords {
  double sigma = 0.0;
  double tau1 = 0.0;
  double xi1 = 0.0;
  double tau2 = 0.0;
  double xi2 = 0.0;

  double sigma_tilde() const;
};

// The finite-n point and conjugation factors matching tacnode coordinates.
struct ScalingChoice {
  int n = 0;
  double a = 0.0;
  EvalPoint point;
  double d1 = 1.0;
  double d2 = 1.0;
  double d1_hat = 1.0;  // factors for the mirrored half, xi -> -xi
  double d2_hat = 1.0;

  static ScalingChoice make(int n, const TacnodeCoords& c);
};

double airy_kernel(double x, double y);
double tw_f2(double s, int nodes = 128);

double cap_b(double xi, double tau, double x);
double small_b(double xi, double tau, double x);
double a_tilde(double tau1, double xi1, double tau2, double xi2);
// Requires tau1 < tau2.
double heat_p(double tau1, double xi1, double tau2, double xi2, double sigma);

// Airy-kernel operator on [sigma_tilde, inf) and the tacnode kernel built on it.
class TacnodeKernel {
 public:
  explicit TacnodeKernel(double sigma, int nodes = 128);

  double sigma() const { return sigma_; }
  double sigma_tilde() const { return st_; }
  double f2() const { return f2_; }
  const HalfLineGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& airy_grid() const { return kai_; }
  // Ai(x_i + x_j - sigma_tilde)
  const Eigen::MatrixXd& t_grid() const { return t_; }
  Eigen::MatrixXd resolvent_grid() const;
  // sum_{r=1}^{terms} T^{2r} as kernel values.
  Eigen::MatrixXd resolvent_series(int terms) const;

  // B_{xi + sigma, tau} on the grid, integrated against T.
  Eigen::VectorXd b_on_grid(double xi, double tau) const;

  double l_tac(double tau1, double xi1, double tau2, double xi2) const;
  double l_tac_resolvent(double tau1, double xi1, double tau2, double xi2) const;
  double operator()(double tau1, double xi1, double tau2, double xi2) const;

 private:
  Eigen::VectorXd s_on_grid(double xi, double tau) const;
  Eigen::VectorXd small_b_on_grid(double xi, double tau) const;

  double sigma_;
  double st_;
  HalfLineGrid grid_;
  Eigen::VectorXd w_;
  Eigen::MatrixXd kai_;
  Eigen::MatrixXd t_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double f2_ = 0.0;
};

double l_tac(const TacnodeCoords& c);
double l_tac_resolvent(const TacnodeCoords& c);
double ext_tacnode(const TacnodeCoords& c);

// d1 d2 times the finite-n symmetric kernel at the scaled point.
double finite_n_tacnode(int n, const TacnodeCoords& c);

// Scaled finite-n building blocks next to their Airy limits at x, y >= 0.
struct EdgeComparison {
  double b = 0.0, b_limit = 0.0;
  double beta = 0.0, beta_limit = 0.0;
  double c = 0.0, c_limit = 0.0;
  double m0 = 0.0, m0_limit = 0.0;
};
EdgeComparison edge_comparison(int n, const TacnodeCoords& c, double x, double y);

}  // namespace taclab
