#pragma once

#include <Eigen/Dense>
#include <vector>

#include "taclab/model.hpp"
#include "taclab/quadrature.hpp"
#include "taclab/specfun.hpp"

namespace taclab {

// n paths from -a/2 to -a/2 and n paths from a/2 to a/2.
ModelParams symmetric_params(int n, double a);

// (1/2 pi i) int_{Re w = 0} (w+1)^n exp(A w^2 - 2 B w) dw, A > 0.
ScaledValue hermite_line_integral(int n, double A, double B);
// (1/2 pi i) int_{|z+1| < 1} exp(-A z^2 + 2 B z) (z+1)^{-n} dz, A >= 0, n >= 1.
ScaledValue hermite_pole_integral(int n, double A, double B);

struct SymOptions {
  int grid_nodes = kDefaultHalfLineNodes;
  int panel_order = 16;
  double cut_ratio = 1e-18;  // relative size at which Laguerre tails are dropped
};

// The symmetric-case kernel through Hermite and Laguerre representations.
class SymmetricKernel {
 public:
  SymmetricKernel(int n, double a, const SymOptions& opt = {});

  int n() const { return n_; }
  double a() const { return a_; }
  const HalfLineGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& m0_grid() const { return m0_; }
  double det_i_minus_m0() const { return det_; }

  // M0 from the lambda-integral of Laguerre products.
  double m0(double x, double y) const;
  // M0 from the double contour integral over two circles around 1.
  double m0_contour(double x, double y, int nodes = 256) const;

  Eigen::VectorXd script_b(const std::vector<double>& xs, const EvalPoint& pt, double d2 = 1.0) const;
  Eigen::VectorXd small_beta(const std::vector<double>& xs, const EvalPoint& pt, double d2 = 1.0) const;
  Eigen::VectorXd script_c(const std::vector<double>& ys, const EvalPoint& pt, double d1 = 1.0) const;

  // Leading double integral, as a lambda-integral of Hermite functions and by contour quadrature.
  double first_term(const EvalPoint& pt, double d1 = 1.0, double d2 = 1.0) const;
  double first_term_contour(const EvalPoint& pt, double d1 = 1.0, double d2 = 1.0) const;

  // d1 d2 L_n(s, u, t, v).
  double l_part(const EvalPoint& pt, double d1 = 1.0, double d2 = 1.0) const;
  // L_n(s, u, t, v) + L_n(s, -u, t, -v) - q.
  double operator()(const EvalPoint& pt) const;

 private:
  double lag(double X) const;  // l_{n-1}(X) exp(-X/2)
  void check_log(double log_value, const char* what, double x) const;

  int n_;
  double a_;
  SymOptions opt_;
  double x_cut_ = 0.0;  // Laguerre argument beyond which the weighted polynomial is negligible
  std::vector<double> lam_;
  std::vector<double> lam_w_;
  HalfLineGrid grid_;
  Eigen::MatrixXd lag_grid_;  // lag(a^2 x_i + 2 lambda_k)
  Eigen::MatrixXd m0_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double det_ = 1.0;
};

double sym_eval(const EvalPoint& pt, int n, double a);

}  // namespace taclab
