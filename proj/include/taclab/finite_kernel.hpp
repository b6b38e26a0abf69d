#pragma once

#include <Eigen/Dense>
#include <vector>

#include "taclab/model.hpp"
#include "taclab/quadrature.hpp"

namespace taclab {

// left: the group started at a1 (unhatted formulas); right: the group started at a2.
enum class Side { left, right };

struct FiniteOptions {
  int circle_nodes = 256;
  int line_nodes = 256;  // lower bound; lines close to a circle get extra panels
  int grid_nodes = kDefaultHalfLineNodes;
  int check_grid_nodes = 256;  // x-grid of the line-integrated evaluation path
  double radius_scale = 1.0;
};

enum class M0Method { contour, residue };

// Precomputed contours, Nystrom grid and M0 for one side of the limit kernel.
class SideKernel {
 public:
  SideKernel(const ModelParams& params, Side side, const FiniteOptions& opt = {});

  Side side() const { return side_; }
  // False when the side's group is empty; every quantity of the side then vanishes.
  bool active() const { return active_; }
  // False when the opposite group is empty: M0, C and the Fredholm correction vanish.
  bool coupled() const { return coupled_; }
  const ModelParams& params() const { return p_; }
  const HalfLineGrid& grid() const { return grid_; }
  const ContourSpec& own_contour() const { return own_spec_; }
  const ContourSpec& other_contour() const { return other_spec_; }

  double m0(double x, double y) const;
  double m0_residue(double x, double y) const;
  Eigen::MatrixXd m0_matrix(const std::vector<double>& xs, const std::vector<double>& ys) const;
  const Eigen::MatrixXd& m0_grid() const { return m0_grid_; }
  double det_i_minus_m0() const { return det_; }

  cplx m_zw(double x, double y, cplx z, cplx w) const;
  cplx b1(double x, cplx w) const;
  cplx b2(double y, cplx z) const;

  Eigen::VectorXd script_b(const std::vector<double>& xs, const EvalPoint& pt) const;
  Eigen::VectorXd small_beta(const std::vector<double>& xs, const EvalPoint& pt) const;
  Eigen::VectorXd script_c(const std::vector<double>& ys, const EvalPoint& pt) const;
  // int G(w) b1^w(x) dw over a vertical line between the own circle and the imaginary axis.
  Eigen::VectorXd g_b1_integral(const std::vector<double>& xs, const EvalPoint& pt) const;

  // d1 d2 times the double contour integral of the kernel's leading term.
  double first_term(const EvalPoint& pt) const;
  // d1 d2 L via the Fredholm rank-one formula.
  double l_part(const EvalPoint& pt) const;
  // d1 d2 L via the w-line integral of the (z, w)-dependent determinant ratio.
  double l_part_line(const EvalPoint& pt) const;

  struct RankOneSides {
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_gap() const;
  };
  // Both sides of the identity trading the (z, w) integral of det(I - M0 + (w - z) b1 (x) b2) for
  // a single rank-one determinant, each divided by d1 d2.
  RankOneSides rank_one_identity(const EvalPoint& pt) const;

 private:
  cplx Q(cplx z) const;
  cplx P(cplx w) const;
  cplx R(cplx w) const;
  double a_own() const { return side_ == Side::left ? p_.a1 : p_.a2; }
  // Small circles around clusters of the own endpoints and the w-line through the Gaussian saddle,
  // both adapted to the exponential growth at pt.
  struct PointContours {
    ContourRule own;
    ContourRule line;
  };
  PointContours point_contours(const EvalPoint& pt) const;
  ContourSpec line_at(double c, double t, double dist) const;
  ContourSpec line_near_circle(double c, double t) const;
  double check_line_position() const;
  std::vector<cplx> w_transform(const EvalPoint& pt, const PointContours& pc) const;
  std::vector<cplx> z_transform(const EvalPoint& pt, const PointContours& pc) const;
  Eigen::VectorXd to_grid(const std::vector<double>& a) const;

  ModelParams p_;
  Side side_;
  FiniteOptions opt_;
  bool active_ = false;
  bool coupled_ = false;
  double sgn_ = 1.0;
  double a_ = 0.0;
  std::vector<double> own_;
  std::vector<double> other_;
  ContourSpec own_spec_;
  ContourSpec other_spec_;
  ContourRule own_rule_;
  ContourRule other_rule_;
  std::vector<cplx> q_own_;
  std::vector<cplx> qinv_other_;
  HalfLineGrid grid_;
  Eigen::MatrixXd m0_grid_;
  Eigen::MatrixXd lu_input_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double det_ = 1.0;
};

double m0_eval(double x, double y, const ModelParams& p, Side side, M0Method method = M0Method::contour,
               const FiniteOptions& opt = {});
cplx m_zw_eval(double x, double y, cplx z, cplx w, const ModelParams& p, Side side, const FiniteOptions& opt = {});

double script_b(double x, const EvalPoint& pt, const ModelParams& p, Side side, const FiniteOptions& opt = {});
double small_beta(double x, const EvalPoint& pt, const ModelParams& p, Side side, const FiniteOptions& opt = {});
double script_c(double y, const EvalPoint& pt, const ModelParams& p, Side side, const FiniteOptions& opt = {});

enum class LMethod { fredholm, line };

double l_part(const EvalPoint& pt, const ModelParams& p, Side side, LMethod method = LMethod::fredholm,
              const FiniteOptions& opt = {});

// The two-starting-point kernel L + L^ - q, independent of d1, d2.
class LimitKernel {
 public:
  explicit LimitKernel(const ModelParams& params, const FiniteOptions& opt = {});
  double operator()(const EvalPoint& pt) const;
  double left(const EvalPoint& pt) const;
  double right(const EvalPoint& pt) const;
  const SideKernel& side(Side s) const { return s == Side::left ? left_ : right_; }

 private:
  SideKernel left_;
  SideKernel right_;
};

double kernel_limit(const EvalPoint& pt, const ModelParams& p, const FiniteOptions& opt = {});

// One-point density kernel_limit(t, x, t, x).
double equal_time_density(double t, double x, const LimitKernel& k);

}  // namespace taclab
