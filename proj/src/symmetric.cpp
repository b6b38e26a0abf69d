#include "taclab/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "taclab/error.hpp"
#include "taclab/finite_kernel.hpp"
#include "taclab/fredholm.hpp"
#include "taclab/parallel.hpp"

namespace taclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogMax = 700.0;

ScaledValue times_log(ScaledValue v, double log_factor, int sign = 1) {
  v.sign *= sign;
  return v.scaled(log_factor);
}

}  // namespace

ModelParams symmetric_params(int n, double a) {
  if (n < 1) throw DomainError("symmetric model: n must be >= 1");
  if (!(a > 0.0)) throw DomainError("symmetric model: a must be positive");
  ModelParams p;
  p.n = n;
  p.m = n;
  p.a1 = -0.5 * a;
  p.a2 = 0.5 * a;
  p.nu.assign(static_cast<std::size_t>(n), -0.5 * a);
  p.nu.insert(p.nu.end(), static_cast<std::size_t>(n), 0.5 * a);
  return p;
}

ScaledValue hermite_line_integral(int n, double A, double B) {
  if (n < 0) throw DomainError("hermite_line_integral: negative degree");
  if (!(A > 0.0)) throw DomainError("hermite_line_integral: A must be positive");
  const double X = B / std::sqrt(A) + std::sqrt(A);
  const double log_pref = 0.5 * std::lgamma(n + 1.0) - 0.25 * std::log(kPi) - 0.5 * std::log(2.0) -
                          0.5 * (n + 1.0) * std::log(2.0 * A) - B * B / (2.0 * A) + B + 0.5 * A;
  return times_log(hermite_weighted(n, X), log_pref);
}

ScaledValue hermite_pole_integral(int n, double A, double B) {
  if (n < 1) throw DomainError("hermite_pole_integral: n must be >= 1");
  if (!(A >= 0.0)) throw DomainError("hermite_pole_integral: A must be non-negative");
  if (A == 0.0) {
    // Residue of exp(2Bz) (z+1)^{-n} at -1.
    if (n == 1) return ScaledValue::from_double(std::exp(-2.0 * B));
    const ScaledValue pw = ScaledValue::from_double(2.0 * B);
    if (pw.sign == 0) return pw;
    const int sign = (n - 1) % 2 == 0 ? 1 : pw.sign;
    return {sign, (n - 1) * pw.log_magnitude - std::lgamma(static_cast<double>(n)) - 2.0 * B};
  }
  const double X = B / std::sqrt(A) + std::sqrt(A);
  const double log_pref = 0.25 * std::log(kPi) + 0.5 * (n - 1.0) * std::log(2.0 * A) -
                          0.5 * std::lgamma(static_cast<double>(n)) + B * B / (2.0 * A) - B - 0.5 * A;
  return times_log(hermite_weighted(n - 1, X), log_pref);
}

SymmetricKernel::SymmetricKernel(int n, double a, const SymOptions& opt) : n_(n), a_(a), opt_(opt) {
  if (n < 1) throw DomainError("symmetric kernel: n must be >= 1");
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("symmetric kernel: a must be positive");
  if (opt_.grid_nodes < 8 || opt_.panel_order < 4) throw DomainError("symmetric kernel: node counts too small");
  if (!(opt_.cut_ratio > 0.0 && opt_.cut_ratio < 1e-6)) throw DomainError("symmetric kernel: cut ratio out of range");

  // Past max(a^2, 4n) the weighted Laguerre function decays monotonically; walk out to the cut.
  const double a2 = a_ * a_;
  const double scale = std::max(1.0, std::cbrt(static_cast<double>(n_)));
  const double step = 0.25 * scale;
  const double edge = std::max(a2, 4.0 * n_);
  double peak = 0.0;
  double X = a2;
  for (int it = 0;; ++it) {
    const double fx = std::abs(lag(X));
    peak = std::max(peak, fx);
    if (X > edge + step && fx < opt_.cut_ratio * peak) break;
    if (it > 10000000) throw NumericalError("symmetric kernel: Laguerre tail search did not terminate");
    X += step;
  }
  x_cut_ = X;

  const double lam_max = std::max(0.5 * (x_cut_ - a2), 0.5 * step);
  const double h = 0.5 * scale;
  const int panels = std::max(4, static_cast<int>(std::ceil(lam_max / h)));
  const GaussRule gl = gauss_legendre(opt_.panel_order);
  const double width = lam_max / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      lam_.push_back(mid + 0.5 * width * gl.nodes[j]);
      lam_w_.push_back(0.5 * width * gl.weights[j]);
    }
  }

  const double x_max = std::max(x_cut_ / a2, 1.0 + 1.0 / a2);
  grid_ = halfline_grid(1.0, 40.0 / (x_max - 1.0), opt_.grid_nodes);
  const auto g = static_cast<Eigen::Index>(grid_.size());
  const auto nl = static_cast<Eigen::Index>(lam_.size());
  lag_grid_.resize(g, nl);
  parallel_for(static_cast<std::size_t>(g), [&](std::size_t i) {
    for (Eigen::Index k = 0; k < nl; ++k) {
      lag_grid_(static_cast<Eigen::Index>(i), k) = lag(a2 * grid_.nodes[i] + 2.0 * lam_[k]);
    }
  });
  Eigen::VectorXd w(nl);
  for (Eigen::Index k = 0; k < nl; ++k) w[k] = lam_w_[k];
  m0_ = (2.0 * a2 * n_) * (lag_grid_ * w.asDiagonal() * lag_grid_.transpose());
  lu_ = (Eigen::MatrixXd::Identity(g, g) - symmetrized(m0_, grid_)).partialPivLu();
  det_ = lu_.determinant();
  if (!(det_ >= kResolventGuard)) {
    std::ostringstream os;
    os << "symmetric kernel: det(I - M0) = " << det_ << " is below the guard " << kResolventGuard << " (n=" << n_
       << ", a=" << a_ << ")";
    throw NumericalError(os.str());
  }
}

double SymmetricKernel::lag(double X) const { return laguerre1_weighted(n_ - 1, X).value(); }

void SymmetricKernel::check_log(double log_value, const char* what, double x) const {
  if (log_value > kLogMax || std::isnan(log_value)) {
    std::ostringstream os;
    os << "symmetric kernel: " << what << " overflows despite log scaling (n=" << n_ << ", x=" << x
       << ", log magnitude " << log_value << ")";
    throw NumericalError(os.str());
  }
}

double SymmetricKernel::m0(double x, double y) const {
  if (!(x >= 1.0) || !(y >= 1.0)) throw DomainError("symmetric m0: arguments must be >= 1");
  const double a2 = a_ * a_;
  double s = 0.0;
  for (std::size_t k = 0; k < lam_.size(); ++k) {
    s += lam_w_[k] * lag(a2 * x + 2.0 * lam_[k]) * lag(a2 * y + 2.0 * lam_[k]);
  }
  return 2.0 * a2 * n_ * s;
}

double SymmetricKernel::m0_contour(double x, double y, int nodes) const {
  auto radius = [&](double X) {
    const double ratio = 4.0 * n_ / X;
    return ratio < 1.0 ? std::min(0.9, 1.0 - std::sqrt(1.0 - ratio)) : 0.9;
  };
  const double a2 = a_ * a_;
  const ContourRule cz = discretize(ContourSpec::circle(cplx(1.0, 0.0), radius(a2 * x), nodes));
  const ContourRule cw = discretize(ContourSpec::circle(cplx(1.0, 0.0), radius(a2 * y), nodes));
  std::vector<cplx> fz(cz.size()), fw(cw.size());
  for (std::size_t k = 0; k < cz.size(); ++k) {
    const cplx z = cz.points[k];
    fz[k] = cz.weights[k] * std::exp(-0.5 * a2 * x * z) * std::pow((1.0 + z) / (1.0 - z), n_);
  }
  for (std::size_t k = 0; k < cw.size(); ++k) {
    const cplx w = cw.points[k];
    fw[k] = cw.weights[k] * std::exp(-0.5 * a2 * y * w) * std::pow((1.0 + w) / (1.0 - w), n_);
  }
  cplx s(0.0, 0.0);
  for (std::size_t k = 0; k < cz.size(); ++k) {
    for (std::size_t l = 0; l < cw.size(); ++l) s += fz[k] * fw[l] / (cz.points[k] + cw.points[l]);
  }
  return 0.5 * a2 * s.real();
}

namespace {

void require_times(const EvalPoint& pt) {
  pt.validate();
  if (!(pt.t > 0.0)) throw DomainError("symmetric kernel: the second time t must be positive");
}

}  // namespace

Eigen::VectorXd SymmetricKernel::script_b(const std::vector<double>& xs, const EvalPoint& pt, double d2) const {
  require_times(pt);
  const double a2 = a_ * a_;
  const double A = a2 * pt.t / (8.0 * (1.0 - pt.t));
  const double base = a2 / 8.0 + a_ * pt.v / (4.0 * (1.0 - pt.t));
  // a^{3/2} d2 / (2 sqrt(1-t)) times the -2 sqrt(n) of the Laguerre contour formula.
  const double log_pref = 1.5 * std::log(a_) + std::log(std::abs(d2)) - 0.5 * std::log(1.0 - pt.t) +
                          0.5 * std::log(static_cast<double>(n_));
  const int sign = d2 < 0.0 ? 1 : -1;
  std::vector<double> hl(lam_.size());
  for (std::size_t k = 0; k < lam_.size(); ++k) {
    const ScaledValue v = times_log(hermite_line_integral(n_, A, base + 0.5 * lam_[k]), log_pref, sign);
    check_log(v.log_magnitude, "script B", xs.empty() ? 0.0 : xs.front());
    hl[k] = lam_w_[k] * v.value();
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(xs.size()));
  parallel_for(xs.size(), [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t k = 0; k < lam_.size(); ++k) s += hl[k] * lag(a2 * xs[i] + 2.0 * lam_[k]);
    out[static_cast<Eigen::Index>(i)] = s;
  });
  return out;
}

Eigen::VectorXd SymmetricKernel::small_beta(const std::vector<double>& xs, const EvalPoint& pt, double d2) const {
  require_times(pt);
  const double a2 = a_ * a_;
  const double A = a2 * pt.t / (8.0 * (1.0 - pt.t));
  const double log_pref = 1.5 * std::log(a_) + std::log(std::abs(d2)) - std::log(2.0) - 0.5 * std::log(1.0 - pt.t);
  Eigen::VectorXd out(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double B = a2 * xs[i] / 4.0 - a2 / 8.0 - a_ * pt.v / (4.0 * (1.0 - pt.t));
    const ScaledValue v = times_log(hermite_line_integral(n_, A, B), log_pref, d2 < 0.0 ? -1 : 1);
    check_log(v.log_magnitude, "beta", xs[i]);
    out[static_cast<Eigen::Index>(i)] = v.value();
  }
  return out;
}

Eigen::VectorXd SymmetricKernel::script_c(const std::vector<double>& ys, const EvalPoint& pt, double d1) const {
  pt.validate();
  const double a2 = a_ * a_;
  const double A = a2 * pt.s / (8.0 * (1.0 - pt.s));
  const double base = a2 / 8.0 + a_ * pt.u / (4.0 * (1.0 - pt.s));
  const double log_pref = 1.5 * std::log(a_) + std::log(std::abs(d1)) - 0.5 * std::log(1.0 - pt.s) +
                          0.5 * std::log(static_cast<double>(n_));
  const int sign = d1 < 0.0 ? 1 : -1;
  std::vector<double> hp(lam_.size());
  for (std::size_t k = 0; k < lam_.size(); ++k) {
    const ScaledValue v = times_log(hermite_pole_integral(n_, A, base + 0.5 * lam_[k]), log_pref, sign);
    check_log(v.log_magnitude, "script C", ys.empty() ? 0.0 : ys.front());
    hp[k] = lam_w_[k] * v.value();
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(ys.size()));
  parallel_for(ys.size(), [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t k = 0; k < lam_.size(); ++k) s += hp[k] * lag(a2 * ys[i] + 2.0 * lam_[k]);
    out[static_cast<Eigen::Index>(i)] = s;
  });
  return out;
}

double SymmetricKernel::first_term(const EvalPoint& pt, double d1, double d2) const {
  require_times(pt);
  const double a2 = a_ * a_;
  const double At = a2 * pt.t / (8.0 * (1.0 - pt.t));
  const double As = a2 * pt.s / (8.0 * (1.0 - pt.s));
  const double bw = a2 / 8.0 + a_ * pt.v / (4.0 * (1.0 - pt.t));
  const double bz = a2 / 8.0 + a_ * pt.u / (4.0 * (1.0 - pt.s));
  const ScaledValue dd = ScaledValue::from_double(d1 * d2);
  if (dd.sign == 0) return 0.0;
  const double log_pref = dd.log_magnitude + std::log(a_ / 2.0) - 0.5 * std::log((1.0 - pt.s) * (1.0 - pt.t));

  // Panels until the integrand has fallen well below its running maximum on the decaying side.
  const GaussRule gl = gauss_legendre(opt_.panel_order);
  const double h = 0.5 * std::max(1.0, std::cbrt(static_cast<double>(n_)));
  double peak = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double prev_panel = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < 1000000; ++p) {
    double panel_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double lam = (p + 0.5 + 0.5 * gl.nodes[j]) * h;
      const ScaledValue v =
          (hermite_line_integral(n_, At, bw + 0.5 * lam) * hermite_pole_integral(n_, As, bz + 0.5 * lam))
              .scaled(log_pref);
      check_log(v.log_magnitude, "first term", lam);
      panel_max = std::max(panel_max, v.log_magnitude);
      sum += 0.5 * h * gl.weights[j] * v.value();
    }
    peak = std::max(peak, panel_max);
    if (panel_max < peak - 50.0 && panel_max < prev_panel) break;
    prev_panel = panel_max;
  }
  return dd.sign * sum;
}

double SymmetricKernel::first_term_contour(const EvalPoint& pt, double d1, double d2) const {
  ModelParams p = symmetric_params(n_, a_);
  p.d1 = d1;
  p.d2 = d2;
  return SideKernel(p, Side::left).first_term(pt);
}

double SymmetricKernel::l_part(const EvalPoint& pt, double d1, double d2) const {
  const double ft = first_term(pt, d1, d2);
  const Eigen::VectorXd phi = script_b(grid_.nodes, pt, d2) + small_beta(grid_.nodes, pt, d2);
  const Eigen::VectorXd psi = script_c(grid_.nodes, pt, d1);
  Eigen::VectorXd sw(static_cast<Eigen::Index>(grid_.size()));
  for (std::size_t i = 0; i < grid_.size(); ++i) sw[static_cast<Eigen::Index>(i)] = std::sqrt(grid_.weights[i]);
  const Eigen::VectorXd sol = lu_.solve(sw.cwiseProduct(phi));
  return ft + sw.cwiseProduct(psi).dot(sol);
}

double SymmetricKernel::operator()(const EvalPoint& pt) const {
  const EvalPoint mirrored{pt.s, -pt.u, pt.t, -pt.v};
  return l_part(pt) + l_part(mirrored) - q_weight(pt);
}

double sym_eval(const EvalPoint& pt, int n, double a) { return SymmetricKernel(n, a)(pt); }

}  // namespace taclab
