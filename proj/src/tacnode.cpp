#include "taclab/tacnode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "taclab/error.hpp"
#include "taclab/fredholm.hpp"
#include "taclab/parallel.hpp"
#include "taclab/specfun.hpp"
#include "taclab/symmetric.hpp"

namespace taclab {

namespace {

const double kCbrt2 = std::cbrt(2.0);
const double k2to16 = std::pow(2.0, 1.0 / 6.0);
const double k2to23 = std::pow(2.0, 2.0 / 3.0);

// int_0^inf f(lambda) d lambda for integrands with super-exponential Airy decay past `hint`.
template <class F>
double airy_tail_integral(const F& f, double hint) {
  static const GaussRule gl = gauss_legendre(16);
  constexpr double width = 1.0;
  constexpr int max_panels = 400;
  double total = 0.0;
  double peak = 0.0;
  for (int p = 0; p < max_panels; ++p) {
    const double lo = p * width;
    double panel = 0.0;
    double panel_max = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double lam = lo + 0.5 * width * (gl.nodes[k] + 1.0);
      const double val = f(lam);
      panel += 0.5 * width * gl.weights[k] * val;
      panel_max = std::max(panel_max, std::abs(val));
    }
    if (!std::isfinite(panel)) throw NumericalError("tacnode: non-finite Airy integrand");
    total += panel;
    peak = std::max(peak, panel_max);
    if (lo + width > hint && panel_max <= 1e-18 * peak) return total;
  }
  throw NumericalError("tacnode: Airy tail integral did not converge");
}

// Past this point the integrand Ai(c + lambda) has started its decay.
double decay_start(double c) { return std::max(1.0, -c + 1.0); }

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "tacnode: " << what << " is not finite";
    throw NumericalError(os.str());
  }
}

}  // namespace

double TacnodeCoords::sigma_tilde() const { return k2to23 * sigma; }

ScalingChoice ScalingChoice::make(int n, const TacnodeCoords& c) {
  if (n < 1) throw DomainError("ScalingChoice: n must be positive");
  const double nd = n;
  const double n13 = std::cbrt(nd);
  const double n16 = std::sqrt(n13);
  ScalingChoice sc;
  sc.n = n;
  sc.a = 2.0 * std::sqrt(nd) + c.sigma / n16;
  sc.point.s = 0.5 * (1.0 + c.tau1 / n13);
  sc.point.t = 0.5 * (1.0 + c.tau2 / n13);
  sc.point.u = 0.5 * c.xi1 / n16;
  sc.point.v = 0.5 * c.xi2 / n16;
  sc.point.validate();
  const double pre = std::pow(nd, -1.0 / 12.0) / std::sqrt(2.0);
  auto d1 = [&](double xi) {
    return pre * std::exp(c.tau1 * (c.sigma + xi) + 2.0 * c.tau1 * c.tau1 * c.tau1 / 3.0);
  };
  auto d2 = [&](double xi) {
    return pre * std::exp(-c.tau2 * (c.sigma + xi) - 2.0 * c.tau2 * c.tau2 * c.tau2 / 3.0);
  };
  sc.d1 = d1(c.xi1);
  sc.d2 = d2(c.xi2);
  sc.d1_hat = d1(-c.xi1);
  sc.d2_hat = d2(-c.xi2);
  return sc;
}

double airy_kernel(double x, double y) {
  const double d = x - y;
  if (std::abs(d) < 1e-3) {
    // Even expansion around the midpoint; the odd terms cancel by symmetry.
    const double m = 0.5 * (x + y);
    const double e = 0.5 * d;
    const double ai = airy_ai(m);
    const double aip = airy_ai_prime(m);
    const double diag = aip * aip - m * ai * ai;
    const double j = -(m * aip * aip - m * m * ai * ai + 2.0 * ai * aip) / 3.0;
    return diag + e * e * (-ai * aip - 2.0 * j);
  }
  return (airy_ai(x) * airy_ai_prime(y) - airy_ai_prime(x) * airy_ai(y)) / d;
}

namespace {

Eigen::MatrixXd airy_kernel_matrix(const HalfLineGrid& g) {
  const std::size_t n = g.size();
  Eigen::VectorXd ai(n), aip(n);
  for (std::size_t i = 0; i < n; ++i) {
    ai[i] = airy_ai(g.nodes[i]);
    aip[i] = airy_ai_prime(g.nodes[i]);
  }
  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double d = g.nodes[i] - g.nodes[j];
      const double v = std::abs(d) < 1e-3 ? airy_kernel(g.nodes[i], g.nodes[j])
                                          : (ai[i] * aip[j] - aip[i] * ai[j]) / d;
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

}  // namespace

double tw_f2(double s, int nodes) {
  const HalfLineGrid g = halfline_grid(s, 1.0, nodes);
  return det_i_minus(airy_kernel_matrix(g), g);
}

double cap_b(double xi, double tau, double x) {
  const double c = xi + tau * tau;
  auto f = [&](double lam) {
    return std::exp(kCbrt2 * lam * tau) * airy_ai(c + kCbrt2 * lam) * airy_ai(x + lam);
  };
  const double v = k2to16 * airy_tail_integral(f, std::max(decay_start(c) / kCbrt2, decay_start(x)));
  check_finite(v, "B");
  return v;
}

double small_b(double xi, double tau, double x) {
  const double v = k2to16 * std::exp(-2.0 * tau * xi + kCbrt2 * tau * x) * airy_ai(-xi + tau * tau + kCbrt2 * x);
  check_finite(v, "b");
  return v;
}

double a_tilde(double tau1, double xi1, double tau2, double xi2) {
  if (tau1 == tau2) return airy_kernel(xi1, xi2);
  const double dt = tau2 - tau1;
  auto f = [&](double lam) { return std::exp(lam * dt) * airy_ai(xi1 + lam) * airy_ai(xi2 + lam); };
  const double v = airy_tail_integral(f, std::max(decay_start(xi1), decay_start(xi2)));
  check_finite(v, "A~");
  return v;
}

double heat_p(double tau1, double xi1, double tau2, double xi2, double sigma) {
  if (!(tau1 < tau2)) throw DomainError("heat_p: requires tau1 < tau2");
  const double dt = tau2 - tau1;
  const double dx = xi1 - xi2;
  const double expo = -dx * dx / (4.0 * dt) + tau1 * (xi1 + sigma) - tau2 * (xi2 + sigma) -
                      2.0 * tau2 * tau2 * tau2 / 3.0 + 2.0 * tau1 * tau1 * tau1 / 3.0;
  return std::exp(expo) / std::sqrt(4.0 * std::numbers::pi * dt);
}

TacnodeKernel::TacnodeKernel(double sigma, int nodes)
    : sigma_(sigma), st_(k2to23 * sigma), grid_(halfline_grid(st_, 1.0, nodes)) {
  const std::size_t n = grid_.size();
  w_ = Eigen::Map<const Eigen::VectorXd>(grid_.weights.data(), static_cast<Eigen::Index>(n));
  kai_ = airy_kernel_matrix(grid_);
  t_.resize(n, n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) t_(i, j) = airy_ai(grid_.nodes[i] + grid_.nodes[j] - st_);
  });
  const Eigen::VectorXd sw = w_.cwiseSqrt();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - sw.asDiagonal() * kai_ * sw.asDiagonal();
  lu_.compute(a);
  f2_ = lu_.determinant();
  if (!(f2_ >= kResolventGuard)) {
    std::ostringstream os;
    os << "tacnode: F2(" << st_ << ") = " << f2_ << " is below the guard " << kResolventGuard;
    throw NumericalError(os.str());
  }
}

Eigen::MatrixXd TacnodeKernel::resolvent_grid() const { return resolvent_from_values(kai_, grid_); }

Eigen::MatrixXd TacnodeKernel::resolvent_series(int terms) const {
  // Work with the weighted operator W^{1/2} T W^{1/2}, then unweight.
  const Eigen::VectorXd sw = w_.cwiseSqrt();
  const Eigen::MatrixXd ts = sw.asDiagonal() * t_ * sw.asDiagonal();
  const Eigen::MatrixXd t2 = ts * ts;
  Eigen::MatrixXd power = t2;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(ts.rows(), ts.cols());
  for (int r = 1; r <= terms; ++r) {
    sum += power;
    power = power * t2;
  }
  const Eigen::VectorXd isw = sw.cwiseInverse();
  return isw.asDiagonal() * sum * isw.asDiagonal();
}

Eigen::VectorXd TacnodeKernel::s_on_grid(double xi, double tau) const {
  const std::size_t n = grid_.size();
  Eigen::VectorXd s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid_.nodes[i];
    s[i] = k2to16 * std::exp(-2.0 * sigma_ * tau + kCbrt2 * tau * x) * airy_ai(xi + tau * tau - sigma_ + kCbrt2 * x);
  }
  return s;
}

Eigen::VectorXd TacnodeKernel::small_b_on_grid(double xi, double tau) const {
  const std::size_t n = grid_.size();
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = small_b(xi + sigma_, tau, grid_.nodes[i]);
  return b;
}

Eigen::VectorXd TacnodeKernel::b_on_grid(double xi, double tau) const {
  return t_ * w_.asDiagonal() * s_on_grid(xi, tau);
}

double TacnodeKernel::l_tac(double tau1, double xi1, double tau2, double xi2) const {
  const Eigen::VectorXd phi = b_on_grid(xi2, tau2) - small_b_on_grid(xi2, tau2);
  const Eigen::VectorXd psi = b_on_grid(xi1, -tau1);
  const Eigen::VectorXd sw = w_.cwiseSqrt();
  const std::size_t n = grid_.size();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - sw.asDiagonal() * kai_ * sw.asDiagonal() +
                            sw.cwiseProduct(phi) * sw.cwiseProduct(psi).transpose();
  const double ratio = a.partialPivLu().determinant() / f2_;
  const double at = a_tilde(tau1, xi1 + tau1 * tau1 + sigma_, tau2, xi2 + tau2 * tau2 + sigma_);
  const double v = at - 1.0 + ratio;
  check_finite(v, "L_tac");
  return v;
}

double TacnodeKernel::l_tac_resolvent(double tau1, double xi1, double tau2, double xi2) const {
  const Eigen::MatrixXd r = resolvent_grid();
  const Eigen::VectorXd s2 = s_on_grid(xi2, tau2);
  const Eigen::VectorXd s1 = s_on_grid(xi1, -tau1);
  const Eigen::VectorXd st2 = small_b_on_grid(xi2, tau2);
  const Eigen::VectorXd ws1 = w_.cwiseProduct(s1);
  const Eigen::VectorXd ts1 = t_ * ws1;  // T S1 as a function on the grid
  const Eigen::VectorXd w = w_;
  const double term_r = s2.cwiseProduct(w).dot(r * ws1);
  const double term_t = st2.cwiseProduct(w).dot(ts1);
  const double term_rt = st2.cwiseProduct(w).dot(r * w.cwiseProduct(ts1));
  const double at = a_tilde(tau1, xi1 + tau1 * tau1 + sigma_, tau2, xi2 + tau2 * tau2 + sigma_);
  const double v = at + term_r - term_t - term_rt;
  check_finite(v, "L_tac");
  return v;
}

double TacnodeKernel::operator()(double tau1, double xi1, double tau2, double xi2) const {
  double v = l_tac(tau1, xi1, tau2, xi2) +
             std::exp(2.0 * tau1 * xi1 - 2.0 * tau2 * xi2) * l_tac(tau1, -xi1, tau2, -xi2);
  if (tau1 < tau2) v -= heat_p(tau1, xi1, tau2, xi2, sigma_);
  return v;
}

double l_tac(const TacnodeCoords& c) { return TacnodeKernel(c.sigma).l_tac(c.tau1, c.xi1, c.tau2, c.xi2); }

double l_tac_resolvent(const TacnodeCoords& c) {
  return TacnodeKernel(c.sigma).l_tac_resolvent(c.tau1, c.xi1, c.tau2, c.xi2);
}

double ext_tacnode(const TacnodeCoords& c) { return TacnodeKernel(c.sigma)(c.tau1, c.xi1, c.tau2, c.xi2); }

double finite_n_tacnode(int n, const TacnodeCoords& c) {
  const ScalingChoice sc = ScalingChoice::make(n, c);
  const SymmetricKernel sk(n, sc.a);
  EvalPoint mirrored = sc.point;
  mirrored.u = -mirrored.u;
  mirrored.v = -mirrored.v;
  const double v = sk.l_part(sc.point, sc.d1, sc.d2) +
                   std::exp(2.0 * c.tau1 * c.xi1 - 2.0 * c.tau2 * c.xi2) * sk.l_part(mirrored, sc.d1_hat, sc.d2_hat) -
                   sc.d1 * sc.d2 * q_weight(sc.point);
  check_finite(v, "finite-n tacnode value");
  return v;
}

EdgeComparison edge_comparison(int n, const TacnodeCoords& c, double x, double y) {
  const ScalingChoice sc = ScalingChoice::make(n, c);
  const SymmetricKernel sk(n, sc.a);
  const double n13 = std::cbrt(static_cast<double>(n));
  const double n23 = n13 * n13;
  const double xs = 1.0 + x / n23;
  const double ys = 1.0 + y / n23;
  const double st = c.sigma_tilde();
  const double bx = k2to23 * x + st;
  const double by = k2to23 * y + st;
  EdgeComparison e;
  e.b = sk.script_b({xs}, sc.point, sc.d2)[0] / n13;
  e.b_limit = -kCbrt2 * cap_b(c.xi2 + c.sigma, c.tau2, bx);
  e.beta = sk.small_beta({xs}, sc.point, sc.d2)[0] / n13;
  e.beta_limit = kCbrt2 * small_b(c.xi2 + c.sigma, c.tau2, bx);
  e.c = sk.script_c({ys}, sc.point, sc.d1)[0] / n13;
  e.c_limit = -kCbrt2 * cap_b(c.xi1 + c.sigma, -c.tau1, by);
  e.m0 = sk.m0(xs, ys) / n23;
  e.m0_limit = k2to23 * airy_kernel(bx, by);
  return e;
}

}  // namespace taclab
