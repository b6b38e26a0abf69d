#include "taclab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "taclab/error.hpp"
#include "taclab/quadrature.hpp"

namespace taclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr double kSeriesRight = 4.5;
constexpr double kSeriesLeft = -8.0;
constexpr double kRescale = 1e100;

struct AiryPair {
  double ai;
  double aip;
};

AiryPair airy_series(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  long double f = 1.0L, g = x, fp = 0.0L, gp = 1.0L;
  long double tf = 1.0L, tg = x, tfp = 0.5L * x * x, tgp = 1.0L;
  fp = tfp;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    if (k >= 2) {
      tfp *= x3 / ((3.0L * k - 3.0L) * (3.0L * k - 1.0L));
      fp += tfp;
    }
    tgp *= x3 / ((3.0L * k) * (3.0L * k - 2.0L));
    f += tf;
    g += tg;
    gp += tgp;
    const long double tiny = 1e-24L;
    if (std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp) <
        tiny * (std::fabs(f) + std::fabs(g) + std::fabs(fp) + std::fabs(gp))) {
      break;
    }
  }
  return {static_cast<double>(kAi0 * f - kAip0 * g), static_cast<double>(kAi0 * fp - kAip0 * gp)};
}

// Steepest-descent integral through the saddle of exp(t^3/3 - x t), for large positive x.
const GaussRule& saddle_rule() {
  static const GaussRule rule = [] {
    constexpr int panels = 10;
    constexpr double span = 7.0;
    const GaussRule gl = gauss_legendre(16);
    GaussRule r;
    const double h = span / panels;
    for (int p = 0; p < panels; ++p) {
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        r.nodes.push_back(h * (p + 0.5 + 0.5 * gl.nodes[j]));
        r.weights.push_back(0.5 * h * gl.weights[j]);
      }
    }
    return r;
  }();
  return rule;
}

AiryPair airy_positive(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double q = std::pow(x, 0.25);
  const double sx = std::sqrt(x);
  const GaussRule& rule = saddle_rule();
  double ia = 0.0, ib = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double r = rule.nodes[k];
    const double s = r / q;
    const double phase = s * s * s / 3.0;
    const double g = std::exp(-r * r) * rule.weights[k];
    ia += g * std::cos(phase);
    ib += g * (sx * std::cos(phase) + s * std::sin(phase));
  }
  const double pref = std::exp(-zeta) / (kPi * q);
  return {pref * ia, -pref * ib};
}

AiryPair airy_negative_asymptotic(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  // u_k, v_k coefficients of the Airy asymptotic expansions.
  double u = 1.0;
  double p = 1.0, q = 0.0, r = 1.0, s = 0.0;
  double zk = 1.0;
  double prev = 1e300;
  for (int k = 1; k < 60; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    const double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    zk *= zeta;
    const double term = u / zk;
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    const int j = k / 2;
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sgn * u / zk;
      r += sgn * v / zk;
    } else {
      q += sgn * u / zk;
      s += sgn * v / zk;
    }
    if (prev < 1e-18) break;
  }
  const double ph = zeta - 0.25 * kPi;
  const double c = std::cos(ph), sn = std::sin(ph);
  const double z4 = std::pow(z, 0.25);
  const double ai = (c * p + sn * q) / (std::sqrt(kPi) * z4);
  const double aip = z4 / std::sqrt(kPi) * (sn * r - c * s);
  return {ai, aip};
}

AiryPair airy_pair(double x) {
  if (std::isnan(x)) return {x, x};
  if (x > kSeriesRight) {
    if (x > 110.0) return {0.0, -0.0};
    return airy_positive(x);
  }
  if (x < kSeriesLeft) return airy_negative_asymptotic(x);
  return airy_series(x);
}

// Two-term recurrence state (current, previous) sharing one log scale.
struct ScaledPair {
  double cur;
  double prev;
  double log_scale;

  void renormalize() {
    const double m = std::max(std::abs(cur), std::abs(prev));
    if (m > kRescale || (m < 1.0 / kRescale && m > 0.0)) {
      const int e = std::ilogb(m);
      cur = std::scalbn(cur, -e);
      prev = std::scalbn(prev, -e);
      log_scale += e * std::numbers::ln2;
    }
  }

  ScaledValue current() const {
    ScaledValue v = ScaledValue::from_double(cur);
    return v.scaled(log_scale);
  }
};

}  // namespace

ScaledValue ScaledValue::from_double(double x) {
  if (x == 0.0) return {};
  return {x > 0.0 ? 1 : -1, std::log(std::abs(x))};
}

double ScaledValue::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_magnitude);
}

ScaledValue ScaledValue::operator*(const ScaledValue& o) const {
  if (sign == 0 || o.sign == 0) return {};
  return {sign * o.sign, log_magnitude + o.log_magnitude};
}

double airy_ai(double x) { return airy_pair(x).ai; }

double airy_ai_prime(double x) { return airy_pair(x).aip; }

ScaledValue hermite_weighted(int n, double x) {
  if (n < 0) throw DomainError("hermite_weighted: negative degree");
  if (n > 1000000) throw DomainError("hermite_weighted: degree above 1e6");
  ScaledPair st{1.0, 0.0, -0.5 * x * x - 0.25 * std::log(kPi)};
  if (n == 0) return st.current();
  st.prev = st.cur;
  st.cur = std::sqrt(2.0) * x;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * x * st.cur - std::sqrt(k / (k + 1.0)) * st.prev;
    st.prev = st.cur;
    st.cur = next;
    st.renormalize();
  }
  return st.current();
}

ScaledValue laguerre1_weighted(int n, double x) {
  if (n < 0) throw DomainError("laguerre1_weighted: negative degree");
  if (n > 1000000) throw DomainError("laguerre1_weighted: degree above 1e6");
  if (!(x >= 0.0)) throw DomainError("laguerre1_weighted: x must be non-negative");
  ScaledPair st{1.0, 0.0, -0.5 * x};
  if (n == 0) return st.current();
  st.prev = st.cur;
  st.cur = (x - 2.0) / std::sqrt(2.0);
  for (int k = 1; k < n; ++k) {
    const double kk = k;
    const double next = ((x - 2.0 * kk - 2.0) * std::sqrt(kk + 1.0) * st.cur - (kk + 1.0) * std::sqrt(kk) * st.prev) /
                        ((kk + 1.0) * std::sqrt(kk + 2.0));
    st.prev = st.cur;
    st.cur = next;
    st.renormalize();
  }
  return st.current();
}

double IdentitySides::relative_gap() const {
  const double scale = std::max(std::abs(rhs), 1e-300);
  return std::abs(lhs - rhs) / scale;
}

namespace {

// Saddles of u^n exp(A (u-1)^2 - 2B (u-1)) (u = w + 1) solve 2A u^2 - 2(A+B) u + n = 0.
// For the line, the real part of the relevant saddle; for the circle, its modulus.
double hermite_saddle(int n, double A, double B, bool line) {
  const double disc = (A + B) * (A + B) - 2.0 * A * n;
  if (disc < 0.0) return line ? (A + B) / (2.0 * A) : std::sqrt(n / (2.0 * A));
  const double r1 = ((A + B) + std::sqrt(disc)) / (2.0 * A);
  const double r2 = ((A + B) - std::sqrt(disc)) / (2.0 * A);
  const bool first_larger = std::abs(r1) >= std::abs(r2);
  if (line) return first_larger ? r1 : r2;
  return std::abs(first_larger ? r2 : r1);
}

}  // namespace

IdentitySides hermite_from_contour(int n, double A, double B, int nodes) {
  if (n < 0) throw DomainError("hermite_from_contour: negative degree");
  if (!(A > 0.0)) throw DomainError("hermite_from_contour: A must be positive for the line integral to converge");
  // The integrand is entire: put the line through the saddle that is a maximum along it.
  const ContourSpec line = ContourSpec::vertical_line(hermite_saddle(n, A, B, true) - 1.0,
                                                      gaussian_halfwidth(A), nodes);
  const cplx lhs = integrate_contour(
      [&](cplx w) { return std::pow(w + 1.0, n) * std::exp(A * w * w - 2.0 * B * w); }, line);
  const double arg = B / std::sqrt(A) + std::sqrt(A);
  const ScaledValue h = hermite_weighted(n, arg);
  // hermite_weighted carries exp(-arg^2/2); undo it in log space.
  const double log_rhs = 0.5 * std::lgamma(n + 1.0) - 0.25 * std::log(kPi) - 0.5 * std::log(2.0) - B * B / A -
                         0.5 * (n + 1.0) * std::log(2.0 * A) + 0.5 * arg * arg;
  return {lhs.real(), h.scaled(log_rhs).value()};
}

IdentitySides hermite_from_contour_pole(int n, double A, double B, int nodes) {
  if (n < 1) throw DomainError("hermite_from_contour_pole: n must be >= 1");
  if (!(A > 0.0)) throw DomainError("hermite_from_contour_pole: A must be positive");
  // Any radius works for the isolated pole at -1; pass through the saddle of the integrand.
  const double r = std::max(1e-3, hermite_saddle(n, A, B, false));
  const ContourSpec circle = ContourSpec::circle(cplx(-1.0, 0.0), r, nodes);
  const cplx lhs = integrate_contour(
      [&](cplx z) { return std::exp(-A * z * z + 2.0 * B * z) / std::pow(z + 1.0, n); }, circle);
  const double arg = B / std::sqrt(A) + std::sqrt(A);
  const ScaledValue h = hermite_weighted(n - 1, arg);
  const double log_rhs = 0.25 * std::log(kPi) + 0.5 * (n - 1.0) * std::log(2.0 * A) - 0.5 * std::lgamma(n) - A -
                         2.0 * B + 0.5 * arg * arg;
  return {lhs.real(), h.scaled(log_rhs).value()};
}

IdentitySides laguerre_from_contour(int n, double x, int nodes) {
  if (n < 1) throw DomainError("laguerre_from_contour: n must be >= 1");
  if (!(x >= 0.0)) throw DomainError("laguerre_from_contour: x must be non-negative");
  // Circle through the saddle points of the integrand, which keeps cancellation mild for large n.
  const double ratio = 4.0 * n / std::max(x, 1e-12);
  double r = ratio > 1.0 ? std::sqrt(ratio) : 1.0 - std::sqrt(1.0 - ratio);
  r = std::clamp(r, 0.05, 1e3);
  const ContourSpec circle = ContourSpec::circle(cplx(1.0, 0.0), r, nodes);
  const cplx lhs = integrate_contour(
      [&](cplx z) { return std::exp(-0.5 * x * z) * std::pow((1.0 + z) / (1.0 - z), n); }, circle);
  const double rhs = -2.0 * std::sqrt(static_cast<double>(n)) * laguerre1_weighted(n - 1, x).value();
  return {lhs.real(), rhs};
}

double hermite_edge_scaled(int n, double xi) {
  if (n < 1) throw DomainError("hermite_edge_scaled: n must be >= 1");
  const double nn = n;
  const double y = 1.0 + xi * std::pow(nn, -2.0 / 3.0);
  return hermite_weighted(n, std::sqrt(2.0 * nn) * y).scaled(std::log(nn) / 12.0).value();
}

double laguerre_edge_scaled(int n, double xi) {
  if (n < 1) throw DomainError("laguerre_edge_scaled: n must be >= 1");
  const double nn = n;
  const double y = 1.0 + xi * std::pow(nn, -2.0 / 3.0);
  if (y < 0.0) throw DomainError("laguerre_edge_scaled: xi below -n^{2/3}");
  return laguerre1_weighted(n, 4.0 * nn * y).scaled(5.0 / 6.0 * std::log(nn)).value();
}

}  // namespace taclab
