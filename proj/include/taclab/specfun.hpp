#pragma once

#include <cmath>
#include <limits>

namespace taclab {

// sign * exp(log_magnitude); zero carries log_magnitude = -inf.
struct ScaledValue {
  int sign = 0;
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static ScaledValue from_double(double x);
  double value() const;
  ScaledValue operator*(const ScaledValue& o) const;
  ScaledValue scaled(double log_factor) const { return {sign, sign == 0 ? log_magnitude : log_magnitude + log_factor}; }
};

double airy_ai(double x);
double airy_ai_prime(double x);

// h_n(x) exp(-x^2/2) with h_n orthonormal for exp(-x^2).
ScaledValue hermite_weighted(int n, double x);

// l_n(x) exp(-x/2) with l_n orthonormal for x exp(-x) on [0, inf), positive leading coefficient.
ScaledValue laguerre1_weighted(int n, double x);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap() const;
};

// (1/2 pi i) int_{Re w = 0} (w+1)^n exp(A w^2 - 2 B w) dw against its Hermite closed form.
IdentitySides hermite_from_contour(int n, double A, double B, int nodes = 512);

// (1/2 pi i) int_{|z+1| = r} exp(-A z^2 + 2 B z) (z+1)^{-n} dz against its Hermite closed form, n >= 1.
IdentitySides hermite_from_contour_pole(int n, double A, double B, int nodes = 256);

// (1/2 pi i) int_{|z-1| = r} exp(-x z / 2) ((1+z)/(1-z))^n dz against -2 sqrt(n) exp(-x/2) l_{n-1}(x).
IdentitySides laguerre_from_contour(int n, double x, int nodes = 256);

// n^{1/12} h_n(sqrt(2n)(1 + xi n^{-2/3})) exp(-n (1 + xi n^{-2/3})^2), tends to 2^{1/4} Ai(2 xi).
double hermite_edge_scaled(int n, double xi);

// n^{5/6} l_n(4n(1 + xi n^{-2/3})) exp(-2n (1 + xi n^{-2/3})), tends to 2^{-4/3} Ai(2^{2/3} xi).
double laguerre_edge_scaled(int n, double xi);

}  // namespace taclab
