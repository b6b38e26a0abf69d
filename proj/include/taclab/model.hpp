#pragma once

#include <vector>

namespace taclab {

// n paths start at a1 and end at nu[0..n), m paths start at a2 and end at nu[n..n+m).
struct ModelParams {
  int n = 1;
  int m = 0;
  double a1 = -1.0;
  double a2 = 1.0;
  std::vector<double> nu;
  int K = 0;  // discretization of the starting points; pre-limit kernel only
  double d1 = 1.0;
  double d2 = 1.0;

  double a() const { return a2 - a1; }
  int N() const { return n + m; }
  double b1() const;  // largest left endpoint, < 0
  double b2() const;  // smallest right endpoint, > 0
  std::vector<double> left_nu() const;
  std::vector<double> right_nu() const;
  // nu_j are pairwise distinct
  bool distinct_endpoints() const;

  // Throws DomainError on violated invariants.
  void validate() const;
};

struct EvalPoint {
  double s = 0.0;
  double u = 0.0;
  double t = 0.0;
  double v = 0.0;

  void validate() const;
};

// Continuous-time Gaussian transition density, zero for t <= 0.
double heat_kernel(double t, double x, double y);

// exp(u^2/2(1-s) - v^2/2(1-t)) p_{t-s}(u, v)
double q_weight(const EvalPoint& p);

}  // namespace taclab
