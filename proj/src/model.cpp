#include "taclab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "taclab/error.hpp"

namespace taclab {

double ModelParams::b1() const {
  const auto l = left_nu();
  return *std::max_element(l.begin(), l.end());
}

double ModelParams::b2() const {
  const auto r = right_nu();
  return *std::min_element(r.begin(), r.end());
}

std::vector<double> ModelParams::left_nu() const { return {nu.begin(), nu.begin() + n}; }

std::vector<double> ModelParams::right_nu() const { return {nu.begin() + n, nu.end()}; }

bool ModelParams::distinct_endpoints() const {
  std::vector<double> sorted = nu;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

void ModelParams::validate() const {
  if (n < 0 || m < 0 || n + m < 1) throw DomainError("model: need n, m >= 0 and n + m >= 1");
  if (static_cast<int>(nu.size()) != n + m) throw DomainError("model: nu must have n + m entries");
  if (!(a2 > a1)) throw DomainError("model: need a1 < a2");
  for (double x : nu) {
    if (!std::isfinite(x)) throw DomainError("model: nu entries must be finite");
  }
  if (!std::is_sorted(nu.begin(), nu.begin() + n) || !std::is_sorted(nu.begin() + n, nu.end())) {
    throw DomainError("model: nu must be non-decreasing within each group");
  }
  if (n > 0 && !(b1() < 0.0)) throw DomainError("model: left endpoints must be negative");
  if (m > 0 && !(b2() > 0.0)) throw DomainError("model: right endpoints must be positive");
  if (K < 0) throw DomainError("model: K must be non-negative");
}

void EvalPoint::validate() const {
  if (!(s >= 0.0 && s < 1.0) || !(t >= 0.0 && t < 1.0)) {
    throw DomainError("eval point: times must lie in [0, 1)");
  }
  if (!std::isfinite(u) || !std::isfinite(v)) throw DomainError("eval point: positions must be finite");
}

double heat_kernel(double t, double x, double y) {
  if (t <= 0.0) return 0.0;
  const double d = x - y;
  return std::exp(-d * d / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

double q_weight(const EvalPoint& p) {
  if (p.t <= p.s) return 0.0;
  const double dt = p.t - p.s;
  const double d = p.u - p.v;
  const double log_q = p.u * p.u / (2.0 * (1.0 - p.s)) - p.v * p.v / (2.0 * (1.0 - p.t)) - d * d / (2.0 * dt);
  return std::exp(log_q) / std::sqrt(2.0 * std::numbers::pi * dt);
}

}  // namespace taclab
