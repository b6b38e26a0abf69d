#include "taclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "taclab/error.hpp"

namespace taclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanelOrder = 16;
// exp(-40) ~ 4e-18: the truncated tail of a unit-rate exponential.
constexpr double kHalfLineSpan = 40.0;

std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << "," << z.imag() << ")";
  return os.str();
}

void check_finite(cplx value, cplx node, std::size_t index) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw NumericalError("integrand is not finite at contour node " + std::to_string(index) +
                         " z=" + describe(node));
  }
}

}  // namespace

GaussRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < order; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    dp = order * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

HalfLineGrid halfline_grid(double left, double decay, int n_nodes) {
  if (!(decay > 0.0) || !std::isfinite(decay)) {
    throw DomainError("halfline_grid: decay must be positive");
  }
  if (n_nodes < 8) throw DomainError("halfline_grid: need at least 8 nodes");
  const GaussRule gl = gauss_legendre(n_nodes);
  const double half = 0.5 * kHalfLineSpan / decay;
  HalfLineGrid grid;
  grid.left_endpoint = left;
  grid.decay_rate = decay;
  grid.nodes.resize(n_nodes);
  grid.weights.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    grid.nodes[i] = left + half * (gl.nodes[i] + 1.0);
    grid.weights[i] = half * gl.weights[i];
  }
  return grid;
}

ContourSpec ContourSpec::circle(cplx center, double radius, int nodes) {
  ContourSpec s;
  s.kind = ContourKind::circle;
  s.anchor = center;
  s.radius = radius;
  s.node_count = nodes;
  s.validate();
  return s;
}

ContourSpec ContourSpec::vertical_line(double c, double halfwidth, int nodes) {
  ContourSpec s;
  s.kind = ContourKind::vertical_line;
  s.anchor = cplx(c, 0.0);
  s.truncation_halfwidth = halfwidth;
  s.node_count = nodes;
  s.validate();
  return s;
}

void ContourSpec::validate() const {
  if (node_count < 4) throw DomainError("contour: node_count must be >= 4");
  if (kind == ContourKind::circle) {
    if (!(radius > 0.0)) throw DomainError("contour: circle radius must be positive");
    if (truncation_halfwidth != 0.0) throw DomainError("contour: circles take no truncation");
  } else {
    if (!(truncation_halfwidth > 0.0)) throw DomainError("contour: line truncation must be positive");
    if (radius != 0.0) throw DomainError("contour: vertical lines take no radius");
  }
}

ContourRule discretize(const ContourSpec& spec) {
  spec.validate();
  ContourRule rule;
  if (spec.kind == ContourKind::circle) {
    const int n = spec.node_count;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
      const cplx e = std::polar(1.0, 2.0 * kPi * k / n);
      rule.points[k] = spec.anchor + spec.radius * e;
      // dz / (2 pi i) = r e^{i theta} d theta / (2 pi)
      rule.weights[k] = spec.radius * e / static_cast<double>(n);
    }
    return rule;
  }
  const int order = std::min(kPanelOrder, spec.node_count);
  const int panels = (spec.node_count + order - 1) / order;
  const GaussRule gl = gauss_legendre(order);
  const double T = spec.truncation_halfwidth;
  const double h = 2.0 * T / panels;
  rule.points.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(static_cast<std::size_t>(panels) * order);
  for (int p = 0; p < panels; ++p) {
    const double mid = -T + (p + 0.5) * h;
    for (int j = 0; j < order; ++j) {
      const double y = mid + 0.5 * h * gl.nodes[j];
      rule.points.emplace_back(spec.anchor.real(), y);
      // dw / (2 pi i) = i dy / (2 pi i)
      rule.weights.emplace_back(0.5 * h * gl.weights[j] / (2.0 * kPi), 0.0);
    }
  }
  return rule;
}

double gaussian_halfwidth(double decay_coefficient) {
  if (!(decay_coefficient > 0.0)) {
    throw DomainError("vertical line needs a positive Gaussian decay coefficient");
  }
  return 12.0 / std::sqrt(decay_coefficient);
}

ContourSpec enclosing_circle(const std::vector<double>& points, int side, int nodes,
                             double radius_scale) {
  if (points.empty()) throw DomainError("enclosing_circle: no points to enclose");
  if (side != -1 && side != 1) throw DomainError("enclosing_circle: side must be -1 or +1");
  for (double p : points) {
    if (!(side * p > 0.0)) throw DomainError("enclosing_circle: point outside the open half plane");
  }
  const auto [lo_it, hi_it] = std::minmax_element(points.begin(), points.end());
  double center = 0.0;
  for (double p : points) center += p;
  center /= static_cast<double>(points.size());
  double reach = std::max(center - *lo_it, *hi_it - center);
  if (reach >= std::abs(center)) {
    center = 0.5 * (*lo_it + *hi_it);
    reach = 0.5 * (*hi_it - *lo_it);
  }
  const double room = std::abs(center);
  double r = reach > 0.0 ? 1.5 * reach : 0.5 * room;
  r *= radius_scale;
  const double r_max = reach + 0.8 * (room - reach);
  const double r_min = reach > 0.0 ? reach + 0.05 * (room - reach) : 0.05 * room;
  r = std::clamp(r, r_min, r_max);
  return ContourSpec::circle(cplx(center, 0.0), r, nodes);
}

cplx integrate_contour(const std::function<cplx(cplx)>& f, const ContourSpec& spec) {
  const ContourRule rule = discretize(spec);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const cplx v = f(rule.points[k]);
    check_finite(v, rule.points[k], k);
    sum += rule.weights[k] * v;
  }
  return sum;
}

cplx integrate_double(const std::function<cplx(cplx, cplx)>& f, const ContourSpec& spec1,
                      const ContourSpec& spec2) {
  const ContourRule r1 = discretize(spec1);
  const ContourRule r2 = discretize(spec2);
  double scale = 1.0;
  for (const auto& z : r1.points) scale = std::max(scale, std::abs(z));
  for (const auto& z : r2.points) scale = std::max(scale, std::abs(z));
  for (std::size_t i = 0; i < r1.size(); ++i) {
    for (std::size_t j = 0; j < r2.size(); ++j) {
      if (std::abs(r1.points[i] - r2.points[j]) < 1e-12 * scale) {
        throw DomainError("integrate_double: contours share node " + describe(r1.points[i]) +
                          "; change a radius or truncation");
      }
    }
  }
  cplx sum = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    cplx inner = 0.0;
    for (std::size_t j = 0; j < r2.size(); ++j) {
      const cplx v = f(r1.points[i], r2.points[j]);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError("integrand is not finite at node pair " + describe(r1.points[i]) +
                             " x " + describe(r2.points[j]));
      }
      inner += r2.weights[j] * v;
    }
    sum += r1.weights[i] * inner;
  }
  return sum;
}

}  // namespace taclab
