#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace taclab {

using cplx = std::complex<double>;

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int order);

// Nodes and weights discretizing [left, inf) for integrands decaying like exp(-decay * (x - left)).
struct HalfLineGrid {
  double left_endpoint = 0.0;
  double decay_rate = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

inline constexpr int kDefaultHalfLineNodes = 96;

HalfLineGrid halfline_grid(double left, double decay, int n_nodes = kDefaultHalfLineNodes);

enum class ContourKind { vertical_line, circle };

struct ContourSpec {
  ContourKind kind = ContourKind::circle;
  cplx anchor{0.0, 0.0};
  double radius = 0.0;                // circles only
  double truncation_halfwidth = 0.0;  // vertical lines only
  int node_count = 256;

  static ContourSpec circle(cplx center, double radius, int nodes = 256);
  static ContourSpec vertical_line(double c, double halfwidth, int nodes = 256);

  void validate() const;
};

// Discretized contour: the weights carry dz and the 1/(2 pi i) factor, so sum(w_k f(z_k)) ~ (1/2 pi i) int f.
struct ContourRule {
  std::vector<cplx> points;
  std::vector<cplx> weights;

  std::size_t size() const { return points.size(); }
};

ContourRule discretize(const ContourSpec& spec);

// Truncation of a vertical line for an integrand carrying exp(coef * w^2), coef > 0.
double gaussian_halfwidth(double decay_coefficient);

// Circle around a set of real points lying in one open half plane (side = -1 left, +1 right).
// Centered at the mean, radius 1.5 x the largest distance, shrunk so the closure stays in the half plane.
// radius_scale rescales the radius afterwards (still clamped).
ContourSpec enclosing_circle(const std::vector<double>& points, int side, int nodes = 256,
                             double radius_scale = 1.0);

cplx integrate_contour(const std::function<cplx(cplx)>& f, const ContourSpec& spec);

cplx integrate_double(const std::function<cplx(cplx, cplx)>& f, const ContourSpec& spec1,
                      const ContourSpec& spec2);

}  // namespace taclab
