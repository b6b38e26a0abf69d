#include "taclab/finite_kernel.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

#include "taclab/error.hpp"
#include "taclab/fredholm.hpp"
#include "taclab/parallel.hpp"

namespace taclab {

namespace {

constexpr double kImagGuard = 1e-6;
constexpr int kPanelOrder = 16;
constexpr int kMaxLineNodes = 16 * 1024;

// term_scale: sum of the moduli of the summed terms; an imaginary part below its roundoff level is
// not a sign of misplaced contours.
double real_part(cplx c, const char* what, double term_scale = 0.0) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw NumericalError(std::string(what) + ": non-finite value");
  }
  const double allowed = std::max(kImagGuard * std::max(1.0, std::abs(c.real())), 1e-12 * term_scale);
  if (std::abs(c.imag()) > allowed) {
    std::ostringstream os;
    os << what << ": imaginary part " << c.imag() << " exceeds the guard for a real quantity (" << c.real()
       << "); check the contour placement";
    throw NumericalError(os.str());
  }
  return c.real();
}

double gaussian_coef(double t) { return t / (2.0 * (1.0 - t)); }

void require_positive_time(const EvalPoint& pt) {
  pt.validate();
  if (!(pt.t > 0.0)) throw DomainError("limit kernel: the second time t must be positive");
}

}  // namespace

SideKernel::SideKernel(const ModelParams& params, Side side, const FiniteOptions& opt)
    : p_(params), side_(side), opt_(opt) {
  p_.validate();
  if (opt_.circle_nodes < 8 || opt_.line_nodes < kPanelOrder || opt_.grid_nodes < 8 || opt_.check_grid_nodes < 8) {
    throw DomainError("finite kernel: node counts too small");
  }
  own_ = side == Side::left ? p_.left_nu() : p_.right_nu();
  other_ = side == Side::left ? p_.right_nu() : p_.left_nu();
  sgn_ = side == Side::left ? 1.0 : -1.0;
  a_ = p_.a();
  active_ = !own_.empty();
  coupled_ = active_ && !other_.empty();
  if (!active_) return;

  const int own_half = side == Side::left ? -1 : 1;
  own_spec_ = enclosing_circle(own_, own_half, opt_.circle_nodes, opt_.radius_scale);
  own_rule_ = discretize(own_spec_);
  for (cplx z : own_rule_.points) q_own_.push_back(Q(z));
  double decay = a_ * std::abs(side == Side::left ? p_.b1() : p_.b2());
  if (coupled_) {
    other_spec_ = enclosing_circle(other_, -own_half, opt_.circle_nodes, opt_.radius_scale);
    other_rule_ = discretize(other_spec_);
    for (cplx w : other_rule_.points) qinv_other_.push_back(1.0 / Q(w));
    decay = a_ * std::min(std::abs(p_.b1()), std::abs(p_.b2()));
  }
  grid_ = halfline_grid(1.0, decay, opt_.grid_nodes);

  const auto g = static_cast<Eigen::Index>(grid_.size());
  m0_grid_ = m0_matrix(grid_.nodes, grid_.nodes);
  lu_input_ = Eigen::MatrixXd::Identity(g, g) - symmetrized(m0_grid_, grid_);
  lu_ = lu_input_.partialPivLu();
  det_ = lu_.determinant();
  if (!(det_ >= kResolventGuard)) {
    std::ostringstream os;
    os << "finite kernel: det(I - M0) = " << det_ << " is below the guard " << kResolventGuard;
    throw NumericalError(os.str());
  }
}

cplx SideKernel::Q(cplx z) const {
  cplx num(1.0, 0.0), den(1.0, 0.0);
  if (side_ == Side::left) {
    for (double x : other_) num *= 1.0 - z / x;
    for (double x : own_) den *= z / x - 1.0;
  } else {
    for (double x : other_) num *= z / x - 1.0;
    for (double x : own_) den *= 1.0 - z / x;
  }
  return num / den;
}

cplx SideKernel::P(cplx w) const {
  cplx r(1.0, 0.0);
  for (double x : own_) r *= side_ == Side::left ? w / x - 1.0 : 1.0 - w / x;
  return r;
}

cplx SideKernel::R(cplx w) const {
  cplx r(1.0, 0.0);
  for (double x : other_) r *= side_ == Side::left ? 1.0 - w / x : w / x - 1.0;
  return r;
}

double SideKernel::m0(double x, double y) const {
  if (!coupled_) return 0.0;
  std::vector<cplx> ey(other_rule_.size());
  for (std::size_t l = 0; l < ey.size(); ++l) {
    ey[l] = other_rule_.weights[l] * qinv_other_[l] * std::exp(-sgn_ * a_ * y * other_rule_.points[l]);
  }
  cplx sum(0.0, 0.0);
  for (std::size_t k = 0; k < own_rule_.size(); ++k) {
    const cplx zeta = own_rule_.points[k];
    cplx inner(0.0, 0.0);
    for (std::size_t l = 0; l < ey.size(); ++l) inner += ey[l] / (zeta - other_rule_.points[l]);
    sum += own_rule_.weights[k] * q_own_[k] * std::exp(sgn_ * a_ * x * zeta) * inner;
  }
  return real_part(sgn_ * a_ * sum, "M0");
}

Eigen::MatrixXd SideKernel::m0_matrix(const std::vector<double>& xs, const std::vector<double>& ys) const {
  const auto nx = static_cast<Eigen::Index>(xs.size());
  const auto ny = static_cast<Eigen::Index>(ys.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx, ny);
  if (!coupled_) return out;
  const auto nz = static_cast<Eigen::Index>(own_rule_.size());
  const auto nw = static_cast<Eigen::Index>(other_rule_.size());
  Eigen::MatrixXcd ex(nx, nz), ey(nw, ny), cm(nz, nw);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index k = 0; k < nz; ++k) {
      ex(i, k) = own_rule_.weights[k] * q_own_[k] * std::exp(sgn_ * a_ * xs[i] * own_rule_.points[k]);
    }
  }
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index k = 0; k < nw; ++k) {
      ey(k, j) = other_rule_.weights[k] * qinv_other_[k] * std::exp(-sgn_ * a_ * ys[j] * other_rule_.points[k]);
    }
  }
  for (Eigen::Index k = 0; k < nz; ++k) {
    for (Eigen::Index l = 0; l < nw; ++l) cm(k, l) = 1.0 / (own_rule_.points[k] - other_rule_.points[l]);
  }
  const Eigen::MatrixXcd mc = (sgn_ * a_) * (ex * cm * ey);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) out(i, j) = real_part(mc(i, j), "M0");
  }
  return out;
}

double SideKernel::m0_residue(double x, double y) const {
  if (!coupled_) return 0.0;
  if (!p_.distinct_endpoints()) {
    throw DomainError("m0 residue sum: endpoints coincide, use the contour method");
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < own_.size(); ++s) {
    const double ns = own_[s];
    for (std::size_t r = 0; r < other_.size(); ++r) {
      const double nr = other_[r];
      double c = std::exp(sgn_ * a_ * (x * ns - y * nr)) / (ns - nr);
      for (double o : other_) c *= o - ns;
      for (double g : own_) c *= g - nr;
      for (std::size_t j = 0; j < own_.size(); ++j) {
        if (j != s) c /= own_[j] - ns;
      }
      for (std::size_t j = 0; j < other_.size(); ++j) {
        if (j != r) c /= other_[j] - nr;
      }
      sum += c;
    }
  }
  return sgn_ * a_ * sum;
}

namespace {

void require_half_plane(cplx z, Side side, const char* name) {
  const double h = side == Side::left ? -z.real() : z.real();
  if (!(h > 0.0)) {
    throw DomainError(std::string("finite kernel: ") + name + " must lie in the " +
                      (side == Side::left ? "left" : "right") + " open half plane");
  }
}

bool inside(cplx w, const ContourSpec& c) { return std::abs(w - c.anchor) < c.radius; }

void require_off_contour(cplx w, const ContourSpec& c, const char* name) {
  if (std::abs(std::abs(w - c.anchor) - c.radius) < 1e-3 * c.radius) {
    throw DomainError(std::string("finite kernel: ") + name + " lies on the integration circle; rescale the radius");
  }
}

}  // namespace

cplx SideKernel::m_zw(double x, double y, cplx z, cplx w) const {
  if (!active_) return 0.0;
  require_half_plane(z, side_, "z");
  require_half_plane(w, side_, "w");
  if (!coupled_) return 0.0;
  require_off_contour(w, own_spec_, "w");
  const bool enclosed = inside(w, own_spec_);
  cplx sum(0.0, 0.0);
  for (std::size_t l = 0; l < other_rule_.size(); ++l) {
    const cplx om = other_rule_.points[l];
    const cplx ey = other_rule_.weights[l] * qinv_other_[l] * std::exp(-sgn_ * a_ * y * om);
    cplx inner(0.0, 0.0);
    for (std::size_t k = 0; k < own_rule_.size(); ++k) {
      const cplx ze = own_rule_.points[k];
      inner += own_rule_.weights[k] * q_own_[k] * std::exp(sgn_ * a_ * x * ze) * (z - ze) * (w - om) /
               ((w - ze) * (z - om) * (ze - om));
    }
    if (!enclosed) inner += (w - z) * Q(w) * std::exp(sgn_ * a_ * x * w) / (z - om);
    sum += ey * inner;
  }
  return sgn_ * a_ * sum;
}

cplx SideKernel::b1(double x, cplx w) const {
  if (!active_) return 0.0;
  require_off_contour(w, own_spec_, "w");
  cplx sum(0.0, 0.0);
  for (std::size_t k = 0; k < own_rule_.size(); ++k) {
    const cplx ze = own_rule_.points[k];
    sum += own_rule_.weights[k] * q_own_[k] * std::exp(sgn_ * a_ * x * ze) / (ze - w);
  }
  if (!inside(w, own_spec_)) sum += Q(w) * std::exp(sgn_ * a_ * x * w);
  return std::sqrt(a_) * sum;
}

cplx SideKernel::b2(double y, cplx z) const {
  if (!coupled_) return 0.0;
  require_off_contour(z, other_spec_, "z");
  cplx sum(0.0, 0.0);
  for (std::size_t l = 0; l < other_rule_.size(); ++l) {
    const cplx om = other_rule_.points[l];
    sum += other_rule_.weights[l] * qinv_other_[l] * std::exp(-sgn_ * a_ * y * om) / (om - z);
  }
  return std::sqrt(a_) * sum;
}

SideKernel::PointContours SideKernel::point_contours(const EvalPoint& pt) const {
  const double alpha = gaussian_coef(pt.t);
  const double B = a_own() - pt.v / (1.0 - pt.t);
  const double sq = -pt.s / (2.0 * (1.0 - pt.s));
  const double lin = pt.u / (1.0 - pt.s) - a_own();
  const double centre = own_spec_.anchor.real();
  double reach = 0.0;
  for (double x : own_) reach = std::max(reach, std::abs(x - centre));
  // Every small circle stays inside the default disc, hence off the other contour.
  const double cap = 0.9 * (own_spec_.radius - reach);
  auto rho_at = [&](double c) {
    const double growth = 1.0 + std::abs(2.0 * sq * c + lin) + std::abs(2.0 * alpha * c + B);
    return std::min(cap, 2.0 / growth);
  };

  struct Disc {
    double lo, hi;
  };
  std::vector<Disc> clusters;
  for (double x : own_) {
    if (!clusters.empty() && x - clusters.back().hi < 2.0 * std::min(rho_at(x), rho_at(clusters.back().hi))) {
      clusters.back().hi = x;
    } else {
      clusters.push_back({x, x});
    }
  }
  PointContours pc;
  std::vector<std::pair<double, double>> discs;  // centre, radius
  for (const Disc& d : clusters) {
    const double c = 0.5 * (d.lo + d.hi);
    const double r = 0.5 * (d.hi - d.lo) + std::min(rho_at(d.lo), rho_at(d.hi));
    discs.emplace_back(c, r);
    const ContourRule rule = discretize(ContourSpec::circle(cplx(c, 0.0), r, opt_.circle_nodes));
    pc.own.points.insert(pc.own.points.end(), rule.points.begin(), rule.points.end());
    pc.own.weights.insert(pc.own.weights.end(), rule.weights.begin(), rule.weights.end());
  }

  // Moving the line across a cluster adds e^E P to W, which integrates to zero against every
  // own-circle integrand used here, so the line may sit at the saddle when it clears the discs.
  constexpr double kGap = 0.5;
  std::vector<std::pair<double, double>> blocked;
  for (const auto& [c, r] : discs) blocked.emplace_back(c - r - kGap, c + r + kGap);
  std::sort(blocked.begin(), blocked.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& b : blocked) {
    if (!merged.empty() && b.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, b.second);
    } else {
      merged.push_back(b);
    }
  }
  double c = -B / (2.0 * alpha);
  for (const auto& [lo, hi] : merged) {
    if (c > lo && c < hi) c = c - lo < hi - c ? lo : hi;
  }
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& [cc, r] : discs) dist = std::min(dist, std::abs(c - cc) - r);
  pc.line = discretize(line_at(c, pt.t, dist));
  return pc;
}

double SideKernel::check_line_position() const {
  const double r = own_spec_.radius;
  const double centre = own_spec_.anchor.real();
  return 0.5 * (side_ == Side::left ? centre + r : centre - r);
}

ContourSpec SideKernel::line_near_circle(double c, double t) const {
  return line_at(c, t, std::abs(cplx(c, 0.0) - own_spec_.anchor) - own_spec_.radius);
}

ContourSpec SideKernel::line_at(double c, double t, double dist) const {
  const double T = gaussian_halfwidth(gaussian_coef(t));
  if (!(dist > 0.0)) throw DomainError("finite kernel: vertical line crosses the integration circle");
  const double panels = std::ceil(2.0 * T / dist);
  const int nodes = static_cast<int>(std::min<double>(kMaxLineNodes, std::max<double>(opt_.line_nodes, panels * kPanelOrder)));
  return ContourSpec::vertical_line(c, T, nodes);
}

// W(zeta) = (1/2 pi i) int e^{E(w)} P(w) / (zeta - w) dw for zeta on the own circle.
std::vector<cplx> SideKernel::w_transform(const EvalPoint& pt, const PointContours& pc) const {
  const double alpha = gaussian_coef(pt.t);
  const double B = a_own() - pt.v / (1.0 - pt.t);
  const ContourRule& line = pc.line;
  std::vector<cplx> g(line.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx w = line.points[k];
    g[k] = line.weights[k] * std::exp(alpha * w * w + B * w) * P(w);
  }
  std::vector<cplx> out(pc.own.size());
  parallel_for(out.size(), [&](std::size_t i) {
    const cplx ze = pc.own.points[i];
    cplx s(0.0, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) s += g[k] / (ze - line.points[k]);
    out[i] = s;
  });
  return out;
}

// V(omega) = (1/2 pi i) int_own e^{S(z)} / (P(z) (omega - z)) dz for omega on the other circle.
std::vector<cplx> SideKernel::z_transform(const EvalPoint& pt, const PointContours& pc) const {
  const double sq = -pt.s / (2.0 * (1.0 - pt.s));
  const double lin = pt.u / (1.0 - pt.s) - a_own();
  std::vector<cplx> f(pc.own.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const cplx z = pc.own.points[k];
    f[k] = pc.own.weights[k] * std::exp(sq * z * z + lin * z) / P(z);
  }
  std::vector<cplx> out(other_rule_.size());
  parallel_for(out.size(), [&](std::size_t i) {
    const cplx om = other_rule_.points[i];
    cplx s(0.0, 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) s += f[k] / (om - pc.own.points[k]);
    out[i] = s;
  });
  return out;
}

Eigen::VectorXd SideKernel::script_b(const std::vector<double>& xs, const EvalPoint& pt) const {
  require_positive_time(pt);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(xs.size()));
  if (!active_) return out;
  const PointContours pc = point_contours(pt);
  const std::vector<cplx> W = w_transform(pt, pc);
  std::vector<cplx> qw(W.size());
  for (std::size_t k = 0; k < W.size(); ++k) qw[k] = pc.own.weights[k] * Q(pc.own.points[k]) * W[k];
  const double pref = p_.d2 * std::sqrt(a_) / std::sqrt(1.0 - pt.t);
  parallel_for(xs.size(), [&](std::size_t i) {
    cplx s(0.0, 0.0);
    double scale = 0.0;
    for (std::size_t k = 0; k < W.size(); ++k) {
      const cplx term = qw[k] * std::exp(sgn_ * a_ * xs[i] * pc.own.points[k]);
      s += term;
      scale += std::abs(term);
    }
    out[static_cast<Eigen::Index>(i)] = real_part(pref * s, "script B", std::abs(pref) * scale);
  });
  return out;
}

Eigen::VectorXd SideKernel::small_beta(const std::vector<double>& xs, const EvalPoint& pt) const {
  require_positive_time(pt);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(xs.size()));
  if (!active_) return out;
  const double alpha = gaussian_coef(pt.t);
  const double B = a_own() - pt.v / (1.0 - pt.t);
  const double T = gaussian_halfwidth(alpha);
  const double pref = p_.d2 * std::sqrt(a_) / std::sqrt(1.0 - pt.t);
  parallel_for(xs.size(), [&](std::size_t i) {
    // The integrand is entire; integrate through the Gaussian saddle.
    const double b = B + sgn_ * a_ * xs[i];
    const ContourRule line = discretize(ContourSpec::vertical_line(-b / (2.0 * alpha), T, opt_.line_nodes));
    cplx s(0.0, 0.0);
    for (std::size_t k = 0; k < line.size(); ++k) {
      const cplx w = line.points[k];
      s += line.weights[k] * std::exp(alpha * w * w + b * w) * R(w);
    }
    out[static_cast<Eigen::Index>(i)] = real_part(pref * s, "beta");
  });
  return out;
}

Eigen::VectorXd SideKernel::script_c(const std::vector<double>& ys, const EvalPoint& pt) const {
  pt.validate();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ys.size()));
  if (!coupled_) return out;
  const std::vector<cplx> V = z_transform(pt, point_contours(pt));
  const double pref = sgn_ * p_.d1 * std::sqrt(a_) / std::sqrt(1.0 - pt.s);
  parallel_for(ys.size(), [&](std::size_t i) {
    cplx s(0.0, 0.0);
    double scale = 0.0;
    for (std::size_t l = 0; l < V.size(); ++l) {
      const cplx term =
          other_rule_.weights[l] * qinv_other_[l] * std::exp(-sgn_ * a_ * ys[i] * other_rule_.points[l]) * V[l];
      s += term;
      scale += std::abs(term);
    }
    out[static_cast<Eigen::Index>(i)] = real_part(pref * s, "script C", std::abs(pref) * scale);
  });
  return out;
}

Eigen::VectorXd SideKernel::g_b1_integral(const std::vector<double>& xs, const EvalPoint& pt) const {
  require_positive_time(pt);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(xs.size()));
  if (!active_) return out;
  const double alpha = gaussian_coef(pt.t);
  const double B = a_own() - pt.v / (1.0 - pt.t);
  const ContourRule line = discretize(line_near_circle(check_line_position(), pt.t));
  const double pref = p_.d2 / std::sqrt(1.0 - pt.t);
  std::vector<cplx> g(line.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx w = line.points[k];
    g[k] = pref * line.weights[k] * std::exp(alpha * w * w + B * w) * P(w);
  }
  parallel_for(xs.size(), [&](std::size_t i) {
    cplx s(0.0, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) s += g[k] * b1(xs[i], line.points[k]);
    out[static_cast<Eigen::Index>(i)] = real_part(s, "int G b1");
  });
  return out;
}

double SideKernel::first_term(const EvalPoint& pt) const {
  require_positive_time(pt);
  if (!active_) return 0.0;
  const PointContours pc = point_contours(pt);
  const std::vector<cplx> W = w_transform(pt, pc);
  const double sq = -pt.s / (2.0 * (1.0 - pt.s));
  const double lin = pt.u / (1.0 - pt.s) - a_own();
  cplx s(0.0, 0.0);
  for (std::size_t k = 0; k < W.size(); ++k) {
    const cplx z = pc.own.points[k];
    s -= pc.own.weights[k] * std::exp(sq * z * z + lin * z) / P(z) * W[k];
  }
  return real_part(p_.d1 * p_.d2 * s / std::sqrt((1.0 - pt.s) * (1.0 - pt.t)), "first term");
}

Eigen::VectorXd SideKernel::to_grid(const std::vector<double>& a) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i];
  return v;
}

double SideKernel::l_part(const EvalPoint& pt) const {
  require_positive_time(pt);
  if (!active_) return 0.0;
  const double ft = first_term(pt);
  if (!coupled_) return ft;
  const Eigen::VectorXd phi = script_b(grid_.nodes, pt) + small_beta(grid_.nodes, pt);
  const Eigen::VectorXd psi = script_c(grid_.nodes, pt);
  const Eigen::VectorXd sw = to_grid(grid_.weights).cwiseSqrt();
  const Eigen::VectorXd sol = lu_.solve(sw.cwiseProduct(phi));
  return ft + sw.cwiseProduct(psi).dot(sol);
}

double SideKernel::l_part_line(const EvalPoint& pt) const {
  require_positive_time(pt);
  if (!active_) return 0.0;
  const double alpha = gaussian_coef(pt.t);
  const double B = a_own() - pt.v / (1.0 - pt.t);
  const double sq = -pt.s / (2.0 * (1.0 - pt.s));
  const double lin = pt.u / (1.0 - pt.s) - a_own();
  const ContourRule line = discretize(line_near_circle(check_line_position(), pt.t));
  const auto nz = static_cast<Eigen::Index>(own_rule_.size());
  const auto nw = static_cast<Eigen::Index>(line.size());

  // F(z) / d1 and G(w) / d2 weighted, without the 1/sqrt factors.
  Eigen::VectorXcd fz(nz), gw(nw);
  for (Eigen::Index k = 0; k < nz; ++k) {
    const cplx z = own_rule_.points[k];
    fz[k] = own_rule_.weights[k] * std::exp(sq * z * z + lin * z) / P(z);
  }
  for (Eigen::Index k = 0; k < nw; ++k) {
    const cplx w = line.points[k];
    gw[k] = line.weights[k] * std::exp(alpha * w * w + B * w) * P(w);
  }
  Eigen::MatrixXcd kern(nz, nw);
  for (Eigen::Index i = 0; i < nz; ++i) {
    for (Eigen::Index k = 0; k < nw; ++k) kern(i, k) = 1.0 / (line.points[k] - own_rule_.points[i]);
  }
  cplx total = fz.transpose() * kern * gw;

  if (coupled_) {
    const HalfLineGrid g2 = halfline_grid(1.0, grid_.decay_rate, opt_.check_grid_nodes);
    const auto ng = static_cast<Eigen::Index>(g2.size());
    const Eigen::MatrixXd m2 = m0_matrix(g2.nodes, g2.nodes);
    const Eigen::VectorXd sw = to_grid(g2.weights).cwiseSqrt();
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(ng, ng) - symmetrized(m2, g2);

    // b1^w on the grid: fixed-circle part as a matrix product plus the residue at zeta = w.
    Eigen::MatrixXcd ex(ng, nz);
    for (Eigen::Index i = 0; i < ng; ++i) {
      for (Eigen::Index k = 0; k < nz; ++k) {
        ex(i, k) = own_rule_.weights[k] * q_own_[k] * std::exp(sgn_ * a_ * g2.nodes[i] * own_rule_.points[k]);
      }
    }
    Eigen::MatrixXcd cm(nz, nw);
    for (Eigen::Index k = 0; k < nz; ++k) {
      for (Eigen::Index l = 0; l < nw; ++l) cm(k, l) = 1.0 / (own_rule_.points[k] - line.points[l]);
    }
    Eigen::MatrixXcd b1m = ex * cm;
    for (Eigen::Index l = 0; l < nw; ++l) {
      const cplx w = line.points[l];
      const cplx qw = Q(w);
      for (Eigen::Index i = 0; i < ng; ++i) b1m(i, l) += qw * std::exp(sgn_ * a_ * g2.nodes[i] * w);
    }
    Eigen::MatrixXcd b2m(ng, nz);
    parallel_for(static_cast<std::size_t>(nz), [&](std::size_t k) {
      for (Eigen::Index i = 0; i < ng; ++i) {
        b2m(i, static_cast<Eigen::Index>(k)) = b2(g2.nodes[i], own_rule_.points[k]) / std::sqrt(a_);
      }
    });
    const Eigen::MatrixXcd sol = lhs.cast<cplx>().partialPivLu().solve(sw.cast<cplx>().asDiagonal() * b1m);
    const Eigen::MatrixXcd inner = a_ * ((sw.cast<cplx>().asDiagonal() * b2m).transpose() * sol);
    total += sgn_ * (fz.transpose() * inner * gw)(0, 0);
  }
  return real_part(p_.d1 * p_.d2 * total / std::sqrt((1.0 - pt.s) * (1.0 - pt.t)), "L (line path)");
}

double SideKernel::RankOneSides::relative_gap() const {
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

SideKernel::RankOneSides SideKernel::rank_one_identity(const EvalPoint& pt) const {
  RankOneSides out;
  out.lhs = det_ * l_part_line(pt);
  const Eigen::VectorXd c1 = g_b1_integral(grid_.nodes, pt);
  const Eigen::VectorXd c2 = script_c(grid_.nodes, pt);
  const Eigen::MatrixXd pert = m0_grid_ - c1 * c2.transpose();
  out.rhs = (first_term(pt) - 1.0) * det_ + det_i_minus(pert, grid_);
  return out;
}

double m0_eval(double x, double y, const ModelParams& p, Side side, M0Method method, const FiniteOptions& opt) {
  if (!(x >= 1.0) || !(y >= 1.0)) throw DomainError("m0_eval: arguments must be >= 1");
  const SideKernel k(p, side, opt);
  return method == M0Method::contour ? k.m0(x, y) : k.m0_residue(x, y);
}

cplx m_zw_eval(double x, double y, cplx z, cplx w, const ModelParams& p, Side side, const FiniteOptions& opt) {
  return SideKernel(p, side, opt).m_zw(x, y, z, w);
}

double script_b(double x, const EvalPoint& pt, const ModelParams& p, Side side, const FiniteOptions& opt) {
  return SideKernel(p, side, opt).script_b({x}, pt)[0];
}

double small_beta(double x, const EvalPoint& pt, const ModelParams& p, Side side, const FiniteOptions& opt) {
  return SideKernel(p, side, opt).small_beta({x}, pt)[0];
}

double script_c(double y, const EvalPoint& pt, const ModelParams& p, Side side, const FiniteOptions& opt) {
  return SideKernel(p, side, opt).script_c({y}, pt)[0];
}

double l_part(const EvalPoint& pt, const ModelParams& p, Side side, LMethod method, const FiniteOptions& opt) {
  const SideKernel k(p, side, opt);
  return method == LMethod::fredholm ? k.l_part(pt) : k.l_part_line(pt);
}

LimitKernel::LimitKernel(const ModelParams& params, const FiniteOptions& opt)
    : left_(params, Side::left, opt), right_(params, Side::right, opt) {}

double LimitKernel::left(const EvalPoint& pt) const {
  const auto& p = left_.params();
  return left_.l_part(pt) / (p.d1 * p.d2);
}

double LimitKernel::right(const EvalPoint& pt) const {
  const auto& p = right_.params();
  return right_.l_part(pt) / (p.d1 * p.d2);
}

double LimitKernel::operator()(const EvalPoint& pt) const { return left(pt) + right(pt) - q_weight(pt); }

double kernel_limit(const EvalPoint& pt, const ModelParams& p, const FiniteOptions& opt) {
  return LimitKernel(p, opt)(pt);
}

double equal_time_density(double t, double x, const LimitKernel& k) { return k(EvalPoint{t, x, t, x}); }

}  // namespace taclab
