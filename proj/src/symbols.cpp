#include "fnsc/symbols.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fnsc {
namespace {

// Below this |z|h the closed form (1 - e^{-zh})/z loses digits to
// cancellation; the Taylor series converges fast there.
constexpr double kSeriesThreshold = 0.1;

Complex exp_integral(Complex z, double h) {
  const Complex zh = z * h;
  if (std::abs(zh) < kSeriesThreshold) {
    Complex term = 1.0;
    Complex sum = 1.0;
    for (int k = 1; k < 30; ++k) {
      term *= -zh / static_cast<double>(k + 1);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return h * sum;
  }
  const double lam = z.real();
  const double b = -z.imag();
  const double decay = std::exp(-lam * h);
  const double half = std::sin(0.5 * b * h);
  const double a = -std::expm1(-lam * h) + decay * 2.0 * half * half;
  const double bb = decay * std::sin(b * h);
  const double den = lam * lam + b * b;
  return {(a * lam + bb * b) / den, (a * b - bb * lam) / den};
}

}  // namespace

void PhysicalParams::validate(double p) const {
  if (!(nu > 0.0)) throw std::invalid_argument("PhysicalParams: nu must be positive");
  const double hi = alpha_upper(p);
  if (!(alpha > 0.5 && alpha < hi))
    throw std::invalid_argument("PhysicalParams: alpha=" + std::to_string(alpha) +
                                " outside the open interval (1/2, " + std::to_string(hi) + ")");
  if (!std::isfinite(omega)) throw std::invalid_argument("PhysicalParams: omega must be finite");
}

PhysicalParams PhysicalParams::checked(double nu, double alpha, double omega, double p) {
  PhysicalParams out{nu, alpha, omega};
  out.validate(p);
  return out;
}

Mat3 SymbolPair::matrix(const Vec3& xi) const {
  if (xi.isZero(0.0)) return Mat3::Zero();
  return identity * Mat3::Identity() + rotation * rotation_matrix(xi);
}

Mat3 rotation_matrix(const Vec3& xi) {
  const double r = xi.norm();
  if (r == 0.0) return Mat3::Zero();
  Mat3 m;
  m << 0.0, xi[2], -xi[1], -xi[2], 0.0, xi[0], xi[1], -xi[0], 0.0;
  return m / r;
}

Mat3 leray_symbol(const Vec3& xi) {
  const double r2 = xi.squaredNorm();
  if (r2 == 0.0) return Mat3::Zero();
  return Mat3::Identity() - xi * xi.transpose() / r2;
}

SymbolPair semigroup_coefficients(const Vec3& xi, double t, const PhysicalParams& params) {
  if (t < 0.0) throw std::invalid_argument("semigroup: negative time");
  if (xi.isZero(0.0)) return {};
  const double decay = std::exp(-dissipation_rate(xi, params) * t);
  const double phase = rotation_rate(xi, params) * t;
  return {decay * std::cos(phase), decay * std::sin(phase)};
}

Mat3 semigroup_symbol(const Vec3& xi, double t, const PhysicalParams& params) {
  return semigroup_coefficients(xi, t, params).matrix(xi);
}

SymbolPair duhamel_coefficients(const Vec3& xi, double h, const PhysicalParams& params) {
  if (h < 0.0) throw std::invalid_argument("duhamel: negative step");
  if (xi.isZero(0.0) || h == 0.0) return {};
  const Complex z{dissipation_rate(xi, params), -rotation_rate(xi, params)};
  const Complex v = exp_integral(z, h);
  return {v.real(), v.imag()};
}

Mat3 duhamel_weights(const Vec3& xi, double h, const PhysicalParams& params) {
  return duhamel_coefficients(xi, h, params).matrix(xi);
}

SymbolPair kernel_coefficients(const Vec3& xi, const PhysicalParams& params) {
  if (xi.isZero(0.0)) return {};
  const double lam = dissipation_rate(xi, params);
  const double b = rotation_rate(xi, params);
  const double den = lam * lam + b * b;
  return {lam / den, b / den};
}

Mat3 stationary_kernel(const Vec3& xi, const PhysicalParams& params) {
  return kernel_coefficients(xi, params).matrix(xi);
}

XWeights x_weight_coefficients(const Vec3& xi, const PhysicalParams& params, double p) {
  const double r = xi.norm();
  if (r == 0.0) return {};
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double nu = params.nu;
  const double om = params.omega;
  const double den = nu * nu * std::pow(r, 4.0 * params.alpha + 2.0) + om * om * xi[2] * xi[2];
  return {nu * std::pow(r, 6.0 - 3.0 * inv_p) / den,
          std::abs(om * xi[2]) * std::pow(r, 5.0 - 2.0 * params.alpha - 3.0 * inv_p) / den};
}

std::pair<Mat3, Mat3> x_norm_weights(const Vec3& xi, const PhysicalParams& params, double p) {
  if (xi.isZero(0.0)) return {Mat3::Zero(), Mat3::Zero()};
  const auto w = x_weight_coefficients(xi, params, p);
  return {w.w1 * Mat3::Identity(), w.w2 * rotation_matrix(xi)};
}

SpectralField SymbolTable::apply(const SpectralField& field) const {
  require_compatible(field.grid(), grid_);
  SpectralField out(grid_, field.time_tag());
  parallel_for(grid_.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const SymbolPair& s = pairs_[i];
      if (s.identity == 0.0 && s.rotation == 0.0) continue;
      const Vec3 xi = grid_.wavevector(i);
      const CVec3 v(field.at(0, i), field.at(1, i), field.at(2, i));
      const CVec3 r = s.apply(xi / xi.norm(), v);
      for (std::size_t c = 0; c < 3; ++c) out.at(c, i) = r[static_cast<Eigen::Index>(c)];
    }
  });
  return out;
}

SpectralField apply_semigroup(const SpectralField& field, double t, const PhysicalParams& params) {
  if (t < 0.0) throw std::invalid_argument("apply_semigroup: negative time");
  return SymbolTable::tabulate(field.grid(), [&](const Vec3& xi) {
           return semigroup_coefficients(xi, t, params);
         }).apply(field);
}

SpectralField apply_duhamel(const SpectralField& field, double h, const PhysicalParams& params) {
  return SymbolTable::tabulate(field.grid(), [&](const Vec3& xi) {
           return duhamel_coefficients(xi, h, params);
         }).apply(field);
}

SpectralField apply_kernel(const SpectralField& field, const PhysicalParams& params) {
  return SymbolTable::tabulate(field.grid(), [&](const Vec3& xi) {
           return kernel_coefficients(xi, params);
         }).apply(field);
}

XShellNorms x_shell_norms(const SpectralField& field, const PhysicalParams& params, double p,
                          const LPFrame& frame, const SiteMask& mask) {
  require_compatible(field.grid(), frame.grid());
  const auto& g = field.grid();
  if (!mask.empty() && mask.size() != g.size())
    throw std::invalid_argument("x_norm: mask size does not match grid");
  // Per-site |w₁ f̂| and |w₂ R f̂|; |R(ξ)v| is the magnitude of v's
  // component orthogonal to ξ.
  std::vector<double> m1(g.size(), 0.0);
  std::vector<double> m2(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (i == 0 || (!mask.empty() && !mask[i])) continue;
      const Vec3 xi = g.wavevector(i);
      const auto w = x_weight_coefficients(xi, params, p);
      const CVec3 v(field.at(0, i), field.at(1, i), field.at(2, i));
      m1[i] = w.w1 * v.norm();
      if (w.w2 != 0.0) m2[i] = w.w2 * v.cross((xi / xi.norm()).cast<Complex>()).norm();
    }
  });
  const double wq = g.quadrature_weight();
  XShellNorms out{std::vector<double>(static_cast<std::size_t>(frame.shell_count())),
                  std::vector<double>(static_cast<std::size_t>(frame.shell_count()))};
  std::vector<double> buf;
  for (int j = frame.j_min(); j <= frame.j_max(); ++j) {
    const auto sup = frame.support(j);
    const auto phi = frame.phi(j);
    const std::size_t s = static_cast<std::size_t>(j - frame.j_min());
    buf.resize(sup.size());
    for (std::size_t k = 0; k < sup.size(); ++k) buf[k] = phi[sup[k]] * m1[sup[k]];
    out.w1[s] = lattice_lp_norm(buf, p, wq);
    for (std::size_t k = 0; k < sup.size(); ++k) buf[k] = phi[sup[k]] * m2[sup[k]];
    out.w2[s] = lattice_lp_norm(buf, p, wq);
  }
  return out;
}

double x_norm(const SpectralField& field, const PhysicalParams& params, const FBParams& fb,
              const LPFrame& frame, const SiteMask& mask) {
  fb.validate();
  const auto a = x_shell_norms(field, params, fb.p, frame, mask);
  return combine_shells(a.w1, frame.j_min(), 0.0, fb.q) + combine_shells(a.w2, frame.j_min(), 0.0, fb.q);
}

}  // namespace fnsc
