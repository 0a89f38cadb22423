#include "fnsc/lp_frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fnsc {
namespace {

double theta(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

constexpr double kInner = 3.0 / 4.0;
constexpr double kOuter = 4.0 / 3.0;

double dyadic(int j) { return std::ldexp(1.0, j); }

std::string shell_message(const char* what, int j, const LPFrame& frame) {
  return std::string(what) + ": shell " + std::to_string(j) + " outside [" +
         std::to_string(frame.j_min()) + ", " + std::to_string(frame.j_max()) + "]";
}

}  // namespace

double lp_chi(double r) {
  if (r <= kInner) return 1.0;
  if (r >= kOuter) return 0.0;
  const double t = (kOuter - r) / (kOuter - kInner);
  const double a = theta(t);
  const double b = theta(1.0 - t);
  return a / (a + b);
}

double lp_phi(double r) { return lp_chi(0.5 * r) - lp_chi(r); }

LPFrame::LPFrame(const FrequencyGrid& grid)
    : grid_(grid),
      j_min_(static_cast<int>(std::floor(std::log2(grid.base_wavenumber() * kInner)))),
      j_max_(static_cast<int>(std::ceil(std::log2(grid.max_wavenumber() * kOuter)))) {
  const std::size_t sites = grid_.size();
  phi_.assign(static_cast<std::size_t>(shell_count()) * sites, 0.0);
  support_.resize(static_cast<std::size_t>(shell_count()));
  std::vector<double> radius(sites);
  for (std::size_t i = 0; i < sites; ++i) radius[i] = grid_.wavenumber(i);
  for (int j = j_min_; j <= j_max_; ++j) {
    const std::size_t s = static_cast<std::size_t>(j - j_min_);
    const double scale = dyadic(-j);
    double* row = phi_.data() + s * sites;
    for (std::size_t i = 1; i < sites; ++i) {
      row[i] = lp_phi(radius[i] * scale);
      if (row[i] != 0.0) support_[s].push_back(static_cast<std::uint32_t>(i));
    }
  }
}

std::span<const double> LPFrame::phi(int j) const {
  if (!has_shell(j)) throw std::out_of_range(shell_message("LPFrame::phi", j, *this));
  return {phi_.data() + static_cast<std::size_t>(j - j_min_) * grid_.size(), grid_.size()};
}

std::span<const std::uint32_t> LPFrame::support(int j) const {
  if (!has_shell(j)) throw std::out_of_range(shell_message("LPFrame::support", j, *this));
  return support_[static_cast<std::size_t>(j - j_min_)];
}

double LPFrame::psi_at(int j, std::size_t idx) const {
  double s = 0.0;
  for (int k = j_min_; k <= std::min(j - 1, j_max_); ++k) s += phi_at(k, idx);
  return s;
}

bool LPFrame::covered(std::size_t idx) const {
  if (idx == 0) return false;
  const double r = grid_.wavenumber(idx);
  return lp_phi(r * dyadic(-(j_min_ - 1))) == 0.0 && lp_phi(r * dyadic(-(j_max_ + 1))) == 0.0;
}

LPFrame LPFrame::with_scaled_shell(int j, double factor) const {
  if (!has_shell(j)) throw std::out_of_range(shell_message("LPFrame::with_scaled_shell", j, *this));
  LPFrame out = *this;
  const std::size_t s = static_cast<std::size_t>(j - j_min_);
  for (auto idx : out.support_[s]) out.phi_[s * grid_.size() + idx] *= factor;
  return out;
}

LPFrame build_frame(const FrequencyGrid& grid) { return LPFrame(grid); }

double partition_defect(const LPFrame& frame) {
  const auto& g = frame.grid();
  double worst = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!frame.covered(i)) continue;
    double s = 0.0;
    for (int j = frame.j_min(); j <= frame.j_max(); ++j) s += frame.phi_at(j, i);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

FBParams FBParams::critical_velocity(double alpha, double p, double q) {
  return FBParams{4.0 - 2.0 * alpha - 3.0 / p, p, q, Critical::velocity, alpha};
}

FBParams FBParams::critical_force(double alpha, double p, double q) {
  return FBParams{4.0 - 4.0 * alpha - 3.0 / p, p, q, Critical::force, alpha};
}

void FBParams::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument("FBParams: p must exceed 1");
  if (!(q >= 1.0)) throw std::invalid_argument("FBParams: q must be at least 1");
  if (critical == Critical::none) return;
  if (!alpha) throw std::invalid_argument("FBParams: critical index requires alpha");
  const double expected = critical == Critical::velocity ? 4.0 - 2.0 * *alpha - 3.0 / p
                                                         : 4.0 - 4.0 * *alpha - 3.0 / p;
  if (std::abs(expected - s) > 1e-15)
    throw std::invalid_argument("FBParams: s does not match the critical index for (alpha, p)");
}

double lattice_lp_norm(std::span<const double> magnitudes, double p, double weight) {
  double peak = 0.0;
  for (double m : magnitudes) peak = std::max(peak, m);
  if (peak == 0.0 || std::isinf(p)) return peak;
  double s = 0.0;
  if (p == 2.0) {
    for (double m : magnitudes) s += (m / peak) * (m / peak);
    return peak * std::sqrt(weight * s);
  }
  for (double m : magnitudes) s += std::pow(m / peak, p);
  return peak * std::pow(weight * s, 1.0 / p);
}

template <std::size_t C>
std::vector<double> shell_norms(const SpectralArray<C>& field, double p, const LPFrame& frame) {
  require_compatible(field.grid(), frame.grid());
  const double w = frame.grid().quadrature_weight();
  std::vector<double> out(static_cast<std::size_t>(frame.shell_count()));
  std::vector<double> buf;
  for (int j = frame.j_min(); j <= frame.j_max(); ++j) {
    const auto sup = frame.support(j);
    const auto phi = frame.phi(j);
    buf.resize(sup.size());
    for (std::size_t k = 0; k < sup.size(); ++k) buf[k] = phi[sup[k]] * field.magnitude(sup[k]);
    out[static_cast<std::size_t>(j - frame.j_min())] = lattice_lp_norm(buf, p, w);
  }
  return out;
}

double combine_shells(std::span<const double> shell_values, int j_min, double s, double q) {
  std::vector<double> terms(shell_values.size());
  double peak = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    terms[k] = std::exp2(s * (j_min + static_cast<int>(k))) * shell_values[k];
    peak = std::max(peak, terms[k]);
  }
  if (peak == 0.0 || std::isinf(q)) return peak;
  double sum = 0.0;
  for (double t : terms) sum += std::pow(t / peak, q);
  return peak * std::pow(sum, 1.0 / q);
}

template <std::size_t C>
double fb_norm(const SpectralArray<C>& field, const FBParams& params, const LPFrame& frame) {
  params.validate();
  const auto a = shell_norms(field, params.p, frame);
  return combine_shells(a, frame.j_min(), params.s, params.q);
}

template <std::size_t C>
SpectralArray<C> delta_j(const SpectralArray<C>& field, int j, const LPFrame& frame) {
  require_compatible(field.grid(), frame.grid());
  if (!frame.has_shell(j)) throw std::out_of_range(shell_message("delta_j", j, frame));
  SpectralArray<C> out(field.grid(), field.time_tag());
  const auto phi = frame.phi(j);
  for (auto idx : frame.support(j))
    for (std::size_t c = 0; c < C; ++c) out.at(c, idx) = phi[idx] * field.at(c, idx);
  return out;
}

template <std::size_t C>
SpectralArray<C> low_pass(const SpectralArray<C>& field, int j, const LPFrame& frame) {
  require_compatible(field.grid(), frame.grid());
  SpectralArray<C> out(field.grid(), field.time_tag());
  for (int k = frame.j_min(); k <= std::min(j - 1, frame.j_max()); ++k) {
    const auto phi = frame.phi(k);
    for (auto idx : frame.support(k))
      for (std::size_t c = 0; c < C; ++c) out.at(c, idx) += phi[idx] * field.at(c, idx);
  }
  return out;
}

#define FNSC_INSTANTIATE(C)                                                                        \
  template std::vector<double> shell_norms<C>(const SpectralArray<C>&, double, const LPFrame&);  \
  template double fb_norm<C>(const SpectralArray<C>&, const FBParams&, const LPFrame&);          \
  template SpectralArray<C> delta_j<C>(const SpectralArray<C>&, int, const LPFrame&);            \
  template SpectralArray<C> low_pass<C>(const SpectralArray<C>&, int, const LPFrame&);
FNSC_INSTANTIATE(1)
FNSC_INSTANTIATE(3)
FNSC_INSTANTIATE(9)
#undef FNSC_INSTANTIATE

double time_fb_norm(std::span<const TimedField> series, const FBParams& params,
                    const LPFrame& frame, TimeNormMode mode) {
  if (series.empty()) throw std::invalid_argument("time_fb_norm: empty series");
  params.validate();
  if (mode == TimeNormMode::time_first) {
    double worst = 0.0;
    for (const auto& tf : series) worst = std::max(worst, fb_norm(tf.field, params, frame));
    return worst;
  }
  std::vector<double> sup(static_cast<std::size_t>(frame.shell_count()), 0.0);
  for (const auto& tf : series) {
    const auto a = shell_norms(tf.field, params.p, frame);
    for (std::size_t k = 0; k < sup.size(); ++k) sup[k] = std::max(sup[k], a[k]);
  }
  return combine_shells(sup, frame.j_min(), params.s, params.q);
}

BernsteinReport check_bernstein(const SpectralField& field, int j, std::array<int, 3> beta,
                                double p1, double p2, double support_factor, double constant) {
  if (p2 > p1) throw std::invalid_argument("check_bernstein: requires p2 <= p1");
  const auto& g = field.grid();
  const double radius = support_factor * dyadic(j);
  std::vector<double> plain(g.size());
  std::vector<double> weighted(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double m = field.magnitude(i);
    if (m == 0.0) continue;
    const Vec3 xi = g.wavevector(i);
    if (xi.norm() > radius * (1.0 + 1e-12))
      throw std::invalid_argument("check_bernstein: field not supported in |xi| <= A 2^j");
    double mono = 1.0;
    for (int c = 0; c < 3; ++c) mono *= std::pow(std::abs(xi[c]), beta[static_cast<std::size_t>(c)]);
    plain[i] = m;
    weighted[i] = mono * m;
  }
  const double w = g.quadrature_weight();
  const int order = beta[0] + beta[1] + beta[2];
  const double lhs = lattice_lp_norm(weighted, p2, w);
  const double inv_p1 = std::isinf(p1) ? 0.0 : 1.0 / p1;
  const double inv_p2 = std::isinf(p2) ? 0.0 : 1.0 / p2;
  const double rhs =
      constant * std::exp2(j * order + 3.0 * j * (inv_p2 - inv_p1)) * lattice_lp_norm(plain, p1, w);
  return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0};
}

ScalingReport check_scaling(const SpectralField& field, int k, const FBParams& params,
                            const LPFrame& frame) {
  require_compatible(field.grid(), frame.grid());
  params.validate();
  const auto& g = field.grid();
  const FrequencyGrid nested(g.n(), g.period() * dyadic(-k), g.dealias_fraction());
  std::vector<Complex> coeffs(field.coeffs().begin(), field.coeffs().end());
  const double amp = dyadic(-3 * k);
  for (auto& z : coeffs) z *= amp;
  const SpectralField dilated(nested, std::move(coeffs), field.time_tag());
  const double inv_p = std::isinf(params.p) ? 0.0 : 1.0 / params.p;
  const double lhs = fb_norm(dilated, params, build_frame(nested));
  const double rhs = std::exp2(k * (params.s - 3.0 + 3.0 * inv_p)) * fb_norm(field, params, frame);
  return {lhs, rhs};
}

}  // namespace fnsc
