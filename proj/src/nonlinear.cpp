#include "fnsc/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fnsc {
namespace {

SymbolTable duhamel_table(const FrequencyGrid& grid, double h, const PhysicalParams& params) {
  return SymbolTable::tabulate(grid, [&](const Vec3& xi) {
    const auto s = duhamel_coefficients(xi, h, params);
    return SymbolPair{-s.identity, -s.rotation};
  });
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Per-site gains |W(t)| = hypot(identity, rotation) for the sampled times,
// followed by the stationary kernel. On a transverse vector v the pair acts
// as a·v + b·(v×ξ̂) with v×ξ̂ orthogonal to v and of the same length, so the
// output magnitude is the gain times |v|.
std::vector<std::vector<double>> sampling_gains(const FrequencyGrid& grid, const PhysicalParams& params,
                                                const ProductSampling& sampling) {
  std::vector<std::vector<double>> out;
  out.reserve(sampling.samples + 1);
  auto gains = [&](auto&& coeffs) {
    std::vector<double> g(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        if (i == 0 || grid.is_nyquist(i)) continue;
        const SymbolPair s = coeffs(grid.wavevector(i));
        g[i] = std::hypot(s.identity, s.rotation);
      }
    });
    return g;
  };
  const double ratio = sampling.samples > 1
                           ? std::log(sampling.t_max / sampling.t_min) / static_cast<double>(sampling.samples - 1)
                           : 0.0;
  for (std::size_t k = 0; k < sampling.samples; ++k) {
    const double t = sampling.t_min * std::exp(ratio * static_cast<double>(k));
    out.push_back(gains([&](const Vec3& xi) { return duhamel_coefficients(xi, t, params); }));
  }
  out.push_back(gains([&](const Vec3& xi) { return kernel_coefficients(xi, params); }));
  return out;
}

// Shell-first sup over the sampled times of ‖gain·source‖ for a transverse
// source.
double sampled_norm(const SpectralField& source, std::span<const std::vector<double>> gains,
                    const FBParams& velocity, const LPFrame& frame) {
  const auto& g = source.grid();
  std::vector<double> mag(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mag[i] = source.magnitude(i);
  const double w = g.quadrature_weight();
  std::vector<double> sup(static_cast<std::size_t>(frame.shell_count()), 0.0);
  std::vector<double> buf;
  for (int j = frame.j_min(); j <= frame.j_max(); ++j) {
    const auto support = frame.support(j);
    const auto phi = frame.phi(j);
    const std::size_t s = static_cast<std::size_t>(j - frame.j_min());
    buf.resize(support.size());
    for (const auto& gain : gains) {
      for (std::size_t k = 0; k < support.size(); ++k) {
        const auto i = support[k];
        buf[k] = phi[i] * gain[i] * mag[i];
      }
      sup[s] = std::max(sup[s], lattice_lp_norm(buf, velocity.p, w));
    }
  }
  return combine_shells(sup, frame.j_min(), velocity.s, velocity.q);
}

// One representative of each ± pair of nonzero modes with max_i |k_i| <= band.
std::vector<std::array<int, 3>> canonical_modes(int band) {
  std::vector<std::array<int, 3>> out;
  for (int a = -band; a <= band; ++a)
    for (int b = -band; b <= band; ++b)
      for (int c = -band; c <= band; ++c) {
        const int lead = a != 0 ? a : (b != 0 ? b : c);
        if (lead > 0) out.push_back({a, b, c});
      }
  return out;
}

}  // namespace

std::size_t ProductCorpus::plane_wave_pairs() const {
  if (plane_wave_band <= 0) return 0;
  const std::size_t m = canonical_modes(plane_wave_band).size();
  return m * (m - 1);
}

std::size_t ProductCorpus::size() const {
  return random_pairs + planar_pairs + single_mode_pairs + plane_wave_pairs();
}

SpectralField projected_transport(const SpectralField& u, const SpectralField& v) {
  require_compatible(u.grid(), v.grid());
  auto div = tensor_divergence(pointwise_tensor_product(u, v, Dealias::apply));
  return leray_project(div);
}

SpectralField bilinear_step(const SpectralField& u, const SpectralField& v, double h,
                            const PhysicalParams& params) {
  return BilinearWorkspace(u.grid(), h, params).apply(u, v);
}

BilinearWorkspace::BilinearWorkspace(const FrequencyGrid& grid, double h, const PhysicalParams& params)
    : grid_(grid), h_(h), weights_(duhamel_table(grid, h, params)) {
  if (!(h > 0.0)) throw std::invalid_argument("BilinearWorkspace: step must be positive");
}

SpectralField BilinearWorkspace::apply(const SpectralField& u, const SpectralField& v) const {
  require_compatible(u.grid(), grid_);
  return integrate(projected_transport(u, v));
}

SpectralField BilinearWorkspace::integrate(const SpectralField& source) const {
  return weights_.apply(source);
}

const SpectralField& force_at(std::span<const TimedField> series, double t) {
  if (series.empty()) throw std::invalid_argument("force series is empty");
  if (series.front().time > t)
    throw std::invalid_argument("force series starts at t=" + std::to_string(series.front().time) +
                                ", after the requested time " + std::to_string(t));
  auto it = std::upper_bound(series.begin(), series.end(), t,
                             [](double v, const TimedField& tf) { return v < tf.time; });
  return std::prev(it)->field;
}

SpectralField forcing_term(std::span<const TimedField> series, double t, double h,
                           const PhysicalParams& params) {
  if (series.empty()) throw std::invalid_argument("forcing_term: force series is empty");
  if (series.front().time > 0.0)
    throw std::invalid_argument("forcing_term: force samples do not cover t=0");
  if (!(h > 0.0)) throw std::invalid_argument("forcing_term: step must be positive");
  const auto& grid = series.front().field.grid();
  SpectralField w(grid);
  if (t <= 0.0) return w;
  const auto semigroup = SymbolTable::tabulate(grid, [&](const Vec3& xi) {
    return semigroup_coefficients(xi, h, params);
  });
  const auto weights = SymbolTable::tabulate(grid, [&](const Vec3& xi) {
    return duhamel_coefficients(xi, h, params);
  });
  const auto steps = static_cast<std::size_t>(std::ceil(t / h - 1e-9));
  double now = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double step = std::min(h, t - now);
    const auto source = leray_project(force_at(series, now));
    if (step == h) {
      w = semigroup.apply(w) + weights.apply(source);
    } else {
      w = apply_semigroup(w, step, params) + apply_duhamel(source, step, params);
    }
    now = n + 1 == steps ? t : now + h;
  }
  w.set_time_tag(t);
  return w;
}

SpectralScalar paraproduct_T(const SpectralScalar& f, const SpectralScalar& g, const LPFrame& frame) {
  require_compatible(f.grid(), g.grid());
  SpectralScalar out(f.grid());
  for (int j = frame.j_min(); j <= frame.j_max(); ++j) {
    const auto low = low_pass(f, j - 1, frame);
    if (low.is_zero()) continue;
    out += pointwise_product(low, delta_j(g, j, frame), Dealias::skip);
  }
  return out;
}

SpectralScalar paraproduct_R(const SpectralScalar& f, const SpectralScalar& g, const LPFrame& frame) {
  require_compatible(f.grid(), g.grid());
  SpectralScalar out(f.grid());
  for (int j = frame.j_min(); j <= frame.j_max(); ++j) {
    SpectralScalar wide(g.grid());
    for (int k = j - 1; k <= j + 1; ++k)
      if (frame.has_shell(k)) wide += delta_j(g, k, frame);
    out += pointwise_product(delta_j(f, j, frame), wide, Dealias::skip);
  }
  return out;
}

double verify_paraproduct_identity(const SpectralScalar& f, const SpectralScalar& g,
                                   const LPFrame& frame) {
  const auto fg = pointwise_product(f, g, Dealias::skip);
  auto residual = fg;
  residual -= paraproduct_T(f, g, frame);
  residual -= paraproduct_T(g, f, frame);
  residual -= paraproduct_R(f, g, frame);
  const double scale = max_abs(inverse_transform(fg));
  const double res = max_abs(inverse_transform(residual));
  return scale > 0.0 ? res / scale : res;
}

double bilinear_time_norm(const SpectralField& u, const SpectralField& v,
                          const PhysicalParams& params, const FBParams& velocity,
                          const LPFrame& frame, const ProductSampling& sampling) {
  const auto gains = sampling_gains(u.grid(), params, sampling);
  return sampled_norm(projected_transport(u, v), gains, velocity, frame);
}

std::pair<SpectralField, SpectralField> corpus_pair(const FrequencyGrid& grid, std::uint64_t seed,
                                                    std::size_t k, const ProductCorpus& corpus) {
  if (corpus.bands.empty()) throw std::invalid_argument("corpus_pair: no bands");
  const std::uint64_t a = 2 * static_cast<std::uint64_t>(k);
  const int max_mode = corpus.bands[k % corpus.bands.size()];
  if (k < corpus.random_pairs) {
    BandSpec band{1, max_mode, false, 0.0};
    return {random_band_field(grid, seed + a, band), random_band_field(grid, seed + a + 1, band)};
  }
  k -= corpus.random_pairs;
  if (k < corpus.planar_pairs) {
    BandSpec band{1, max_mode, true, 0.0};
    return {random_band_field(grid, seed + a, band), random_band_field(grid, seed + a + 1, band)};
  }
  k -= corpus.planar_pairs;
  auto draw_dir = [&](std::uint64_t stream) {
    Vec3 d;
    for (int c = 0; c < 3; ++c) d[c] = 2.0 * keyed_uniform(seed + a + 1, stream * 8 + static_cast<std::uint64_t>(c)) - 1.0;
    return d;
  };
  if (k >= corpus.single_mode_pairs) {
    k -= corpus.single_mode_pairs;
    const auto modes = canonical_modes(corpus.plane_wave_band);
    const std::size_t m = modes.size();
    if (k >= corpus.plane_wave_pairs()) throw std::out_of_range("corpus_pair: index beyond corpus");
    const std::size_t first = k / (m - 1);
    std::size_t second = k % (m - 1);
    if (second >= first) ++second;
    // Each amplitude points along the other wave's vector: u's along l
    // maximizes |l·a| in the transport term (u·∇)v, and symmetrically for v.
    const auto& km = modes[first];
    const auto& lm = modes[second];
    const Vec3 kv(km[0], km[1], km[2]);
    const Vec3 lv(lm[0], lm[1], lm[2]);
    return {single_mode_field(grid, km, lv), single_mode_field(grid, lm, kv)};
  }
  auto draw_mode = [&](std::uint64_t stream) {
    const int span = 2 * max_mode + 1;
    std::array<int, 3> m{};
    do {
      for (int c = 0; c < 3; ++c) {
        const double r = keyed_uniform(seed + a, stream * 8 + static_cast<std::uint64_t>(c));
        m[static_cast<std::size_t>(c)] = static_cast<int>(r * span) - max_mode;
      }
      ++stream;
    } while (m == std::array<int, 3>{0, 0, 0});
    return m;
  };
  return {single_mode_field(grid, draw_mode(1), draw_dir(1)),
          single_mode_field(grid, draw_mode(1000), draw_dir(1000))};
}

ProductConstantReport measure_product_constant(const FrequencyGrid& grid, std::uint64_t corpus_seed,
                                               const PhysicalParams& params,
                                               const FBParams& velocity,
                                               const ProductCorpus& corpus,
                                               const ProductSampling& sampling) {
  velocity.validate();
  const LPFrame frame(grid);
  const auto gains = sampling_gains(grid, params, sampling);
  ProductConstantReport report;
  const std::size_t total = corpus.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    const auto [u, v] = corpus_pair(grid, corpus_seed, k, corpus);
    const double denom = fb_norm(u, velocity, frame) * fb_norm(v, velocity, frame);
    if (denom == 0.0) continue;
    const double ratio = sampled_norm(projected_transport(u, v), gains, velocity, frame) / denom;
    report.ratios.push_back(ratio);
    report.constant = std::max(report.constant, ratio);
    sum += ratio;
  }
  report.pairs = report.ratios.size();
  report.mean_ratio = report.pairs ? sum / static_cast<double>(report.pairs) : 0.0;
  return report;
}

ProductConstantReport measure_forcing_constant(const FrequencyGrid& grid, std::uint64_t corpus_seed,
                                               const PhysicalParams& params,
                                               const FBParams& velocity, const FBParams& force,
                                               const ProductCorpus& corpus,
                                               const ProductSampling& sampling) {
  velocity.validate();
  force.validate();
  const LPFrame frame(grid);
  const auto gains = sampling_gains(grid, params, sampling);
  ProductConstantReport report;
  const std::size_t total = corpus.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    const SpectralField f = corpus_pair(grid, corpus_seed, k, corpus).first;
    const double denom = fb_norm(f, force, frame);
    if (denom == 0.0) continue;
    const double ratio = params.nu * sampled_norm(leray_project(f), gains, velocity, frame) / denom;
    report.ratios.push_back(ratio);
    report.constant = std::max(report.constant, ratio);
    sum += ratio;
  }
  report.pairs = report.ratios.size();
  report.mean_ratio = report.pairs ? sum / static_cast<double>(report.pairs) : 0.0;
  return report;
}

ProductConstantReport measure_semigroup_constant(const FrequencyGrid& grid, std::uint64_t corpus_seed,
                                                 const PhysicalParams& params, const FBParams& velocity,
                                                 const ProductCorpus& corpus,
                                                 const ProductSampling& sampling) {
  velocity.validate();
  const LPFrame frame(grid);
  // |S(t)| = e^{-λt} on transverse vectors; t = 0 contributes the identity.
  std::vector<std::vector<double>> gains;
  gains.emplace_back(grid.size(), 1.0);
  gains.front()[0] = 0.0;
  const double ratio = sampling.samples > 1
                           ? std::log(sampling.t_max / sampling.t_min) / static_cast<double>(sampling.samples - 1)
                           : 0.0;
  for (std::size_t k = 0; k < sampling.samples; ++k) {
    const double t = sampling.t_min * std::exp(ratio * static_cast<double>(k));
    std::vector<double> g(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const auto s = semigroup_coefficients(grid.wavevector(i), t, params);
      g[i] = std::hypot(s.identity, s.rotation);
    }
    gains.push_back(std::move(g));
  }
  ProductConstantReport report;
  double sum = 0.0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const SpectralField u = corpus_pair(grid, corpus_seed, k, corpus).first;
    const double denom = fb_norm(u, velocity, frame);
    if (denom == 0.0) continue;
    const double r = sampled_norm(u, gains, velocity, frame) / denom;
    report.ratios.push_back(r);
    report.constant = std::max(report.constant, r);
    sum += r;
  }
  report.pairs = report.ratios.size();
  report.mean_ratio = report.pairs ? sum / static_cast<double>(report.pairs) : 0.0;
  return report;
}

}  // namespace fnsc
