#include "fnsc/spectral_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "fnsc/parallel.hpp"

namespace fnsc {
namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per resolution and never destroyed.
struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    const int ni = static_cast<int>(n);
    auto* buf = fftw_alloc_complex(n * n * n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_3d(ni, ni, ni, buf, buf, FFTW_FORWARD, flags),
               fftw_plan_dft_3d(ni, ni, ni, buf, buf, FFTW_BACKWARD, flags)};
    fftw_free(buf);
    it = cache.emplace(n, p).first;
  }
  return it->second;
}

fftw_complex* as_fftw(Complex* z) { return reinterpret_cast<fftw_complex*>(z); }

double forward_scale(const FrequencyGrid& g) {
  const double n3 = static_cast<double>(g.size());
  const double l3 = g.period() * g.period() * g.period();
  return l3 / (std::pow(kTwoPi, 1.5) * n3);
}

double inverse_scale(const FrequencyGrid& g) {
  const double l3 = g.period() * g.period() * g.period();
  return std::pow(kTwoPi, 1.5) / l3;
}

void forward_component(std::span<const double> in, std::span<Complex> out, const FrequencyGrid& g) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Complex{in[i], 0.0};
  const auto& p = plans_for(g.n());
  fftw_execute_dft(p.forward, as_fftw(out.data()), as_fftw(out.data()));
  const double s = forward_scale(g);
  for (auto& z : out) z *= s;
}

void inverse_component(std::span<const Complex> in, std::span<double> out, const FrequencyGrid& g,
                       std::vector<Complex>& work) {
  work.assign(in.begin(), in.end());
  const auto& p = plans_for(g.n());
  fftw_execute_dft(p.backward, as_fftw(work.data()), as_fftw(work.data()));
  const double s = inverse_scale(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = work[i].real() * s;
}

constexpr double kHermitianTolerance = 1e-10;

}  // namespace

template <std::size_t C>
SpectralArray<C> forward_transform(std::span<const double> physical, const FrequencyGrid& grid,
                                   MeanMode mean) {
  if (physical.size() != C * grid.size())
    throw std::invalid_argument("forward_transform: physical array does not match grid dimensions");
  SpectralArray<C> out(grid);
  for (std::size_t c = 0; c < C; ++c)
    forward_component(physical.subspan(c * grid.size(), grid.size()), out.component(c), grid);
  if (mean == MeanMode::project) remove_mean(out);
  return out;
}

template <std::size_t C>
std::vector<double> inverse_transform(const SpectralArray<C>& field) {
  if (hermitian_defect(field) > kHermitianTolerance)
    throw std::domain_error("inverse_transform: coefficients are not Hermitian-symmetric");
  const auto& g = field.grid();
  std::vector<double> out(C * g.size());
  std::vector<Complex> work;
  for (std::size_t c = 0; c < C; ++c)
    inverse_component(field.component(c), std::span<double>(out).subspan(c * g.size(), g.size()), g,
                      work);
  return out;
}

template <std::size_t C>
double hermitian_defect(const SpectralArray<C>& field) {
  const auto& g = field.grid();
  double defect = 0.0;
  double scale = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    auto comp = field.component(c);
    for (std::size_t i = 0; i < g.size(); ++i) {
      defect = std::max(defect, std::abs(comp[g.negated(i)] - std::conj(comp[i])));
      scale = std::max(scale, std::abs(comp[i]));
    }
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

template <std::size_t C>
void symmetrize(SpectralArray<C>& field) {
  const auto& g = field.grid();
  for (std::size_t c = 0; c < C; ++c) {
    auto comp = field.component(c);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t j = g.negated(i);
      if (j < i) continue;
      const Complex avg = 0.5 * (comp[i] + std::conj(comp[j]));
      comp[i] = avg;
      comp[j] = std::conj(avg);
    }
  }
}

template <std::size_t C>
void apply_dealias_mask(SpectralArray<C>& field) {
  const auto& g = field.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.in_dealias_band(i)) continue;
    for (std::size_t c = 0; c < C; ++c) field.at(c, i) = Complex{};
  }
}

template <std::size_t C>
void remove_mean(SpectralArray<C>& field) {
  for (std::size_t c = 0; c < C; ++c) field.at(c, 0) = Complex{};
}

#define FNSC_INSTANTIATE(C)                                                                          \
  template SpectralArray<C> forward_transform<C>(std::span<const double>, const FrequencyGrid&,    \
                                                 MeanMode);                                          \
  template std::vector<double> inverse_transform<C>(const SpectralArray<C>&);                      \
  template double hermitian_defect<C>(const SpectralArray<C>&);                                    \
  template void symmetrize<C>(SpectralArray<C>&);                                                  \
  template void apply_dealias_mask<C>(SpectralArray<C>&);                                          \
  template void remove_mean<C>(SpectralArray<C>&);
FNSC_INSTANTIATE(1)
FNSC_INSTANTIATE(3)
FNSC_INSTANTIATE(9)
#undef FNSC_INSTANTIATE

SpectralTensor pointwise_tensor_product(const SpectralField& u, const SpectralField& v,
                                        Dealias dealias) {
  require_compatible(u.grid(), v.grid());
  const auto& g = u.grid();
  const std::size_t sites = g.size();
  const auto pu = inverse_transform(u);
  const bool same = (&u == &v);
  const auto pv = same ? std::vector<double>{} : inverse_transform(v);
  const std::vector<double>& rv = same ? pu : pv;

  SpectralTensor out(g);
  std::vector<double> product(sites);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (same && k < m) {
        auto src = out.component(3 * k + m);
        std::copy(src.begin(), src.end(), out.component(3 * m + k).begin());
        continue;
      }
      const double* a = pu.data() + m * sites;
      const double* b = rv.data() + k * sites;
      for (std::size_t i = 0; i < sites; ++i) product[i] = a[i] * b[i];
      forward_component(product, out.component(3 * m + k), g);
    }
  }
  if (dealias == Dealias::apply) apply_dealias_mask(out);
  return out;
}

SpectralScalar pointwise_product(const SpectralScalar& f, const SpectralScalar& g,
                                 Dealias dealias) {
  require_compatible(f.grid(), g.grid());
  const auto pf = inverse_transform(f);
  const auto pg = inverse_transform(g);
  std::vector<double> product(pf.size());
  for (std::size_t i = 0; i < pf.size(); ++i) product[i] = pf[i] * pg[i];
  auto out = forward_transform<1>(product, f.grid(), MeanMode::keep);
  if (dealias == Dealias::apply) apply_dealias_mask(out);
  return out;
}

SpectralScalar divergence(const SpectralField& field) {
  const auto& g = field.grid();
  SpectralScalar out(g, field.time_tag());
  auto dst = out.component(0);
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (g.is_nyquist(i)) continue;
      const Vec3 xi = g.wavevector(i);
      Complex s{};
      for (std::size_t c = 0; c < 3; ++c) s += xi[c] * field.at(c, i);
      dst[i] = Complex{0.0, 1.0} * s;
    }
  });
  return out;
}

SpectralField tensor_divergence(const SpectralTensor& tensor) {
  const auto& g = tensor.grid();
  SpectralField out(g, tensor.time_tag());
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (g.is_nyquist(i)) continue;
      const Vec3 xi = g.wavevector(i);
      for (std::size_t k = 0; k < 3; ++k) {
        Complex s{};
        for (std::size_t m = 0; m < 3; ++m) s += xi[m] * tensor.at(3 * m + k, i);
        out.at(k, i) = Complex{0.0, 1.0} * s;
      }
    }
  });
  return out;
}

SpectralField leray_project(const SpectralField& field) {
  const auto& g = field.grid();
  SpectralField out(g, field.time_tag());
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (i == 0 || g.is_nyquist(i)) continue;
      const Vec3 xi = g.wavevector(i);
      const double k2 = xi.squaredNorm();
      Complex dot{};
      for (std::size_t c = 0; c < 3; ++c) dot += xi[c] * field.at(c, i);
      for (std::size_t c = 0; c < 3; ++c) out.at(c, i) = field.at(c, i) - xi[c] * dot / k2;
    }
  });
  return out;
}

double divergence_defect(const SpectralField& field) {
  const auto& g = field.grid();
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 xi = g.wavevector(i);
    Complex dot{};
    for (std::size_t c = 0; c < 3; ++c) dot += xi[c] * field.at(c, i);
    worst = std::max(worst, std::abs(dot));
    scale = std::max(scale, field.magnitude(i));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

double l2_inner(const SpectralField& u, const SpectralField& v) {
  require_compatible(u.grid(), v.grid());
  double s = 0.0;
  auto a = u.coeffs();
  auto b = v.coeffs();
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] * std::conj(b[i])).real();
  return s * u.grid().quadrature_weight();
}

double energy(const SpectralField& field) { return 0.5 * l2_inner(field, field); }

}  // namespace fnsc
