#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "fnsc/data_gen.hpp"
#include "fnsc/spectral_field.hpp"
#include "fnsc/symbols.hpp"

/// Reference computations for the tests. Each one is written from the
/// defining formula with no shortcut shared with the library.
namespace fnsc::oracle {

/// Direct lattice convolution (u⊗v)^(ξ) = (2π)^{-3/2} dξ Σ_η û(η) v̂(ξ-η),
/// kept only on the dealias band. O(n⁶); use n <= 8.
inline SpectralTensor tensor_convolution(const SpectralField& u, const SpectralField& v) {
  const auto& g = u.grid();
  const int n = static_cast<int>(g.n());
  const double scale = g.quadrature_weight() / std::pow(2.0 * std::numbers::pi, 1.5);
  SpectralTensor out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.in_dealias_band(i)) continue;
    const auto xi = g.signed_modes(i);
    for (std::size_t e = 0; e < g.size(); ++e) {
      const auto eta = g.signed_modes(e);
      std::array<int, 3> d{};
      bool ok = true;
      for (std::size_t c = 0; c < 3; ++c) {
        d[c] = xi[c] - eta[c];
        ok = ok && d[c] >= -n / 2 && d[c] < n / 2;
      }
      if (!ok) continue;
      const std::size_t r = g.flat_index(d[0], d[1], d[2]);
      for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t k = 0; k < 3; ++k) out.at(3 * m + k, i) += scale * u.at(m, e) * v.at(k, r);
    }
  }
  return out;
}

/// R(ξ) built column by column from v ↦ (v × ξ)/|ξ|.
inline Mat3 rotation(const Vec3& xi) {
  Mat3 m;
  for (int c = 0; c < 3; ++c) m.col(c) = Vec3::Unit(c).cross(xi) / xi.norm();
  return m;
}

inline Mat3 leray(const Vec3& xi) { return Mat3::Identity() - xi * xi.transpose() / xi.squaredNorm(); }

/// e^{-ν|ξ|^{2α}t}[cos(bt) I + sin(bt) R(ξ)] with b = Ωξ₃/|ξ|.
inline Mat3 semigroup(const Vec3& xi, double t, double nu, double alpha, double omega) {
  const double decay = std::exp(-nu * std::pow(xi.squaredNorm(), alpha) * t);
  const double b = omega * xi[2] / xi.norm();
  return decay * (std::cos(b * t) * Mat3::Identity() + std::sin(b * t) * rotation(xi));
}

/// Adaptive Simpson with Richardson correction on [a, b].
template <class T, class F>
T adaptive_simpson(F&& f, double a, double b, double tol, int depth = 30) {
  struct Rec {
    static T run(F& f, double a, double b, T fa, T fm, T fb, T whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const T flm = f(lm);
      const T frm = f(rm);
      const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const T delta = left + right - whole;
      // The relative floor stops refinement once rounding dominates delta.
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol || std::abs(delta) <= 1e-15 * std::abs(left + right))
        return left + right + delta / 15.0;
      return run(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             run(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const T fa = f(a);
  const T fb = f(b);
  const T fm = f(0.5 * (a + b));
  return Rec::run(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

/// ∫₀^∞ e^{-λτ}e^{ibτ} dτ by adaptive Simpson over panels no longer than
/// min(1/λ, π/|b|), truncated where e^{-λτ} < 1e-17.
inline std::complex<double> damped_oscillation_integral(double lambda, double b, double tol = 1e-15) {
  if (!(lambda > 0.0)) throw std::invalid_argument("damped_oscillation_integral: lambda must be positive");
  const double end = 40.0 / lambda;
  double panel = 1.0 / lambda;
  if (b != 0.0) panel = std::min(panel, std::numbers::pi / std::abs(b));
  const auto count = static_cast<std::size_t>(std::ceil(end / panel));
  panel = end / static_cast<double>(count);
  auto f = [&](double t) { return std::exp(std::complex<double>(-lambda * t, b * t)); };
  std::complex<double> sum{};
  for (std::size_t k = 0; k < count; ++k) {
    const double a = panel * static_cast<double>(k);
    sum += adaptive_simpson<std::complex<double>>(f, a, a + panel, tol * panel * lambda);
  }
  return sum;
}

/// ∫₀^∞ of the semigroup symbol, assembled from the quadrature above.
inline Mat3 semigroup_integral(const Vec3& xi, double nu, double alpha, double omega) {
  const double lambda = nu * std::pow(xi.squaredNorm(), alpha);
  const double b = omega * xi[2] / xi.norm();
  const auto z = damped_oscillation_integral(lambda, b);
  return z.real() * Mat3::Identity() + z.imag() * rotation(xi);
}

/// Fourth-order central difference of f at x.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

/// Newton's method from x0; throws when it fails to settle within 100 steps.
inline double newton(const std::function<double(double)>& f, const std::function<double(double)>& df, double x0,
                     double tol = 1e-15) {
  double x = x0;
  for (int it = 0; it < 100; ++it) {
    const double step = f(x) / df(x);
    x -= step;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(x))) return x;
  }
  throw std::runtime_error("newton: no convergence");
}

/// Direct FB norm: φ_j evaluated from its radial profile at every site.
inline double fb_norm(const SpectralField& f, double s, double p, double q, int j_lo, int j_hi) {
  const auto& g = f.grid();
  double total = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    double acc = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
      const double phi = lp_phi(g.wavenumber(i) * std::exp2(-j));
      if (phi == 0.0) continue;
      const double a = phi * f.magnitude(i);
      acc = std::isinf(p) ? std::max(acc, a) : acc + std::pow(a, p);
    }
    const double shell = std::isinf(p) ? acc : std::pow(g.quadrature_weight() * acc, 1.0 / p);
    const double w = std::exp2(j * s) * shell;
    total = std::isinf(q) ? std::max(total, w) : total + std::pow(w, q);
  }
  return std::isinf(q) ? total : std::pow(total, 1.0 / q);
}

/// -W(h)·P·iξ·(u⊗v)^ from the direct convolution, with W(h) from adaptive
/// quadrature of the semigroup over [0, h].
inline SpectralField bilinear_step(const SpectralField& u, const SpectralField& v, double h,
                                   const PhysicalParams& params) {
  const auto& g = u.grid();
  const auto tensor = tensor_convolution(u, v);
  SpectralField out(g);
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!g.in_dealias_band(i)) continue;
    const Vec3 xi = g.wavevector(i);
    CVec3 div = CVec3::Zero();
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) div[k] += std::complex<double>(0.0, xi[m]) * tensor.at(3 * m + k, i);
    const double lambda = params.nu * std::pow(xi.squaredNorm(), params.alpha);
    const double b = params.omega * xi[2] / xi.norm();
    auto f = [&](double t) { return std::exp(std::complex<double>(-lambda * t, b * t)); };
    const auto w = adaptive_simpson<std::complex<double>>(f, 0.0, h, 1e-16);
    const Mat3 weight = w.real() * Mat3::Identity() + w.imag() * rotation(xi);
    const CVec3 r = -(weight * leray(xi)).cast<std::complex<double>>() * div;
    for (std::size_t c = 0; c < 3; ++c) out.at(c, i) = r[static_cast<Eigen::Index>(c)];
  }
  return out;
}

}  // namespace fnsc::oracle
