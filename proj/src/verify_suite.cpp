#include "fnsc/verify_suite.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fnsc/data_gen.hpp"
#include "fnsc/lp_frame.hpp"
#include "fnsc/nonlinear.hpp"
#include "fnsc/picard.hpp"
#include "fnsc/symbols.hpp"

namespace fnsc {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string short_fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

class Battery {
 public:
  void run(const std::string& name, double tolerance, const std::function<double(std::string&)>& body) {
    CheckResult r;
    r.name = name;
    r.tolerance = tolerance;
    const auto t0 = Clock::now();
    try {
      r.value = body(r.detail);
      r.passed = std::isfinite(r.value) && r.value <= tolerance;
    } catch (const std::exception& e) {
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report.checks.push_back(std::move(r));
  }

  VerifyReport report;
};

SpectralScalar first_component(const SpectralField& f) {
  const auto c = f.component(0);
  return SpectralScalar(f.grid(), std::vector<Complex>(c.begin(), c.end()));
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

int band_limit(const FrequencyGrid& g, int wanted) {
  return std::min(wanted, static_cast<int>(g.n() / 2) - 1);
}

// Adaptive 20-point Gauss–Legendre on matrix-valued integrands: a panel is
// accepted when it agrees with the sum over its two halves.
using MatFn = std::function<Mat3(double)>;

Mat3 gauss_panel(const MatFn& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const double m = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Mat3 sum = Mat3::Zero();
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      sum += w[i] * f(m);
    } else {
      sum += w[i] * (f(m + h * x[i]) + f(m - h * x[i]));
    }
  }
  return h * sum;
}

Mat3 adaptive_panel(const MatFn& f, double a, double b, const Mat3& whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Mat3 left = gauss_panel(f, a, m);
  const Mat3 right = gauss_panel(f, m, b);
  const Mat3 split = left + right;
  if (depth <= 0 || (split - whole).cwiseAbs().maxCoeff() <= tol) return split;
  return adaptive_panel(f, a, m, left, 0.5 * tol, depth - 1) + adaptive_panel(f, m, b, right, 0.5 * tol, depth - 1);
}

// ∫₀^∞ S(τ) dτ entrywise. Panels are at most one decay time and half an
// oscillation long; the tail beyond 45 decay times is below e^{-45}/λ.
Mat3 semigroup_integral(const Vec3& xi, const PhysicalParams& params) {
  const double lam = dissipation_rate(xi, params);
  const double b = std::abs(rotation_rate(xi, params));
  const double end = 45.0 / lam;
  double panel = 1.0 / lam;
  if (b > 0.0) panel = std::min(panel, kTwoPi / (2.0 * b));
  const auto panels = static_cast<std::size_t>(std::ceil(end / panel));
  const MatFn f = [&](double t) { return semigroup_symbol(xi, t, params); };
  const double tol = 1e-16 / lam;
  Mat3 total = Mat3::Zero();
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = static_cast<double>(k) * panel;
    const double c = a + panel;
    total += adaptive_panel(f, a, c, gauss_panel(f, a, c), tol, 12);
  }
  return total;
}

// (w·#{sites in the set} / 2^{3j})^{1/p2 - 1/p1}: Hölder's constant for the
// lattice L^{p2} norm against L^{p1} on a set of that volume.
double holder_factor(std::size_t sites, double weight, int j, double p1, double p2) {
  const double expo = 1.0 / p2 - 1.0 / p1;
  return std::pow(weight * static_cast<double>(sites) * std::exp2(-3.0 * j), expo);
}

SpectralField brute_force_bilinear(const SpectralField& u, const SpectralField& v, double h,
                                   const PhysicalParams& params) {
  const auto& g = u.grid();
  const int n = static_cast<int>(g.n());
  const int half = n / 2;
  const double scale = g.quadrature_weight() * std::pow(kTwoPi, -1.5);
  SpectralField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.in_dealias_band(i)) continue;
    const auto xi_m = g.signed_modes(i);
    Eigen::Matrix<Complex, 3, 3> tensor = Eigen::Matrix<Complex, 3, 3>::Zero();
    for (std::size_t e = 0; e < g.size(); ++e) {
      const auto eta = g.signed_modes(e);
      std::array<int, 3> rest{};
      bool inside = true;
      for (int c = 0; c < 3; ++c) {
        rest[static_cast<std::size_t>(c)] = xi_m[static_cast<std::size_t>(c)] - eta[static_cast<std::size_t>(c)];
        if (rest[static_cast<std::size_t>(c)] < -half || rest[static_cast<std::size_t>(c)] >= half) inside = false;
      }
      if (!inside) continue;
      const std::size_t r = g.flat_index(rest[0], rest[1], rest[2]);
      for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t k = 0; k < 3; ++k)
          tensor(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) += u.at(m, e) * v.at(k, r);
    }
    tensor *= scale;
    const Vec3 xi = g.wavevector(i);
    if (xi.isZero(0.0)) continue;
    CVec3 div = CVec3::Zero();
    for (Eigen::Index k = 0; k < 3; ++k)
      for (Eigen::Index m = 0; m < 3; ++m) div[k] += Complex(0.0, xi[m]) * tensor(m, k);
    const CVec3 projected = leray_symbol(xi).cast<Complex>() * div;
    const CVec3 res = -(duhamel_weights(xi, h, params).cast<Complex>() * projected);
    for (std::size_t c = 0; c < 3; ++c) out.at(c, i) = res[static_cast<Eigen::Index>(c)];
  }
  return out;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(26) << "check" << std::setw(13) << "value" << std::setw(11) << "tolerance"
     << std::setw(7) << "result" << std::setw(11) << "seconds" << "detail\n";
  for (const auto& c : checks) {
    os << std::left << std::setw(26) << c.name << std::setw(13) << short_fmt(c.value) << std::setw(11)
       << short_fmt(c.tolerance) << std::setw(7) << (c.passed ? "PASS" : "FAIL") << std::setw(11)
       << short_fmt(c.seconds) << c.detail << '\n';
  }
  os << (all_passed() ? "all checks passed" : "some checks FAILED") << '\n';
  return os.str();
}

std::string VerifyReport::to_csv() const {
  std::ostringstream os;
  os << "name,value,tolerance,passed,detail\n";
  for (const auto& c : checks)
    os << c.name << ',' << fmt(c.value) << ',' << fmt(c.tolerance) << ',' << (c.passed ? "true" : "false")
       << ",\"" << c.detail << "\"\n";
  return os.str();
}

VerifyReport run_verify_suite(const VerifyOptions& options) {
  const FrequencyGrid grid(options.micro ? 8 : options.n);
  const LPFrame frame(grid);
  const std::uint64_t seed = options.seed;
  Battery b;

  b.run("partition_of_unity", 1e-12, [&](std::string& detail) {
    if (!options.inject_fault) return partition_defect(frame);
    const int j = frame.j_min() + 2;
    detail = "shell " + std::to_string(j) + " scaled by 1.01";
    return partition_defect(frame.with_scaled_shell(j, 1.01));
  });

  b.run("shell_overlap", 0.0, [&](std::string&) {
    double worst = 0.0;
    for (int j = frame.j_min(); j <= frame.j_max(); ++j)
      for (int k = j + 2; k <= frame.j_max(); ++k)
        for (auto idx : frame.support(j)) worst = std::max(worst, frame.phi_at(j, idx) * frame.phi_at(k, idx));
    return worst;
  });

  b.run("paraproduct_identity", 1e-12, [&](std::string& detail) {
    const int band = band_limit(grid, static_cast<int>(grid.n() / 3));
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
      const BandSpec spec{1, band, false, 0.0};
      const auto f = first_component(random_band_field(grid, seed + 2 * k, spec));
      const auto g = first_component(random_band_field(grid, seed + 2 * k + 1, spec));
      worst = std::max(worst, verify_paraproduct_identity(f, g, frame));
    }
    detail = "20 pairs, band " + std::to_string(band);
    return worst;
  });

  const PhysicalParams rotating{0.7, 0.8, 10.0};
  const SpectralField sample = random_band_field(grid, seed + 101, BandSpec{1, band_limit(grid, 4), false, 0.0});

  b.run("semigroup_identity", 0.0, [&](std::string&) {
    return max_diff(apply_semigroup(sample, 0.0, rotating), sample);
  });

  b.run("semigroup_composition", 1e-12, [&](std::string& detail) {
    const double t = 0.3;
    const double s = 0.45;
    const auto lhs = apply_semigroup(apply_semigroup(sample, s, rotating), t, rotating);
    const auto rhs = apply_semigroup(sample, t + s, rotating);
    detail = "t=0.3 s=0.45 omega=10";
    return max_diff(lhs, rhs) / sample.max_magnitude();
  });

  b.run("semigroup_heat_reduction", 1e-14, [&](std::string&) {
    const PhysicalParams still{0.7, 0.8, 0.0};
    const double t = 0.6;
    double worst = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const Vec3 xi = grid.wavevector(i);
      const Mat3 s = semigroup_symbol(xi, t, still);
      const double heat = std::exp(-still.nu * std::pow(xi.norm(), 2.0 * still.alpha) * t);
      worst = std::max(worst, (s - heat * Mat3::Identity()).cwiseAbs().maxCoeff());
    }
    return worst;
  });

  b.run("semigroup_divergence", 1e-12, [&](std::string&) {
    return divergence_defect(apply_semigroup(sample, 0.8, rotating));
  });

  std::vector<double> kernel_bound_ratios;
  b.run("kernel_quadrature", 1e-10, [&](std::string& detail) {
    double worst = 0.0;
    double bound = 0.0;
    for (std::size_t k = 0; k < options.kernel_samples; ++k) {
      auto draw = [&](int slot) { return keyed_uniform(seed ^ 0x6b65726eULL, 16 * k + static_cast<std::size_t>(slot)); };
      Vec3 xi(8.0 * draw(0) - 4.0, 8.0 * draw(1) - 4.0, 8.0 * draw(2) - 4.0);
      if (xi.norm() < 0.25) xi = xi.norm() > 0.0 ? Vec3(0.25 * xi.normalized()) : Vec3(0.25, 0.0, 0.0);
      const PhysicalParams p{0.5 * std::pow(4.0, draw(3)), 0.5 + 0.75 * draw(4), 40.0 * draw(5) - 20.0};
      const Mat3 exact = stationary_kernel(xi, p);
      const Mat3 quad = semigroup_integral(xi, p);
      worst = std::max(worst, (exact - quad).cwiseAbs().maxCoeff() / std::max(1.0, exact.cwiseAbs().maxCoeff()));
      const auto c = kernel_coefficients(xi, p);
      const double cap = std::pow(xi.norm(), -2.0 * p.alpha) / p.nu;
      bound = std::max({bound, std::abs(c.identity) / cap, std::abs(c.rotation) / cap});
    }
    kernel_bound_ratios.push_back(bound);
    detail = std::to_string(options.kernel_samples) + " samples";
    return worst;
  });

  b.run("kernel_coefficient_bound", 1.0, [&](std::string& detail) {
    detail = "max coefficient over |xi|^{-2 alpha}/nu";
    if (kernel_bound_ratios.empty()) throw std::runtime_error("kernel samples unavailable");
    return kernel_bound_ratios.front();
  });

  {
    const double y = 0.1;
    const double y2 = 0.11;
    const double ball = 0.12;
    auto solve = [](double yy) {
      return picard_solve<double>(
          yy, [](double a, double c) { return a * c; }, [](double a) { return std::abs(a); }, 1.0, 1e-14, 60);
    };
    auto oracle = [](double yy) { return (1.0 - std::sqrt(1.0 - 4.0 * yy)) / 2.0; };
    const auto r1 = solve(y);
    const auto r2 = solve(y2);
    b.run("picard_scalar_root", 1e-12, [&](std::string& detail) {
      detail = std::to_string(r1.iterations) + " iterations";
      if (!r1.converged || r1.iterations > 60) return std::numeric_limits<double>::infinity();
      return std::abs(r1.point - (1.0 - std::sqrt(0.6)) / 2.0);
    });
    b.run("picard_ball_bound", 1.0, [&](std::string&) { return std::abs(r1.point) / (2.0 * y); });
    b.run("picard_continuity", 1.0, [&](std::string& detail) {
      const double bound = std::abs(y - y2) / (1.0 - 4.0 * ball);
      const double oracle_gap = std::max(std::abs(r1.point - oracle(y)), std::abs(r2.point - oracle(y2)));
      detail = "oracle gap " + short_fmt(oracle_gap);
      if (oracle_gap > 1e-10) return std::numeric_limits<double>::infinity();
      return std::abs(r1.point - r2.point) / bound;
    });
  }

  const int cal_band = band_limit(grid, 4);
  std::vector<SpectralField> corpus;
  corpus.reserve(options.calibration_fields);
  for (std::size_t k = 0; k < options.calibration_fields; ++k)
    corpus.push_back(random_band_field(grid, seed + 5000 + k, BandSpec{1, cal_band, false, 0.0}));

  b.run("bernstein_calibration", 1.0, [&](std::string& detail) {
    const int j = static_cast<int>(std::ceil(std::log2(cal_band * std::sqrt(3.0) * grid.base_wavenumber())));
    const double radius = std::exp2(j);
    std::size_t ball_sites = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid.wavenumber(i) <= radius) ++ball_sites;
    struct Case {
      std::array<int, 3> beta;
      double p1, p2;
    };
    const Case cases[] = {{{0, 0, 0}, 2.0, 2.0}, {{1, 0, 0}, 2.0, 1.5}, {{0, 1, 1}, 3.0, 2.0}};
    double worst = 0.0;
    std::ostringstream cal;
    cal << "calibrated C:";
    for (const auto& c : cases) {
      const double holder = holder_factor(ball_sites, grid.quadrature_weight(), j, c.p1, c.p2);
      double calibrated = 0.0;
      for (const auto& f : corpus) {
        const auto r = check_bernstein(f, j, c.beta, c.p1, c.p2, 1.0, 1.0);
        calibrated = std::max(calibrated, r.ratio);
      }
      cal << ' ' << short_fmt(calibrated);
      worst = std::max(worst, calibrated / holder);
    }
    detail = cal.str();
    return worst;
  });

  b.run("embedding_calibration", 1.0, [&](std::string& detail) {
    const FBParams from{0.5, 2.0, 2.0, FBParams::Critical::none, std::nullopt};
    const FBParams to{0.0, 1.5, 4.0, FBParams::Critical::none, std::nullopt};
    const double weight = grid.quadrature_weight();
    double rigorous = 0.0;
    for (int j = frame.j_min(); j <= frame.j_max(); ++j)
      rigorous = std::max(rigorous, holder_factor(frame.support(j).size(), weight, j, from.p, to.p));
    double calibrated = 0.0;
    for (const auto& f : corpus) calibrated = std::max(calibrated, fb_norm(f, to, frame) / fb_norm(f, from, frame));
    detail = "calibrated C " + short_fmt(calibrated) + ", Hoelder C " + short_fmt(rigorous);
    return calibrated / rigorous;
  });

  if (options.micro) {
    b.run("bilinear_bruteforce", 1e-10, [&](std::string& detail) {
      const int band = static_cast<int>(std::floor(grid.dealias_fraction() * static_cast<double>(grid.n()) / 2.0));
      const BandSpec spec{1, band, false, 0.0};
      const auto u = random_band_field(grid, seed + 77, spec);
      const auto v = random_band_field(grid, seed + 78, spec);
      const PhysicalParams p{0.9, 0.7, 3.0};
      const auto fast = bilinear_step(u, v, 0.05, p);
      const auto slow = brute_force_bilinear(u, v, 0.05, p);
      detail = "n=8 direct convolution";
      return max_diff(fast, slow) / slow.max_magnitude();
    });

    b.run("fb_norm_direct", 1e-12, [&](std::string&) {
      const FBParams idx{0.3, 2.5, 1.5, FBParams::Critical::none, std::nullopt};
      const auto& f = corpus.front();
      std::vector<double> shells;
      for (int j = frame.j_min(); j <= frame.j_max(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 1; i < grid.size(); ++i) {
          const double phi = lp_phi(grid.wavenumber(i) * std::exp2(-j));
          sum += std::pow(phi * f.magnitude(i), idx.p);
        }
        shells.push_back(std::exp2(j * idx.s) * std::pow(grid.quadrature_weight() * sum, 1.0 / idx.p));
      }
      double total = 0.0;
      for (double a : shells) total += std::pow(a, idx.q);
      const double direct = std::pow(total, 1.0 / idx.q);
      return std::abs(direct - fb_norm(f, idx, frame)) / direct;
    });

    b.run("leray_direct", 1e-14, [&](std::string&) {
      SpectralField raw(grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t c = 0; c < 3; ++c)
          raw.at(c, i) = Complex(keyed_uniform(seed, 6 * i + 2 * c) - 0.5, keyed_uniform(seed, 6 * i + 2 * c + 1) - 0.5);
      const auto projected = leray_project(raw);
      double worst = 0.0;
      for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid.is_nyquist(i)) continue;
        const Vec3 xi = grid.wavevector(i);
        const CVec3 v(raw.at(0, i), raw.at(1, i), raw.at(2, i));
        const CVec3 expect = v - xi.cast<Complex>() * (xi.cast<Complex>().dot(v) / xi.squaredNorm());
        for (std::size_t c = 0; c < 3; ++c)
          worst = std::max(worst, std::abs(expect[static_cast<Eigen::Index>(c)] - projected.at(c, i)));
      }
      return worst;
    });
  }
  return b.report;
}

}  // namespace fnsc
