#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fnsc/config.hpp"
#include "fnsc/data_gen.hpp"
#include "fnsc/harness.hpp"
#include "fnsc/snapshot.hpp"
#include "fnsc/verify_suite.hpp"

namespace {

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad exponent '" + text + "'");
  return v;
}

std::array<int, 3> parse_mode(const std::string& text) {
  std::array<int, 3> k{};
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  if (!(in >> k[0] >> c1 >> k[1] >> c2 >> k[2]) || c1 != ',' || c2 != ',')
    throw std::invalid_argument("mode must be k1,k2,k3");
  return k;
}

int cmd_run(const std::string& path, bool quiet) {
  const auto out = fnsc::run_experiment(std::filesystem::path(path), quiet ? nullptr : &std::cerr);
  if (out.exit_code != fnsc::kExitOk) std::cerr << "fnsc: " << out.message << '\n';
  if (!out.manifest_path.empty() && std::filesystem::exists(out.manifest_path))
    std::cout << out.manifest_path.string() << '\n';
  return out.exit_code;
}

int cmd_verify(bool micro, bool inject, std::size_t n, const std::string& csv) {
  fnsc::VerifyOptions opts;
  opts.micro = micro;
  opts.inject_fault = inject;
  opts.n = n;
  const auto report = fnsc::run_verify_suite(opts);
  std::cout << report.table();
  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) {
      std::cerr << "fnsc: cannot write " << csv << '\n';
      return fnsc::kExitIo;
    }
    f << report.to_csv();
  }
  return report.all_passed() ? fnsc::kExitOk : fnsc::kExitCheckFailed;
}

struct GenArgs {
  std::string kind;
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  int band_min = 1;
  int band_max = 4;
  double band_slope = 0.0;
  bool planar = false;
  bool off_axis = false;
  std::string mode = "1,0,0";
  double degree = 2.0;
  std::size_t n = 32;
  double period = fnsc::kTwoPi;
  double nu = 1.0;
  double alpha = 0.75;
  double omega = 0.0;
  std::string p = "2";
  std::string q = "2";
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  const fnsc::FrequencyGrid grid(a.n, a.period);
  const fnsc::LPFrame frame(grid);
  fnsc::DataRequest req;
  req.kind = fnsc::parse_data_kind(a.kind);
  req.seed = a.seed;
  req.amplitude = a.amplitude;
  req.band = fnsc::BandSpec{a.band_min, a.band_max, a.planar, a.band_slope, a.off_axis};
  req.mode = parse_mode(a.mode);
  req.degree = a.degree;
  const auto index = fnsc::FBParams::critical_velocity(a.alpha, parse_exponent(a.p), parse_exponent(a.q));
  const auto field = fnsc::generate_data(req, grid, index, frame);
  fnsc::write_snapshot(a.out, field, fnsc::SnapshotHeader{a.nu, a.alpha, a.omega});
  std::cout << std::setprecision(17) << "wrote " << a.out << " fb_norm " << fnsc::fb_norm(field, index, frame)
            << '\n';
  return fnsc::kExitOk;
}

int cmd_norms(const std::string& path, double s, const std::string& p, const std::string& q) {
  const auto snap = fnsc::read_snapshot(path);
  const fnsc::LPFrame frame(snap.field.grid());
  fnsc::FBParams idx;
  idx.s = s;
  idx.p = parse_exponent(p);
  idx.q = parse_exponent(q);
  idx.validate();
  const auto shells = fnsc::shell_norms(snap.field, idx.p, frame);
  std::cout << std::setprecision(17) << "j,shell_norm,weighted\n";
  for (std::size_t i = 0; i < shells.size(); ++i) {
    const int j = frame.j_min() + static_cast<int>(i);
    std::cout << j << ',' << shells[i] << ',' << std::pow(2.0, j * s) * shells[i] << '\n';
  }
  std::cout << "total," << fnsc::fb_norm(snap.field, idx, frame) << ",\n";
  return fnsc::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Navier-Stokes-Coriolis mild-solution toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the experiment described by an INI config");
  std::string config_path;
  bool quiet = false;
  run->add_option("config", config_path, "config file")->required();
  run->add_flag("-q,--quiet", quiet, "no progress lines on stderr");

  auto* verify = app.add_subcommand("verify", "run the invariant battery");
  bool micro = false;
  bool inject = false;
  std::size_t verify_n = 32;
  std::string verify_csv;
  verify->add_flag("--micro", micro, "n = 8 grid with brute-force oracles");
  verify->add_flag("--inject-fault", inject, "corrupt one shell before the partition check");
  verify->add_option("--n", verify_n, "grid size outside micro mode");
  verify->add_option("--csv", verify_csv, "also write the results as CSV");

  auto* gen = app.add_subcommand("gen", "write a generated field as an FNSC snapshot");
  GenArgs g;
  gen->add_option("kind", g.kind, "taylor_green | random_band | single_mode | homogeneous_like")->required();
  gen->add_option("--seed", g.seed);
  gen->add_option("--amplitude", g.amplitude, "critical velocity norm after normalization");
  gen->add_option("--band-min", g.band_min);
  gen->add_option("--band-max", g.band_max);
  gen->add_option("--band-slope", g.band_slope);
  gen->add_flag("--planar", g.planar, "only modes with k3 = 0");
  gen->add_flag("--off-axis", g.off_axis, "no modes with k3 = 0");
  gen->add_option("--mode", g.mode, "single_mode wavevector k1,k2,k3");
  gen->add_option("--degree", g.degree, "homogeneous_like decay exponent");
  gen->add_option("--n", g.n);
  gen->add_option("--period", g.period);
  gen->add_option("--nu", g.nu);
  gen->add_option("--alpha", g.alpha);
  gen->add_option("--omega", g.omega);
  gen->add_option("--p", g.p);
  gen->add_option("--q", g.q);
  gen->add_option("-o,--out", g.out, "snapshot path")->required();

  auto* norms = app.add_subcommand("norms", "shell norms and FB norm of a snapshot as CSV");
  std::string snap_path;
  double s = 0.0;
  std::string p = "2";
  std::string q = "2";
  norms->add_option("snapshot", snap_path)->required();
  norms->add_option("--s", s)->required();
  norms->add_option("--p", p);
  norms->add_option("--q", q);

  app.add_subcommand("defaults", "print every config key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fnsc::kExitOk : fnsc::kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, quiet);
    if (verify->parsed()) return cmd_verify(micro, inject, verify_n, verify_csv);
    if (gen->parsed()) return cmd_gen(g);
    if (norms->parsed()) return cmd_norms(snap_path, s, p, q);
    std::cout << fnsc::config_reference();
    return fnsc::kExitOk;
  } catch (const fnsc::SnapshotError& e) {
    std::cerr << "fnsc: " << e.what() << '\n';
    return fnsc::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "fnsc: " << e.what() << '\n';
    return fnsc::kExitUsage;
  }
}
