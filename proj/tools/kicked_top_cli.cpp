// kicked_top: parameter scans and data emission for the quantum kicked top.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kicked_top/classical.hpp"
#include "kicked_top/coeff_stats.hpp"
#include "kicked_top/eigen_cache.hpp"
#include "kicked_top/multifractal.hpp"
#include "kicked_top/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace kicked_top;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "0.4", "4pi/7", "-pi", "2*pi", "1.5e-3".
double parse_value(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += static_cast<char>(std::tolower(c));
  }
  static const std::regex form(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:e[+-]?\d+)?)?(\*?pi)?(?:/((?:\d+\.?\d*|\.\d+)))?$)");
  std::smatch m;
  if (text.empty() || !std::regex_match(text, m, form) || (!m[1].matched && !m[2].matched)) {
    throw UsageError("cannot parse number '" + raw + "'");
  }
  double value = 1.0;
  if (m[1].matched) {
    const std::string lead = m[1].str();
    value = lead == "+" ? 1.0 : lead == "-" ? -1.0 : std::stod(lead);
  }
  if (m[2].matched) value *= kPi;
  if (m[3].matched) value /= std::stod(m[3].str());
  return value;
}

// Value, comma list, or inclusive start:stop:step.
std::vector<double> parse_range(const std::string& text, const std::string& name) {
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream in(text);
      for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
      if (parts.size() != 3) throw UsageError("expected start:stop:step");
      const double start = parse_value(parts[0]);
      const double stop = parse_value(parts[1]);
      const double step = parse_value(parts[2]);
      if (!(step > 0.0) || stop < start) throw UsageError("need step > 0 and stop >= start");
      const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
      if (n > 1000000) throw UsageError("range has too many points");
      for (long k = 0; k <= n; ++k) out.push_back(start + k * step);
    } else {
      std::stringstream in(text);
      for (std::string p; std::getline(in, p, ',');) out.push_back(parse_value(p));
    }
  } catch (const UsageError& e) {
    throw UsageError("--" + name + " '" + text + "': " + e.what());
  }
  if (out.empty()) throw UsageError("--" + name + " is empty");
  return out;
}

std::vector<int> parse_spins(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_range(text, "j")) {
    if (v != std::floor(v) || v < 1) throw UsageError("--j needs integer spins >= 1, got " + std::to_string(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Common {
  std::string j = "150";
  std::string kappa = "0.4,1.7,3,7";
  std::string alpha = "4pi/7";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = "out";
  bool no_cache = false;
  std::string method = "sector";
};

class Run {
 public:
  Run(std::string command, const Common& common, json config)
      : command_(std::move(command)), common_(common), config_(std::move(config)) {
    dir_ = common_.out;
    fs::create_directories(dir_);
    config_["command"] = command_;
  }

  void csv(const std::string& name, const std::vector<std::string>& columns,
           const std::vector<std::vector<std::string>>& rows, const json& point = json::object()) {
    const fs::path path = dir_ / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "# kicked_top " << KICKED_TOP_VERSION << "\n";
    f << "# command: " << command_ << "\n";
    f << "# seed: " << common_.seed << "\n";
    f << "# config: " << config_.dump() << "\n";
    if (!point.empty()) f << "# point: " << point.dump() << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) f << (c ? "," : "") << columns[c];
    f << "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) f << (c ? "," : "") << row[c];
      f << "\n";
    }
    files_.push_back({{"file", name}, {"rows", rows.size()}, {"point", point}});
  }

  FloquetEigensystem eigensystem(const KickedTopParams& params) {
    params.validate();
    const auto method = common_.method == "full" ? DiagonalizationMethod::full : DiagonalizationMethod::sector;
    FloquetEigensystem eig =
        common_.no_cache ? solve_floquet(params, method) : cached_solve(dir_ / "cache", params, method);
    if (eig.degenerate_clusters > 0) {
      notes_.push_back({{"j", params.j},
                        {"kappa", params.kappa},
                        {"alpha", params.alpha},
                        {"degenerate_clusters", eig.degenerate_clusters}});
    }
    return eig;
  }

  void finish(double seconds) {
    json manifest{{"tool", "kicked_top"},
                  {"version", KICKED_TOP_VERSION},
                  {"command", command_},
                  {"seed", common_.seed},
                  {"threads", omp_get_max_threads()},
                  {"config", config_},
                  {"files", files_},
                  {"wall_time_seconds", seconds},
                  {"quasienergy_convention", "F|v> = exp(+i nu)|v>, nu in [-pi, pi)"},
                  {"degenerate_eigensystems", notes_}};
    std::ofstream(dir_ / ("manifest_" + command_ + ".json")) << manifest.dump(2) << "\n";
  }

  const Common& common() const { return common_; }

 private:
  std::string command_;
  Common common_;
  json config_;
  fs::path dir_;
  json files_ = json::array();
  json notes_ = json::array();
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--j", c.j, "Spin quantum number(s): value, list or start:stop:step");
  app->add_option("--kappa", c.kappa, "Kick strength(s): value, list or start:stop:step");
  app->add_option("--alpha", c.alpha, "Precession angle(s); accepts pi expressions such as 4pi/7");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--threads", c.threads, "Worker threads (0 = all available)")->check(CLI::NonNegativeNumber);
  app->add_option("--out", c.out, "Output directory");
  app->add_flag("--no-cache", c.no_cache, "Do not read or write the eigensystem cache");
  app->add_option("--method", c.method, "Diagonalization route")->check(CLI::IsMember({"full", "sector"}));
}

json common_json(const Common& c) {
  return {{"j", c.j},         {"kappa", c.kappa}, {"alpha", c.alpha},         {"seed", c.seed},
          {"threads", c.threads}, {"out", c.out}, {"no_cache", c.no_cache}, {"method", c.method}};
}

// --- portrait -------------------------------------------------------------

struct PortraitOptions {
  int orbits = 289;
  int kicks = 300;
};

void cmd_portrait(Run& run, const PortraitOptions& o) {
  if (o.orbits < 1 || o.kicks < 1) throw UsageError("--orbits and --kicks must be positive");
  const auto kappas = parse_range(run.common().kappa, "kappa");
  const auto alphas = parse_range(run.common().alpha, "alpha");
  const auto starts = haar_points(run.common().seed, o.orbits);
  for (double kappa : kappas) {
    for (double alpha : alphas) {
      const KickedTopParams params{alpha, kappa, 1};
      params.validate();
      std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(o.orbits) * o.kicks);
#pragma omp parallel for schedule(static)
      for (int orbit = 0; orbit < o.orbits; ++orbit) {
        const auto path = trajectory(ClassicalState::from_angles(starts[orbit].theta, starts[orbit].phi), params, o.kicks);
        for (int n = 0; n < o.kicks; ++n) {
          rows[static_cast<std::size_t>(orbit) * o.kicks + n] = {num(path[n].phi()), num(path[n].theta()),
                                                                 std::to_string(orbit)};
        }
      }
      run.csv("portrait_kappa" + tag(kappa) + "_alpha" + tag(alpha) + ".csv", {"phi", "theta", "orbit_id"}, rows,
              {{"kappa", kappa}, {"alpha", alpha}});
    }
  }
}

// --- lyapunov -------------------------------------------------------------

struct LyapunovCliOptions {
  std::string mode = "scan";
  int samples = 1000;
  int kicks = 1000;
  int grid = 50;
  int transient = 100;
  bool threshold = false;
  double threshold_value = 0.002;
};

void cmd_lyapunov(Run& run, const LyapunovCliOptions& o) {
  const auto kappas = parse_range(run.common().kappa, "kappa");
  const auto alphas = parse_range(run.common().alpha, "alpha");
  LyapunovOptions lo;
  lo.transient = o.transient;
  if (o.mode == "field") {
    GridSpec grid;
    grid.n_phi = grid.n_theta = o.grid;
    for (double kappa : kappas) {
      for (double alpha : alphas) {
        const LyapunovField field = lyapunov_field({alpha, kappa, 1}, grid, o.kicks, lo);
        std::vector<std::vector<std::string>> rows;
        for (int c = 0; c < grid.size(); ++c) {
          const SpherePoint p = grid.cell(c);
          rows.push_back({num(p.phi), num(p.theta), num(field.lambda[c])});
        }
        run.csv("lyapunov_field_kappa" + tag(kappa) + "_alpha" + tag(alpha) + ".csv", {"phi", "theta", "lambda"},
                rows, {{"kappa", kappa}, {"alpha", alpha}, {"kicks", o.kicks}});
      }
    }
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (double alpha : alphas) {
    for (double kappa : kappas) {
      const KickedTopParams params{alpha, kappa, 1};
      params.validate();
      const AveragedLyapunov avg = averaged_lyapunov(params, o.samples, o.kicks, run.common().seed, lo);
      rows.push_back({num(kappa), num(alpha), num(avg.mean), num(avg.stderr_of_mean)});
    }
  }
  run.csv("lyapunov_scan.csv", {"kappa", "alpha", "lambda_bar", "stderr"}, rows,
          {{"samples", o.samples}, {"kicks", o.kicks}});
  if (o.threshold) {
    ThresholdOptions to;
    to.threshold = o.threshold_value;
    to.n_samples = o.samples;
    to.n_kicks = o.kicks;
    to.seed = run.common().seed;
    std::vector<std::vector<std::string>> curve;
    for (double alpha : alphas) {
      try {
        curve.push_back({num(alpha), num(kappa_threshold(alpha, to))});
      } catch (const DomainError&) {
        curve.push_back({num(alpha), "nan"});
      }
    }
    run.csv("kappa_threshold.csv", {"alpha", "kappa_c"}, curve, {{"threshold", o.threshold_value}});
  }
}

// --- spectrum -------------------------------------------------------------

struct SpectrumOptions {
  std::string sector = "even";
  int bins = 50;
  double s_max = 4.0;
  bool open = false;
  bool dump_levels = false;
};

void cmd_spectrum(Run& run, const SpectrumOptions& o) {
  const Parity parity = o.sector == "odd" ? Parity::odd : Parity::even;
  const auto spins = parse_spins(run.common().j);
  const auto kappas = parse_range(run.common().kappa, "kappa");
  const auto alphas = parse_range(run.common().alpha, "alpha");
  std::vector<std::vector<std::string>> scan;
  for (int j : spins) {
    for (double alpha : alphas) {
      for (double kappa : kappas) {
        const FloquetEigensystem eig = run.eigensystem({alpha, kappa, j});
        const std::vector<double> levels = eig.sector_quasienergies(parity);
        const SpacingEnsemble ens = spacings_from_quasienergies(levels, !o.open);
        const BrodyFit fit = fit_brody(ens);
        const RatioStats r = ratio_stats(ens.raw_gaps);
        scan.push_back({num(kappa), num(fit.beta), num(r.mean_r), std::to_string(levels.size())});
        const json point{{"j", j},           {"kappa", kappa},       {"alpha", alpha},
                         {"sector", o.sector}, {"beta", fit.beta},    {"mean_r", r.mean_r},
                         {"zero_spacings", ens.zero_spacings}};
        const std::string suffix = "_j" + std::to_string(j) + "_kappa" + tag(kappa) + "_alpha" + tag(alpha) + ".csv";
        const Histogram h = spacing_histogram(ens, o.bins, o.s_max);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t b = 0; b < h.centers.size(); ++b) rows.push_back({num(h.centers[b]), num(h.density[b])});
        run.csv("spacing_hist" + suffix, {"bin_center", "density"}, rows, point);
        if (o.dump_levels) {
          std::vector<std::vector<std::string>> levels_rows;
          for (int i = 0; i < eig.dim(); ++i) {
            levels_rows.push_back({std::to_string(i), num(eig.quasienergies(i)),
                                   eig.parities[i] == Parity::even ? "even" : "odd"});
          }
          json meta = point;
          meta["convention"] = "F|v> = exp(+i nu)|v>";
          run.csv("quasienergies" + suffix, {"index", "nu", "parity"}, levels_rows, meta);
        }
      }
    }
  }
  run.csv("spectrum_scan.csv", {"kappa", "beta", "mean_r", "n_levels"}, scan,
          {{"sector", o.sector}, {"periodic", !o.open}});
}

// --- multifractal ---------------------------------------------------------

struct MultifractalOptions {
  std::string mode = "field";
  int grid = 100;
  int samples = 10000;
  std::string q = "1,2,inf";
  std::string basis = "full";
};

ExpansionBasis parse_basis(const std::string& s) {
  return s == "even" ? ExpansionBasis::even : s == "odd" ? ExpansionBasis::odd : ExpansionBasis::full;
}

std::string q_name(double q) { return std::isinf(q) ? "inf" : num(q); }

void cmd_multifractal(Run& run, const MultifractalOptions& o) {
  std::vector<double> q;
  try {
    q = parse_q_values(o.q);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--q: ") + e.what());
  }
  const auto spins = parse_spins(run.common().j);
  const auto kappas = parse_range(run.common().kappa, "kappa");
  const auto alphas = parse_range(run.common().alpha, "alpha");
  const ExpansionBasis basis = parse_basis(o.basis);

  if (o.mode == "field") {
    GridSpec grid;
    grid.n_phi = grid.n_theta = o.grid;
    // The fixed columns D1, D2, Dinf are always emitted.
    const std::vector<double> fixed{1.0, 2.0, kInfiniteQ};
    for (int j : spins) {
      for (double alpha : alphas) {
        for (double kappa : kappas) {
          const DqField f = dq_field(run.eigensystem({alpha, kappa, j}), grid, fixed, basis);
          std::vector<std::vector<std::string>> rows;
          for (int c = 0; c < grid.size(); ++c) {
            const SpherePoint p = grid.cell(c);
            rows.push_back({num(p.phi), num(p.theta), num(f.dimensions[c][0]), num(f.dimensions[c][1]),
                            num(f.dimensions[c][2])});
          }
          run.csv("dq_field_j" + std::to_string(j) + "_kappa" + tag(kappa) + "_alpha" + tag(alpha) + ".csv",
                  {"phi", "theta", "D1", "D2", "Dinf"}, rows, {{"j", j}, {"kappa", kappa}, {"alpha", alpha}});
        }
      }
    }
    return;
  }

  for (double alpha : alphas) {
    std::vector<std::vector<std::string>> scan;
    std::vector<std::vector<std::string>> fits;
    for (double kappa : kappas) {
      std::vector<std::vector<ScalingPoint>> points(q.size());
      for (int j : spins) {
        const AveragedDq avg = averaged_dq(run.eigensystem({alpha, kappa, j}), o.samples, q, run.common().seed, basis);
        const double n = basis == ExpansionBasis::full ? 2.0 * j + 1 : basis == ExpansionBasis::even ? j + 1.0 : j;
        for (std::size_t k = 0; k < q.size(); ++k) {
          scan.push_back({num(kappa), std::to_string(j), num(n), q_name(q[k]), num(avg.mean[k]),
                          num(avg.stderr_of_mean[k])});
          points[k].push_back({n, avg.mean[k]});
        }
      }
      if (o.mode == "fit") {
        if (spins.size() < 4) throw UsageError("--mode fit needs at least 4 values of --j");
        for (std::size_t k = 0; k < q.size(); ++k) {
          for (auto model : {ScalingModel::linear_in_invlogN, ScalingModel::loglog_in_invlogN}) {
            const ScalingFit fit = scaling_fit(points[k], model);
            fits.push_back({to_string(model) + ":kappa=" + num(kappa) + ":q=" + q_name(q[k]), num(fit.intercept),
                            num(fit.slope), num(fit.residual)});
          }
        }
      }
    }
    const std::string suffix = "_alpha" + tag(alpha) + ".csv";
    run.csv("dq_scan" + suffix, {"kappa", "j", "N", "q", "Dq_mean", "stderr"}, scan,
            {{"alpha", alpha}, {"samples", o.samples}, {"basis", o.basis}});
    if (o.mode == "fit") {
      run.csv("scaling_fit" + suffix, {"model", "intercept", "slope", "residual"}, fits, {{"alpha", alpha}});
    }
  }
}

// --- coeffdist ------------------------------------------------------------

struct CoeffOptions {
  std::string mode = "all";
  int samples = 10000;
  int bins = 0;
  int cdf_points = 200;
  double nu = 2.0;
  bool literal_rmse = false;
  std::string basis = "full";
};

void cmd_coeffdist(Run& run, const CoeffOptions& o) {
  if (!(o.nu > 0.0)) throw UsageError("--nu must be positive");
  const auto spins = parse_spins(run.common().j);
  const auto kappas = parse_range(run.common().kappa, "kappa");
  const auto alphas = parse_range(run.common().alpha, "alpha");
  const bool all = o.mode == "all";
  std::vector<std::vector<std::string>> distances;
  for (double alpha : alphas) {
    for (int j : spins) {
      for (double kappa : kappas) {
        const RescaledCoefficients pool =
            pool_rescaled_coefficients(run.eigensystem({alpha, kappa, j}), o.samples, run.common().seed,
                                       parse_basis(o.basis));
        const json point{{"j", j}, {"kappa", kappa}, {"alpha", alpha}, {"nu", o.nu}, {"samples", o.samples}};
        const std::string suffix = "_j" + std::to_string(j) + "_kappa" + tag(kappa) + "_alpha" + tag(alpha) + ".csv";
        if (all || o.mode == "hist") {
          const LogHistogram h = empirical_log_histogram(pool, o.bins, o.nu);
          std::vector<std::vector<std::string>> rows;
          for (std::size_t b = 0; b < h.centers.size(); ++b) {
            rows.push_back({num(h.centers[b]), num(h.density[b]), num(h.reference_density[b])});
          }
          json meta = point;
          meta["zero_excluded"] = h.zero_excluded;
          run.csv("lnx_hist" + suffix, {"lnx_bin", "density", "reference_density"}, rows, meta);
        }
        if (all || o.mode == "cdf") {
          std::vector<std::vector<std::string>> rows;
          for (const CdfPoint& p : cdf_overlay(pool, o.nu, o.cdf_points)) {
            rows.push_back({num(p.x), num(p.empirical), num(p.reference)});
          }
          run.csv("cdf" + suffix, {"x", "F_emp", "F_ref"}, rows, point);
        }
        if (all || o.mode == "distance") {
          const DistanceReport d = distance_report(pool, o.nu, {o.literal_rmse});
          distances.push_back({num(kappa), std::to_string(j), num(d.skld), num(d.rmse)});
        }
      }
    }
  }
  if (all || o.mode == "distance") {
    run.csv("distance_scan.csv", {"kappa", "j", "skld", "rmse"}, distances,
            {{"nu", o.nu}, {"literal_rmse", o.literal_rmse}});
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum kicked top: classical and quantum chaos diagnostics"};
  app.set_version_flag("--version", KICKED_TOP_VERSION);
  app.set_config("--config", "", "TOML/INI file; keys are option names, one [section] per subcommand");
  app.require_subcommand(1);

  Common portrait_c;
  portrait_c.kappa = "0.4,1.7,3,7";
  PortraitOptions portrait_o;
  auto* portrait = app.add_subcommand("portrait", "Stroboscopic orbits of the classical top");
  add_common(portrait, portrait_c);
  portrait->add_option("--orbits", portrait_o.orbits, "Random initial conditions");
  portrait->add_option("--kicks", portrait_o.kicks, "Kicks per orbit");

  Common lyap_c;
  lyap_c.kappa = "0:10:0.5";
  lyap_c.alpha = "0:2pi:pi/8";
  LyapunovCliOptions lyap_o;
  auto* lyap = app.add_subcommand("lyapunov", "Largest Lyapunov exponent fields and averaged scans");
  add_common(lyap, lyap_c);
  lyap->add_option("--mode", lyap_o.mode, "field or scan")->check(CLI::IsMember({"field", "scan"}));
  lyap->add_option("--samples", lyap_o.samples, "Haar-random initial conditions per scan point");
  lyap->add_option("--kicks", lyap_o.kicks, "Kicks per trajectory");
  lyap->add_option("--grid", lyap_o.grid, "Field grid points per axis");
  lyap->add_option("--transient", lyap_o.transient, "Kicks discarded before accumulation");
  lyap->add_flag("--threshold", lyap_o.threshold, "Also locate kappa_c(alpha) by bisection");
  lyap->add_option("--threshold-value", lyap_o.threshold_value, "Averaged exponent defining kappa_c");

  Common spec_c;
  spec_c.j = "1000";
  SpectrumOptions spec_o;
  auto* spec = app.add_subcommand("spectrum", "Quasienergy spacing statistics");
  add_common(spec, spec_c);
  spec->add_option("--sector", spec_o.sector, "Parity sector")->check(CLI::IsMember({"even", "odd"}));
  spec->add_option("--bins", spec_o.bins, "Histogram bins on [0, s_max]");
  spec->add_option("--s-max", spec_o.s_max, "Histogram range");
  spec->add_flag("--open", spec_o.open, "Drop the wrap-around gap");
  spec->add_flag("--dump-levels", spec_o.dump_levels, "Write all quasienergies with parity labels");

  Common mf_c;
  MultifractalOptions mf_o;
  auto* mf = app.add_subcommand("multifractal", "Fractal dimensions of coherent states in the Floquet basis");
  add_common(mf, mf_c);
  mf->add_option("--mode", mf_o.mode, "field, scan or fit")->check(CLI::IsMember({"field", "scan", "fit"}));
  mf->add_option("--grid", mf_o.grid, "Field grid points per axis");
  mf->add_option("--samples", mf_o.samples, "Coherent states per averaged point");
  mf->add_option("--q", mf_o.q, "q values for scans, e.g. 1,2,inf");
  mf->add_option("--basis", mf_o.basis, "Expansion basis")->check(CLI::IsMember({"full", "even", "odd"}));

  Common cd_c;
  CoeffOptions cd_o;
  auto* cd = app.add_subcommand("coeffdist", "Distribution of rescaled expansion coefficients");
  add_common(cd, cd_c);
  cd->add_option("--mode", cd_o.mode, "hist, cdf, distance or all")
      ->check(CLI::IsMember({"hist", "cdf", "distance", "all"}));
  cd->add_option("--samples", cd_o.samples, "Coherent states pooled per point");
  cd->add_option("--bins", cd_o.bins, "ln x histogram bins (0 = Freedman-Diaconis)");
  cd->add_option("--cdf-points", cd_o.cdf_points, "Abscissae of the CDF overlay");
  cd->add_option("--nu", cd_o.nu, "Reference chi-squared degrees of freedom");
  cd->add_flag("--literal-rmse", cd_o.literal_rmse, "Integrate F - F_nu without squaring");
  cd->add_option("--basis", cd_o.basis, "Expansion basis")->check(CLI::IsMember({"full", "even", "odd"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    auto launch = [&](const std::string& name, const Common& c, json extra, auto&& body) {
      if (c.threads > 0) omp_set_num_threads(c.threads);
      json config = common_json(c);
      config.update(extra);
      Run run(name, c, config);
      body(run);
      run.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    };
    if (*portrait) {
      launch("portrait", portrait_c, {{"orbits", portrait_o.orbits}, {"kicks", portrait_o.kicks}},
             [&](Run& r) { cmd_portrait(r, portrait_o); });
    } else if (*lyap) {
      launch("lyapunov", lyap_c,
             {{"mode", lyap_o.mode},
              {"samples", lyap_o.samples},
              {"kicks", lyap_o.kicks},
              {"grid", lyap_o.grid},
              {"transient", lyap_o.transient},
              {"threshold", lyap_o.threshold},
              {"threshold_value", lyap_o.threshold_value}},
             [&](Run& r) { cmd_lyapunov(r, lyap_o); });
    } else if (*spec) {
      launch("spectrum", spec_c,
             {{"sector", spec_o.sector},
              {"bins", spec_o.bins},
              {"s_max", spec_o.s_max},
              {"open", spec_o.open},
              {"dump_levels", spec_o.dump_levels}},
             [&](Run& r) { cmd_spectrum(r, spec_o); });
    } else if (*mf) {
      launch("multifractal", mf_c,
             {{"mode", mf_o.mode}, {"grid", mf_o.grid}, {"samples", mf_o.samples}, {"q", mf_o.q}, {"basis", mf_o.basis}},
             [&](Run& r) { cmd_multifractal(r, mf_o); });
    } else if (*cd) {
      launch("coeffdist", cd_c,
             {{"mode", cd_o.mode},
              {"samples", cd_o.samples},
              {"bins", cd_o.bins},
              {"cdf_points", cd_o.cdf_points},
              {"nu", cd_o.nu},
              {"literal_rmse", cd_o.literal_rmse},
              {"basis", cd_o.basis}},
             [&](Run& r) { cmd_coeffdist(r, cd_o); });
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
