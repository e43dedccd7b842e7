#pragma once

#include <cstdint>
#include <vector>

#include "kicked_top/multifractal.hpp"

namespace kicked_top {

/// Rescaled intensities x_i = N |w_i|^2 pooled over many coherent states.
struct RescaledCoefficients {
  std::vector<double> x;
  double mean_x = 0.0;
};

/// Pools x_i over `n_states` Haar-uniform coherent states.
RescaledCoefficients pool_rescaled_coefficients(const FloquetEigensystem& eig, int n_states, std::uint64_t seed,
                                                ExpansionBasis basis = ExpansionBasis::full);

/// Wraps raw values, computing their mean.
RescaledCoefficients make_pool(std::vector<double> x);

/// chi^2_nu density with mean <x>:
/// (nu / 2<x>)^(nu/2) x^(nu/2 - 1) / Gamma(nu/2) exp(-nu x / 2<x>).
double chisq_pdf(double x, double nu, double mean_x = 1.0);

/// Density of ln x, x P_nu(x); peaks at x = <x>.
double chisq_logpdf_form(double x, double nu, double mean_x = 1.0);

/// Regularized lower incomplete gamma P(nu/2, nu x / 2<x>).
double chisq_cdf(double x, double nu, double mean_x = 1.0);

struct LogHistogram {
  std::vector<double> edges;  // in ln x
  std::vector<double> centers;
  /// Empirical density per unit ln x.
  std::vector<double> density;
  /// chi^2_nu reference density of ln x at each centre.
  std::vector<double> reference_density;
  double nu = 2.0;
  std::size_t zero_excluded = 0;
};

/// Freedman-Diaconis width for samples (2 IQR n^(-1/3)).
double freedman_diaconis_width(std::vector<double> samples);

/// Density-normalized histogram of ln x. `bins` <= 0 selects the
/// Freedman-Diaconis rule.
LogHistogram empirical_log_histogram(const RescaledCoefficients& pool, int bins = 0, double nu = 2.0);

struct DistanceOptions {
  /// Integrate F - F_nu without squaring (absolute value under the root).
  bool literal_rmse = false;
};

struct DistanceReport {
  /// Square root of the Kullback-Leibler divergence of P from P_nu.
  double skld = 0.0;
  /// Root-mean-square deviation of the empirical CDF from F_nu.
  double rmse = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  int bins = 0;
  double bin_width = 0.0;  // in ln x
  std::size_t samples = 0;
  std::size_t zero_excluded = 0;
  bool literal_rmse = false;
};

/// SKLD and RMSE of the pool against chi^2_nu with the pooled mean, both
/// evaluated on [min x, max x].
DistanceReport distance_report(const RescaledCoefficients& pool, double nu, const DistanceOptions& options = {});

struct CdfPoint {
  double x = 0.0;
  double empirical = 0.0;
  double reference = 0.0;
};

/// Empirical and reference CDFs on `points` log-spaced abscissae.
std::vector<CdfPoint> cdf_overlay(const RescaledCoefficients& pool, double nu, int points = 200);

}  // namespace kicked_top
