#pragma once

#include <span>
#include <string>
#include <vector>

namespace kicked_top {

/// Nearest-neighbour spacings of a quasienergy sequence.
struct SpacingEnsemble {
  /// d_i = nu_{i+1} - nu_i, plus the wrap-around gap when periodic.
  std::vector<double> raw_gaps;
  /// s_i = d_i / <d>.
  std::vector<double> spacings;
  /// Number of exactly repeated levels.
  int zero_spacings = 0;
};

/// Builds spacings from ascending quasienergies in [-pi, pi).
SpacingEnsemble spacings_from_quasienergies(std::span<const double> nu, bool periodic = true);

/// Normalizing constant b = Gamma((beta + 2) / (beta + 1))^(beta + 1).
double brody_b(double beta);

/// Brody density b (beta + 1) s^beta exp(-b s^(beta + 1)); unit norm and mean.
double brody_pdf(double s, double beta);

/// Brody cumulative distribution 1 - exp(-b s^(beta + 1)).
double brody_cdf(double s, double beta);

struct BrodyFit {
  double beta = 0.0;
  /// Negative log-likelihood per spacing at the optimum.
  double fit_error = 0.0;
  std::string method;
  /// Spacings left out of the likelihood because they were exactly zero.
  int excluded = 0;
};

/// Maximum-likelihood Brody exponent on [0, 1] by golden-section search.
BrodyFit fit_brody(const SpacingEnsemble& ensemble);
BrodyFit fit_brody(std::span<const double> spacings);

struct RatioStats {
  double mean_r = 0.0;
  int count = 0;
  /// Ratios skipped because a neighbouring gap was zero.
  int excluded = 0;
};

/// Mean of r_i = min(delta_i, 1 / delta_i), delta_i = d_{i+1} / d_i.
RatioStats ratio_stats(std::span<const double> raw_gaps);

struct Histogram {
  std::vector<double> centers;
  std::vector<double> density;
  double width = 0.0;
};

/// Density-normalized histogram of the spacings on [0, s_max].
Histogram spacing_histogram(const SpacingEnsemble& ensemble, int bins = 50, double s_max = 4.0);

}  // namespace kicked_top
