#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kicked_top/floquet.hpp"
#include "kicked_top/sampling.hpp"

namespace kicked_top {

inline constexpr double kInfiniteQ = std::numeric_limits<double>::infinity();

/// Weights below this are dropped from the q <= 1 sums.
inline constexpr double kWeightCutoff = 1e-300;

/// Which Floquet eigenvectors a state is expanded in.
enum class ExpansionBasis { full, even, odd };

/// Probabilities |w_i|^2 of a state in a Floquet eigenbasis.
struct ExpansionCoefficients {
  RealVector weights;
  int basis_dim() const { return static_cast<int>(weights.size()); }
};

/// |w_i|^2 = |<nu_i|theta,phi>|^2.
///
/// Sector bases keep only the eigenvectors of that parity; the weights are
/// then renormalized over the sector.
ExpansionCoefficients expand_in_floquet_basis(const CoherentState& state, const FloquetEigensystem& eig,
                                              ExpansionBasis basis = ExpansionBasis::full);

/// Expands many states at once. Column c of the result holds the weights of
/// `points[c]`.
RealMatrix expansion_weights(const FloquetEigensystem& eig, std::span<const SpherePoint> points,
                             ExpansionBasis basis = ExpansionBasis::full);

/// Renyi entropies S_q and fractal dimensions D_q = S_q / ln N.
struct MultifractalResult {
  std::vector<double> q_values;
  std::vector<double> dimensions;
  std::vector<double> entropies;
};

/// q = 1 is the Shannon limit; q = kInfiniteQ uses -ln max_k |c_k|^2.
MultifractalResult fractal_dimensions(std::span<const double> weights, std::span<const double> q_values);
MultifractalResult fractal_dimensions(const ExpansionCoefficients& coeffs, std::span<const double> q_values);

struct DqField {
  GridSpec grid;
  std::vector<double> q_values;
  /// Indexed [cell][q].
  std::vector<std::vector<double>> dimensions;
};

DqField dq_field(const FloquetEigensystem& eig, const GridSpec& grid, std::span<const double> q_values,
                 ExpansionBasis basis = ExpansionBasis::full);

struct AveragedDq {
  std::vector<double> q_values;
  std::vector<double> mean;
  std::vector<double> stderr_of_mean;
  int samples = 0;
};

/// Phase-space average of D_q over Haar-uniform coherent states.
AveragedDq averaged_dq(const FloquetEigensystem& eig, int n_samples, std::span<const double> q_values,
                       std::uint64_t seed, ExpansionBasis basis = ExpansionBasis::full);

enum class ScalingModel {
  /// D = intercept - slope / ln N
  linear_in_invlogN,
  /// D = intercept - slope ln(ln N) / ln N
  loglog_in_invlogN,
};

std::string to_string(ScalingModel model);

struct ScalingFit {
  ScalingModel model = ScalingModel::linear_in_invlogN;
  /// Extrapolated N -> infinity value.
  double intercept = 0.0;
  /// The coefficient g_q (or f_q) of the finite-size correction.
  double slope = 0.0;
  /// Root-mean-square residual of the fit.
  double residual = 0.0;
  double min_dimension = 0.0;
  double max_dimension = 0.0;
};

struct ScalingPoint {
  double dimension = 0.0;  // Hilbert-space dimension N
  double value = 0.0;
};

/// Least-squares fit of averaged D_q against the finite-size variable; needs
/// at least 4 system sizes.
ScalingFit scaling_fit(std::span<const ScalingPoint> points, ScalingModel model);

/// Evaluates a fit at dimension N; throws outside the fitted N range.
double evaluate_scaling(const ScalingFit& fit, double dimension);

/// Parses "1,2,inf"-style q lists.
std::vector<double> parse_q_values(const std::string& text);

}  // namespace kicked_top
