#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kicked_top/floquet.hpp"
#include "kicked_top/sampling.hpp"

namespace kicked_top {

/// Classical angular momentum S = J/j on the unit sphere.
struct ClassicalState {
  Eigen::Vector3d s = Eigen::Vector3d::UnitZ();

  /// S = (cos phi sin theta, sin phi sin theta, cos theta).
  static ClassicalState from_angles(double theta, double phi);
  double theta() const;
  /// Azimuth in [0, 2pi).
  double phi() const;
};

/// The one-kick rotation M(S): precession by alpha about x followed by a
/// rotation about z by Xi = kappa (S_y sin alpha + S_z cos alpha).
Eigen::Matrix3d stroboscopic_matrix(const ClassicalState& state, const KickedTopParams& params);

/// S(n+1) = M(S(n)) S(n).
ClassicalState classical_step(const ClassicalState& state, const KickedTopParams& params);

/// Jacobian dS(n+1)/dS(n) of the map, including the dependence of Xi on S.
Eigen::Matrix3d tangent_map(const ClassicalState& state, const KickedTopParams& params);

/// Unit tangent vector plus accumulated log stretching.
struct TangentFrame {
  Eigen::Vector3d delta = Eigen::Vector3d::UnitX();
  double log_norm_accum = 0.0;
};

/// Tangent vector perpendicular to S, along the theta direction (or x at the poles).
TangentFrame initial_tangent(const ClassicalState& state);

/// Maps the tangent vector by the Jacobian at `state`, projects it back onto
/// the tangent plane of the image point, renormalizes it and accumulates the
/// log stretch.
TangentFrame tangent_step(const ClassicalState& state, const TangentFrame& frame, const KickedTopParams& params);

struct LyapunovOptions {
  /// Kicks iterated before accumulation starts.
  int transient = 100;
  /// Blocks used for the batch-means error estimate.
  int blocks = 10;
};

struct LyapunovEstimate {
  /// Largest Lyapunov exponent per kick.
  double lambda = 0.0;
  /// Batch-means standard error of `lambda`.
  double error = 0.0;
};

/// Benettin estimate of the largest Lyapunov exponent over `n_kicks` kicks.
LyapunovEstimate lyapunov_exponent(const ClassicalState& start, const KickedTopParams& params, int n_kicks,
                                   const LyapunovOptions& options = {});

/// `n_kicks` points of the orbit starting at `start` (the start excluded).
std::vector<ClassicalState> trajectory(const ClassicalState& start, const KickedTopParams& params, int n_kicks);

struct LyapunovField {
  GridSpec grid;
  std::vector<double> lambda;
};

LyapunovField lyapunov_field(const KickedTopParams& params, const GridSpec& grid, int n_kicks,
                             const LyapunovOptions& options = {});

struct AveragedLyapunov {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  /// Kolmogorov-Sinai entropy by Pesin's formula, 4 pi times the mean.
  double ks_entropy = 0.0;
};

/// Monte-Carlo phase-space average of lambda over Haar-uniform starts.
AveragedLyapunov averaged_lyapunov(const KickedTopParams& params, int n_samples, int n_kicks, std::uint64_t seed,
                                   const LyapunovOptions& options = {});

struct ThresholdOptions {
  double threshold = 0.002;
  double kappa_max = 10.0;
  double resolution = 0.05;
  int n_samples = 1000;
  int n_kicks = 5000;
  std::uint64_t seed = 1;
};

/// Smallest kappa at which the averaged exponent crosses `threshold`, by
/// bisection on [0, kappa_max]. Throws DomainError when no crossing exists.
double kappa_threshold(double alpha, const ThresholdOptions& options = {});

}  // namespace kicked_top
