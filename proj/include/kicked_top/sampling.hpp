#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace kicked_top {

/// A point on the unit sphere in polar/azimuthal coordinates.
struct SpherePoint {
  double theta = 0.0;
  double phi = 0.0;
};

/// Uniform angular grid of cell centres over (phi, theta).
///
/// Cell (i_phi, i_theta) is stored at index i_theta * n_phi + i_phi.
struct GridSpec {
  int n_phi = 50;
  int n_theta = 50;
  double phi_min = 0.0;
  double phi_max = 6.283185307179586;
  double theta_min = 0.0;
  double theta_max = 3.141592653589793;

  int size() const { return n_phi * n_theta; }
  SpherePoint cell(int index) const;
  void validate() const;
};

/// Independent random stream for task `task` of a run seeded with `seed`.
/// Streams depend only on (seed, task), never on scheduling.
std::mt19937_64 task_stream(std::uint64_t seed, std::uint64_t task);

/// Haar-uniform point: theta = arccos(1 - 2u), phi = 2 pi v.
SpherePoint haar_point(std::mt19937_64& rng);

/// `count` Haar-uniform points, point i drawn from task_stream(seed, i).
std::vector<SpherePoint> haar_points(std::uint64_t seed, int count);

/// Mean and standard error of the mean.
struct MeanEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

MeanEstimate mean_estimate(const std::vector<double>& values);

/// Spearman rank correlation; tied values share their average rank.
double rank_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace kicked_top
