#include "kicked_top/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kicked_top/types.hpp"

namespace kicked_top {

SpherePoint GridSpec::cell(int index) const {
  const int i_phi = index % n_phi;
  const int i_theta = index / n_phi;
  const double d_phi = (phi_max - phi_min) / n_phi;
  const double d_theta = (theta_max - theta_min) / n_theta;
  return {theta_min + (i_theta + 0.5) * d_theta, phi_min + (i_phi + 0.5) * d_phi};
}

void GridSpec::validate() const {
  if (n_phi < 1 || n_theta < 1) throw DomainError("grid resolution must be positive");
  if (!(phi_max > phi_min) || !(theta_max > theta_min)) throw DomainError("grid ranges must be non-empty");
  if (theta_min < 0.0 || theta_max > kPi) throw DomainError("theta range must lie inside [0, pi]");
}

std::mt19937_64 task_stream(std::uint64_t seed, std::uint64_t task) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32)};
  return std::mt19937_64(seq);
}

SpherePoint haar_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  const double v = uniform(rng);
  return {std::acos(1.0 - 2.0 * u), kTwoPi * v};
}

std::vector<SpherePoint> haar_points(std::uint64_t seed, int count) {
  std::vector<SpherePoint> points(count);
  for (int i = 0; i < count; ++i) {
    auto rng = task_stream(seed, static_cast<std::uint64_t>(i));
    points[i] = haar_point(rng);
  }
  return points;
}

MeanEstimate mean_estimate(const std::vector<double>& values) {
  if (values.empty()) throw DomainError("mean of an empty sample");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t k = i;
    while (k + 1 < order.size() && v[order[k + 1]] == v[order[i]]) ++k;
    const double shared = 0.5 * static_cast<double>(i + k) + 1.0;
    for (std::size_t t = i; t <= k; ++t) rank[order[t]] = shared;
    i = k + 1;
  }
  return rank;
}

}  // namespace

double rank_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("rank correlation needs two samples of equal size >= 2");
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = 0.5 * (n + 1.0);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) throw DomainError("rank correlation of a constant sample is undefined");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace kicked_top
