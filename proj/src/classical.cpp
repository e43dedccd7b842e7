#include "kicked_top/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kicked_top {

ClassicalState ClassicalState::from_angles(double theta, double phi) {
  return {Eigen::Vector3d(std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta))};
}

double ClassicalState::theta() const { return std::acos(std::clamp(s.z() / s.norm(), -1.0, 1.0)); }

double ClassicalState::phi() const {
  const double p = std::atan2(s.y(), s.x());
  return p < 0.0 ? p + kTwoPi : p;
}

Eigen::Matrix3d stroboscopic_matrix(const ClassicalState& state, const KickedTopParams& params) {
  const double ca = std::cos(params.alpha);
  const double sa = std::sin(params.alpha);
  const double xi = params.kappa * (state.s.y() * sa + state.s.z() * ca);
  const double cx = std::cos(xi);
  const double sx = std::sin(xi);
  Eigen::Matrix3d m;
  m << cx, -ca * sx, sa * sx,
       sx, ca * cx, -sa * cx,
       0.0, sa, ca;
  return m;
}

ClassicalState classical_step(const ClassicalState& state, const KickedTopParams& params) {
  return {stroboscopic_matrix(state, params) * state.s};
}

Eigen::Matrix3d tangent_map(const ClassicalState& state, const KickedTopParams& params) {
  const Eigen::Matrix3d m = stroboscopic_matrix(state, params);
  const Eigen::Vector3d image = m * state.s;
  // dM/dXi S = (-S'_y, S'_x, 0) for the image S' = M S; dXi/dS = kappa (0, sin a, cos a).
  const Eigen::Vector3d d_image(-image.y(), image.x(), 0.0);
  const Eigen::Vector3d d_xi(0.0, params.kappa * std::sin(params.alpha), params.kappa * std::cos(params.alpha));
  return m + d_image * d_xi.transpose();
}

TangentFrame initial_tangent(const ClassicalState& state) {
  const Eigen::Vector3d s = state.s.normalized();
  Eigen::Vector3d e_theta(s.z() * std::cos(state.phi()), s.z() * std::sin(state.phi()), -std::sqrt(1.0 - std::min(1.0, s.z() * s.z())));
  if (e_theta.norm() < 1e-12) e_theta = Eigen::Vector3d::UnitX();
  e_theta -= e_theta.dot(s) * s;
  return {e_theta.normalized(), 0.0};
}

TangentFrame tangent_step(const ClassicalState& state, const TangentFrame& frame, const KickedTopParams& params) {
  const Eigen::Matrix3d m = stroboscopic_matrix(state, params);
  const Eigen::Vector3d image = m * state.s;
  const double ca = std::cos(params.alpha);
  const double sa = std::sin(params.alpha);
  const double d_xi = params.kappa * (frame.delta.y() * sa + frame.delta.z() * ca);
  Eigen::Vector3d delta = m * frame.delta + d_xi * Eigen::Vector3d(-image.y(), image.x(), 0.0);
  const Eigen::Vector3d n = image.normalized();
  delta -= delta.dot(n) * n;
  const double stretch = delta.norm();
  return {delta / stretch, frame.log_norm_accum + std::log(stretch)};
}

std::vector<ClassicalState> trajectory(const ClassicalState& start, const KickedTopParams& params, int n_kicks) {
  std::vector<ClassicalState> orbit;
  orbit.reserve(n_kicks);
  ClassicalState s = start;
  for (int n = 0; n < n_kicks; ++n) {
    s = classical_step(s, params);
    orbit.push_back(s);
  }
  return orbit;
}

LyapunovEstimate lyapunov_exponent(const ClassicalState& start, const KickedTopParams& params, int n_kicks,
                                   const LyapunovOptions& options) {
  if (n_kicks < 100) throw DomainError("Lyapunov estimation needs at least 100 kicks");
  ClassicalState s = start;
  TangentFrame frame = initial_tangent(s);
  for (int n = 0; n < options.transient; ++n) {
    frame = tangent_step(s, frame, params);
    s = classical_step(s, params);
  }
  frame.log_norm_accum = 0.0;

  const int blocks = std::max(1, std::min(options.blocks, n_kicks));
  std::vector<double> block_rates;
  block_rates.reserve(blocks);
  double block_start = 0.0;
  int block_begin = 0;
  for (int n = 0; n < n_kicks; ++n) {
    frame = tangent_step(s, frame, params);
    s = classical_step(s, params);
    const int block_end = static_cast<int>(static_cast<long long>(block_rates.size() + 1) * n_kicks / blocks);
    if (n + 1 == block_end) {
      block_rates.push_back((frame.log_norm_accum - block_start) / (block_end - block_begin));
      block_start = frame.log_norm_accum;
      block_begin = block_end;
    }
  }
  LyapunovEstimate estimate{frame.log_norm_accum / n_kicks, 0.0};
  if (block_rates.size() > 1) estimate.error = mean_estimate(block_rates).stderr_of_mean;
  return estimate;
}

LyapunovField lyapunov_field(const KickedTopParams& params, const GridSpec& grid, int n_kicks,
                             const LyapunovOptions& options) {
  grid.validate();
  LyapunovField field{grid, std::vector<double>(grid.size())};
#pragma omp parallel for schedule(dynamic, 16)
  for (int cell = 0; cell < grid.size(); ++cell) {
    const SpherePoint p = grid.cell(cell);
    field.lambda[cell] = lyapunov_exponent(ClassicalState::from_angles(p.theta, p.phi), params, n_kicks, options).lambda;
  }
  return field;
}

AveragedLyapunov averaged_lyapunov(const KickedTopParams& params, int n_samples, int n_kicks, std::uint64_t seed,
                                   const LyapunovOptions& options) {
  if (n_samples < 1000) throw DomainError("phase-space averages need at least 1000 samples");
  const std::vector<SpherePoint> starts = haar_points(seed, n_samples);
  std::vector<double> lambda(n_samples);
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n_samples; ++i) {
    lambda[i] = lyapunov_exponent(ClassicalState::from_angles(starts[i].theta, starts[i].phi), params, n_kicks, options)
                    .lambda;
  }
  const MeanEstimate est = mean_estimate(lambda);
  return {est.mean, est.stderr_of_mean, 4.0 * kPi * est.mean};
}

double kappa_threshold(double alpha, const ThresholdOptions& options) {
  if (std::abs(std::sin(alpha)) < 1e-12) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is an integrable line; no chaos threshold exists";
    throw DomainError(msg.str());
  }
  auto averaged = [&](double kappa) {
    return averaged_lyapunov({alpha, kappa, 1}, options.n_samples, options.n_kicks, options.seed).mean;
  };
  double lo = 0.0;
  double hi = options.kappa_max;
  if (averaged(hi) < options.threshold) {
    std::ostringstream msg;
    msg << "averaged Lyapunov exponent stays below " << options.threshold << " for kappa in [0, " << hi
        << "] at alpha = " << alpha;
    throw DomainError(msg.str());
  }
  while (hi - lo > options.resolution) {
    const double mid = 0.5 * (lo + hi);
    (averaged(mid) < options.threshold ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace kicked_top
