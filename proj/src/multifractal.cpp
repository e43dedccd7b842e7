#include "kicked_top/multifractal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace kicked_top {

namespace {

constexpr int kChunk = 256;

ComplexMatrix basis_vectors(const FloquetEigensystem& eig, ExpansionBasis basis) {
  switch (basis) {
    case ExpansionBasis::even:
      return eig.sector_vectors(Parity::even);
    case ExpansionBasis::odd:
      return eig.sector_vectors(Parity::odd);
    case ExpansionBasis::full:
      break;
  }
  return eig.eigenvectors;
}

RealMatrix project(const ComplexMatrix& adjoint, const SpinBasis& spin, std::span<const SpherePoint> points,
                   bool renormalize) {
  const int count = static_cast<int>(points.size());
  RealMatrix weights(adjoint.rows(), count);
  ComplexMatrix states(spin.dim(), kChunk);
  for (int begin = 0; begin < count; begin += kChunk) {
    const int width = std::min(kChunk, count - begin);
    for (int c = 0; c < width; ++c) {
      states.col(c) = coherent_state(spin, points[begin + c].theta, points[begin + c].phi).amplitudes;
    }
    const ComplexMatrix overlaps = adjoint * states.leftCols(width);
    weights.middleCols(begin, width) = overlaps.cwiseAbs2();
  }
  if (renormalize) {
    for (int c = 0; c < count; ++c) weights.col(c) /= weights.col(c).sum();
  }
  return weights;
}

}  // namespace

RealMatrix expansion_weights(const FloquetEigensystem& eig, std::span<const SpherePoint> points,
                             ExpansionBasis basis) {
  const ComplexMatrix adjoint = basis_vectors(eig, basis).adjoint();
  return project(adjoint, eig.params.basis(), points, basis != ExpansionBasis::full);
}

ExpansionCoefficients expand_in_floquet_basis(const CoherentState& state, const FloquetEigensystem& eig,
                                              ExpansionBasis basis) {
  if (state.amplitudes.size() != eig.eigenvectors.rows()) {
    throw DomainError("coherent state dimension does not match the eigensystem");
  }
  const ComplexMatrix vectors = basis_vectors(eig, basis);
  RealVector weights = (vectors.adjoint() * state.amplitudes).cwiseAbs2();
  if (basis != ExpansionBasis::full) weights /= weights.sum();
  return {std::move(weights)};
}

MultifractalResult fractal_dimensions(std::span<const double> weights, std::span<const double> q_values) {
  const std::size_t n = weights.size();
  if (n < 2) throw DomainError("fractal dimensions need a basis of at least 2 states (ln N = 0)");
  const double log_n = std::log(static_cast<double>(n));
  MultifractalResult out;
  out.q_values.assign(q_values.begin(), q_values.end());
  for (double q : q_values) {
    if (!(q >= 0.0)) throw DomainError("q must be non-negative");
    double entropy = 0.0;
    if (std::isinf(q)) {
      entropy = -std::log(*std::max_element(weights.begin(), weights.end()));
    } else if (q == 1.0) {
      for (double w : weights) {
        if (w > kWeightCutoff) entropy -= w * std::log(w);
      }
    } else if (q == 0.0) {
      entropy = std::log(static_cast<double>(std::count_if(weights.begin(), weights.end(),
                                                           [](double w) { return w > kWeightCutoff; })));
    } else {
      double moment = 0.0;
      for (double w : weights) {
        if (q > 1.0 || w > kWeightCutoff) moment += std::pow(w, q);
      }
      entropy = std::log(moment) / (1.0 - q);
    }
    out.entropies.push_back(entropy);
    out.dimensions.push_back(entropy / log_n);
  }
  return out;
}

MultifractalResult fractal_dimensions(const ExpansionCoefficients& coeffs, std::span<const double> q_values) {
  return fractal_dimensions(std::span<const double>(coeffs.weights.data(), coeffs.weights.size()), q_values);
}

DqField dq_field(const FloquetEigensystem& eig, const GridSpec& grid, std::span<const double> q_values,
                 ExpansionBasis basis) {
  grid.validate();
  std::vector<SpherePoint> points(grid.size());
  for (int cell = 0; cell < grid.size(); ++cell) points[cell] = grid.cell(cell);
  const RealMatrix weights = expansion_weights(eig, points, basis);
  DqField field{grid, {q_values.begin(), q_values.end()}, std::vector<std::vector<double>>(grid.size())};
#pragma omp parallel for schedule(static)
  for (int cell = 0; cell < grid.size(); ++cell) {
    field.dimensions[cell] =
        fractal_dimensions(std::span<const double>(weights.col(cell).data(), weights.rows()), q_values).dimensions;
  }
  return field;
}

AveragedDq averaged_dq(const FloquetEigensystem& eig, int n_samples, std::span<const double> q_values,
                       std::uint64_t seed, ExpansionBasis basis) {
  if (n_samples < 100) throw DomainError("phase-space averages of D_q need at least 100 samples");
  const std::vector<SpherePoint> points = haar_points(seed, n_samples);
  const RealMatrix weights = expansion_weights(eig, points, basis);
  const std::size_t nq = q_values.size();
  std::vector<std::vector<double>> per_q(nq, std::vector<double>(n_samples));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < n_samples; ++c) {
    const auto dims =
        fractal_dimensions(std::span<const double>(weights.col(c).data(), weights.rows()), q_values).dimensions;
    for (std::size_t k = 0; k < nq; ++k) per_q[k][c] = dims[k];
  }
  AveragedDq out;
  out.q_values.assign(q_values.begin(), q_values.end());
  out.samples = n_samples;
  for (const auto& values : per_q) {
    const MeanEstimate est = mean_estimate(values);
    out.mean.push_back(est.mean);
    out.stderr_of_mean.push_back(est.stderr_of_mean);
  }
  return out;
}

std::string to_string(ScalingModel model) {
  return model == ScalingModel::linear_in_invlogN ? "linear_in_invlogN" : "loglog_in_invlogN";
}

namespace {

double scaling_variable(ScalingModel model, double dimension) {
  const double log_n = std::log(dimension);
  return model == ScalingModel::linear_in_invlogN ? 1.0 / log_n : std::log(log_n) / log_n;
}

}  // namespace

ScalingFit scaling_fit(std::span<const ScalingPoint> points, ScalingModel model) {
  if (points.size() < 4) throw DomainError("scaling fit needs at least 4 system sizes");
  const double n = static_cast<double>(points.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : points) {
    if (!(p.dimension > 1.0)) throw DomainError("scaling fit needs Hilbert-space dimensions N > 1");
    sx += scaling_variable(model, p.dimension);
    sy += p.value;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dx = scaling_variable(model, p.dimension) - mx;
    sxx += dx * dx;
    sxy += dx * (p.value - my);
  }
  if (!(sxx > 0.0)) throw DomainError("scaling fit needs at least two distinct system sizes");
  const double b = sxy / sxx;
  ScalingFit fit;
  fit.model = model;
  fit.intercept = my - b * mx;
  fit.slope = -b;
  double ss = 0.0;
  fit.min_dimension = points.front().dimension;
  fit.max_dimension = points.front().dimension;
  for (const auto& p : points) {
    const double r = p.value - (fit.intercept + b * scaling_variable(model, p.dimension));
    ss += r * r;
    fit.min_dimension = std::min(fit.min_dimension, p.dimension);
    fit.max_dimension = std::max(fit.max_dimension, p.dimension);
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

double evaluate_scaling(const ScalingFit& fit, double dimension) {
  if (dimension < fit.min_dimension || dimension > fit.max_dimension) {
    std::ostringstream msg;
    msg << "N = " << dimension << " lies outside the fitted range [" << fit.min_dimension << ", "
        << fit.max_dimension << "]";
    throw DomainError(msg.str());
  }
  return fit.intercept - fit.slope * scaling_variable(fit.model, dimension);
}

std::vector<double> parse_q_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                token.end());
    std::transform(token.begin(), token.end(), token.begin(), [](unsigned char c) { return std::tolower(c); });
    if (token.empty()) continue;
    if (token == "inf" || token == "infinity") {
      out.push_back(kInfiniteQ);
      continue;
    }
    std::size_t used = 0;
    double q = 0.0;
    try {
      q = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || q < 0.0) throw DomainError("invalid q value '" + token + "'");
    out.push_back(q);
  }
  if (out.empty()) throw DomainError("empty q list");
  return out;
}

}  // namespace kicked_top
