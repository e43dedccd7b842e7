#include "kicked_top/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "kicked_top/types.hpp"

namespace kicked_top {

SpacingEnsemble spacings_from_quasienergies(std::span<const double> nu, bool periodic) {
  if (nu.size() < 3) throw DomainError("spacing statistics need at least 3 levels");
  if (!std::is_sorted(nu.begin(), nu.end())) throw DomainError("quasienergies must be sorted ascending");
  SpacingEnsemble out;
  for (std::size_t i = 0; i + 1 < nu.size(); ++i) out.raw_gaps.push_back(nu[i + 1] - nu[i]);
  if (periodic) out.raw_gaps.push_back(nu.front() + kTwoPi - nu.back());

  double sum = 0.0;
  for (double d : out.raw_gaps) {
    sum += d;
    if (d == 0.0) ++out.zero_spacings;
  }
  const double mean = sum / static_cast<double>(out.raw_gaps.size());
  if (!(mean > 0.0)) throw DomainError("all quasienergies coincide; spacings are undefined");
  out.spacings.reserve(out.raw_gaps.size());
  for (double d : out.raw_gaps) out.spacings.push_back(d / mean);
  return out;
}

double brody_b(double beta) { return std::pow(std::tgamma((beta + 2.0) / (beta + 1.0)), beta + 1.0); }

double brody_pdf(double s, double beta) {
  if (s < 0.0) return 0.0;
  const double b = brody_b(beta);
  const double s_beta = beta == 0.0 ? 1.0 : std::pow(s, beta);
  return b * (beta + 1.0) * s_beta * std::exp(-b * s_beta * s);
}

double brody_cdf(double s, double beta) {
  if (s <= 0.0) return 0.0;
  return -std::expm1(-brody_b(beta) * std::pow(s, beta + 1.0));
}

BrodyFit fit_brody(const SpacingEnsemble& ensemble) { return fit_brody(ensemble.spacings); }

BrodyFit fit_brody(std::span<const double> spacings) {
  std::vector<double> logs;
  std::vector<double> values;
  int excluded = 0;
  for (double s : spacings) {
    if (s > 0.0) {
      values.push_back(s);
      logs.push_back(std::log(s));
    } else {
      ++excluded;
    }
  }
  if (values.empty()) throw DomainError("Brody fit needs positive spacings");
  const double n = static_cast<double>(values.size());
  double sum_log = 0.0;
  for (double l : logs) sum_log += l;

  // Negative mean log-likelihood; unimodal in beta on [0, 1].
  auto nll = [&](double beta) {
    const double b = brody_b(beta);
    double tail = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) tail += std::exp((beta + 1.0) * logs[i]);
    return -(std::log(b) + std::log(beta + 1.0) + beta * sum_log / n - b * tail / n);
  };

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = nll(x1);
  double f2 = nll(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = nll(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = nll(x2);
    }
  }
  // The optimum may sit on the box boundary.
  double beta = 0.5 * (lo + hi);
  double best = nll(beta);
  for (double edge : {0.0, 1.0}) {
    const double f = nll(edge);
    if (f < best) {
      best = f;
      beta = edge;
    }
  }
  return {beta, best, "mle-golden-section", excluded};
}

RatioStats ratio_stats(std::span<const double> raw_gaps) {
  if (raw_gaps.size() < 3) throw DomainError("ratio statistics need at least 3 gaps");
  RatioStats out;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < raw_gaps.size(); ++i) {
    const double a = raw_gaps[i];
    const double b = raw_gaps[i + 1];
    if (a <= 0.0 || b <= 0.0) {
      ++out.excluded;
      continue;
    }
    sum += std::min(a, b) / std::max(a, b);
    ++out.count;
  }
  if (out.count == 0) throw DomainError("all gaps are zero; spacing ratios are undefined");
  out.mean_r = sum / out.count;
  return out;
}

Histogram spacing_histogram(const SpacingEnsemble& ensemble, int bins, double s_max) {
  if (bins < 1 || !(s_max > 0.0)) throw DomainError("histogram needs positive bins and range");
  Histogram h;
  h.width = s_max / bins;
  h.centers.resize(bins);
  h.density.assign(bins, 0.0);
  for (int b = 0; b < bins; ++b) h.centers[b] = (b + 0.5) * h.width;
  for (double s : ensemble.spacings) {
    const int b = static_cast<int>(s / h.width);
    if (b >= 0 && b < bins) h.density[b] += 1.0;
  }
  const double norm = static_cast<double>(ensemble.spacings.size()) * h.width;
  for (double& d : h.density) d /= norm;
  return h;
}

}  // namespace kicked_top
