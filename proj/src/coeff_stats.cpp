#include "kicked_top/coeff_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

namespace kicked_top {

namespace {

void check_reference(double nu, double mean_x) {
  if (!(nu > 0.0)) throw DomainError("chi-squared degrees of freedom must be positive");
  if (!(mean_x > 0.0)) throw DomainError("chi-squared mean must be positive");
}

std::vector<double> positive_sorted(const RescaledCoefficients& pool, std::size_t& zeros) {
  std::vector<double> x;
  x.reserve(pool.x.size());
  for (double v : pool.x) {
    if (v > 0.0) x.push_back(v);
  }
  zeros = pool.x.size() - x.size();
  std::sort(x.begin(), x.end());
  return x;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

RescaledCoefficients make_pool(std::vector<double> x) {
  RescaledCoefficients pool{std::move(x), 0.0};
  if (!pool.x.empty()) {
    double sum = 0.0;
    for (double v : pool.x) sum += v;
    pool.mean_x = sum / static_cast<double>(pool.x.size());
  }
  return pool;
}

RescaledCoefficients pool_rescaled_coefficients(const FloquetEigensystem& eig, int n_states, std::uint64_t seed,
                                                ExpansionBasis basis) {
  if (n_states < 1) throw DomainError("pooling needs at least one state");
  const std::vector<SpherePoint> points = haar_points(seed, n_states);
  const RealMatrix weights = expansion_weights(eig, points, basis);
  const double n = static_cast<double>(weights.rows());
  std::vector<double> x(weights.data(), weights.data() + weights.size());
  for (double& v : x) v *= n;
  return make_pool(std::move(x));
}

double chisq_pdf(double x, double nu, double mean_x) {
  check_reference(nu, mean_x);
  if (x < 0.0) return 0.0;
  const double half = 0.5 * nu;
  const double rate = half / mean_x;
  if (x == 0.0) {
    if (half < 1.0) return std::numeric_limits<double>::infinity();
    return half == 1.0 ? rate : 0.0;
  }
  return std::exp(half * std::log(rate) + (half - 1.0) * std::log(x) - std::lgamma(half) - rate * x);
}

double chisq_logpdf_form(double x, double nu, double mean_x) {
  if (!(x > 0.0)) throw DomainError("the ln x density needs x > 0");
  return x * chisq_pdf(x, nu, mean_x);
}

double chisq_cdf(double x, double nu, double mean_x) {
  check_reference(nu, mean_x);
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(0.5 * nu, 0.5 * nu * x / mean_x);
}

double freedman_diaconis_width(std::vector<double> samples) {
  if (samples.size() < 2) throw DomainError("Freedman-Diaconis width needs at least 2 samples");
  std::sort(samples.begin(), samples.end());
  const double iqr = quantile_sorted(samples, 0.75) - quantile_sorted(samples, 0.25);
  return 2.0 * iqr / std::cbrt(static_cast<double>(samples.size()));
}

namespace {

struct LogBins {
  std::vector<double> edges;
  std::vector<double> counts;
};

LogBins bin_logs(const std::vector<double>& sorted_x, int bins) {
  std::vector<double> logs(sorted_x.size());
  std::transform(sorted_x.begin(), sorted_x.end(), logs.begin(), [](double v) { return std::log(v); });
  const double lo = logs.front();
  const double hi = logs.back();
  if (!(hi > lo)) throw DomainError("degenerate pool: all coefficients are equal");
  if (bins <= 0) {
    const double width = freedman_diaconis_width(logs);
    bins = width > 0.0 ? static_cast<int>(std::ceil((hi - lo) / width)) : 1;
    bins = std::clamp(bins, 1, 100000);
  }
  LogBins out;
  const double width = (hi - lo) / bins;
  out.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) out.edges[b] = lo + b * width;
  out.edges.back() = hi;
  out.counts.assign(bins, 0.0);
  for (double u : logs) {
    const int b = std::min(bins - 1, static_cast<int>((u - lo) / width));
    out.counts[b] += 1.0;
  }
  return out;
}

}  // namespace

LogHistogram empirical_log_histogram(const RescaledCoefficients& pool, int bins, double nu) {
  std::size_t zeros = 0;
  const std::vector<double> x = positive_sorted(pool, zeros);
  if (x.size() < 2) throw DomainError("log histogram needs at least 2 positive coefficients");
  const LogBins binned = bin_logs(x, bins);
  LogHistogram h;
  h.edges = binned.edges;
  h.nu = nu;
  h.zero_excluded = zeros;
  const double n = static_cast<double>(x.size());
  for (std::size_t b = 0; b < binned.counts.size(); ++b) {
    const double width = h.edges[b + 1] - h.edges[b];
    const double center = 0.5 * (h.edges[b] + h.edges[b + 1]);
    h.centers.push_back(center);
    h.density.push_back(binned.counts[b] / (n * width));
    h.reference_density.push_back(chisq_logpdf_form(std::exp(center), nu, pool.mean_x));
  }
  return h;
}

DistanceReport distance_report(const RescaledCoefficients& pool, double nu, const DistanceOptions& options) {
  check_reference(nu, 1.0);
  std::size_t zeros = 0;
  const std::vector<double> x = positive_sorted(pool, zeros);
  if (x.size() < 2) throw DomainError("distance report needs at least 2 positive coefficients");
  const double mean = pool.mean_x;
  if (!(mean > 0.0)) throw DomainError("pool mean must be positive");

  DistanceReport report;
  report.samples = x.size();
  report.zero_excluded = zeros;
  report.x_min = x.front();
  report.x_max = x.back();
  report.literal_rmse = options.literal_rmse;

  // KL divergence is invariant under x -> ln x, so compare bin masses in ln x.
  const LogBins binned = bin_logs(x, 0);
  report.bins = static_cast<int>(binned.counts.size());
  report.bin_width = binned.edges[1] - binned.edges[0];
  const double n = static_cast<double>(x.size());
  double kl = 0.0;
  double previous_cdf = chisq_cdf(std::exp(binned.edges.front()), nu, mean);
  for (std::size_t b = 0; b < binned.counts.size(); ++b) {
    const double next_cdf = chisq_cdf(std::exp(binned.edges[b + 1]), nu, mean);
    const double q = std::max(next_cdf - previous_cdf, 1e-300);
    previous_cdf = next_cdf;
    if (binned.counts[b] > 0.0) {
      const double p = binned.counts[b] / n;
      kl += p * std::log(p / q);
    }
  }
  report.skld = std::sqrt(std::max(0.0, kl));

  // The empirical CDF is flat at (i+1)/n between consecutive samples;
  // integrate each piece by composite Simpson with panels no wider than
  // 1/4096 of the range.
  const double panel = (report.x_max - report.x_min) / 4096.0;
  auto deviation = [&](double level, double t) {
    const double d = level - chisq_cdf(t, nu, mean);
    return options.literal_rmse ? d : d * d;
  };
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i];
    const double b = x[i + 1];
    if (!(b > a)) continue;
    const double level = static_cast<double>(i + 1) / n;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double h = (b - a) / pieces;
    double sum = deviation(level, a) + deviation(level, b);
    for (int k = 0; k < pieces; ++k) {
      sum += 4.0 * deviation(level, a + (k + 0.5) * h);
      if (k > 0) sum += 2.0 * deviation(level, a + k * h);
    }
    integral += sum * h / 6.0;
  }
  report.rmse = std::sqrt(std::abs(integral) / (report.x_max - report.x_min));
  return report;
}

std::vector<CdfPoint> cdf_overlay(const RescaledCoefficients& pool, double nu, int points) {
  std::size_t zeros = 0;
  const std::vector<double> x = positive_sorted(pool, zeros);
  if (x.size() < 2 || points < 2) throw DomainError("CDF overlay needs samples and at least 2 points");
  const double lo = std::log(x.front());
  const double hi = std::log(x.back());
  const double total = static_cast<double>(pool.x.size());
  std::vector<CdfPoint> out;
  out.reserve(points);
  for (int k = 0; k < points; ++k) {
    double xv = std::exp(lo + (hi - lo) * k / (points - 1));
    if (k == 0) xv = x.front();
    if (k == points - 1) xv = x.back();
    const auto below = static_cast<double>(std::upper_bound(x.begin(), x.end(), xv) - x.begin()) + zeros;
    out.push_back({xv, below / total, chisq_cdf(xv, nu, pool.mean_x)});
  }
  return out;
}

}  // namespace kicked_top
