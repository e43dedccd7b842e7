#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "kicked_top/floquet.hpp"
#include "kicked_top/sampling.hpp"
#include "kicked_top/spectral.hpp"
#include "unit/oracles.hpp"

using namespace kicked_top;
using boost::math::quadrature::gauss_kronrod;

namespace {

// Inverse-CDF sampling from the Brody law.
std::vector<double> brody_sample(double beta, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double b = brody_b(beta);
  std::vector<double> s(n);
  for (double& v : s) v = std::pow(-std::log1p(-u(rng)) / b, 1.0 / (beta + 1.0));
  return s;
}

}  // namespace

TEST_CASE("Brody law normalization and unit mean") {
  for (double beta : {0.0, 0.3, 0.7, 1.0}) {
    const double norm = gauss_kronrod<double, 61>::integrate([&](double s) { return brody_pdf(s, beta); }, 0.0,
                                                             INFINITY, 15, 1e-12);
    const double mean = gauss_kronrod<double, 61>::integrate([&](double s) { return s * brody_pdf(s, beta); }, 0.0,
                                                             INFINITY, 15, 1e-12);
    CAPTURE(beta);
    CHECK(std::abs(norm - 1.0) < 1e-8);
    CHECK(std::abs(mean - 1.0) < 1e-8);
    const double partial =
        gauss_kronrod<double, 61>::integrate([&](double s) { return brody_pdf(s, beta); }, 0.0, 1.3, 15, 1e-12);
    CHECK(std::abs(partial - brody_cdf(1.3, beta)) < 1e-10);
  }
  CHECK(brody_b(0.0) == doctest::Approx(1.0));
  CHECK(brody_b(1.0) == doctest::Approx(kPi / 4));
  CHECK(brody_pdf(-1.0, 0.5) == 0.0);
}

TEST_CASE("Brody fit recovers the generating exponent") {
  for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const BrodyFit fit = fit_brody(brody_sample(beta, 20000, 42));
    CAPTURE(beta);
    CHECK(std::abs(fit.beta - beta) < 0.03);
    CHECK(fit.method == "mle-golden-section");
  }
}

TEST_CASE("spacings: normalization and wrap-around") {
  const std::vector<double> nu{-3.0, -1.0, 0.0, 2.0};
  const SpacingEnsemble open = spacings_from_quasienergies(nu, false);
  CHECK(open.raw_gaps == std::vector<double>{2.0, 1.0, 2.0});
  CHECK(open.spacings[1] == doctest::Approx(0.6));

  const SpacingEnsemble ring = spacings_from_quasienergies(nu);
  REQUIRE(ring.raw_gaps.size() == 4u);
  CHECK(ring.raw_gaps[3] == doctest::Approx(kTwoPi - 5.0));
  double mean = 0.0;
  for (double s : ring.spacings) mean += s;
  CHECK(mean / 4 == doctest::Approx(1.0));

  CHECK_THROWS_AS(spacings_from_quasienergies(std::vector<double>{0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(spacings_from_quasienergies(std::vector<double>{0.0, 2.0, 1.0}), DomainError);

  const SpacingEnsemble degenerate = spacings_from_quasienergies(std::vector<double>{0.0, 0.0, 1.0, 2.0});
  CHECK(degenerate.zero_spacings == 1);
  CHECK(fit_brody(degenerate).excluded == 1);
}

TEST_CASE("ratio statistics") {
  const RatioStats r = ratio_stats(std::vector<double>{1.0, 2.0, 1.0, 4.0});
  CHECK(r.count == 3);
  CHECK(r.mean_r == doctest::Approx((0.5 + 0.5 + 0.25) / 3));
  CHECK(ratio_stats(std::vector<double>{1.0, 0.0, 1.0, 1.0, 2.0}).excluded == 2);
  CHECK_THROWS_AS(ratio_stats(std::vector<double>{1.0, 0.0, 1.0}), DomainError);

  // Poisson levels: <r> = 2 ln 2 - 1.
  std::mt19937_64 rng(9);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> gaps(200000);
  for (double& g : gaps) g = e(rng);
  CHECK(std::abs(ratio_stats(gaps).mean_r - (2 * std::log(2.0) - 1)) < 0.005);
}

TEST_CASE("spacing histogram integrates to the in-range fraction") {
  const auto s = brody_sample(0.0, 50000, 3);
  SpacingEnsemble ens;
  ens.spacings = s;
  const Histogram h = spacing_histogram(ens, 40, 4.0);
  CHECK(h.centers.size() == 40u);
  CHECK(h.width == doctest::Approx(0.1));
  double total = 0.0;
  for (double d : h.density) total += d * h.width;
  CHECK(std::abs(total - brody_cdf(4.0, 0.0)) < 0.01);
  CHECK(std::abs(h.density[0] - brody_pdf(0.05, 0.0)) < 0.05);
}

TEST_CASE("integrable and chaotic tops separate") {
  const FloquetEigensystem regular = solve_floquet({4 * kPi / 7, 0.4, 200}, DiagonalizationMethod::sector);
  const FloquetEigensystem chaotic = solve_floquet({4 * kPi / 7, 7.0, 200}, DiagonalizationMethod::sector);
  const auto a = spacings_from_quasienergies(regular.sector_quasienergies(Parity::even));
  const auto b = spacings_from_quasienergies(chaotic.sector_quasienergies(Parity::even));
  CHECK(fit_brody(a).beta < 0.3);
  CHECK(fit_brody(b).beta > 0.7);
  CHECK(ratio_stats(a.raw_gaps).mean_r < ratio_stats(b.raw_gaps).mean_r);
}

TEST_CASE("rank correlation matches the pairwise-rank oracle") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(300);
  std::vector<double> y(300);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::round(4 * g(rng));  // ties on purpose
    y[i] = x[i] + 3 * g(rng);
  }
  const auto rx = oracle::ranks(x);
  const auto ry = oracle::ranks(y);
  const auto mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const auto my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  CHECK(rank_correlation(x, y) == doctest::Approx(sxy / std::sqrt(sxx * syy)).epsilon(1e-12));
  std::vector<double> flat(300, 1.0);
  CHECK_THROWS_AS(rank_correlation(flat, y), DomainError);
  CHECK(rank_correlation(x, x) == doctest::Approx(1.0));
}

TEST_CASE("spacing edge cases") {
  std::vector<double> nu;
  for (int i = 0; i < 10; ++i) nu.push_back(-kPi + kTwoPi * i / 10);
  const SpacingEnsemble e = spacings_from_quasienergies(nu);
  for (double s : e.spacings) CHECK(s == doctest::Approx(1.0));
  CHECK(ratio_stats(e.raw_gaps).mean_r == doctest::Approx(1.0));
  CHECK(brody_pdf(0.7, 0.0) == doctest::Approx(std::exp(-0.7)));
  CHECK(brody_pdf(0.7, 1.0) == doctest::Approx(kPi / 2 * 0.7 * std::exp(-kPi * 0.49 / 4)));
  const std::vector<double> gaps{1.0, 3.0, 2.0, 5.0};
  std::vector<double> scaled;
  for (double g : gaps) scaled.push_back(7.5 * g);
  CHECK(ratio_stats(gaps).mean_r == doctest::Approx(ratio_stats(scaled).mean_r));
  CHECK_THROWS_AS(fit_brody(std::vector<double>{0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("Poisson samples fit to beta near zero") {
  CHECK(fit_brody(brody_sample(0.0, 100000, 77)).beta < 0.05);
}

TEST_CASE("even and odd sectors give consistent exponents") {
  const FloquetEigensystem eig = solve_floquet({4 * kPi / 7, 7.0, 300}, DiagonalizationMethod::sector);
  const double even = fit_brody(spacings_from_quasienergies(eig.sector_quasienergies(Parity::even))).beta;
  const double odd = fit_brody(spacings_from_quasienergies(eig.sector_quasienergies(Parity::odd))).beta;
  CHECK(std::abs(even - odd) < 0.2);
  // Mixing sectors destroys level repulsion.
  std::vector<double> all(eig.quasienergies.data(), eig.quasienergies.data() + eig.dim());
  CHECK(fit_brody(spacings_from_quasienergies(all)).beta < even - 0.3);
}

TEST_CASE("j = 1000 spacing statistics" * doctest::test_suite("slow")) {
  const FloquetEigensystem regular = solve_floquet({4 * kPi / 7, 0.4, 1000}, DiagonalizationMethod::sector);
  const auto r = spacings_from_quasienergies(regular.sector_quasienergies(Parity::even));
  CHECK(fit_brody(r).beta < 0.1);
  CHECK(std::abs(ratio_stats(r.raw_gaps).mean_r - 0.386) < 0.02);
  const FloquetEigensystem chaotic = solve_floquet({4 * kPi / 7, 7.0, 1000}, DiagonalizationMethod::sector);
  const auto c = spacings_from_quasienergies(chaotic.sector_quasienergies(Parity::even));
  CHECK(fit_brody(c).beta > 0.9);
  CHECK(std::abs(ratio_stats(c.raw_gaps).mean_r - 0.527) < 0.02);
}
