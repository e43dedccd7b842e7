#include <cmath>

#include "doctest.h"
#include "kicked_top/floquet.hpp"
#include "unit/oracles.hpp"

using namespace kicked_top;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

// |m> -> |-m>: the parity exp(i pi (J_x + j)) for integer j.
ComplexMatrix flip(int dim) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) p(dim - 1 - i, i) = 1.0;
  return p;
}

ComplexMatrix floquet_oracle(const KickedTopParams& p) {
  const SpinBasis b = p.basis();
  const ComplexMatrix jx = angular_momentum(b, Axis::x);
  const ComplexMatrix jz = angular_momentum(b, Axis::z);
  const Complex i(0.0, 1.0);
  return oracle::matrix_exp(-i * p.kappa / (2.0 * p.j) * jz * jz) * oracle::matrix_exp(-i * p.alpha * jx);
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(KickedTopParams{kPi / 2, 3.0, 5}.validate());
  CHECK_THROWS_AS(KickedTopParams({0.1, 1.0, 0}).validate(), DomainError);
  CHECK_THROWS_AS(KickedTopParams({0.1, -1.0, 3}).validate(), DomainError);
  CHECK_THROWS_AS(KickedTopParams({kTwoPi, 1.0, 3}).validate(), DomainError);
  CHECK_THROWS_AS(KickedTopParams({-0.1, 1.0, 3}).validate(), DomainError);
  CHECK_THROWS_AS(build_floquet({0.1, 1.0, 0}), DomainError);
}

TEST_CASE("J_x eigenvalues are exactly -j..j") {
  for (int two_j : {1, 2, 9, 40}) {
    const SpinBasis b(two_j);
    const JxEigenbasis e = jx_eigenbasis(b);
    for (int i = 0; i < b.dim(); ++i) CHECK(e.k(i) == -b.j() + i);
    const ComplexMatrix jx = angular_momentum(b, Axis::x);
    const ComplexMatrix v = e.vectors.cast<Complex>();
    CHECK(max_abs(jx * v - v * e.k.cast<Complex>().asDiagonal()) < 1e-10);
  }
}

TEST_CASE("Wigner d-matrix matches exp(-i alpha J_x)") {
  const Complex i(0.0, 1.0);
  for (int two_j : {1, 2, 7, 40}) {
    const SpinBasis b(two_j);
    const ComplexMatrix jx = angular_momentum(b, Axis::x);
    for (double alpha : {0.0, 0.7, kPi / 2, 4 * kPi / 7, kPi, 5.9}) {
      CAPTURE(two_j);
      CAPTURE(alpha);
      CHECK(max_abs(wigner_d_matrix(b, alpha) - oracle::matrix_exp(-i * alpha * jx)) < 1e-10);
    }
  }
}

TEST_CASE("spin-1/2 rotation in closed form") {
  const SpinBasis half(1);
  const double a = 1.1;
  const ComplexMatrix d = wigner_d_matrix(half, a);
  CHECK(std::abs(d(0, 0) - std::cos(a / 2)) < 1e-14);
  CHECK(std::abs(d(0, 1) - Complex(0.0, -std::sin(a / 2))) < 1e-14);
}

TEST_CASE("parity operator is the m -> -m flip") {
  for (int j : {1, 2, 5, 30}) {
    const SpinBasis b = SpinBasis::integer(j);
    CHECK(max_abs(parity_operator(b) - flip(b.dim())) < 1e-10);
  }
  CHECK_THROWS_AS(parity_operator(SpinBasis(3)), DomainError);
}

TEST_CASE("Floquet operator matches its definition") {
  for (const KickedTopParams p : {KickedTopParams{kPi / 2, 3.0, 1}, KickedTopParams{4 * kPi / 7, 7.0, 3},
                                  KickedTopParams{1.3, 0.4, 12}}) {
    CHECK(max_abs(build_floquet(p).matrix - floquet_oracle(p)) < 1e-10);
  }
}

TEST_CASE("Floquet operator is unitary and commutes with parity") {
  for (const KickedTopParams p : {KickedTopParams{4 * kPi / 7, 7.0, 50}, KickedTopParams{kPi / 2, 0.4, 120},
                                  KickedTopParams{0.0, 3.0, 20}, KickedTopParams{kPi, 9.0, 33}}) {
    const ComplexMatrix f = build_floquet(p).matrix;
    const ComplexMatrix pi = flip(f.rows());
    CHECK(max_abs(f.adjoint() * f - identity(f.rows())) < 1e-10);
    CHECK(max_abs(f * pi - pi * f) < 1e-10);
  }
}

TEST_CASE("eigenphases for j <= 3 match the characteristic polynomial") {
  for (int j = 1; j <= 3; ++j) {
    for (const double kappa : {0.4, 3.0, 7.0}) {
      for (const double alpha : {kPi / 2, 4 * kPi / 7, 2.2}) {
        const KickedTopParams p{alpha, kappa, j};
        const auto expected = oracle::sorted_phases(oracle::characteristic_roots(floquet_oracle(p)));
        for (auto method : {DiagonalizationMethod::full, DiagonalizationMethod::sector}) {
          const FloquetEigensystem eig = solve_floquet(p, method);
          std::vector<double> got(eig.quasienergies.data(), eig.quasienergies.data() + eig.dim());
          CAPTURE(j);
          CAPTURE(kappa);
          CAPTURE(alpha);
          CHECK(oracle::phase_set_distance(got, expected) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("eigensystem invariants") {
  const KickedTopParams p{4 * kPi / 7, 7.0, 40};
  for (auto method : {DiagonalizationMethod::full, DiagonalizationMethod::sector}) {
    const FloquetEigensystem eig = solve_floquet(p, method);
    const int n = eig.dim();
    CHECK(n == 81);
    CHECK(eig.count(Parity::even) == 41);
    CHECK(eig.count(Parity::odd) == 40);
    const ComplexMatrix& v = eig.eigenvectors;
    CHECK(max_abs(v.adjoint() * v - identity(n)) < 1e-10);
    const ComplexMatrix f = build_floquet(p).matrix;
    const ComplexMatrix pi = flip(n);
    for (int c = 0; c < n; ++c) {
      CHECK(eig.quasienergies(c) >= -kPi);
      CHECK(eig.quasienergies(c) < kPi);
      if (c > 0) CHECK(eig.quasienergies(c) >= eig.quasienergies(c - 1));
      const Complex phase = std::polar(1.0, eig.quasienergies(c));
      CHECK((f * v.col(c) - phase * v.col(c)).norm() < 1e-10);
      CHECK((pi * v.col(c) - double(static_cast<int>(eig.parities[c])) * v.col(c)).norm() < 1e-8);
    }
    const auto even = eig.sector_quasienergies(Parity::even);
    CHECK(even.size() == 41u);
    CHECK(eig.sector_vectors(Parity::odd).cols() == 40);
  }
}

TEST_CASE("full and sector routes agree") {
  const KickedTopParams p{4 * kPi / 7, 3.0, 60};
  const FloquetEigensystem a = solve_floquet(p, DiagonalizationMethod::full);
  const FloquetEigensystem b = solve_floquet(p, DiagonalizationMethod::sector);
  CHECK((a.quasienergies - b.quasienergies).cwiseAbs().maxCoeff() < 1e-10);
  for (int c = 0; c < a.dim(); ++c) {
    CHECK(a.parities[c] == b.parities[c]);
    CHECK(std::abs(std::abs(a.eigenvectors.col(c).dot(b.eigenvectors.col(c))) - 1.0) < 1e-8);
  }
}

TEST_CASE("degenerate spectrum at kappa = 0, alpha = 0 gets sharp parity") {
  // F = 1: every level is at nu = 0 and each vector must be an eigenstate of
  // both parity and J_z^2, i.e. (|m> +- |-m>)/sqrt 2 or |0>.
  const KickedTopParams p{0.0, 0.0, 4};
  const FloquetEigensystem eig = solve_floquet(p);
  CHECK(eig.degenerate_clusters >= 1);
  CHECK(eig.count(Parity::even) == 5);
  CHECK(eig.count(Parity::odd) == 4);
  const ComplexMatrix pi = flip(9);
  const ComplexMatrix jz = angular_momentum(p.basis(), Axis::z);
  const ComplexMatrix jz2 = jz * jz;
  for (int c = 0; c < eig.dim(); ++c) {
    const ComplexVector v = eig.eigenvectors.col(c);
    CHECK(std::abs(eig.quasienergies(c)) < 1e-12);
    CHECK((pi * v - double(static_cast<int>(eig.parities[c])) * v).norm() < 1e-10);
    const double m2 = expectation(jz2, v);
    CHECK((jz2 * v - m2 * v).norm() < 1e-10);
  }
  // Ties are ordered even parity first.
  for (int c = 0; c < 5; ++c) CHECK(eig.parities[c] == Parity::even);
}

TEST_CASE("degenerate subspace without a sharp parity is reported") {
  const KickedTopParams p{0.0, 0.0, 2};
  const FloquetOperator f = build_floquet(p);
  // A "parity" with non-degenerate, non-+-1 spectrum cannot be made sharp.
  const ComplexMatrix fake = angular_momentum(p.basis(), Axis::z) / 2.0;
  CHECK_THROWS_AS(diagonalize(f, fake), DegenerateSubspaceError);
}

TEST_CASE("evolution is F applied repeatedly") {
  const KickedTopParams p{kPi / 2, 3.0, 10};
  const FloquetOperator f = build_floquet(p);
  const ComplexVector psi = coherent_state(p.basis(), 1.0, 2.0).amplitudes;
  const ComplexVector three = f.matrix * (f.matrix * (f.matrix * psi));
  CHECK((evolve_state(f, psi, 3) - three).norm() < 1e-12);
  CHECK((evolve_state(f, psi, 0) - psi).norm() == 0.0);
  CHECK(std::abs(evolve_state(f, psi, 500).norm() - 1.0) < 1e-10);
  CHECK_THROWS_AS(evolve_state(f, psi, -1), DomainError);
  CHECK_THROWS_AS(evolve_state(f, ComplexVector::Zero(3), 1), DomainError);
}

TEST_CASE("phase wrapping") {
  CHECK(wrap_phase(kPi) == doctest::Approx(-kPi));
  CHECK(wrap_phase(-kPi) == doctest::Approx(-kPi));
  CHECK(wrap_phase(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_phase(0.25) == doctest::Approx(0.25));
}

TEST_CASE("j = 1000 spectrum" * doctest::test_suite("slow")) {
  const KickedTopParams p{4 * kPi / 7, 7.0, 1000};
  const FloquetOperator f = build_floquet(p);
  CHECK(max_abs(f.matrix.adjoint() * f.matrix - identity(2001)) < 1e-10);
  const FloquetEigensystem eig = solve_floquet(p, DiagonalizationMethod::sector);
  CHECK(eig.count(Parity::even) == 1001);
  CHECK(eig.count(Parity::odd) == 1000);
}

TEST_CASE("zero rotation angle gives the identity") {
  for (int two_j : {1, 4, 11}) {
    const SpinBasis b(two_j);
    CHECK(max_abs(wigner_d_matrix(b, 0.0) - identity(b.dim())) < 1e-14);
  }
  CHECK(max_abs(build_floquet({0.0, 0.0, 5}).matrix - identity(11)) < 1e-14);
}

TEST_CASE("without the kick the quasienergies are -alpha k") {
  const double alpha = 1.3;
  const int j = 6;
  const FloquetEigensystem eig = solve_floquet({alpha, 0.0, j});
  std::vector<double> expected;
  for (int k = -j; k <= j; ++k) expected.push_back(wrap_phase(-alpha * k));
  std::vector<double> got(eig.quasienergies.data(), eig.quasienergies.data() + eig.dim());
  CHECK(oracle::phase_set_distance(got, expected) < 1e-10);
}

TEST_CASE("parity: small-j spectra and trace") {
  const ComplexMatrix p1 = parity_operator(SpinBasis::integer(1));
  CHECK(max_abs(p1 * p1 - identity(3)) < 1e-12);
  const auto roots = oracle::characteristic_roots(p1);
  int plus = 0;
  for (const auto& r : roots) plus += std::abs(r - 1.0) < 1e-8 ? 1 : 0;
  CHECK(plus == 2);
  CHECK(std::abs(parity_operator(SpinBasis::integer(5)).trace() - Complex(1.0, 0.0)) < 1e-10);
}

TEST_CASE("determinant of F has unit modulus") {
  const ComplexMatrix f = build_floquet({4 * kPi / 7, 3.0, 15}).matrix;
  CHECK(std::abs(std::abs(f.determinant()) - 1.0) < 1e-8);
}

TEST_CASE("trivial operator leaves any state unchanged") {
  const KickedTopParams p{0.0, 0.0, 4};
  const ComplexVector psi = coherent_state(p.basis(), 0.9, 0.2).amplitudes;
  CHECK((evolve_state(build_floquet(p), psi, 57) - psi).norm() < 1e-12);
  const FloquetEigensystem eig = solve_floquet(p, DiagonalizationMethod::sector);
  CHECK(eig.quasienergies.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("j = 1000 operator is unitary" * doctest::test_suite("slow")) {
  const FloquetOperator f = build_floquet({4 * kPi / 7, 3.0, 1000});
  CHECK(max_abs(f.matrix.adjoint() * f.matrix - identity(2001)) < 1e-10);
}

TEST_CASE("coherent-state evolution follows the classical map before the Ehrenfest time") {
  const KickedTopParams p{4 * kPi / 7, 7.0, 50};
  const FloquetOperator f = build_floquet(p);
  const SpinBasis b = p.basis();
  const ComplexMatrix jz = angular_momentum(b, Axis::z);
  ComplexVector psi = coherent_state(b, 1.0, 2.0).amplitudes;
  // Classical reference, written out independently of the library map.
  double x = std::sin(1.0) * std::cos(2.0);
  double y = std::sin(1.0) * std::sin(2.0);
  double z = std::cos(1.0);
  // The rotation is linear and the kick commutes with J_z, so the first kick
  // is exact; spreading then takes over within ln j / lambda ~ 4 kicks.
  const double tolerance[] = {1e-12, 0.1};
  for (int n = 1; n <= 2; ++n) {
    psi = evolve_state(f, psi, 1);
    const double y1 = y * std::cos(p.alpha) - z * std::sin(p.alpha);
    const double z1 = y * std::sin(p.alpha) + z * std::cos(p.alpha);
    const double xi = p.kappa * z1;
    const double x2 = x * std::cos(xi) - y1 * std::sin(xi);
    y = x * std::sin(xi) + y1 * std::cos(xi);
    x = x2;
    z = z1;
    CAPTURE(n);
    CHECK(std::abs(expectation(jz, psi) / p.j - z) < tolerance[n - 1]);
  }
  CHECK(std::abs(evolve_state(f, coherent_state(b, 1.0, 2.0).amplitudes, 100).norm() - 1.0) < 1e-8);
}
