#pragma once

#include <cstdint>
#include <vector>

#include "kicked_top/spin.hpp"

namespace kicked_top {

/// Kicked-top parameters: precession angle alpha about x, kick strength kappa
/// of the torsion (kappa / 2j) J_z^2, and integer spin j.
struct KickedTopParams {
  double alpha = 0.0;
  double kappa = 0.0;
  int j = 1;

  SpinBasis basis() const { return SpinBasis::integer(j); }
  void validate() const;
};

enum class Parity : std::int8_t { even = 1, odd = -1 };

/// Eigendecomposition of J_x: exact eigenvalues k = -j..j and the real
/// orthogonal eigenvector matrix (columns in the same order).
struct JxEigenbasis {
  RealVector k;
  RealMatrix vectors;
};

JxEigenbasis jx_eigenbasis(const SpinBasis& basis);

/// d_{mm'}(alpha) = <j,m| exp(-i alpha J_x) |j,m'>, assembled from the J_x
/// eigenbasis.
ComplexMatrix wigner_d_matrix(const SpinBasis& basis, double alpha);

/// Parity exp(i pi (J_x + j)) in the Dicke basis. Requires integer j.
ComplexMatrix parity_operator(const SpinBasis& basis);

struct FloquetOperator {
  KickedTopParams params;
  ComplexMatrix matrix;
};

/// F = exp(-i kappa J_z^2 / 2j) exp(-i alpha J_x) in the Dicke basis.
FloquetOperator build_floquet(const KickedTopParams& params);

enum class DiagonalizationMethod {
  /// Complex Schur decomposition of the full Dicke-basis matrix.
  full,
  /// Diagonalize the even and odd blocks of F in the parity-adapted J_x basis.
  sector,
};

/// Quasienergies nu_i in [-pi, pi) with F|nu_i> = exp(+i nu_i)|nu_i>.
///
/// Sorted ascending; equal quasienergies are ordered even parity first.
/// Eigenvectors are columns of `eigenvectors` in the Dicke basis.
struct FloquetEigensystem {
  KickedTopParams params;
  RealVector quasienergies;
  ComplexMatrix eigenvectors;
  std::vector<Parity> parities;
  /// Number of degenerate clusters whose gauge was fixed.
  int degenerate_clusters = 0;
  DiagonalizationMethod method = DiagonalizationMethod::full;

  int dim() const { return static_cast<int>(quasienergies.size()); }
  int count(Parity p) const;
  /// Quasienergies of one parity sector, ascending.
  std::vector<double> sector_quasienergies(Parity p) const;
  /// Eigenvector columns of one parity sector, in quasienergy order.
  ComplexMatrix sector_vectors(Parity p) const;
};

struct DiagonalizeOptions {
  /// Quasienergies closer than this are treated as one degenerate cluster.
  double degeneracy_tolerance = 1e-10;
  /// |<v|Pi|v>| must be within this of 1.
  double parity_tolerance = 1e-6;
};

/// Diagonalizes a parity-conserving Floquet operator with a Schur
/// decomposition and labels every eigenvector by parity.
///
/// Degenerate clusters are rotated so that each vector has sharp parity; any
/// remaining degeneracy is lifted by diagonalizing J_z^2 inside the cluster.
FloquetEigensystem diagonalize(const FloquetOperator& floquet, const ComplexMatrix& parity,
                               const DiagonalizeOptions& options = {});

/// Builds and diagonalizes F by the chosen route.
FloquetEigensystem solve_floquet(const KickedTopParams& params,
                                 DiagonalizationMethod method = DiagonalizationMethod::full,
                                 const DiagonalizeOptions& options = {});

/// psi_n = F^n psi_0.
ComplexVector evolve_state(const FloquetOperator& floquet, const ComplexVector& psi0, int n_kicks);

/// Principal branch of a phase in [-pi, pi).
double wrap_phase(double phase);

}  // namespace kicked_top
