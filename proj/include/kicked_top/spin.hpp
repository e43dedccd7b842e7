#pragma once

#include "kicked_top/types.hpp"

namespace kicked_top {

/// Spin-j Hilbert space in the Dicke basis |j,m>.
///
/// The spin is stored as 2j so that half-integer spins are exact. Basis index
/// i corresponds to m = -j + i, i.e. m = -j, -j+1, ..., j maps to 0 ... 2j.
class SpinBasis {
 public:
  explicit SpinBasis(int two_j);

  /// Integer spin j.
  static SpinBasis integer(int j) { return SpinBasis(2 * j); }

  int two_j() const noexcept { return two_j_; }
  double j() const noexcept { return 0.5 * two_j_; }
  int dim() const noexcept { return two_j_ + 1; }
  bool is_integer() const noexcept { return two_j_ % 2 == 0; }

  /// Magnetic quantum number of basis index `index`.
  double m(int index) const noexcept { return -j() + index; }

  friend bool operator==(const SpinBasis&, const SpinBasis&) = default;

 private:
  int two_j_;
};

enum class Axis { x, y, z };

/// Dense matrix of J_axis in the Dicke basis.
ComplexMatrix angular_momentum(const SpinBasis& basis, Axis axis);

/// J_x is real symmetric tridiagonal; these are its diagonal (all zero) and
/// first off-diagonal, sqrt(j(j+1) - m(m+1)) / 2 between m and m+1.
RealVector jx_off_diagonal(const SpinBasis& basis);

/// SU(2) coherent state |theta, phi> expanded in the Dicke basis.
struct CoherentState {
  ComplexVector amplitudes;
  double theta = 0.0;
  double phi = 0.0;
};

/// Builds |theta, phi> = sum_m zeta^{j-m} (1+|zeta|^2)^{-j} sqrt(C(2j, j-m)) |j,m>
/// with zeta = tan(theta/2) e^{i phi}.
///
/// Moduli are accumulated in log space (log-gamma binomials, log sin and log
/// cos of theta/2), so large j does not overflow. theta = pi returns |j,-j>.
CoherentState coherent_state(const SpinBasis& basis, double theta, double phi);

/// <psi| op |psi> for a normalized state.
double expectation(const ComplexMatrix& op, const ComplexVector& psi);

}  // namespace kicked_top
