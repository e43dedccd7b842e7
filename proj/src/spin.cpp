#include "kicked_top/spin.hpp"

#include <cmath>
#include <string>

namespace kicked_top {

SpinBasis::SpinBasis(int two_j) : two_j_(two_j) {
  if (two_j <= 0) {
    throw DomainError("spin must satisfy j > 0, got 2j = " + std::to_string(two_j));
  }
}

RealVector jx_off_diagonal(const SpinBasis& basis) {
  const int n = basis.dim();
  const double j = basis.j();
  RealVector off(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double m = basis.m(i);
    off(i) = 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  return off;
}

ComplexMatrix angular_momentum(const SpinBasis& basis, Axis axis) {
  const int n = basis.dim();
  ComplexMatrix op = ComplexMatrix::Zero(n, n);
  if (axis == Axis::z) {
    for (int i = 0; i < n; ++i) op(i, i) = basis.m(i);
    return op;
  }
  // <m+1|J_+|m> = 2 * off(i); J_x = (J_+ + J_-)/2, J_y = (J_+ - J_-)/(2i).
  const RealVector off = jx_off_diagonal(basis);
  for (int i = 0; i + 1 < n; ++i) {
    if (axis == Axis::x) {
      op(i + 1, i) = off(i);
      op(i, i + 1) = off(i);
    } else {
      op(i + 1, i) = Complex(0.0, -off(i));
      op(i, i + 1) = Complex(0.0, off(i));
    }
  }
  return op;
}

CoherentState coherent_state(const SpinBasis& basis, double theta, double phi) {
  const int n = basis.dim();
  const double j = basis.j();
  CoherentState state{ComplexVector::Zero(n), theta, phi};

  if (theta >= kPi) {
    state.amplitudes(0) = 1.0;
    return state;
  }
  if (theta <= 0.0) {
    state.amplitudes(n - 1) = 1.0;
    return state;
  }

  const double log_sin = std::log(std::sin(0.5 * theta));
  const double log_cos = std::log(std::cos(0.5 * theta));
  const double log_fact_2j = std::lgamma(2.0 * j + 1.0);
  for (int i = 0; i < n; ++i) {
    const double m = basis.m(i);
    const double down = j - m;  // power of zeta
    const double up = j + m;
    const double log_modulus = 0.5 * (log_fact_2j - std::lgamma(up + 1.0) - std::lgamma(down + 1.0)) +
                               down * log_sin + up * log_cos;
    state.amplitudes(i) = std::polar(std::exp(log_modulus), down * phi);
  }
  state.amplitudes /= state.amplitudes.norm();
  return state;
}

double expectation(const ComplexMatrix& op, const ComplexVector& psi) {
  return psi.dot(op * psi).real();
}

}  // namespace kicked_top
