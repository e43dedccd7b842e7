#include "kicked_top/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kicked_top {

void KickedTopParams::validate() const {
  if (j < 1) throw DomainError("kicked top requires integer j >= 1, got " + std::to_string(j));
  if (!(kappa >= 0.0)) throw DomainError("kick strength kappa must be >= 0");
  if (!(alpha >= 0.0 && alpha < kTwoPi)) throw DomainError("alpha must lie in [0, 2pi)");
}

double wrap_phase(double phase) {
  double x = std::fmod(phase + kPi, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  x -= kPi;
  return x >= kPi ? -kPi : x;
}

JxEigenbasis jx_eigenbasis(const SpinBasis& basis) {
  const int n = basis.dim();
  JxEigenbasis result{RealVector(n), RealMatrix::Identity(n, n)};
  if (n == 1) {
    result.k(0) = 0.0;
    return result;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
  solver.computeFromTridiagonal(RealVector::Zero(n), jx_off_diagonal(basis), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("J_x tridiagonal eigensolver failed for 2j = " + std::to_string(basis.two_j()));
  }
  // The spectrum of J_x is exactly -j..j; snap to it so eigenphases carry no
  // eigenvalue rounding.
  for (int i = 0; i < n; ++i) {
    const double exact = basis.m(i);
    if (std::abs(solver.eigenvalues()(i) - exact) > 1e-8 * std::max(1.0, basis.j())) {
      std::ostringstream msg;
      msg << "J_x eigenvalue " << i << " = " << solver.eigenvalues()(i) << " deviates from " << exact;
      throw NumericalError(msg.str());
    }
    result.k(i) = exact;
  }
  result.vectors = solver.eigenvectors();
  return result;
}

namespace {

// R diag(c) R^T + i R diag(s) R^T for real R.
ComplexMatrix rotate_diagonal(const RealMatrix& r, const RealVector& c, const RealVector& s) {
  ComplexMatrix out(r.rows(), r.rows());
  out.real() = r * c.asDiagonal() * r.transpose();
  out.imag() = r * s.asDiagonal() * r.transpose();
  return out;
}

bool even_sector(const SpinBasis& basis, double k) {
  const long long shifted = std::llround(k + basis.j());
  return shifted % 2 == 0;
}

RealVector kick_phases(const KickedTopParams& p) {
  const SpinBasis basis = p.basis();
  RealVector phase(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const double m = basis.m(i);
    phase(i) = -p.kappa * m * m / (2.0 * p.j);
  }
  return phase;
}

struct SchurResult {
  std::vector<double> phases;
  ComplexMatrix vectors;
};

// F is normal, so the Schur vectors are its orthonormal eigenvectors and the
// diagonal of T holds the eigenvalues.
SchurResult schur_eigen(const ComplexMatrix& f, const KickedTopParams& params) {
  Eigen::ComplexSchur<ComplexMatrix> schur(f.rows());
  schur.compute(f, true);
  if (schur.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "complex Schur decomposition did not converge (size " << f.rows() << ", j=" << params.j
        << ", kappa=" << params.kappa << ", alpha=" << params.alpha << ")";
    throw NumericalError(msg.str());
  }
  SchurResult out;
  out.vectors = schur.matrixU();
  const auto& t = schur.matrixT();
  out.phases.resize(f.rows());
  for (Eigen::Index i = 0; i < f.rows(); ++i) out.phases[i] = wrap_phase(std::arg(t(i, i)));
  return out;
}

// Groups indices whose quasienergies lie within `tol` of a neighbour on the
// circle. Only clusters with two or more members are returned.
std::vector<std::vector<int>> find_clusters(const std::vector<double>& phases, double tol) {
  const int n = static_cast<int>(phases.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return phases[a] < phases[b]; });

  auto gap_after = [&](int pos) {
    const int next = (pos + 1) % n;
    double gap = phases[order[next]] - phases[order[pos]];
    if (next == 0) gap += kTwoPi;
    return gap;
  };
  // Start scanning just after a genuine gap so wrap-around clusters stay whole.
  int start = -1;
  for (int pos = 0; pos < n; ++pos) {
    if (gap_after(pos) >= tol) {
      start = (pos + 1) % n;
      break;
    }
  }
  std::vector<std::vector<int>> clusters;
  if (start < 0) {
    clusters.push_back(order);
    return clusters;
  }
  std::vector<int> current;
  for (int step = 0; step < n; ++step) {
    const int pos = (start + step) % n;
    current.push_back(order[pos]);
    if (gap_after(pos) >= tol) {
      if (current.size() > 1) clusters.push_back(current);
      current.clear();
    }
  }
  return clusters;
}

double circular_mean(const std::vector<double>& phases, const std::vector<int>& idx) {
  Complex sum = 0.0;
  for (int i : idx) sum += std::polar(1.0, phases[i]);
  return wrap_phase(std::arg(sum));
}

// Rotates the columns `idx` of `vectors` so that they diagonalize the
// Hermitian operator `apply` restricted to their span. Returns the eigenvalues.
template <class Apply>
RealVector diagonalize_in_span(ComplexMatrix& vectors, const std::vector<int>& idx, Apply apply) {
  const int k = static_cast<int>(idx.size());
  ComplexMatrix span(vectors.rows(), k);
  for (int c = 0; c < k; ++c) span.col(c) = vectors.col(idx[c]);
  const ComplexMatrix projected = span.adjoint() * apply(span);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (projected + projected.adjoint()));
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed inside a degenerate cluster");
  const ComplexMatrix rotated = span * solver.eigenvectors();
  for (int c = 0; c < k; ++c) vectors.col(idx[c]) = rotated.col(c);
  return solver.eigenvalues();
}

// Fixes the gauge inside one degenerate cluster: sharp parity first (when a
// parity operator is supplied), then eigenvectors of J_z^2.
void fix_cluster_gauge(ComplexMatrix& vectors, std::vector<double>& phases, const std::vector<int>& cluster,
                       const ComplexMatrix* parity, const RealVector& m_squared) {
  const auto apply_jz2 = [&](const ComplexMatrix& v) -> ComplexMatrix { return m_squared.asDiagonal() * v; };
  std::vector<std::vector<int>> groups;
  if (parity != nullptr) {
    const RealVector signs =
        diagonalize_in_span(vectors, cluster, [&](const ComplexMatrix& v) -> ComplexMatrix { return *parity * v; });
    std::vector<int> odd;
    std::vector<int> even;
    for (int c = 0; c < static_cast<int>(cluster.size()); ++c) (signs(c) < 0 ? odd : even).push_back(cluster[c]);
    groups = {odd, even};
  } else {
    groups = {cluster};
  }
  for (const auto& group : groups) {
    if (group.size() > 1) diagonalize_in_span(vectors, group, apply_jz2);
  }
  const double mean = circular_mean(phases, cluster);
  for (int i : cluster) phases[i] = mean;
}

RealVector m_squared_diagonal(const SpinBasis& basis) {
  RealVector out(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) out(i) = basis.m(i) * basis.m(i);
  return out;
}

FloquetEigensystem assemble(const KickedTopParams& params, const std::vector<double>& phases,
                            const ComplexMatrix& vectors, const std::vector<Parity>& parities, int clusters,
                            DiagonalizationMethod method) {
  const int n = static_cast<int>(phases.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (phases[a] != phases[b]) return phases[a] < phases[b];
    return static_cast<int>(parities[a]) > static_cast<int>(parities[b]);
  });
  FloquetEigensystem eig;
  eig.params = params;
  eig.quasienergies.resize(n);
  eig.eigenvectors.resize(vectors.rows(), n);
  eig.parities.resize(n);
  for (int i = 0; i < n; ++i) {
    eig.quasienergies(i) = phases[order[i]];
    eig.eigenvectors.col(i) = vectors.col(order[i]);
    eig.parities[i] = parities[order[i]];
  }
  eig.degenerate_clusters = clusters;
  eig.method = method;
  return eig;
}

FloquetEigensystem diagonalize_by_sector(const KickedTopParams& params, const DiagonalizeOptions& options) {
  const SpinBasis basis = params.basis();
  const int n = basis.dim();
  const JxEigenbasis jx = jx_eigenbasis(basis);
  const RealVector kick = kick_phases(params);
  const RealVector m_squared = m_squared_diagonal(basis);

  std::vector<double> all_phases;
  std::vector<Parity> all_parities;
  ComplexMatrix all_vectors(n, n);
  int clusters = 0;
  int filled = 0;
  for (Parity p : {Parity::even, Parity::odd}) {
    std::vector<int> cols;
    for (int i = 0; i < n; ++i) {
      if (even_sector(basis, jx.k(i)) == (p == Parity::even)) cols.push_back(i);
    }
    const int d = static_cast<int>(cols.size());
    if (d == 0) continue;
    RealMatrix r(n, d);
    ComplexVector precession(d);
    for (int c = 0; c < d; ++c) {
      r.col(c) = jx.vectors.col(cols[c]);
      precession(c) = std::polar(1.0, -params.alpha * jx.k(cols[c]));
    }
    // F R_p = K R diag(e^{-i alpha k}) R^T R_p = K R_p diag(e^{-i alpha k_p}).
    ComplexMatrix kicked(n, d);
    for (int c = 0; c < d; ++c) {
      for (int i = 0; i < n; ++i) kicked(i, c) = std::polar(r(i, c), kick(i));
    }
    const ComplexMatrix block = (r.transpose().cast<Complex>() * kicked) * precession.asDiagonal();
    SchurResult local = schur_eigen(block, params);
    ComplexMatrix dicke = r.cast<Complex>() * local.vectors;
    for (const auto& cluster : find_clusters(local.phases, options.degeneracy_tolerance)) {
      fix_cluster_gauge(dicke, local.phases, cluster, nullptr, m_squared);
      ++clusters;
    }
    all_vectors.middleCols(filled, d) = dicke;
    all_phases.insert(all_phases.end(), local.phases.begin(), local.phases.end());
    all_parities.insert(all_parities.end(), d, p);
    filled += d;
  }
  return assemble(params, all_phases, all_vectors, all_parities, clusters, DiagonalizationMethod::sector);
}

}  // namespace

ComplexMatrix wigner_d_matrix(const SpinBasis& basis, double alpha) {
  const JxEigenbasis jx = jx_eigenbasis(basis);
  const RealVector angle = -alpha * jx.k;
  return rotate_diagonal(jx.vectors, angle.array().cos().matrix(), angle.array().sin().matrix());
}

ComplexMatrix parity_operator(const SpinBasis& basis) {
  if (!basis.is_integer()) throw DomainError("parity exp(i pi (J_x + j)) requires integer j");
  const JxEigenbasis jx = jx_eigenbasis(basis);
  RealVector sign(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) sign(i) = even_sector(basis, jx.k(i)) ? 1.0 : -1.0;
  return rotate_diagonal(jx.vectors, sign, RealVector::Zero(basis.dim()));
}

FloquetOperator build_floquet(const KickedTopParams& params) {
  params.validate();
  const SpinBasis basis = params.basis();
  ComplexMatrix f = wigner_d_matrix(basis, params.alpha);
  const RealVector kick = kick_phases(params);
  for (int i = 0; i < basis.dim(); ++i) f.row(i) *= std::polar(1.0, kick(i));
  return {params, std::move(f)};
}

FloquetEigensystem diagonalize(const FloquetOperator& floquet, const ComplexMatrix& parity,
                               const DiagonalizeOptions& options) {
  const KickedTopParams& params = floquet.params;
  const SpinBasis basis = params.basis();
  const RealVector m_squared = m_squared_diagonal(basis);
  const SchurResult schur = schur_eigen(floquet.matrix, params);
  const int n = basis.dim();

  // Widen the cluster tolerance when a near-degenerate pair came out mixed.
  for (double tol = options.degeneracy_tolerance;; tol *= 100.0) {
    std::vector<double> phases = schur.phases;
    ComplexMatrix vectors = schur.vectors;
    int clusters = 0;
    for (const auto& cluster : find_clusters(phases, tol)) {
      fix_cluster_gauge(vectors, phases, cluster, &parity, m_squared);
      ++clusters;
    }
    const ComplexMatrix pv = parity * vectors;
    std::vector<Parity> parities(n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double value = vectors.col(i).dot(pv.col(i)).real();
      worst = std::max(worst, 1.0 - std::abs(value));
      parities[i] = value >= 0.0 ? Parity::even : Parity::odd;
    }
    if (worst <= options.parity_tolerance) {
      return assemble(params, phases, vectors, parities, clusters, DiagonalizationMethod::full);
    }
    if (tol >= options.parity_tolerance) {
      std::ostringstream msg;
      msg << "eigenvectors lack sharp parity (max defect " << worst << ") for j=" << params.j
          << ", kappa=" << params.kappa << ", alpha=" << params.alpha
          << "; degenerate subspaces need re-orthogonalization";
      throw DegenerateSubspaceError(msg.str());
    }
  }
}

FloquetEigensystem solve_floquet(const KickedTopParams& params, DiagonalizationMethod method,
                                 const DiagonalizeOptions& options) {
  params.validate();
  if (method == DiagonalizationMethod::sector) return diagonalize_by_sector(params, options);
  return diagonalize(build_floquet(params), parity_operator(params.basis()), options);
}

ComplexVector evolve_state(const FloquetOperator& floquet, const ComplexVector& psi0, int n_kicks) {
  if (n_kicks < 0) throw DomainError("n_kicks must be non-negative");
  if (psi0.size() != floquet.matrix.cols()) throw DomainError("state dimension does not match the Floquet operator");
  ComplexVector psi = psi0;
  ComplexVector next(psi.size());
  for (int n = 0; n < n_kicks; ++n) {
    next.noalias() = floquet.matrix * psi;
    psi.swap(next);
  }
  return psi;
}

int FloquetEigensystem::count(Parity p) const {
  return static_cast<int>(std::count(parities.begin(), parities.end(), p));
}

std::vector<double> FloquetEigensystem::sector_quasienergies(Parity p) const {
  std::vector<double> out;
  for (int i = 0; i < dim(); ++i) {
    if (parities[i] == p) out.push_back(quasienergies(i));
  }
  return out;
}

ComplexMatrix FloquetEigensystem::sector_vectors(Parity p) const {
  ComplexMatrix out(eigenvectors.rows(), count(p));
  int c = 0;
  for (int i = 0; i < dim(); ++i) {
    if (parities[i] == p) out.col(c++) = eigenvectors.col(i);
  }
  return out;
}

}  // namespace kicked_top
