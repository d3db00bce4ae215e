#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qmeter/model.hpp"

namespace qmeter {

/// Expansion of the two pointer states |-alpha~, eps> and |+alpha~, eps> in
/// the orthonormal meter basis {|0~>, |1~>} built from them by Gram-Schmidt.
struct MeterBasis {
  double p = 1.0;
  cplx c0_minus{1.0, 0.0};
  cplx c1_minus{0.0, 0.0};
  cplx c0_plus{1.0, 0.0};
  cplx c1_plus{0.0, 0.0};

  /// Basis at t = 0, where both pointer states are |0~>. |1~> is any unit
  /// vector orthogonal to it.
  static MeterBasis product_limit() { return {}; }
};

/// Two-qubit density matrix in the ordered basis
/// {|1>|0~>, |1>|1~>, |2>|0~>, |2>|1~>} (system (x) meter).
struct TwoQubitState {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() / 4.0;

  /// Hermitian and unit trace within `tol`, smallest eigenvalue >= -psd_tol.
  [[nodiscard]] bool is_valid(double tol = 1e-12, double psd_tol = 1e-10) const;
};

/// Gram-Schmidt coefficients at time t. Throws DegenerateBasis when
/// P >= 1 - 1e-14.
MeterBasis meter_basis(const ModelParams& params, double t);

/// Same as meter_basis, falling back to MeterBasis::product_limit() when the
/// pointer states are indistinguishable.
MeterBasis meter_basis_or_limit(const ModelParams& params, double t);

/// Explicit system-meter state at time t (theta = 0). The coherence ratio
/// exp(Gamma_12)/P is evaluated in log space, so alpha0 = 100 does not
/// underflow into 0/0.
TwoQubitState assemble_rho(const ModelParams& params, double t);

/// Builds the same matrix from an injected coherence factor E and overlap P,
/// e.g. the pure-state family E = P.
TwoQubitState assemble_synthetic(double coherence, double overlap,
                                 const Eigen::Matrix2cd& rho0 = Eigen::Matrix2cd::Constant(cplx(0.5, 0.0)));

/// tr(rho^2)
template <typename Derived>
typename Derived::RealScalar purity(const Eigen::MatrixBase<Derived>& rho) {
  return (rho * rho).trace().real();
}

inline double purity(const TwoQubitState& state) { return purity(state.m); }

/// (1/2) || rho - sigma ||_1 for Hermitian arguments.
template <typename DerivedA, typename DerivedB>
typename DerivedA::RealScalar trace_distance(const Eigen::MatrixBase<DerivedA>& rho,
                                             const Eigen::MatrixBase<DerivedB>& sigma) {
  using Plain = typename DerivedA::PlainObject;
  const Plain diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Plain> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum() / 2;
}

inline double trace_distance(const TwoQubitState& a, const TwoQubitState& b) { return trace_distance(a.m, b.m); }

}  // namespace qmeter
