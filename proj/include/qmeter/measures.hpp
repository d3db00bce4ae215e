#pragma once

// Two-qubit entanglement and nonlocality measures. The generic algorithms are
// templates over the matrix expression so they work for Matrix4cd as well as
// extended-precision instantiations (used by the tests as an oracle).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "qmeter/errors.hpp"
#include "qmeter/model.hpp"
#include "qmeter/state.hpp"

namespace qmeter {

template <typename Real>
using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real>
using Matrix4c = Eigen::Matrix<std::complex<Real>, 4, 4>;

/// Pauli matrices in the standard basis.
template <typename Real>
struct PauliSet {
  Matrix2c<Real> sx, sy, sz;

  static PauliSet standard() {
    using C = std::complex<Real>;
    PauliSet p;
    p.sx << C(0), C(1), C(1), C(0);
    p.sy << C(0), C(0, -1), C(0, 1), C(0);
    p.sz << C(1), C(0), C(0), C(-1);
    return p;
  }

  [[nodiscard]] const Matrix2c<Real>& operator[](int i) const { return i == 0 ? sx : (i == 1 ? sy : sz); }
};

template <typename Real>
Matrix4c<Real> kron(const Matrix2c<Real>& a, const Matrix2c<Real>& b) {
  Matrix4c<Real> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// (sy (x) sy) conj(rho) (sy (x) sy)
template <typename Derived>
typename Derived::PlainObject spin_flip(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const auto p = PauliSet<Real>::standard();
  const Matrix4c<Real> yy = kron(p.sy, p.sy);
  return yy * rho.conjugate() * yy;
}

/// Square roots of the spectrum of rho * spin_flip(rho), descending.
///
/// Computed as singular values of Phi^T (sy (x) sy) Phi with rho = Phi Phi^dag,
/// which avoids the sqrt(eps) loss of taking square roots of eigenvalues of
/// the non-Hermitian product near rank-deficient states.
template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, 4, 1> wootters_lambdas(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  using M4 = Matrix4c<Real>;
  const M4 herm = (rho + rho.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<M4> es(herm);
  if (es.info() != Eigen::Success) throw NumericalError("concurrence: Hermitian eigen-solver did not converge");

  const Real scale = std::max(Real(1), std::abs(herm.trace().real()));
  M4 phi = es.eigenvectors();
  for (int i = 0; i < 4; ++i) {
    Real w = es.eigenvalues()(i);
    if (w < Real(-1e-10) * scale)
      throw NumericalError("concurrence: input has eigenvalue " + std::to_string(double(w)) + " < -1e-10");
    if (w < Real(1e-12) * scale) w = 0;
    phi.col(i) *= std::sqrt(w);
  }
  const auto p = PauliSet<Real>::standard();
  const M4 tau = phi.transpose() * kron(p.sy, p.sy) * phi;
  Eigen::JacobiSVD<M4> svd(tau);
  return svd.singularValues();  // sorted descending
}

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}.
template <typename Derived>
typename Derived::RealScalar concurrence(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const auto l = wootters_lambdas(rho);
  return std::max(Real(0), l(0) - l(1) - l(2) - l(3));
}

/// Concurrence from the eigenvalues of the non-Hermitian product rho * rho~,
/// clamping imaginary parts below 1e-10 and negative real parts above -1e-10.
/// Independent of wootters_lambdas; less accurate for rank-deficient inputs.
template <typename Derived>
typename Derived::RealScalar concurrence_via_product_spectrum(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  using M4 = Matrix4c<Real>;
  const M4 prod = rho * spin_flip(rho);
  Eigen::ComplexEigenSolver<M4> ces(prod, false);
  if (ces.info() != Eigen::Success) throw NumericalError("concurrence: complex eigen-solver did not converge");
  std::array<Real, 4> l{};
  for (int i = 0; i < 4; ++i) {
    const auto ev = ces.eigenvalues()(i);
    if (std::abs(ev.imag()) > Real(1e-10) || ev.real() < Real(-1e-10))
      throw NumericalError("concurrence: rho*rho~ eigenvalue (" + std::to_string(double(ev.real())) + ", " +
                           std::to_string(double(ev.imag())) + ") is not real nonnegative");
    l[i] = std::sqrt(std::max(Real(0), ev.real()));
  }
  std::sort(l.begin(), l.end(), std::greater<Real>());
  return std::max(Real(0), l[0] - l[1] - l[2] - l[3]);
}

/// Binary entropy -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
template <typename Real>
Real binary_entropy(Real x) {
  auto term = [](Real v) { return v > Real(0) ? -v * std::log2(v) : Real(0); };
  return term(x) + term(Real(1) - x);
}

/// Entanglement of formation h((1 + sqrt(1 - c^2)) / 2).
template <typename Real>
Real eof(Real c) {
  if (!(c >= Real(-1e-12) && c <= Real(1) + Real(1e-12)))
    throw DomainError("eof: concurrence " + std::to_string(double(c)) + " outside [0, 1]");
  c = std::clamp(c, Real(0), Real(1));
  const Real root = std::sqrt((Real(1) - c) * (Real(1) + c));
  // small branch (1 - root)/2 = c^2 / (2 (1 + root)) keeps precision for small c
  const Real lo = c * c / (Real(2) * (Real(1) + root));
  const Real hi = Real(1) - lo;
  auto term = [](Real v) { return v > Real(0) ? -v * std::log2(v) : Real(0); };
  return term(lo) + term(hi);
}

/// Correlation tensor: row m (meter Pauli), column n (system Pauli),
/// entry tr(rho sigma_n (x) sigma_m).
template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, 3, 3> correlation_matrix(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const auto p = PauliSet<Real>::standard();
  Eigen::Matrix<Real, 3, 3> t;
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) t(m, n) = (rho * kron(p[n], p[m])).trace().real();
  return t;
}

/// Sum of the two largest eigenvalues of T T^T.
template <typename Derived>
typename Derived::RealScalar horodecki_m(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  using M3 = Eigen::Matrix<Real, 3, 3>;
  const M3 t = correlation_matrix(rho);
  Eigen::SelfAdjointEigenSolver<M3> es(t * t.transpose(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("bell_max: eigen-solver did not converge");
  return std::max(Real(0), es.eigenvalues()(1) + es.eigenvalues()(2));  // ascending order
}

/// Maximal CHSH value 2 sqrt(M(rho)).
template <typename Derived>
typename Derived::RealScalar bell_max(const Eigen::MatrixBase<Derived>& rho) {
  return 2 * std::sqrt(horodecki_m(rho));
}

inline Eigen::Matrix4cd spin_flip(const TwoQubitState& s) { return spin_flip(s.m); }
inline double concurrence(const TwoQubitState& s) { return concurrence(s.m); }
inline Eigen::Matrix3d correlation_matrix(const TwoQubitState& s) { return correlation_matrix(s.m); }
inline double bell_max(const TwoQubitState& s) { return bell_max(s.m); }

struct EntanglementReport {
  double concurrence = 0.0;
  double eof = 0.0;
  double bell_max = 0.0;
  double m_rho = 0.0;
};

EntanglementReport entanglement_report(const TwoQubitState& state);

/// Meter spin-flip operator i(|1~><0~| - |0~><1~|) in the orthonormal meter
/// coordinates, rebuilt from the pointer coefficients of `basis`.
Eigen::Matrix2cd meter_sigma_y(const MeterBasis& basis);

/// -<sigma_y^M(t) (x) sigma_y^S>. Equals the concurrence for model states
/// whose initial coherence rho_12 is real and nonnegative.
double concurrence_expectation(const TwoQubitState& state, const MeterBasis& basis);

/// 2 |rho_12| exp(Gamma_12) sqrt(1 - P^2) / P, theta = 0.
double concurrence_closed(const ModelParams& params, double t);

/// 2 sqrt(1 + C^2 + exp(2 Gamma_12) - P^2), theta = 0 and rho_nm = 1/2.
double bell_max_closed(const ModelParams& params, double t);

}  // namespace qmeter
