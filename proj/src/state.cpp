#include "qmeter/state.hpp"

#include <cmath>
#include <string>

#include "qmeter/errors.hpp"

namespace qmeter {
namespace {

constexpr double kDegenerateOverlap = 1.0 - 1e-14;

// Blocks (n, k) = rho0(n, k) w_nk v_n v_k^dag with v_1 = (1, 0), v_2 = (P, q),
// w_nn = 1 and w_12 = w_21 = E / P. `coherence` is E, `ratio` is E / P.
TwoQubitState fill(const Eigen::Matrix2cd& rho0, double coherence, double ratio, double overlap, double q) {
  TwoQubitState s;
  s.m.setZero();
  s.m(0, 0) = rho0(0, 0);
  s.m(2, 2) = rho0(1, 1) * overlap * overlap;
  s.m(2, 3) = rho0(1, 1) * overlap * q;
  s.m(3, 2) = s.m(2, 3);
  s.m(3, 3) = rho0(1, 1) * q * q;
  s.m(0, 2) = rho0(0, 1) * coherence;
  s.m(0, 3) = rho0(0, 1) * ratio * q;
  s.m(2, 0) = std::conj(s.m(0, 2));
  s.m(3, 0) = std::conj(s.m(0, 3));
  return s;
}

}  // namespace

bool TwoQubitState::is_valid(double tol, double psd_tol) const {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(m.trace() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
  return es.info() == Eigen::Success && es.eigenvalues().minCoeff() >= -psd_tol;
}

MeterBasis meter_basis(const ModelParams& params, double t) {
  const double p = overlap_P(params, t);
  if (p >= kDegenerateOverlap)
    throw DegenerateBasis("meter_basis: pointer states coincide (P = " + std::to_string(p) + ")");
  MeterBasis b;
  b.p = p;
  b.c0_plus = p;
  b.c1_plus = overlap_complement(params, t);
  return b;
}

MeterBasis meter_basis_or_limit(const ModelParams& params, double t) {
  try {
    return meter_basis(params, t);
  } catch (const DegenerateBasis&) {
    return MeterBasis::product_limit();
  }
}

TwoQubitState assemble_rho(const ModelParams& params, double t) {
  params.validate();
  const double log_p = log_overlap(params, t);
  const double gamma12 = gamma_exponent(params, t, 1, 2);
  const double q = std::sqrt(-std::expm1(2.0 * log_p));
  return fill(params.rho0, std::exp(gamma12), std::exp(gamma12 - log_p), std::exp(log_p), q);
}

TwoQubitState assemble_synthetic(double coherence, double overlap, const Eigen::Matrix2cd& rho0) {
  if (!(overlap > 0.0 && overlap <= 1.0)) throw DomainError("assemble_synthetic: overlap must lie in (0, 1]");
  if (!(coherence >= 0.0)) throw DomainError("assemble_synthetic: coherence must be >= 0");
  const double q = std::sqrt((1.0 - overlap) * (1.0 + overlap));
  return fill(rho0, coherence, coherence / overlap, overlap, q);
}

}  // namespace qmeter
