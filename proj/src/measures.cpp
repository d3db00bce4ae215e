#include "qmeter/measures.hpp"

#include <cmath>

namespace qmeter {

EntanglementReport entanglement_report(const TwoQubitState& state) {
  EntanglementReport r;
  r.concurrence = concurrence(state.m);
  r.eof = eof(r.concurrence);
  r.m_rho = horodecki_m(state.m);
  r.bell_max = 2.0 * std::sqrt(r.m_rho);
  return r;
}

Eigen::Matrix2cd meter_sigma_y(const MeterBasis& basis) {
  Eigen::Vector2cd minus(basis.c0_minus, basis.c1_minus);
  Eigen::Vector2cd plus(basis.c0_plus, basis.c1_plus);
  const Eigen::Vector2cd e0 = minus.normalized();
  const Eigen::Vector2cd rest = plus - e0.dot(plus) * e0;
  Eigen::Vector2cd e1;
  if (rest.norm() < 1e-14)
    e1 << -std::conj(e0(1)), std::conj(e0(0));
  else
    e1 = rest.normalized();
  const cplx i(0.0, 1.0);
  return i * (e1 * e0.adjoint() - e0 * e1.adjoint());
}

double concurrence_expectation(const TwoQubitState& state, const MeterBasis& basis) {
  const auto p = PauliSet<double>::standard();
  const Eigen::Matrix4cd op = kron<double>(p.sy, meter_sigma_y(basis));
  return -(state.m * op).trace().real();
}

double concurrence_closed(const ModelParams& params, double t) {
  params.validate();
  const double log_p = log_overlap(params, t);
  const double ratio = std::exp(gamma_exponent(params, t, 1, 2) - log_p);
  const double q = std::sqrt(-std::expm1(2.0 * log_p));
  return 2.0 * std::abs(params.rho0(0, 1)) * ratio * q;
}

double bell_max_closed(const ModelParams& params, double t) {
  const Eigen::Matrix2cd half = Eigen::Matrix2cd::Constant(cplx(0.5, 0.0));
  if ((params.rho0 - half).cwiseAbs().maxCoeff() > 1e-12)
    throw UnsupportedConfiguration("bell_max_closed: closed form holds for rho_nm = 1/2 only");
  const double c = concurrence_closed(params, t);
  const double log_p = log_overlap(params, t);
  const double q2 = -std::expm1(2.0 * log_p);
  const double e2 = std::exp(2.0 * gamma_exponent(params, t, 1, 2));
  return 2.0 * std::sqrt(q2 + c * c + e2);
}

}  // namespace qmeter
