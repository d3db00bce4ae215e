#include "qmeter/model.hpp"

#include <cmath>
#include <string>

#include "qmeter/errors.hpp"

namespace qmeter {
namespace {

void require_time(double t) {
  if (std::isnan(t) || t < 0.0) throw DomainError("time must be >= 0, got " + std::to_string(t));
}

void require_index(int n) {
  if (n != 1 && n != 2) throw DomainError("internal index must be 1 or 2");
}

void require_theta_zero(const ModelParams& params, const char* what) {
  if (params.theta != 0.0)
    throw UnsupportedConfiguration(std::string(what) +
                                   " has a closed form only for theta = 0; use the Fock oracle overlap");
}

// e^{-x} - 1 + x for x >= 0 without cancellation near 0.
double relaxation_deficit(double x) {
  if (x < 0.1) {
    double term = x * x / 2.0;
    double sum = 0.0;
    for (int k = 3; k < 20; ++k) {
      sum += term;
      term *= -x / k;
    }
    return sum;
  }
  return std::exp(-x) - 1.0 + x;
}

// cosh r - sinh r e^{2 i theta}, written so that theta = 0 yields e^{-r} exactly.
cplx squeeze_factor(double r, double theta) {
  return std::exp(-r) + std::sinh(r) * (1.0 - std::polar(1.0, 2.0 * theta));
}

}  // namespace

void ModelParams::validate() const {
  if (!(alpha0 >= 0.0) || !std::isfinite(alpha0)) throw DomainError("alpha0 must be finite and >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be finite and > 0");
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("r must be finite and >= 0");
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  if ((rho0 - rho0.adjoint()).norm() > 1e-12) throw DomainError("rho0 must be Hermitian");
  if (std::abs(rho0.trace() - 1.0) > 1e-12) throw DomainError("rho0 must have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho0, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) throw DomainError("rho0 must be positive semidefinite");
}

cplx effective_rabi(cplx omega1, cplx omega2, double delta) {
  if (delta == 0.0 || std::isnan(delta)) throw DomainError("effective_rabi: detuning must be nonzero");
  return omega1 * std::conj(omega2) / (2.0 * delta);
}

cplx alpha_tilde(const ModelParams& params, double t, int n) {
  require_time(t);
  require_index(n);
  const double rise = -std::expm1(-scaled_time(params, t));
  const double sign = (n == 1) ? -1.0 : 1.0;
  return sign * params.alpha0 * squeeze_factor(params.r, params.theta) * rise;
}

double gamma_exponent(const ModelParams& params, double t, int n, int m) {
  require_time(t);
  require_index(n);
  require_index(m);
  if (n == m || params.alpha0 == 0.0) return 0.0;
  const double reservoir = std::norm(squeeze_factor(params.r, params.theta));
  const double x = scaled_time(params, t);
  // [(-1)^n - (-1)^m]^2 = 4 and 1 - x - e^{-x} = -relaxation_deficit(x)
  return -4.0 * params.alpha0 * params.alpha0 * reservoir * relaxation_deficit(x);
}

double log_overlap(const ModelParams& params, double t) {
  require_theta_zero(params, "overlap_P");
  return -2.0 * std::norm(alpha_tilde(params, t, 2));
}

double overlap_P(const ModelParams& params, double t) { return std::exp(log_overlap(params, t)); }

double overlap_complement(const ModelParams& params, double t) {
  return std::sqrt(-std::expm1(2.0 * log_overlap(params, t)));
}

double decoherence_factor(const ModelParams& params, double t) {
  return std::exp(gamma_exponent(params, t, 1, 2));
}

ReservoirMoments reservoir_moments(double r, double theta) {
  if (!(r >= 0.0)) throw DomainError("reservoir_moments: r must be >= 0");
  const double s = std::sinh(r);
  return {s * s, -s * std::cosh(r) * std::polar(1.0, 2.0 * theta)};
}

}  // namespace qmeter
