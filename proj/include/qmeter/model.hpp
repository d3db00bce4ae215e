#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qmeter {

using cplx = std::complex<double>;

/// Physical constants of the measured two-state system and its squeezed
/// reservoir. Time enters every operation as (gamma, t); internally the
/// dimensionless x = gamma t / 2 is used.
struct ModelParams {
  double alpha0 = 100.0;  ///< asymptotic pointer amplitude |Omega| eta / gamma
  double gamma = 1.0;     ///< reservoir damping rate
  double r = 0.0;         ///< squeezing magnitude
  double theta = 0.0;     ///< squeezing phase
  /// Initial internal density matrix rho_nm (index 0 <-> |1>, 1 <-> |2>).
  Eigen::Matrix2cd rho0 = Eigen::Matrix2cd::Constant(cplx(0.5, 0.0));

  /// Squeeze parameter epsilon = r e^{2 i theta}.
  [[nodiscard]] cplx epsilon() const { return std::polar(r, 2.0 * theta); }

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// Second moments of a minimum-uncertainty squeezed reservoir.
struct ReservoirMoments {
  double n_bar = 0.0;  ///< N = sinh^2 r
  cplx m{};            ///< M = -sinh r cosh r e^{2 i theta}
};

/// Omega = Omega1 conj(Omega2) / (2 Delta). Throws DomainError for delta == 0.
cplx effective_rabi(cplx omega1, cplx omega2, double delta);

/// Pointer amplitude of branch n in {1, 2}:
/// (-1)^n alpha0 [cosh r - sinh r e^{2i theta}] (1 - e^{-gamma t / 2}).
cplx alpha_tilde(const ModelParams& params, double t, int n);

/// Decoherence exponent Gamma_nm(t) <= 0.
double gamma_exponent(const ModelParams& params, double t, int n, int m);

/// log P(t) = -2 |alpha~(t)|^2. Finite even where P itself underflows.
double log_overlap(const ModelParams& params, double t);

/// Overlap P(t) = <-alpha~, eps | alpha~, eps> = exp(-2 alpha~^2), theta = 0 only.
double overlap_P(const ModelParams& params, double t);

/// sqrt(1 - P^2), computed without cancellation near P = 1.
double overlap_complement(const ModelParams& params, double t);

/// exp(Gamma_12(t)).
double decoherence_factor(const ModelParams& params, double t);

ReservoirMoments reservoir_moments(double r, double theta);

/// Dimensionless time x = gamma t / 2.
inline double scaled_time(const ModelParams& params, double t) { return 0.5 * params.gamma * t; }

}  // namespace qmeter
