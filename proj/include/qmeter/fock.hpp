#pragma once

// Brute-force reference for the analytic solution: squeezed coherent states in
// a truncated number basis, RK4 integration of the conditional master
// equation and reduction of the result onto the two-dimensional pointer span.

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qmeter/model.hpp"
#include "qmeter/state.hpp"

namespace qmeter {

using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Truncated number-basis amplitudes.
struct FockVector {
  Eigen::VectorXcd amplitudes;
  double truncation_loss = 0.0;  ///< 1 - ||amplitudes||^2 of the untruncated state

  [[nodiscard]] int cutoff() const { return static_cast<int>(amplitudes.size()); }
};

/// Annihilation operator on span{|0>, ..., |d-1>}.
SparseOp annihilator(int d);

/// Coherent state |alpha>, c_k = e^{-|alpha|^2/2} alpha^k / sqrt(k!).
/// Throws InsufficientCutoff when |alpha|^2 + 6|alpha| > d.
FockVector coherent_state(cplx alpha, int d);

/// exp(conj(eps) a^2 / 2 - eps a^dag^2 / 2) on a truncated space. The
/// exponential is evaluated in an enlarged working space and the result cut
/// back to `dim`, so the truncation edge does not reflect into the output.
class SqueezeOperator {
 public:
  SqueezeOperator(cplx epsilon, int dim);

  [[nodiscard]] FockVector apply(const Eigen::VectorXcd& v) const { return act(v, +1.0); }
  /// S^dag = S(-eps)
  [[nodiscard]] FockVector apply_adjoint(const Eigen::VectorXcd& v) const { return act(v, -1.0); }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int work_dim() const { return work_dim_; }
  [[nodiscard]] cplx epsilon() const { return epsilon_; }

 private:
  struct Sector {
    Eigen::MatrixXcd vectors;  // unitary eigenbasis of -i G restricted to one parity
    Eigen::VectorXd values;
  };

  [[nodiscard]] FockVector act(const Eigen::VectorXcd& v, double sign) const;

  cplx epsilon_;
  int dim_;
  int work_dim_;
  std::array<Sector, 2> sectors_;
};

/// S(eps)|alpha>: displacement first, then squeezing.
/// Throws InsufficientCutoff when the truncation loss exceeds 1e-8.
FockVector squeezed_coherent(cplx alpha, cplx epsilon, int d);

/// Number-basis cutoff that holds S(eps)|alpha> with loss well below 1e-8.
int squeezed_coherent_cutoff(cplx alpha, cplx epsilon);

/// <a|b>. Throws DomainError on cutoff mismatch.
cplx fock_overlap(const FockVector& a, const FockVector& b);

/// Squeeze parameter xi of the drive-free stationary state of the master
/// equation, derived from the reservoir moments: <a^dag a> = N, <a a> = -M.
cplx stationary_squeeze(const ReservoirMoments& moments);

/// Working basis of the oracle: number states of the mode S(xi)|k>.
enum class MeterFrame {
  number,     ///< xi = 0, the bare number basis
  reservoir,  ///< xi = stationary_squeeze(reservoir moments)
};

/// Meter state at t = 0.
enum class MeterStart {
  reservoir,  ///< drive-free stationary state of the reservoir
  vacuum,     ///< bare vacuum |0>
};

struct OracleOptions {
  int cutoff = 0;        ///< working-basis dimension, 0 -> oracle_cutoff()
  MeterFrame frame = MeterFrame::reservoir;
  MeterStart start = MeterStart::reservoir;
  double step = 0.0;     ///< fixed RK4 step, 0 -> step rule
};

/// Annihilation operator expressed in the basis {S(xi)|k>}:
/// S^dag a S = a cosh|xi| - a^dag e^{i arg xi} sinh|xi|.
SparseOp frame_annihilator(cplx xi, int d);

/// Meter-mode matrices for each internal coherence block (n, m), n, m in {1, 2},
/// written in the basis {S(frame_squeeze)|k>}.
struct FockBlockState {
  std::array<Eigen::MatrixXcd, 4> blocks;
  int cutoff = 0;
  double time = 0.0;
  cplx frame_squeeze{};

  [[nodiscard]] Eigen::MatrixXcd& block(int n, int m) { return blocks[2 * (n - 1) + (m - 1)]; }
  [[nodiscard]] const Eigen::MatrixXcd& block(int n, int m) const { return blocks[2 * (n - 1) + (m - 1)]; }

  /// tr(block(1,1)) + tr(block(2,2))
  [[nodiscard]] cplx total_trace() const { return block(1, 1).trace() + block(2, 2).trace(); }
  /// max |block(2,1) - block(1,2)^dag|
  [[nodiscard]] double pairing_residual() const;
};

/// Working-basis dimension used when OracleOptions::cutoff is 0.
int oracle_cutoff(const ModelParams& params, const OracleOptions& options);

/// Time derivative of every block under the conditional drive and the
/// squeezed-reservoir dissipator (drive strength eta|Omega| = alpha0 gamma).
FockBlockState lindblad_rhs(const FockBlockState& state, const ModelParams& params);

/// Initial blocks rho_nm |m0><m0| with m0 given by options.start.
FockBlockState initial_blocks(const ModelParams& params, const OracleOptions& options);

/// Fixed-step RK4 (h <= min(0.01/gamma, 0.1/(alpha0 gamma), 2/spectral radius))
/// sampled at `t_grid`, which must start at 0 and be nondecreasing.
std::vector<FockBlockState> integrate(const ModelParams& params, const std::vector<double>& t_grid,
                                      const OracleOptions& options = {});

/// RK4 step actually used by integrate() for these inputs.
double integration_step(const ModelParams& params, const OracleOptions& options);

struct ReducedState {
  TwoQubitState state;
  double leakage = 0.0;  ///< weight outside span{|0~>, |1~>} before renormalisation
  double overlap = 1.0;  ///< numerically obtained <-alpha~|+alpha~>
};

/// Projects each block onto the pointer span built from numerically squeezed
/// coherent states and renormalises. Throws ReductionUnreliable when the
/// leakage exceeds `leakage_limit`.
ReducedState reduce_to_qubits(const FockBlockState& state, const ModelParams& params, double leakage_limit = 0.01);

/// Pointer state |alpha~_n(t), eps> expressed in the working basis of a block
/// state with the given frame and cutoff.
FockVector pointer_state(const ModelParams& params, double t, int n, cplx frame_squeeze, int cutoff);

}  // namespace qmeter
