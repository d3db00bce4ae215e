#include "qmeter/fock.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <tuple>

#include "qmeter/errors.hpp"

namespace qmeter {
namespace {

constexpr double kSqueezeLossLimit = 1e-8;
constexpr double kTraceDriftLimit = 1e-6;

Eigen::VectorXcd coherent_amplitudes(cplx alpha, int d) {
  Eigen::VectorXcd c(d);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < d; ++k) c(k) = c(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  return c;
}

std::shared_ptr<const SqueezeOperator> cached_squeeze(cplx epsilon, int dim) {
  using Key = std::tuple<double, double, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const SqueezeOperator>> cache;
  const Key key{epsilon.real(), epsilon.imag(), dim};
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() > 32) cache.clear();
  auto op = std::make_shared<const SqueezeOperator>(epsilon, dim);
  cache.emplace(key, op);
  return op;
}

// Photon-number range needed for a state with mean amplitude `amp` carrying a
// squeeze of magnitude `rho` relative to the basis: Poisson-like bulk plus the
// geometric tanh(rho)^n tail of the squeezed number distribution.
int number_range(double amp, double rho) {
  const double s = std::sinh(rho);
  const double nbar = amp * amp + s * s;
  double d = nbar + 10.0 * std::sqrt(nbar) + 20.0;
  if (rho > 1e-12) d += std::log(1e9) / -std::log(std::tanh(rho));
  return std::max(8, static_cast<int>(std::ceil(d)));
}

// S(frame)^dag S(squeeze) |alpha>, cut to `cutoff` number states of the frame.
FockVector frame_vector(cplx alpha, cplx squeeze, cplx frame, int cutoff) {
  const int plain = std::max(cutoff, squeezed_coherent_cutoff(alpha, squeeze));
  Eigen::VectorXcd v;
  if (squeeze == cplx{}) {
    v = coherent_amplitudes(alpha, plain);
  } else {
    const auto op = cached_squeeze(squeeze, plain);
    v = op->apply(coherent_amplitudes(alpha, op->work_dim())).amplitudes;
  }
  if (frame != cplx{}) v = cached_squeeze(frame, plain)->apply_adjoint(v).amplitudes;
  FockVector out;
  out.amplitudes = v.head(cutoff);
  out.truncation_loss = std::max(0.0, 1.0 - out.amplitudes.squaredNorm());
  if (out.truncation_loss > kSqueezeLossLimit)
    throw InsufficientCutoff("pointer state loses " + std::to_string(out.truncation_loss) + " of its norm at cutoff " +
                             std::to_string(cutoff));
  return out;
}

// Conditional Lindblad generator for all four blocks on a fixed working basis.
class Generator {
 public:
  Generator(const ModelParams& params, cplx frame, int d) : gamma_(params.gamma) {
    const auto mom = reservoir_moments(params.r, params.theta);
    const double nb = mom.n_bar;
    const cplx m = mom.m;
    a_ = frame_annihilator(frame, d);
    ad_ = SparseOp(a_.adjoint());
    const SparseOp drive = ad_ - a_;
    const SparseOp ada = ad_ * a_;
    const SparseOp aad = a_ * ad_;
    const SparseOp adad = ad_ * ad_;
    const SparseOp aa = a_ * a_;
    const SparseOp k = SparseOp((nb + 1.0) * ada + nb * aad + m * adad + std::conj(m) * aa) * cplx(-0.5 * gamma_);
    const double g = params.alpha0 * params.gamma;
    for (int n = 0; n < 2; ++n) {
      const double s = n == 0 ? -1.0 : 1.0;  // (-1)^n for internal states |1>, |2>
      left_[n] = k + drive * cplx(0.5 * g * s);
      right_[n] = k - drive * cplx(0.5 * g * s);
    }
    jump_a_ = SparseOp((nb + 1.0) * ad_ + std::conj(m) * a_);
    jump_ad_ = SparseOp(nb * a_ + m * ad_);
  }

  // d/dt X_nm, n and m zero-based.
  [[nodiscard]] Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x, int n, int m) const {
    Eigen::MatrixXcd out = left_[n] * x;
    out += x * right_[m];
    const Eigen::MatrixXcd ax = a_ * x;
    const Eigen::MatrixXcd adx = ad_ * x;
    out += gamma_ * (ax * jump_a_);
    out += gamma_ * (adx * jump_ad_);
    return out;
  }

  // Power-iteration estimate of the largest |eigenvalue| over block types.
  [[nodiscard]] double spectral_radius(int d) const {
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> normal;
    double best = 0.0;
    for (const auto& [n, m] : {std::pair{0, 0}, std::pair{0, 1}}) {
      Eigen::MatrixXcd x(d, d);
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cplx(normal(rng), normal(rng));
      x /= x.norm();
      double ratio = 0.0;
      for (int it = 0; it < 60; ++it) {
        Eigen::MatrixXcd y = apply(x, n, m);
        const double ny = y.norm();
        if (ny == 0.0) break;
        if (it >= 45) ratio = std::max(ratio, ny);
        x = y / ny;
      }
      best = std::max(best, ratio);
    }
    return best;
  }

 private:
  double gamma_;
  SparseOp a_, ad_, jump_a_, jump_ad_;
  std::array<SparseOp, 2> left_, right_;
};

cplx frame_of(const ModelParams& params, MeterFrame frame) {
  return frame == MeterFrame::reservoir ? stationary_squeeze(reservoir_moments(params.r, params.theta)) : cplx{};
}

OracleOptions resolved(const ModelParams& params, OracleOptions options) {
  if (options.cutoff <= 0) options.cutoff = oracle_cutoff(params, options);
  if (options.cutoff < 4) throw DomainError("oracle cutoff must be >= 4");
  return options;
}

}  // namespace

SparseOp annihilator(int d) {
  SparseOp a(d, d);
  a.reserve(Eigen::VectorXi::Constant(d, 1));
  for (int k = 1; k < d; ++k) a.insert(k - 1, k) = std::sqrt(static_cast<double>(k));
  a.makeCompressed();
  return a;
}

FockVector coherent_state(cplx alpha, int d) {
  if (d < 4) throw DomainError("coherent_state: cutoff must be >= 4");
  const double mag = std::abs(alpha);
  if (mag * mag + 6.0 * mag > d)
    throw InsufficientCutoff("coherent_state: cutoff " + std::to_string(d) + " too small for |alpha| = " +
                             std::to_string(mag));
  FockVector v;
  v.amplitudes = coherent_amplitudes(alpha, d);
  v.truncation_loss = std::max(0.0, 1.0 - v.amplitudes.squaredNorm());
  return v;
}

SqueezeOperator::SqueezeOperator(cplx epsilon, int dim)
    : epsilon_(epsilon), dim_(dim), work_dim_(epsilon == cplx{} ? dim : dim + dim / 2 + 32) {
  if (dim < 1) throw DomainError("SqueezeOperator: dimension must be positive");
  // -i G with G = (conj(eps) a^2 - eps a^dag^2)/2 couples n <-> n+2 only, so
  // each parity sector is Hermitian tridiagonal. A diagonal phase change
  // makes it real symmetric.
  for (int parity = 0; parity < 2; ++parity) {
    const int size = (work_dim_ - parity + 1) / 2;
    Sector& sec = sectors_[parity];
    if (size == 0) continue;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
    Eigen::VectorXd sub(std::max(size - 1, 0));
    Eigen::VectorXcd phase(size);
    phase(0) = 1.0;
    for (int k = 0; k + 1 < size; ++k) {
      const double n = parity + 2.0 * k;
      const cplx b = cplx(0.0, -0.5) * std::conj(epsilon) * std::sqrt((n + 1.0) * (n + 2.0));
      const double mag = std::abs(b);
      sub(k) = mag;
      phase(k + 1) = mag > 0.0 ? phase(k) * std::conj(b) / mag : phase(k);
    }
    if (size == 1) {
      sec.values = Eigen::VectorXd::Zero(1);
      sec.vectors = Eigen::MatrixXcd::Identity(1, 1);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericalError("SqueezeOperator: tridiagonal eigen-solver failed");
    sec.values = es.eigenvalues();
    sec.vectors = phase.asDiagonal() * es.eigenvectors().cast<cplx>();
  }
}

FockVector SqueezeOperator::act(const Eigen::VectorXcd& v, double sign) const {
  if (v.size() > work_dim_) throw DomainError("SqueezeOperator: input longer than working space");
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(work_dim_);
  padded.head(v.size()) = v;
  Eigen::VectorXcd result(work_dim_);
  for (int parity = 0; parity < 2; ++parity) {
    const Sector& sec = sectors_[parity];
    const Eigen::Index size = sec.values.size();
    if (size == 0) continue;
    Eigen::VectorXcd x(size);
    for (Eigen::Index k = 0; k < size; ++k) x(k) = padded(parity + 2 * k);
    Eigen::VectorXcd y = sec.vectors.adjoint() * x;
    for (Eigen::Index k = 0; k < size; ++k) y(k) *= std::polar(1.0, sign * sec.values(k));
    y = sec.vectors * y;
    for (Eigen::Index k = 0; k < size; ++k) result(parity + 2 * k) = y(k);
  }
  FockVector out;
  out.amplitudes = result.head(dim_);
  out.truncation_loss = std::max(0.0, v.squaredNorm() - out.amplitudes.squaredNorm());
  return out;
}

int squeezed_coherent_cutoff(cplx alpha, cplx epsilon) {
  const double rho = std::abs(epsilon);
  const cplx phase = rho > 0.0 ? epsilon / rho : cplx(1.0);
  const cplx mean = alpha * std::cosh(rho) - std::conj(alpha) * phase * std::sinh(rho);
  return number_range(std::abs(mean), rho);
}

FockVector squeezed_coherent(cplx alpha, cplx epsilon, int d) {
  if (d < 4) throw DomainError("squeezed_coherent: cutoff must be >= 4");
  if (std::abs(epsilon) > 4.0) throw DomainError("squeezed_coherent: |epsilon| must be <= 4");
  FockVector out;
  if (epsilon == cplx{}) {
    out.amplitudes = coherent_amplitudes(alpha, d);
  } else {
    const auto op = cached_squeeze(epsilon, d);
    out.amplitudes = op->apply(coherent_amplitudes(alpha, op->work_dim())).amplitudes;
  }
  out.truncation_loss = std::max(0.0, 1.0 - out.amplitudes.squaredNorm());
  if (out.truncation_loss > kSqueezeLossLimit)
    throw InsufficientCutoff("squeezed_coherent: truncation loss " + std::to_string(out.truncation_loss) +
                             " at cutoff " + std::to_string(d) + " (need about " +
                             std::to_string(squeezed_coherent_cutoff(alpha, epsilon)) + ")");
  return out;
}

cplx fock_overlap(const FockVector& a, const FockVector& b) {
  if (a.cutoff() != b.cutoff())
    throw DomainError("fock_overlap: cutoff mismatch " + std::to_string(a.cutoff()) + " vs " +
                      std::to_string(b.cutoff()));
  return a.amplitudes.dot(b.amplitudes);
}

cplx stationary_squeeze(const ReservoirMoments& moments) {
  const double mag = std::abs(moments.m);
  if (mag == 0.0) return {};
  return std::asinh(std::sqrt(moments.n_bar)) * moments.m / mag;
}

SparseOp frame_annihilator(cplx xi, int d) {
  const SparseOp a = annihilator(d);
  const double rho = std::abs(xi);
  if (rho == 0.0) return a;
  const SparseOp ad = a.adjoint();
  return SparseOp(cplx(std::cosh(rho)) * a - (xi / rho * std::sinh(rho)) * ad);
}

double FockBlockState::pairing_residual() const {
  return (block(2, 1) - block(1, 2).adjoint()).cwiseAbs().maxCoeff();
}

int oracle_cutoff(const ModelParams& params, const OracleOptions& options) {
  const bool matched = options.frame == MeterFrame::reservoir && options.start == MeterStart::reservoir;
  const double amp = options.frame == MeterFrame::reservoir
                         ? std::abs(alpha_tilde(params, std::numeric_limits<double>::infinity(), 2))
                         : params.alpha0;
  return number_range(amp, matched ? 0.0 : params.r);
}

FockBlockState lindblad_rhs(const FockBlockState& state, const ModelParams& params) {
  const Generator gen(params, state.frame_squeeze, state.cutoff);
  FockBlockState out = state;
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) out.blocks[2 * n + m] = gen.apply(state.blocks[2 * n + m], n, m);
  return out;
}

FockBlockState initial_blocks(const ModelParams& params, const OracleOptions& options_in) {
  params.validate();
  const OracleOptions options = resolved(params, options_in);
  const cplx frame = frame_of(params, options.frame);
  const cplx start = options.start == MeterStart::reservoir ? frame_of(params, MeterFrame::reservoir) : cplx{};
  const FockVector m0 = frame_vector(0.0, start, frame, options.cutoff);
  const Eigen::MatrixXcd proj = m0.amplitudes * m0.amplitudes.adjoint();
  FockBlockState st;
  st.cutoff = options.cutoff;
  st.frame_squeeze = frame;
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) st.blocks[2 * n + m] = params.rho0(n, m) * proj;
  return st;
}

double integration_step(const ModelParams& params, const OracleOptions& options_in) {
  const OracleOptions options = resolved(params, options_in);
  if (options.step > 0.0) return options.step;
  double h = 0.01 / params.gamma;
  if (params.alpha0 > 0.0) h = std::min(h, 0.1 / (params.alpha0 * params.gamma));
  const Generator gen(params, frame_of(params, options.frame), options.cutoff);
  const double radius = gen.spectral_radius(options.cutoff);
  if (radius > 0.0) h = std::min(h, 2.0 / radius);
  return h;
}

std::vector<FockBlockState> integrate(const ModelParams& params, const std::vector<double>& t_grid,
                                      const OracleOptions& options_in) {
  params.validate();
  if (t_grid.empty() || t_grid.front() != 0.0) throw DomainError("integrate: time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] >= t_grid[i - 1]) || !std::isfinite(t_grid[i]))
      throw DomainError("integrate: time grid must be finite and nondecreasing");

  const OracleOptions options = resolved(params, options_in);
  const double h_max = integration_step(params, options);
  FockBlockState st = initial_blocks(params, options);
  const Generator gen(params, st.frame_squeeze, st.cutoff);
  const double trace0 = st.total_trace().real();

  std::vector<FockBlockState> samples;
  samples.reserve(t_grid.size());
  samples.push_back(st);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double span = t_grid[i] - t_grid[i - 1];
    const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / h_max - 1e-9)) : 0;
    const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (long s = 0; s < steps; ++s) {
      for (int n = 0; n < 2; ++n) {
        for (int m = 0; m < 2; ++m) {
          Eigen::MatrixXcd& x = st.blocks[2 * n + m];
          const Eigen::MatrixXcd k1 = gen.apply(x, n, m);
          const Eigen::MatrixXcd k2 = gen.apply(x + (0.5 * h) * k1, n, m);
          const Eigen::MatrixXcd k3 = gen.apply(x + (0.5 * h) * k2, n, m);
          const Eigen::MatrixXcd k4 = gen.apply(x + h * k3, n, m);
          x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
      }
    }
    st.time = t_grid[i];
    const double drift = std::abs(st.total_trace().real() - trace0);
    if (!std::isfinite(drift) || drift > kTraceDriftLimit)
      throw IntegrationFailure("integrate: trace drift " + std::to_string(drift) + " at t = " +
                               std::to_string(st.time) + "; use a smaller step or a larger cutoff");
    samples.push_back(st);
  }
  return samples;
}

FockVector pointer_state(const ModelParams& params, double t, int n, cplx frame_squeeze, int cutoff) {
  const cplx pointer_squeeze = stationary_squeeze(reservoir_moments(params.r, params.theta));
  return frame_vector(alpha_tilde(params, t, n), pointer_squeeze, frame_squeeze, cutoff);
}

ReducedState reduce_to_qubits(const FockBlockState& state, const ModelParams& params, double leakage_limit) {
  const int d = state.cutoff;
  const FockVector p1 = pointer_state(params, state.time, 1, state.frame_squeeze, d);
  const FockVector p2 = pointer_state(params, state.time, 2, state.frame_squeeze, d);

  Eigen::MatrixXcd basis(d, 2);
  basis.col(0) = p1.amplitudes.normalized();
  const cplx overlap = basis.col(0).dot(p2.amplitudes);
  Eigen::VectorXcd rest = p2.amplitudes - overlap * basis.col(0);
  if (rest.norm() < 1e-7) {
    // degenerate pointer span: any unit vector orthogonal to |0~> completes it
    Eigen::Index k = 0;
    basis.col(0).cwiseAbs().minCoeff(&k);
    rest = Eigen::VectorXcd::Unit(d, k);
    rest -= basis.col(0).dot(rest) * basis.col(0);
  }
  basis.col(1) = rest.normalized();

  ReducedState out;
  out.overlap = std::abs(overlap);
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m)
      out.state.m.block<2, 2>(2 * n, 2 * m) = basis.adjoint() * state.blocks[2 * n + m] * basis;
  const double kept = out.state.m.trace().real();
  out.leakage = state.total_trace().real() - kept;
  if (out.leakage > leakage_limit)
    throw ReductionUnreliable("reduce_to_qubits: leakage " + std::to_string(out.leakage) + " exceeds " +
                              std::to_string(leakage_limit));
  out.state.m /= kept;
  return out;
}

}  // namespace qmeter
