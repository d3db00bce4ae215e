// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
// status if any criterion fails. Tolerances are fixed here on purpose.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qmeter/fock.hpp"
#include "qmeter/measures.hpp"
#include "qmeter/state.hpp"

using namespace qmeter;

namespace {

const double kBellBound = 2.0 * std::sqrt(2.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ModelParams make(double alpha0, double r) {
  ModelParams p;
  p.alpha0 = alpha0;
  p.r = r;
  return p;
}

std::vector<double> uniform_grid(double t_max, int n) {
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) g[k] = t_max * k / n;
  return g;
}

// 1 and 8 share the grid alpha0 x r x 200 times in (0, 6].
template <typename F>
void over_model_grid(F&& f) {
  for (double alpha0 : {1.0, 10.0, 100.0})
    for (double r : {0.0, 2.0, 3.5})
      for (int k = 1; k <= 200; ++k) f(make(alpha0, r), 6.0 * k / 200);
}

Outcome closed_vs_matrix() {
  double dc = 0.0, db = 0.0;
  const auto start = std::chrono::steady_clock::now();
  over_model_grid([&](const ModelParams& p, double t) {
    const TwoQubitState s = assemble_rho(p, t);
    dc = std::max(dc, std::abs(concurrence_closed(p, t) - concurrence(s)));
    db = std::max(db, std::abs(bell_max_closed(p, t) - bell_max(s)));
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {dc < 1e-10 && db < 1e-10 && secs < 10.0,
          "max|dC| " + fmt("%.2e", dc) + ", max|dB| " + fmt("%.2e", db) + ", " + fmt("%.2f s", secs)};
}

Outcome oracle_equivalence() {
  double worst_td = 0.0, worst_leak = 0.0, worst_drift = 0.0, frame_gap = 0.0;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
  for (double r : {0.0, 1.0, 2.0}) {
    const ModelParams p = make(2.0, r);
    const auto samples = integrate(p, grid);
    const double trace0 = samples.front().total_trace().real();
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const ReducedState red = reduce_to_qubits(samples[i], p);
      worst_td = std::max(worst_td, trace_distance(red.state, assemble_rho(p, samples[i].time)));
      worst_leak = std::max(worst_leak, std::abs(red.leakage));
      worst_drift = std::max(worst_drift, std::abs(samples[i].total_trace().real() - trace0));
    }
  }
  // the same dynamics in the bare number basis, where it is affordable
  OracleOptions number;
  number.frame = MeterFrame::number;
  for (double r : {0.0, 1.0}) {
    const ModelParams p = make(2.0, r);
    const auto a = integrate(p, {0.0, 0.5, 1.0});
    const auto b = integrate(p, {0.0, 0.5, 1.0}, number);
    for (std::size_t i = 1; i < a.size(); ++i)
      frame_gap = std::max(frame_gap, trace_distance(reduce_to_qubits(a[i], p).state, reduce_to_qubits(b[i], p).state));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst_td < 1e-3 && worst_leak < 0.01 && worst_drift < 1e-8 && frame_gap < 1e-6 && secs < 300.0,
          "max trace distance " + fmt("%.2e", worst_td) + ", max leakage " + fmt("%.2e", worst_leak) +
              ", max drift " + fmt("%.2e", worst_drift) + ", number-basis gap " + fmt("%.2e", frame_gap) + ", " +
              fmt("%.1f s", secs)};
}

Outcome decoherence_ordering() {
  bool ordered = true, strict = false;
  for (double t : uniform_grid(6.0, 600)) {
    const double f0 = decoherence_factor(make(100, 0), t);
    const double f2 = decoherence_factor(make(100, 2), t);
    const double f35 = decoherence_factor(make(100, 3.5), t);
    ordered = ordered && f35 >= f2 && f2 >= f0;
    if (t > 0 && t < 6 && f35 > f2 && f2 > f0) strict = true;
  }
  return {ordered && strict, std::string("ordered ") + (ordered ? "yes" : "no") + ", strict somewhere " +
                                 (strict ? "yes" : "no")};
}

Outcome concurrence_peak() {
  const auto grid = uniform_grid(6.0, 60000);
  std::vector<double> peak_t;
  double max_eof = 0.0;
  for (double r : {0.0, 2.0, 3.5}) {
    const ModelParams p = make(100, r);
    double best = -1.0, best_t = 0.0;
    for (double t : grid) {
      const double c = concurrence_closed(p, t);
      max_eof = std::max(max_eof, eof(c));
      if (c > best) {
        best = c;
        best_t = t;
      }
    }
    peak_t.push_back(best_t);
  }
  return {peak_t[2] > peak_t[1] && peak_t[1] > peak_t[0] && max_eof < 1.0,
          "argmax gt: r=0 " + fmt("%.4f", peak_t[0]) + ", r=2 " + fmt("%.4f", peak_t[1]) + ", r=3.5 " +
              fmt("%.4f", peak_t[2]) + "; max EoF " + fmt("%.4f", max_eof)};
}

Outcome bell_window() {
  const auto grid = uniform_grid(6.0, 60000);
  bool ok = true;
  std::vector<double> end_t;
  std::string detail;
  for (double r : {0.0, 2.0, 3.5}) {
    const ModelParams p = make(100, r);
    const double b0 = bell_max(assemble_rho(p, 0.0));
    const double b0_closed = bell_max_closed(p, 0.0);
    double last = -1.0, peak = 0.0;
    for (double t : grid) {
      const double b = bell_max_closed(p, t);
      peak = std::max(peak, b);
      if (b > 2.0 + 1e-12) last = t;
    }
    ok = ok && last > 0.0 && std::abs(b0 - 2.0) <= 1e-12 && std::abs(b0_closed - 2.0) <= 1e-12 &&
         peak <= kBellBound + 1e-9;
    end_t.push_back(last);
    detail += (detail.empty() ? "" : "; ") + std::string("r=") + fmt("%g", r) + " B>2 until gt " + fmt("%.4f", last) +
              ", peak " + fmt("%.4f", peak);
  }
  ok = ok && end_t[0] < end_t[1] && end_t[1] < end_t[2];
  return {ok, detail};
}

Outcome mixedness_anomaly() {
  const ModelParams p1 = make(100, 2), p2 = make(100, 3.5);
  double best_t = 0.0, best_gap = 1.0;
  for (double t : uniform_grid(0.6, 60000)) {
    if (t < 0.1) continue;
    const double gap = std::abs(concurrence_closed(p1, t) - concurrence_closed(p2, t));
    if (gap < best_gap) {
      best_gap = gap;
      best_t = t;
    }
  }
  const double db = bell_max_closed(p1, best_t) - bell_max_closed(p2, best_t);
  const double pur1 = purity(assemble_rho(p1, best_t)), pur2 = purity(assemble_rho(p2, best_t));
  return {best_gap < 0.01 && db > 0.0 && pur1 < pur2,
          "gt " + fmt("%.4f", best_t) + ": |C1-C2| " + fmt("%.1e", best_gap) + ", B1-B2 " + fmt("%.4f", db) +
              ", purity " + fmt("%.4f", pur1) + " < " + fmt("%.4f", pur2)};
}

Outcome measure_sanity() {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> g;
  auto random_unitary = [&] {
    Eigen::Matrix2cd a;
    for (int i = 0; i < 4; ++i) a(i) = cplx(g(rng), g(rng));
    return Eigen::Matrix2cd(Eigen::HouseholderQR<Eigen::Matrix2cd>(a).householderQ());
  };
  double c_lo = 1.0, c_hi = 0.0, b_hi = 0.0, lu = 0.0, flip = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 100000; ++i) {
    Eigen::Matrix4cd a;
    for (int k = 0; k < 16; ++k) a(k) = cplx(g(rng), g(rng));
    Eigen::Matrix4cd rho = a * a.adjoint();
    rho /= rho.trace();
    const double c = concurrence(rho), b = bell_max(rho);
    c_lo = std::min(c_lo, c);
    c_hi = std::max(c_hi, c);
    b_hi = std::max(b_hi, b);
    const Eigen::Matrix4cd u = kron<double>(random_unitary(), random_unitary());
    const Eigen::Matrix4cd rotated = u * rho * u.adjoint();
    lu = std::max({lu, std::abs(concurrence(rotated) - c), std::abs(bell_max(rotated) - b)});
    flip = std::max(flip, (spin_flip(spin_flip(rho)) - rho).cwiseAbs().maxCoeff());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {c_lo >= 0.0 && c_hi <= 1.0 && b_hi <= kBellBound + 1e-9 && lu < 1e-10 && flip < 1e-12 && secs < 60.0,
          "C in [" + fmt("%.3g", c_lo) + ", " + fmt("%.3g", c_hi) + "], max B " + fmt("%.6f", b_hi) + ", LU " +
              fmt("%.1e", lu) + ", flip " + fmt("%.1e", flip) + ", " + fmt("%.1f s", secs)};
}

Outcome expectation_identity() {
  double worst = 0.0;
  over_model_grid([&](const ModelParams& p, double t) {
    const TwoQubitState s = assemble_rho(p, t);
    worst = std::max(worst, std::abs(concurrence_expectation(s, meter_basis_or_limit(p, t)) - concurrence(s)));
  });
  return {worst < 1e-10, "max|C_exp - C_W| " + fmt("%.2e", worst)};
}

Outcome pure_state_family() {
  double dc = 0.0, db = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double p = 0.1 * i;
    const TwoQubitState s = assemble_synthetic(p, p);
    const double c = std::sqrt(1.0 - p * p);
    dc = std::max(dc, std::abs(concurrence(s) - c));
    db = std::max(db, std::abs(bell_max(s) - 2.0 * std::sqrt(1.0 + c * c)));
  }
  return {dc < 1e-10 && db < 1e-10, "max|dC| " + fmt("%.2e", dc) + ", max|dB| " + fmt("%.2e", db)};
}

Outcome integrator_order() {
  const ModelParams p = make(2.0, 1.0);
  OracleOptions base;
  base.cutoff = oracle_cutoff(p, base);
  auto run = [&](double h) {
    OracleOptions o = base;
    o.step = h;
    return reduce_to_qubits(integrate(p, {0.0, 1.0}, o).back(), p).state;
  };
  const TwoQubitState ref = run(0.0025);
  const double coarse = trace_distance(run(0.05), ref);
  const double fine = trace_distance(run(0.025), ref);
  const double ratio = coarse / fine;
  return {ratio >= 12.0 && ratio <= 20.0, "error h=0.05 " + fmt("%.2e", coarse) + ", h=0.025 " + fmt("%.2e", fine) +
                                              ", ratio " + fmt("%.2f", ratio)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed form vs matrix measures", closed_vs_matrix},
      {"oracle equivalence", oracle_equivalence},
      {"decoherence ordering", decoherence_ordering},
      {"concurrence peak shift", concurrence_peak},
      {"Bell-violation window", bell_window},
      {"mixedness anomaly", mixedness_anomaly},
      {"measure sanity", measure_sanity},
      {"expectation identity", expectation_identity},
      {"pure-state consistency", pure_state_family},
      {"integrator convergence", integrator_order},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
