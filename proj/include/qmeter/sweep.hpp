#pragma once

// Parameter sweeps behind the command-line tool: per-time records, figure
// tables, oracle verification and their CSV / JSON serialisation.

#include <iosfwd>
#include <string>
#include <vector>

#include "qmeter/model.hpp"

namespace qmeter {

/// All derived quantities at one (r, t) sample.
struct TrajectoryRecord {
  double r = 0.0;
  double t = 0.0;
  double gamma_t_half = 0.0;
  double alpha_tilde = 0.0;  ///< alpha~(t) of branch 2
  double p_overlap = 1.0;
  double gamma12 = 0.0;
  double decoherence_factor = 1.0;
  double c_closed = 0.0;
  double c_wootters = 0.0;
  double c_expectation = 0.0;
  double eof = 0.0;
  double bell_max_closed = 2.0;
  double bell_max_horodecki = 2.0;
  double purity = 1.0;
};

TrajectoryRecord trajectory_record(const ModelParams& params, double t);

enum class OutputFormat { csv, json };

struct RunConfig {
  double alpha0 = 100.0;
  double gamma = 1.0;
  double theta = 0.0;
  std::vector<double> r_list{0.0, 2.0, 3.5};
  double t_max = 6.0;
  int n_steps = 601;
  std::string output_path;  ///< empty -> stdout
  OutputFormat format = OutputFormat::csv;
  int cutoff = 0;  ///< verify only, 0 -> automatic

  /// Throws DomainError when a field is out of range.
  void validate() const;
  [[nodiscard]] ModelParams params(double r) const;
  /// n_steps equally spaced times t_k = t_max k / (n_steps - 1).
  [[nodiscard]] std::vector<double> time_grid() const;
};

/// Flat "key = value" text; '#' starts a comment. Keys: alpha0, gamma,
/// theta, r (comma separated, may repeat), t-max, steps, out, format, cutoff.
/// Values found in the file overwrite `config`.
void apply_config_file(const std::string& path, RunConfig& config);

OutputFormat parse_format(const std::string& name);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// One row per (r, t), columns named after the TrajectoryRecord fields.
Table trajectory_table(const RunConfig& config);

enum class Figure { fig3, fig4, fig5 };

/// Wide tables with one column per r:
/// fig3 decoherence_factor_r<r>; fig4 concurrence_r<r>, eof_r<r>;
/// fig5 bell_max_r<r> plus c_dif and b_dif for the pair r = 2, r = 3.5.
Table figure_table(Figure which, const RunConfig& config);

struct VerifyReport {
  Table table;  ///< r, t, gamma_t_half, trace_distance, leakage, trace_drift, pairing_residual
  bool passed = true;
};

/// Integrates the oracle for every r in the list and compares the reduced
/// state with the closed-form state at each grid time. Requires alpha0 <= 4.
VerifyReport verify(const RunConfig& config);

/// CSV: header row, 17 significant digits, '\n' line ends. JSON: array of
/// objects keyed by column name.
void write_table(const Table& table, OutputFormat format, std::ostream& out);

}  // namespace qmeter
