#include "qmeter/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qmeter/errors.hpp"
#include "qmeter/fock.hpp"
#include "qmeter/measures.hpp"
#include "qmeter/state.hpp"

namespace qmeter {
namespace {

constexpr double kVerifyDistance = 1e-3;
constexpr double kVerifyLeakage = 0.01;
constexpr double kVerifyAlphaMax = 4.0;

std::string r_label(double r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw DomainError("config: '" + key + "' expects a number, got '" + value + "'");
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max())
    throw DomainError("config: '" + key + "' expects an integer, got '" + value + "'");
  return static_cast<int>(v);
}

}  // namespace

TrajectoryRecord trajectory_record(const ModelParams& params, double t) {
  TrajectoryRecord rec;
  rec.r = params.r;
  rec.t = t;
  rec.gamma_t_half = scaled_time(params, t);
  rec.alpha_tilde = alpha_tilde(params, t, 2).real();
  rec.p_overlap = overlap_P(params, t);
  rec.gamma12 = gamma_exponent(params, t, 1, 2);
  rec.decoherence_factor = std::exp(rec.gamma12);
  rec.c_closed = concurrence_closed(params, t);
  rec.bell_max_closed = bell_max_closed(params, t);

  const TwoQubitState state = assemble_rho(params, t);
  const EntanglementReport report = entanglement_report(state);
  rec.c_wootters = report.concurrence;
  rec.eof = report.eof;
  rec.bell_max_horodecki = report.bell_max;
  rec.c_expectation = concurrence_expectation(state, meter_basis_or_limit(params, t));
  rec.purity = purity(state);
  return rec;
}

void RunConfig::validate() const {
  if (r_list.empty()) throw DomainError("at least one r value is required");
  for (double r : r_list) params(r).validate();
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t-max must be a finite positive number");
  if (n_steps < 2) throw DomainError("steps must be >= 2");
  if (cutoff < 0) throw DomainError("cutoff must be >= 0");
}

ModelParams RunConfig::params(double r) const {
  ModelParams p;
  p.alpha0 = alpha0;
  p.gamma = gamma;
  p.theta = theta;
  p.r = r;
  return p;
}

std::vector<double> RunConfig::time_grid() const {
  std::vector<double> grid(static_cast<std::size_t>(n_steps));
  for (int k = 0; k < n_steps; ++k) grid[k] = t_max * k / (n_steps - 1);
  return grid;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw DomainError("format must be csv or json, got '" + name + "'");
}

void apply_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::string line;
  bool r_seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "alpha0") {
      config.alpha0 = to_double(key, value);
    } else if (key == "gamma") {
      config.gamma = to_double(key, value);
    } else if (key == "theta") {
      config.theta = to_double(key, value);
    } else if (key == "r") {
      if (!r_seen) config.r_list.clear();
      r_seen = true;
      std::istringstream parts(value);
      std::string item;
      while (std::getline(parts, item, ',')) config.r_list.push_back(to_double(key, trim(item)));
    } else if (key == "t-max" || key == "t_max") {
      config.t_max = to_double(key, value);
    } else if (key == "steps") {
      config.n_steps = to_int(key, value);
    } else if (key == "out") {
      config.output_path = value;
    } else if (key == "format") {
      config.format = parse_format(value);
    } else if (key == "cutoff") {
      config.cutoff = to_int(key, value);
    } else {
      throw DomainError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
}

Table trajectory_table(const RunConfig& config) {
  config.validate();
  Table table;
  table.columns = {"r",       "t",          "gamma_t_half",  "alpha_tilde",     "p_overlap",
                   "gamma12", "decoherence_factor", "c_closed", "c_wootters",      "c_expectation",
                   "eof",     "bell_max_closed",    "bell_max_horodecki",          "purity"};
  const auto grid = config.time_grid();
  for (double r : config.r_list) {
    const ModelParams params = config.params(r);
    for (double t : grid) {
      const TrajectoryRecord x = trajectory_record(params, t);
      table.rows.push_back({x.r, x.t, x.gamma_t_half, x.alpha_tilde, x.p_overlap, x.gamma12, x.decoherence_factor,
                            x.c_closed, x.c_wootters, x.c_expectation, x.eof, x.bell_max_closed,
                            x.bell_max_horodecki, x.purity});
    }
  }
  return table;
}

Table figure_table(Figure which, const RunConfig& config) {
  config.validate();
  const auto grid = config.time_grid();
  Table table;
  table.columns = {"t", "gamma_t_half"};
  for (double r : config.r_list) {
    const std::string tag = "_r" + r_label(r);
    switch (which) {
      case Figure::fig3:
        table.columns.push_back("decoherence_factor" + tag);
        break;
      case Figure::fig4:
        table.columns.push_back("concurrence" + tag);
        table.columns.push_back("eof" + tag);
        break;
      case Figure::fig5:
        table.columns.push_back("bell_max" + tag);
        break;
    }
  }
  if (which == Figure::fig5) {
    table.columns.push_back("c_dif");
    table.columns.push_back("b_dif");
  }

  const ModelParams first = config.params(2.0);
  const ModelParams second = config.params(3.5);
  for (double t : grid) {
    std::vector<double> row{t, scaled_time(first, t)};
    for (double r : config.r_list) {
      const ModelParams p = config.params(r);
      switch (which) {
        case Figure::fig3:
          row.push_back(decoherence_factor(p, t));
          break;
        case Figure::fig4: {
          const double c = concurrence_closed(p, t);
          row.push_back(c);
          row.push_back(eof(c));
          break;
        }
        case Figure::fig5:
          row.push_back(bell_max_closed(p, t));
          break;
      }
    }
    if (which == Figure::fig5) {
      row.push_back(concurrence_closed(first, t) - concurrence_closed(second, t));
      row.push_back(bell_max_closed(first, t) - bell_max_closed(second, t));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

VerifyReport verify(const RunConfig& config) {
  config.validate();
  if (config.alpha0 > kVerifyAlphaMax)
    throw DomainError("verify: alpha0 = " + r_label(config.alpha0) +
                      " is beyond the oracle's reach; use alpha0 <= 4");
  VerifyReport report;
  report.table.columns = {"r", "t", "gamma_t_half", "trace_distance", "leakage", "trace_drift", "pairing_residual"};
  const auto grid = config.time_grid();
  for (double r : config.r_list) {
    const ModelParams params = config.params(r);
    OracleOptions options;
    options.cutoff = config.cutoff;
    const auto samples = integrate(params, grid, options);
    const double trace0 = samples.front().total_trace().real();
    for (const FockBlockState& st : samples) {
      const ReducedState red = reduce_to_qubits(st, params, std::numeric_limits<double>::infinity());
      const double distance = trace_distance(red.state, assemble_rho(params, st.time));
      const double drift = std::abs(st.total_trace().real() - trace0);
      report.table.rows.push_back(
          {r, st.time, scaled_time(params, st.time), distance, red.leakage, drift, st.pairing_residual()});
      if (!(distance < kVerifyDistance) || !(red.leakage < kVerifyLeakage)) report.passed = false;
    }
  }
  return report;
}

void write_table(const Table& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < table.columns.size(); ++i) obj[table.columns[i]] = row[i] + 0.0;
      doc.push_back(std::move(obj));
    }
    out << doc.dump(1) << '\n';
    return;
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  std::ostringstream cell;
  cell << std::setprecision(17);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      cell.str({});
      cell << row[i] + 0.0;  // prints -0 as 0
      out << (i ? "," : "") << cell.str();
    }
    out << '\n';
  }
}

}  // namespace qmeter
