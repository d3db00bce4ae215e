// qmeter: closed-form trajectories, figure data and oracle verification.
//
// exit status: 0 ok, 1 invalid input, 2 numerical failure, 3 verification failed

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmeter/errors.hpp"
#include "qmeter/sweep.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kNumerical = 2, kVerifyFailed = 3 };

struct Flags {
  double alpha0 = 0.0, gamma = 0.0, theta = 0.0, t_max = 0.0;
  std::vector<double> r;
  int steps = 0, cutoff = 0;
  std::string out, format, config;
};

void add_common(CLI::App* cmd, Flags& f, bool with_cutoff) {
  cmd->add_option("--alpha0", f.alpha0, "asymptotic pointer amplitude (default 100)");
  cmd->add_option("--gamma", f.gamma, "reservoir damping rate (default 1)");
  cmd->add_option("--theta", f.theta, "squeezing phase (default 0)");
  cmd->add_option("--r", f.r, "squeezing magnitude, repeatable (default 0 2 3.5)")->take_all();
  cmd->add_option("--t-max", f.t_max, "last sample time (default 6)");
  cmd->add_option("--steps", f.steps, "number of time samples (default 601)");
  cmd->add_option("--out", f.out, "output file (default stdout)");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--config", f.config, "flat key = value file; flags win");
  if (with_cutoff) cmd->add_option("--cutoff", f.cutoff, "oracle number-basis cutoff (default automatic)");
}

qmeter::RunConfig resolve(const CLI::App* cmd, const Flags& f) {
  qmeter::RunConfig cfg;
  if (!f.config.empty()) qmeter::apply_config_file(f.config, cfg);
  auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
  if (given("--alpha0")) cfg.alpha0 = f.alpha0;
  if (given("--gamma")) cfg.gamma = f.gamma;
  if (given("--theta")) cfg.theta = f.theta;
  if (given("--r")) cfg.r_list = f.r;
  if (given("--t-max")) cfg.t_max = f.t_max;
  if (given("--steps")) cfg.n_steps = f.steps;
  if (given("--out")) cfg.output_path = f.out;
  if (given("--format")) cfg.format = qmeter::parse_format(f.format);
  if (cmd->get_option_no_throw("--cutoff") && given("--cutoff")) cfg.cutoff = f.cutoff;
  cfg.validate();
  return cfg;
}

void emit(const qmeter::Table& table, const qmeter::RunConfig& cfg) {
  if (cfg.output_path.empty()) {
    qmeter::write_table(table, cfg.format, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) throw qmeter::DomainError("cannot write '" + cfg.output_path + "'");
  qmeter::write_table(table, cfg.format, file);
  if (!file) throw qmeter::DomainError("write to '" + cfg.output_path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement of a measured two-state system with a squeezed-reservoir meter"};
  app.require_subcommand(1);

  Flags f;
  auto* trajectory = app.add_subcommand("trajectory", "all derived quantities per (r, t)");
  auto* fig3 = app.add_subcommand("fig3", "decoherence factor exp(Gamma_12) per r");
  auto* fig4 = app.add_subcommand("fig4", "concurrence and entanglement of formation per r");
  auto* fig5 = app.add_subcommand("fig5", "maximal CHSH value per r, c_dif and b_dif for r = 2 vs 3.5");
  auto* verify = app.add_subcommand("verify", "compare the Fock-space integration with the closed form");
  for (auto* cmd : {trajectory, fig3, fig4, fig5}) add_common(cmd, f, false);
  add_common(verify, f, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (trajectory->parsed()) {
      const auto cfg = resolve(trajectory, f);
      emit(qmeter::trajectory_table(cfg), cfg);
    } else if (verify->parsed()) {
      const auto cfg = resolve(verify, f);
      const auto report = qmeter::verify(cfg);
      emit(report.table, cfg);
      if (!report.passed) {
        std::cerr << "verify: trace distance or leakage above tolerance\n";
        return kVerifyFailed;
      }
    } else {
      const std::pair<CLI::App*, qmeter::Figure> figs[] = {
          {fig3, qmeter::Figure::fig3}, {fig4, qmeter::Figure::fig4}, {fig5, qmeter::Figure::fig5}};
      for (const auto& [cmd, which] : figs) {
        if (!cmd->parsed()) continue;
        const auto cfg = resolve(cmd, f);
        emit(qmeter::figure_table(which, cfg), cfg);
      }
    }
  } catch (const qmeter::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
