// Command-line front end. Exit codes: 0 = ran and the inequality is violated
// (or the command has no verdict and succeeded), 1 = ran and not violated,
// 2 = contract or validation failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lsw/lsw.hpp"

namespace {

struct CommonOpts {
  double eta = 0.0;
  std::string state;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string config;
  std::string format;
  std::string out;
  CLI::Option* o_eta = nullptr;
  CLI::Option* o_state = nullptr;
  CLI::Option* o_shots = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_format = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  o.o_eta = cmd->add_option("--eta", o.eta, "sharpness parameter in [0, sqrt(3)-1]");
  o.o_state = cmd->add_option("--state", o.state,
                              "phi0|H|V|D|R or four comma-separated amplitude parts");
  o.o_shots = cmd->add_option("--shots", o.shots, "Monte Carlo shots per pair");
  o.o_seed = cmd->add_option("--seed", o.seed, "base sampling seed");
  cmd->add_option("--config", o.config, "key=value configuration file");
  o.o_format = cmd->add_option("--format", o.format, "output format")
                   ->check(CLI::IsMember({"table", "object"}));
  cmd->add_option("--out", o.out, "also write the output to this path");
}

// precedence: built-in defaults, then the config file, then explicit flags
lsw::ExperimentConfig make_config(const CommonOpts& o) {
  lsw::ExperimentConfig cfg;
  if (!o.config.empty()) lsw::apply_config_file(cfg, o.config);
  if (o.o_eta->count() > 0) cfg.eta = o.eta;
  if (o.o_state->count() > 0) cfg.state = o.state;
  if (o.o_shots->count() > 0) cfg.shots = o.shots;
  if (o.o_seed->count() > 0) cfg.seed = o.seed;
  if (o.o_format->count() > 0) lsw::set_format(cfg, o.format);
  return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw lsw::config_error("cannot open output file '" + out_path + "'");
    f << text;
    if (!f) throw lsw::config_error("failed writing output file '" + out_path + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy-trine joint qubit measurements: inequality evaluation, "
               "sequential-cascade compilation, and photonic simulation"};
  app.require_subcommand(1);

  CommonOpts report_o, sweep_o, marginals_o, compile_o, check_o;

  CLI::App* c_report = app.add_subcommand(
      "report", "full pipeline: construct, validate, compile, simulate, report");
  add_common(c_report, report_o);

  CLI::App* c_sweep =
      app.add_subcommand("sweep", "scan the sharpness window and tabulate the violation margin");
  add_common(c_sweep, sweep_o);
  double eta_min = 2.0 / 3.0;
  double eta_max = lsw::eta_max_trine();
  int steps = 256;
  c_sweep->add_option("--eta-min", eta_min, "lower edge, excluded from the grid");
  c_sweep->add_option("--eta-max", eta_max, "upper edge, included in the grid");
  c_sweep->add_option("--steps", steps, "number of grid rows");

  CLI::App* c_marginals =
      app.add_subcommand("marginals", "exact marginal probabilities over the probe states");
  add_common(c_marginals, marginals_o);

  CLI::App* c_compile =
      app.add_subcommand("compile", "emit wave-plate angles and splitter transmissions");
  add_common(c_compile, compile_o);

  CLI::App* c_check = app.add_subcommand("check", "run every structural validation and stop");
  add_common(c_check, check_o);

  try {
    app.parse(argc, argv);

    if (app.got_subcommand(c_report)) {
      lsw::ExperimentConfig cfg = make_config(report_o);
      lsw::RunReport rep = lsw::run(cfg);
      emit(lsw::render_report(rep, cfg.format), report_o.out);
      return rep.lsw.violated ? 0 : 1;
    }
    if (app.got_subcommand(c_sweep)) {
      lsw::ExperimentConfig cfg = make_config(sweep_o);
      auto rows = lsw::sweep_eta(eta_min, eta_max, steps);
      emit(lsw::render_sweep(rows, cfg.format), sweep_o.out);
      for (const lsw::SweepRow& r : rows)
        if (r.margin > 0.0) return 0;
      return 1;
    }
    if (app.got_subcommand(c_marginals)) {
      lsw::ExperimentConfig cfg = make_config(marginals_o);
      emit(lsw::render_marginals(lsw::marginal_table(cfg), cfg.format), marginals_o.out);
      return 0;
    }
    if (app.got_subcommand(c_compile)) {
      lsw::ExperimentConfig cfg = make_config(compile_o);
      emit(lsw::render_circuits(lsw::compile_circuits(cfg), cfg.format), compile_o.out);
      return 0;
    }
    if (app.got_subcommand(c_check)) {
      lsw::ExperimentConfig cfg = make_config(check_o);
      lsw::ValidationReport rep = lsw::check_all(cfg);
      emit(lsw::render_validation(rep, cfg.format), check_o.out);
      return rep.pass ? 0 : 2;
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const lsw::contract_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "Error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
