#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "korovkin/runner.hpp"

using namespace korovkin;

namespace {

struct Overrides {
  std::string config_path;
  std::vector<int> n;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "run configuration (JSON)")->required();
  cmd->add_option("--n", ov.n, "override the process index list");
  cmd->add_option("--out", ov.out, "override the CSV output path");
  cmd->add_option("--seed", ov.seed, "override the RNG seed");
  cmd->add_option("--threshold", ov.threshold, "override the verdict threshold");
}

RunConfig load_with_overrides(const Overrides& ov) {
  RunConfig cfg = load_config(ov.config_path);
  if (!ov.n.empty()) {
    cfg.n_list = ov.n;
    for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
      if (cfg.n_list[i] <= cfg.n_list[i - 1])
        throw error(errc::config, "--n must be strictly increasing");
  }
  if (!ov.out.empty()) cfg.out = ov.out;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.threshold) cfg.threshold = *ov.threshold;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Korovkin-type approximation processes: certified error bounds,\n"
               "operator checkers, and test-function convergence verdicts"};
  app.require_subcommand(1);

  Overrides ov;
  std::string table_in;
  CLI::App* cmd_bound = app.add_subcommand("bound", "certified error bounds per target and n");
  CLI::App* cmd_converge =
      app.add_subcommand("converge", "test-function and probe defect series");
  CLI::App* cmd_check =
      app.add_subcommand("check-operator", "domination / regularity / constants checks");
  CLI::App* cmd_equiv =
      app.add_subcommand("equivalence", "full statement matrix with implication checks");
  CLI::App* cmd_table = app.add_subcommand("table", "render a CSV artifact as an aligned table");
  for (CLI::App* cmd : {cmd_bound, cmd_converge, cmd_check, cmd_equiv})
    add_common_options(cmd, ov);
  cmd_table->add_option("--in", table_in, "CSV file to render")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return exit_config;
  }

  try {
    if (cmd_table->parsed()) return run_table(table_in).exit_code;
    RunConfig cfg = load_with_overrides(ov);
    if (cmd_bound->parsed()) return run_bound(cfg).exit_code;
    if (cmd_converge->parsed()) return run_converge(cfg).exit_code;
    if (cmd_check->parsed()) return run_check_operator(cfg).exit_code;
    return run_equivalence(cfg).exit_code;
  } catch (const error& e) {
    std::cerr << errc_name(e.kind()) << " error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}
