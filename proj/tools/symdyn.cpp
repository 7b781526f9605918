#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "symdyn/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"symdyn: complexity and Rauzy-graph experiments on generated infinite words"};
  app.require_subcommand(1);

  symdyn::cli::Overrides overrides;
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--prefix-len", overrides.prefix_len, "Number of symbols to generate");
    cmd->add_option("--max-k", overrides.max_k, "Largest factor length analysed");
    cmd->add_option("--precision-cap", overrides.precision_cap, "Interval precision cap in bits");
    cmd->add_option("--out-dir", overrides.out_dir, "Directory for CSV, DOT and JSON outputs");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Generate a word and run the configured analyses");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_overrides(run);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a built-in verification suite");
  verify->add_option("suite", suite, "sturmian | iet | arnoux-mauduit | unipotent")->required();
  add_overrides(verify);

  std::size_t k = 0;
  std::string out_file;
  bool scheme = false;
  auto* graph = app.add_subcommand("graph", "Export the Rauzy graph of order k as DOT");
  graph->add_option("config", config_path, "Experiment config (JSON)")->required();
  graph->add_option("--k", k, "Graph order")->required();
  graph->add_option("--out", out_file, "Output DOT file")->required();
  graph->add_flag("--scheme", scheme, "Export the contracted scheme instead of the graph");
  add_overrides(graph);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) return symdyn::cli::run_command(config_path, overrides, std::cout, std::cerr);
  if (*verify) return symdyn::cli::verify_command(suite, overrides, std::cout, std::cerr);
  return symdyn::cli::graph_command(config_path, k, out_file, scheme, overrides, std::cout, std::cerr);
}
