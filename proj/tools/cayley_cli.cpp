// Command-line front end: one subcommand per experiment kind.
//
//   cayley <experiment> --config run.json [--seed U64] [--out DIR]
//                       [--threads N] [--format csv|json] [--in FILE]
//
// Exit status: 0 on PASS or completion, 2 when the theorem's hypothesis does
// not hold (NOT-APPLICABLE), 1 on errors and failed verdicts.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cayley/config.hpp"
#include "cayley/harness.hpp"

namespace {

struct Options {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 0;
  std::string format = "csv";
  std::string input;
};

int execute(cayley::harness::ExperimentKind kind, const Options& opt, const CLI::App& sub) {
  using namespace cayley::harness;
  ExperimentConfig cfg = load_config(opt.config_path);
  if (cfg.kind && *cfg.kind != kind) {
    throw ConfigError("config declares experiment '" + std::string(to_string(*cfg.kind)) +
                      "' but the subcommand is '" + std::string(to_string(kind)) + "'");
  }
  cfg.kind = kind;
  if (sub.count("--seed") > 0) cfg.master_seed = opt.seed;
  if (sub.count("--out") > 0) cfg.output_dir = opt.out_dir;
  if (sub.count("--threads") > 0) cfg.threads = opt.threads;
  if (const auto* in = sub.get_option_no_throw("--in"); in != nullptr && in->count() > 0) {
    cfg.input = opt.input;
  }

  const RunResult result = run(cfg);
  const auto format = opt.format == "json" ? TableFormat::kJson : TableFormat::kCsv;
  for (const auto& path : write_outputs(result, cfg.output_dir, format)) {
    std::cerr << "wrote " << path.string() << "\n";
  }
  std::cout << result.summary_json;
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  using cayley::harness::ExperimentKind;
  CLI::App app{"Directed polymers on Cayley trees and random tree source codes"};
  app.require_subcommand(1);

  Options opt;
  const std::pair<ExperimentKind, const char*> commands[] = {
      {ExperimentKind::kDprmConverge, "Monte-Carlo free energy per step against its large-n limit"},
      {ExperimentKind::kPhaseScan, "Limit free energy and finite differences across beta_c"},
      {ExperimentKind::kEncode, "Encode one source tuple with a seeded tree code"},
      {ExperimentKind::kDecode, "Sequentially decode a framed bitstream"},
      {ExperimentKind::kRdCurve, "Blahut-Arimoto rate-distortion curve over a beta grid"},
      {ExperimentKind::kVerifyTheorem, "Check D0(R) = D(R) and the ensemble distortion trend"},
      {ExperimentKind::kEnsemble, "Tree-code ensemble distortion statistics"},
  };
  std::vector<std::pair<ExperimentKind, CLI::App*>> subs;
  for (const auto& [kind, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(cayley::harness::to_string(kind)), help);
    sub->add_option("--config", opt.config_path, "Experiment configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Master seed (overrides the config)");
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--threads", opt.threads, "Worker threads for independent trials (advisory)");
    sub->add_option("--format", opt.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    if (kind == ExperimentKind::kDecode) {
      sub->add_option("--in", opt.input, "Bitstream file (overrides the config)");
    }
    subs.emplace_back(kind, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [kind, sub] : subs) {
      if (sub->parsed()) return execute(kind, opt, *sub);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
