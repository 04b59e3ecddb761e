#pragma once

// Experiment configuration, read from a single JSON document.
//
//   {
//     "experiment": "dprm-converge",          // optional if given on the CLI
//     "seed": 42,                             // mandatory, here or via --seed
//     "source":     [0.25, 0.25, 0.25, 0.25] | {"uniform": 4},
//     "coding":     [0.5, 0.5]               | {"uniform": 2},
//     "distortion": [[0, 1], [1, 0]]          | {"hamming": 2}
//                 | {"constant": 0.5, "rows": 2, "cols": 2},
//     "energy":     {"gaussian": {"mean": 0, "std": 1}}
//                 | {"discrete": {"values": [0, 1], "probs": [0.5, 0.5]}},
//     "d": 2,
//     "n": 20 | [8, 12, 16],
//     "beta": 0.5 | [0.5, 3] | {"start": 1.0, "stop": 1.4, "step": 0.001},
//     "trials": 50,
//     "beam_width": 0,
//     "fixed_sequence": true,
//     "sequence": [0, 3, 1],                  // encode: explicit source tuple
//     "input": "encoded.tcb",                 // decode
//     "tolerance": 1e-4,                      // verify-theorem
//     "threads": 0,
//     "output": "out"
//   }

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cayley/model.hpp"

namespace cayley::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  kDprmConverge,
  kPhaseScan,
  kEncode,
  kDecode,
  kRdCurve,
  kVerifyTheorem,
  kEnsemble,
};

[[nodiscard]] std::string_view to_string(ExperimentKind kind) noexcept;
[[nodiscard]] std::optional<ExperimentKind> parse_kind(std::string_view name) noexcept;

struct ExperimentConfig {
  std::optional<ExperimentKind> kind;
  std::optional<std::uint64_t> master_seed;
  std::optional<SourceModel> source;
  std::optional<CodingDistribution> coding;
  std::optional<DistortionMatrix> distortion;
  std::optional<EnergyDistribution> energy;
  std::uint64_t d = 2;
  std::vector<int> depths;
  std::vector<double> betas;
  std::size_t trials = 1;
  std::size_t beam_width = 0;
  bool fixed_sequence = false;
  std::optional<std::vector<std::size_t>> sequence;
  std::optional<std::filesystem::path> input;
  double tolerance = 1e-4;
  double converse_slack = 0.01;  // verify-theorem: mean >= D(R) - slack
  double final_gap = 0.08;       // verify-theorem: last ensemble gap bound
  unsigned threads = 0;
  std::filesystem::path output_dir = ".";
};

/// Parses a JSON document. Throws ConfigError with a field-specific message.
[[nodiscard]] ExperimentConfig parse_config(std::string_view json_text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks that every field the experiment needs is present and consistent.
/// Throws ConfigError. Called after command-line overrides are applied.
void validate(const ExperimentConfig& config);

/// Canonical JSON echo of a configuration (stable key order).
[[nodiscard]] std::string to_json(const ExperimentConfig& config);

}  // namespace cayley::harness
