#pragma once

// Experiment orchestration behind the command-line tool. Each runner takes a
// validated configuration and returns a table plus a JSON summary; writing
// files is a separate step so runs can be checked in memory.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cayley/config.hpp"
#include "cayley/rd.hpp"

namespace cayley::harness {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Column index by name; throws std::out_of_range.
  [[nodiscard]] std::size_t column(const std::string& name) const;
  [[nodiscard]] double number(std::size_t row, const std::string& name) const;
};

/// Round-trip exact formatting (%.17g) so that equal runs produce equal bytes.
[[nodiscard]] std::string format_cell(const Cell& cell);
[[nodiscard]] std::string to_csv(const Table& table);
[[nodiscard]] std::string to_json_rows(const Table& table);

struct Artifact {
  std::string filename;
  std::vector<std::uint8_t> bytes;
};

struct RunResult {
  ExperimentKind kind = ExperimentKind::kDprmConverge;
  Table table;
  std::string summary_json;
  /// PASS for completed runs without a verdict of their own.
  rd::Verdict verdict = rd::Verdict::kPass;
  std::vector<Artifact> artifacts;

  /// 0 on PASS or completion, 2 on NOT-APPLICABLE, 1 otherwise.
  [[nodiscard]] int exit_code() const noexcept;
};

/// Columns: n, beta, trials, mean_f, std_f, f_limit, gap.
[[nodiscard]] RunResult run_dprm_converge(const ExperimentConfig& config);

/// Columns: beta, f, d1, d2 (forward differences). Summary reports the
/// analytic beta_c, the detected kink, and the continuity/jump measurements
/// across it, or NO-TRANSITION. Throws ConfigError when the grid has fewer
/// than 5 points on either side of beta_c.
[[nodiscard]] RunResult run_phase_scan(const ExperimentConfig& config);

/// Columns: beta, R_nats, R_bits, D, converged.
[[nodiscard]] RunResult run_rd_curve(const ExperimentConfig& config);

/// Columns: n, trials, mean, std, d0, d_of_r, gap_d0, gap_d_of_r.
[[nodiscard]] RunResult run_ensemble(const ExperimentConfig& config);

/// D0(R) against D(R) with Q* from Blahut-Arimoto, then the ensemble at each
/// configured depth. Columns: n, trials, mean, std, gap.
[[nodiscard]] RunResult run_verify_theorem(const ExperimentConfig& config);

/// Columns: t, x, j, relative, y, rho. Emits the framed bitstream artifact
/// "encoded.tcb".
[[nodiscard]] RunResult run_encode(const ExperimentConfig& config);

/// Columns: t, y. The code seed and shape come from the bitstream header.
[[nodiscard]] RunResult run_decode(const ExperimentConfig& config);

/// Validates and dispatches on config.kind.
[[nodiscard]] RunResult run(const ExperimentConfig& config);

enum class TableFormat { kCsv, kJson };

/// Writes <kind>.csv or <kind>.json, <kind>.summary.json, and artifacts into
/// `dir`. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const RunResult& result,
                                                 const std::filesystem::path& dir,
                                                 TableFormat format);

}  // namespace cayley::harness
