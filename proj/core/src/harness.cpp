#include "cayley/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cayley/bitstream.hpp"
#include "cayley/dprm.hpp"
#include "cayley/rng.hpp"
#include "cayley/theory.hpp"
#include "cayley/treecode.hpp"

namespace cayley::harness {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMinPointsPerSide = 5;

json base_summary(const ExperimentConfig& cfg) {
  json s;
  s["experiment"] = std::string(to_string(*cfg.kind));
  s["config"] = json::parse(to_json(cfg));
  s["seeds"] = {{"master", *cfg.master_seed}};
  return s;
}

Cell num(double v) { return Cell{v}; }
Cell integer(std::int64_t v) { return Cell{v}; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

RunResult finish(const ExperimentConfig& cfg, Table table, json summary,
                 rd::Verdict verdict = rd::Verdict::kPass) {
  summary["verdict"] = rd::to_string(verdict);
  RunResult r;
  r.kind = *cfg.kind;
  r.table = std::move(table);
  r.summary_json = summary.dump(2) + "\n";
  r.verdict = verdict;
  return r;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column named " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column " + name + " is not numeric");
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double v = std::get<double>(cell);
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out += (c ? "," : "") + table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json_rows(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              obj[table.columns[c]] = number_or_null(v);
            } else {
              obj[table.columns[c]] = v;
            }
          },
          row[c]);
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

int RunResult::exit_code() const noexcept {
  switch (verdict) {
    case rd::Verdict::kPass: return 0;
    case rd::Verdict::kNotApplicable: return 2;
    case rd::Verdict::kFail: return 1;
  }
  return 1;
}

RunResult run_dprm_converge(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto limit = theory::make_free_energy_limit(*cfg.energy, cfg.d);
  Table table{{"n", "beta", "trials", "mean_f", "std_f", "f_limit", "gap"}, {}};
  for (int n : cfg.depths) {
    const TreeShape shape(cfg.d, n);
    for (double beta : cfg.betas) {
      const auto stats = dprm::monte_carlo_free_energy(shape, *cfg.energy, beta, cfg.trials,
                                                       *cfg.master_seed, cfg.threads);
      const double f = limit(beta);
      table.rows.push_back({integer(n), num(beta), integer(static_cast<std::int64_t>(cfg.trials)),
                            num(stats.mean), num(stats.stddev), num(f), num(stats.mean - f)});
    }
  }
  json s = base_summary(cfg);
  s["energy"] = cfg.energy->describe();
  s["beta_c"] = limit.critical.finite() ? json(limit.critical.value) : json("INFINITE");
  s["beta_c_diagnostic"] = limit.critical.diagnostic;
  return finish(cfg, std::move(table), std::move(s));
}

RunResult run_phase_scan(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto limit = theory::make_free_energy_limit(*cfg.energy, cfg.d);
  const auto& b = cfg.betas;
  const std::size_t k_count = b.size();
  std::vector<double> f(k_count), d1(k_count, kNaN), d2(k_count, kNaN);
  for (std::size_t k = 0; k < k_count; ++k) f[k] = limit(b[k]);
  for (std::size_t k = 0; k + 1 < k_count; ++k) d1[k] = (f[k + 1] - f[k]) / (b[k + 1] - b[k]);
  for (std::size_t k = 0; k + 2 < k_count; ++k) d2[k] = (d1[k + 1] - d1[k]) / (b[k + 1] - b[k]);

  json s = base_summary(cfg);
  s["energy"] = cfg.energy->describe();
  if (!limit.critical.finite()) {
    s["transition"] = false;
    s["status"] = "NO-TRANSITION";
    s["beta_c"] = "INFINITE";
    s["beta_c_diagnostic"] = limit.critical.diagnostic;
  } else {
    const double bc = limit.critical.value;
    const auto left = static_cast<std::size_t>(
        std::count_if(b.begin(), b.end(), [&](double v) { return v <= bc; }));
    const std::size_t right = k_count - left;
    if (left < kMinPointsPerSide || right < kMinPointsPerSide) {
      std::ostringstream os;
      os << "beta grid has " << left << " points at or below beta_c=" << bc << " and " << right
         << " above; at least " << kMinPointsPerSide << " per side are required";
      throw ConfigError(os.str());
    }
    const std::size_t seam = left - 1;  // b[seam] <= beta_c < b[seam + 1]
    const double f_jump = std::abs(f[seam + 1] - f[seam]);
    const double d1_jump = std::max(std::abs(d1[seam] - d1[seam - 1]), std::abs(d1[seam + 1] - d1[seam]));
    // d2[seam - 2] only touches points at or below beta_c, d2[seam + 1] only
    // points above it.
    const double d2_jump = std::abs(d2[seam - 2] - d2[seam + 1]);
    std::size_t kink = 1;
    double biggest = -1.0;
    for (std::size_t k = 1; k + 2 < k_count; ++k) {
      const double change = std::abs(d2[k] - d2[k - 1]);
      if (change > biggest) {
        biggest = change;
        kink = k;
      }
    }
    s["transition"] = true;
    s["status"] = "TRANSITION";
    s["beta_c"] = bc;
    s["phi_at_beta_c"] = limit.phi_at_beta_c;
    s["detected_kink"] = b[kink];
    s["f_jump"] = f_jump;
    s["d1_jump"] = d1_jump;
    s["d2_jump"] = d2_jump;
  }
  Table table{{"beta", "f", "d1", "d2"}, {}};
  for (std::size_t k = 0; k < k_count; ++k) {
    table.rows.push_back({num(b[k]), num(f[k]), num(d1[k]), num(d2[k])});
  }
  return finish(cfg, std::move(table), std::move(s));
}

RunResult run_rd_curve(const ExperimentConfig& cfg) {
  validate(cfg);
  Table table{{"beta", "R_nats", "R_bits", "D", "converged"}, {}};
  for (const auto& p : rd::rd_curve(*cfg.source, *cfg.distortion, cfg.betas)) {
    table.rows.push_back({num(p.beta), num(p.rate), num(p.rate / std::log(2.0)), num(p.distortion),
                          integer(p.converged ? 1 : 0)});
  }
  json s = base_summary(cfg);
  s["points"] = table.rows.size();
  return finish(cfg, std::move(table), std::move(s));
}

RunResult run_ensemble(const ExperimentConfig& cfg) {
  validate(cfg);
  Table table{{"n", "trials", "mean", "std", "d0", "d_of_r", "gap_d0", "gap_d_of_r"}, {}};
  treecode::EnsembleOptions opt{cfg.trials, *cfg.master_seed, cfg.fixed_sequence, cfg.beam_width,
                                cfg.threads};
  json s = base_summary(cfg);
  for (int n : cfg.depths) {
    const auto st = treecode::simulate_ensemble(*cfg.source, *cfg.coding, *cfg.distortion, cfg.d, n, opt);
    table.rows.push_back({integer(n), integer(static_cast<std::int64_t>(cfg.trials)), num(st.mean),
                          num(st.stddev), num(st.d0), num(st.d_of_r), num(st.gap_to_d0),
                          num(st.gap_to_d_of_r)});
    s["d0"] = st.d0;
    s["d0_degenerate"] = st.d0_degenerate;
    s["d_of_r"] = st.d_of_r;
  }
  s["rate_nats"] = std::log(static_cast<double>(cfg.d));
  return finish(cfg, std::move(table), std::move(s));
}

RunResult run_verify_theorem(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto report = rd::verify_d0_equals_d(*cfg.source, *cfg.distortion, cfg.d, cfg.tolerance);
  json s = base_summary(cfg);
  s["rate_nats"] = report.rate_nats;
  s["q_star"] = report.q_star;
  s["symmetric"] = report.symmetry.symmetric;
  s["symmetry"] = report.symmetry.message;
  s["message"] = report.message;
  Table table{{"n", "trials", "mean", "std", "gap"}, {}};
  if (report.verdict == rd::Verdict::kNotApplicable) {
    return finish(cfg, std::move(table), std::move(s), rd::Verdict::kNotApplicable);
  }
  s["d0"] = report.d0;
  s["d_of_r"] = report.d_of_r;
  s["theorem_gap"] = report.gap;
  s["degenerate"] = report.degenerate;
  s["beta_star"] = report.beta_star;
  s["theorem_verdict"] = rd::to_string(report.verdict);

  bool ok = report.verdict == rd::Verdict::kPass;
  const CodingDistribution q_star(report.q_star);
  treecode::EnsembleOptions opt{cfg.trials, *cfg.master_seed, cfg.fixed_sequence, cfg.beam_width,
                                cfg.threads};
  double previous_gap = std::numeric_limits<double>::infinity();
  json checks = json::array();
  for (int n : cfg.depths) {
    const auto st = treecode::simulate_ensemble(*cfg.source, q_star, *cfg.distortion, cfg.d, n, opt);
    const double gap = st.mean - report.d_of_r;
    table.rows.push_back({integer(n), integer(static_cast<std::int64_t>(cfg.trials)), num(st.mean),
                          num(st.stddev), num(gap)});
    const bool converse = st.mean >= report.d_of_r - cfg.converse_slack;
    const bool shrinking = gap <= previous_gap;
    checks.push_back({{"n", n}, {"converse", converse}, {"non_increasing_gap", shrinking}});
    ok = ok && converse && shrinking;
    previous_gap = gap;
  }
  if (!cfg.depths.empty()) {
    const bool final_ok = previous_gap <= cfg.final_gap;
    s["final_gap_ok"] = final_ok;
    ok = ok && final_ok;
  }
  s["ensemble_checks"] = checks;
  return finish(cfg, std::move(table), std::move(s), ok ? rd::Verdict::kPass : rd::Verdict::kFail);
}

RunResult run_encode(const ExperimentConfig& cfg) {
  validate(cfg);
  const int n = cfg.depths.front();
  const treecode::TreeCode code(*cfg.master_seed, *cfg.coding, TreeShape(cfg.d, n));
  const std::vector<std::size_t> x =
      cfg.sequence ? *cfg.sequence
                   : treecode::draw_source_sequence(
                         *cfg.source, n, rng::stream_key(*cfg.master_seed, rng::Stream::kSource));
  const auto enc = cfg.beam_width == 0 ? treecode::encode_exact(code, x, *cfg.distortion)
                                       : treecode::encode_beam(code, x, *cfg.distortion, cfg.beam_width);
  const auto stream = codec::pack(enc.walk, cfg.d);
  const auto rel = codec::relative_indices(enc.walk, cfg.d);

  Table table{{"t", "x", "j", "relative", "y", "rho"}, {}};
  for (std::size_t t = 0; t < x.size(); ++t) {
    table.rows.push_back({integer(static_cast<std::int64_t>(t) + 1),
                          integer(static_cast<std::int64_t>(x[t])),
                          integer(static_cast<std::int64_t>(enc.walk.steps[t])),
                          integer(static_cast<std::int64_t>(rel[t])),
                          integer(static_cast<std::int64_t>(enc.reproduction[t])),
                          num(enc.per_symbol[t])});
  }
  json s = base_summary(cfg);
  s["total_distortion"] = enc.total_distortion;
  s["distortion_per_symbol"] = enc.distortion_per_symbol();
  s["payload_bits"] = stream.bit_count;
  s["encoder"] = cfg.beam_width == 0 ? "exact" : "beam";
  RunResult r = finish(cfg, std::move(table), std::move(s));
  r.artifacts.push_back({"encoded.tcb", codec::serialize({stream, *cfg.master_seed})});
  return r;
}

RunResult run_decode(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto file = codec::read_file(*cfg.input);
  const treecode::TreeCode code(file.master_seed, *cfg.coding,
                                TreeShape(file.stream.d, file.stream.n));
  Table table{{"t", "y"}, {}};
  treecode::decode_sequential(code, file.stream, [&](int t, std::size_t y) {
    table.rows.push_back({integer(t), integer(static_cast<std::int64_t>(y))});
  });
  json s = base_summary(cfg);
  s["code_seed"] = file.master_seed;
  s["d"] = file.stream.d;
  s["n"] = file.stream.n;
  s["payload_bits"] = file.stream.bit_count;
  return finish(cfg, std::move(table), std::move(s));
}

RunResult run(const ExperimentConfig& cfg) {
  validate(cfg);
  switch (*cfg.kind) {
    case ExperimentKind::kDprmConverge: return run_dprm_converge(cfg);
    case ExperimentKind::kPhaseScan: return run_phase_scan(cfg);
    case ExperimentKind::kEncode: return run_encode(cfg);
    case ExperimentKind::kDecode: return run_decode(cfg);
    case ExperimentKind::kRdCurve: return run_rd_curve(cfg);
    case ExperimentKind::kVerifyTheorem: return run_verify_theorem(cfg);
    case ExperimentKind::kEnsemble: return run_ensemble(cfg);
  }
  throw ConfigError("unhandled experiment kind");
}

std::vector<std::filesystem::path> write_outputs(const RunResult& result,
                                                 const std::filesystem::path& dir,
                                                 TableFormat format) {
  std::filesystem::create_directories(dir);
  const std::string stem(to_string(result.kind));
  std::vector<std::filesystem::path> written;
  const auto write = [&](const std::filesystem::path& path, const void* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    written.push_back(path);
  };
  const std::string table = format == TableFormat::kCsv ? to_csv(result.table) : to_json_rows(result.table);
  write(dir / (stem + (format == TableFormat::kCsv ? ".csv" : ".json")), table.data(), table.size());
  write(dir / (stem + ".summary.json"), result.summary_json.data(), result.summary_json.size());
  for (const auto& a : result.artifacts) write(dir / a.filename, a.bytes.data(), a.bytes.size());
  return written;
}

}  // namespace cayley::harness
