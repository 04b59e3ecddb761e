#include "cayley/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace cayley::harness {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 7> kKinds{{
    {ExperimentKind::kDprmConverge, "dprm-converge"},
    {ExperimentKind::kPhaseScan, "phase-scan"},
    {ExperimentKind::kEncode, "encode"},
    {ExperimentKind::kDecode, "decode"},
    {ExperimentKind::kRdCurve, "rd-curve"},
    {ExperimentKind::kVerifyTheorem, "verify-theorem"},
    {ExperimentKind::kEnsemble, "ensemble"},
}};

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

template <class T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    fail(field, e.what());
  }
}

std::vector<double> probability_vector(const json& j, const std::string& field) {
  if (j.is_object() && j.contains("uniform")) {
    const auto k = get_as<std::size_t>(j.at("uniform"), field + ".uniform");
    if (k == 0) fail(field, "uniform alphabet must be non-empty");
    return std::vector<double>(k, 1.0 / static_cast<double>(k));
  }
  if (!j.is_array()) fail(field, "expected an array of probabilities or {\"uniform\": k}");
  return get_as<std::vector<double>>(j, field);
}

template <class Dist>
Dist make_pmf(const json& j, const std::string& field) {
  try {
    return Dist(probability_vector(j, field));
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
}

DistortionMatrix make_distortion(const json& j) {
  const std::string field = "distortion";
  try {
    if (j.is_object() && j.contains("hamming")) {
      return DistortionMatrix::hamming(get_as<std::size_t>(j.at("hamming"), field));
    }
    if (j.is_object() && j.contains("constant")) {
      return DistortionMatrix::constant(get_as<std::size_t>(j.at("rows"), field + ".rows"),
                                        get_as<std::size_t>(j.at("cols"), field + ".cols"),
                                        get_as<double>(j.at("constant"), field));
    }
    if (!j.is_array()) fail(field, "expected a matrix, {\"hamming\": k} or {\"constant\": c, ...}");
    return DistortionMatrix(get_as<std::vector<std::vector<double>>>(j, field));
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  } catch (const json::exception& e) {
    fail(field, e.what());
  }
}

EnergyDistribution make_energy(const json& j) {
  const std::string field = "energy";
  try {
    if (j.is_object() && j.contains("gaussian")) {
      const json& g = j.at("gaussian");
      return EnergyDistribution::gaussian(g.value("mean", 0.0), g.value("std", 1.0));
    }
    if (j.is_object() && j.contains("discrete")) {
      const json& d = j.at("discrete");
      return EnergyDistribution::discrete(get_as<std::vector<double>>(d.at("values"), field),
                                          get_as<std::vector<double>>(d.at("probs"), field));
    }
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  } catch (const json::exception& e) {
    fail(field, e.what());
  }
  fail(field, "expected {\"gaussian\": {...}} or {\"discrete\": {...}}");
}

std::vector<double> beta_list(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) return get_as<std::vector<double>>(j, "beta");
  if (j.is_object()) {
    const auto start = get_as<double>(j.at("start"), "beta.start");
    const auto stop = get_as<double>(j.at("stop"), "beta.stop");
    const auto step = get_as<double>(j.at("step"), "beta.step");
    if (!(step > 0.0) || !(stop >= start)) fail("beta", "grid needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 10'000'000) fail("beta", "grid has too many points");
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) grid[k] = start + static_cast<double>(k) * step;
    return grid;
  }
  fail("beta", "expected a number, an array, or {start, stop, step}");
}

json pmf_json(std::span<const double> probs) { return json(std::vector<double>(probs.begin(), probs.end())); }

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kKinds) {
    if (n == name) return k;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");

  static const std::array<std::string_view, 19> kKnown{
      "experiment", "seed",    "source",     "coding",        "distortion", "energy", "d",
      "n",          "beta",    "trials",     "beam_width",    "fixed_sequence",     "sequence",
      "input",      "tolerance", "converse_slack", "final_gap", "threads",    "output"};
  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) fail(key, "unknown field");
  }

  ExperimentConfig cfg;
  if (root.contains("experiment")) {
    const auto name = get_as<std::string>(root.at("experiment"), "experiment");
    cfg.kind = parse_kind(name);
    if (!cfg.kind) fail("experiment", "unknown experiment kind '" + name + "'");
  }
  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      fail("seed", "must be a non-negative 64-bit integer");
    }
    cfg.master_seed = s.get<std::uint64_t>();
  }
  if (root.contains("source")) cfg.source = make_pmf<SourceModel>(root.at("source"), "source");
  if (root.contains("coding")) cfg.coding = make_pmf<CodingDistribution>(root.at("coding"), "coding");
  if (root.contains("distortion")) cfg.distortion = make_distortion(root.at("distortion"));
  if (root.contains("energy")) cfg.energy = make_energy(root.at("energy"));
  if (root.contains("d")) cfg.d = get_as<std::uint64_t>(root.at("d"), "d");
  if (root.contains("n")) {
    const json& n = root.at("n");
    cfg.depths = n.is_array() ? get_as<std::vector<int>>(n, "n") : std::vector<int>{get_as<int>(n, "n")};
  }
  if (root.contains("beta")) cfg.betas = beta_list(root.at("beta"));
  if (root.contains("trials")) cfg.trials = get_as<std::size_t>(root.at("trials"), "trials");
  if (root.contains("beam_width")) cfg.beam_width = get_as<std::size_t>(root.at("beam_width"), "beam_width");
  if (root.contains("fixed_sequence")) cfg.fixed_sequence = get_as<bool>(root.at("fixed_sequence"), "fixed_sequence");
  if (root.contains("sequence")) cfg.sequence = get_as<std::vector<std::size_t>>(root.at("sequence"), "sequence");
  if (root.contains("input")) cfg.input = get_as<std::string>(root.at("input"), "input");
  if (root.contains("tolerance")) cfg.tolerance = get_as<double>(root.at("tolerance"), "tolerance");
  if (root.contains("converse_slack")) cfg.converse_slack = get_as<double>(root.at("converse_slack"), "converse_slack");
  if (root.contains("final_gap")) cfg.final_gap = get_as<double>(root.at("final_gap"), "final_gap");
  if (root.contains("threads")) cfg.threads = get_as<unsigned>(root.at("threads"), "threads");
  if (root.contains("output")) cfg.output_dir = get_as<std::string>(root.at("output"), "output");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& cfg) {
  if (!cfg.kind) throw ConfigError("no experiment kind given");
  if (!cfg.master_seed) fail("seed", "a master seed is mandatory");
  const auto need = [](bool present, const char* field) {
    if (!present) fail(field, "required for this experiment");
  };
  const auto need_depth = [&](bool single) {
    need(!cfg.depths.empty(), "n");
    if (single && cfg.depths.size() != 1) fail("n", "exactly one depth expected");
    for (int n : cfg.depths) {
      if (n < 1) fail("n", "depths must be >= 1");
    }
  };
  const auto need_betas = [&](bool allow_zero) {
    need(!cfg.betas.empty(), "beta");
    for (double b : cfg.betas) {
      if (!std::isfinite(b) || b < 0.0 || (!allow_zero && b == 0.0)) {
        fail("beta", allow_zero ? "values must be >= 0" : "values must be > 0");
      }
    }
  };
  const auto need_coding_pair = [&] {
    need(cfg.coding.has_value(), "coding");
    need(cfg.distortion.has_value(), "distortion");
    if (cfg.coding->size() != cfg.distortion->cols()) {
      fail("coding", "size does not match the distortion matrix columns");
    }
  };
  const auto need_source_pair = [&] {
    need(cfg.source.has_value(), "source");
    need(cfg.distortion.has_value(), "distortion");
    if (cfg.source->size() != cfg.distortion->rows()) {
      fail("source", "size does not match the distortion matrix rows");
    }
  };
  if (cfg.d < 1) fail("d", "branching ratio must be >= 1");
  if (cfg.trials < 1) fail("trials", "must be >= 1");
  if (!(cfg.tolerance > 0.0)) fail("tolerance", "must be > 0");

  switch (*cfg.kind) {
    case ExperimentKind::kDprmConverge:
      need(cfg.energy.has_value(), "energy");
      need_depth(false);
      need_betas(false);
      break;
    case ExperimentKind::kPhaseScan:
      need(cfg.energy.has_value(), "energy");
      need_betas(false);
      if (cfg.betas.size() < 3) fail("beta", "phase scan needs a grid of at least 3 points");
      for (std::size_t k = 1; k < cfg.betas.size(); ++k) {
        if (!(cfg.betas[k] > cfg.betas[k - 1])) fail("beta", "grid must be strictly increasing");
      }
      break;
    case ExperimentKind::kEncode:
      need_coding_pair();
      need_depth(true);
      if (cfg.d < 2) fail("d", "encoding needs d >= 2");
      if (!cfg.sequence) {
        need_source_pair();
      } else {
        if (cfg.sequence->size() != static_cast<std::size_t>(cfg.depths.front())) {
          fail("sequence", "length must equal n");
        }
        for (std::size_t x : *cfg.sequence) {
          if (x >= cfg.distortion->rows()) fail("sequence", "letter outside the source alphabet");
        }
      }
      break;
    case ExperimentKind::kDecode:
      need(cfg.coding.has_value(), "coding");
      need(cfg.input.has_value(), "input");
      break;
    case ExperimentKind::kRdCurve:
      need_source_pair();
      need_betas(true);
      break;
    case ExperimentKind::kVerifyTheorem:
      need_source_pair();
      if (cfg.d < 2) fail("d", "verify-theorem needs d >= 2");
      for (int n : cfg.depths) {
        if (n < 1) fail("n", "depths must be >= 1");
      }
      break;
    case ExperimentKind::kEnsemble:
      need_source_pair();
      need_coding_pair();
      need_depth(false);
      if (cfg.d < 2) fail("d", "ensemble needs d >= 2");
      break;
  }
}

std::string to_json(const ExperimentConfig& cfg) {
  json j = json::object();
  if (cfg.kind) j["experiment"] = std::string(to_string(*cfg.kind));
  if (cfg.master_seed) j["seed"] = *cfg.master_seed;
  if (cfg.source) j["source"] = pmf_json(cfg.source->probs());
  if (cfg.coding) j["coding"] = pmf_json(cfg.coding->probs());
  if (cfg.distortion) {
    json rows = json::array();
    for (std::size_t x = 0; x < cfg.distortion->rows(); ++x) {
      const auto r = cfg.distortion->row(x);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["distortion"] = rows;
  }
  if (cfg.energy) {
    if (cfg.energy->is_gaussian()) {
      j["energy"] = {{"gaussian", {{"mean", cfg.energy->as_gaussian().mean},
                                   {"std", cfg.energy->as_gaussian().stddev}}}};
    } else {
      j["energy"] = {{"discrete", {{"values", cfg.energy->as_discrete().values},
                                   {"probs", cfg.energy->as_discrete().probs}}}};
    }
  }
  j["d"] = cfg.d;
  if (!cfg.depths.empty()) j["n"] = cfg.depths;
  if (!cfg.betas.empty()) j["beta"] = cfg.betas;
  j["trials"] = cfg.trials;
  j["beam_width"] = cfg.beam_width;
  j["fixed_sequence"] = cfg.fixed_sequence;
  if (cfg.sequence) j["sequence"] = *cfg.sequence;
  if (cfg.input) j["input"] = cfg.input->string();
  j["tolerance"] = cfg.tolerance;
  j["converse_slack"] = cfg.converse_slack;
  j["final_gap"] = cfg.final_gap;
  return j.dump(2);
}

}  // namespace cayley::harness
