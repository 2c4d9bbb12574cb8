#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eapms/core.hpp"

namespace eapms {

// ---------------------------------------------------------------------------
// Instance files.
//
// An instance is one JSON document:
//   {
//     "task_types":    [{"count": 2}, {"count": 1}],
//     "machine_types": [{"count": 1}, {"count": 1}],
//     "etc": [[1.0, 2.0], [3.0, 1.0]],   // or flat row-major [1,2,3,1]
//     "apc": [[2.0, 1.0], [1.0, 2.0]],
//     "price": 10.0,
//     "energy_cost": 1.0
//   }
// Matrices may be written as a list of rows or as one flat row-major list;
// files are always saved in row form. Unknown extra keys are ignored so
// fixtures can carry notes. Structural problems (missing keys, wrong JSON
// types, ragged rows, wrong lengths) raise Parse errors; value-domain
// problems raise Validation errors naming the field.
// ---------------------------------------------------------------------------

namespace detail {

inline const nlohmann::json& json_key(const nlohmann::json& doc, const char* key,
                                      const char* what) {
  auto it = doc.find(key);
  if (it == doc.end())
    fail(ErrorCode::Parse, std::string(what) + " is missing key \"" + key + "\"");
  return *it;
}

inline double json_number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) fail(ErrorCode::Parse, where + " must be a number");
  return v.get<double>();
}

inline long long json_integer(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    fail(ErrorCode::Parse, where + " must be an integer");
  return v.get<long long>();
}

inline std::vector<long long> parse_count_list(const nlohmann::json& doc,
                                               const char* key) {
  const nlohmann::json& v = json_key(doc, key, "instance");
  if (!v.is_array())
    fail(ErrorCode::Parse,
         std::string(key) + " must be an array of {\"count\": n} objects");
  std::vector<long long> out;
  out.reserve(v.size());
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    const std::string where = std::string(key) + "[" + std::to_string(idx) + "]";
    const nlohmann::json& e = v[idx];
    if (!e.is_object() || e.find("count") == e.end())
      fail(ErrorCode::Parse, where + " must be an object with a \"count\" field");
    out.push_back(json_integer(*e.find("count"), where + ".count"));
  }
  return out;
}

inline Matrix parse_matrix(const nlohmann::json& doc, const char* key, int rows,
                           int cols) {
  const nlohmann::json& v = json_key(doc, key, "instance");
  if (!v.is_array())
    fail(ErrorCode::Parse, std::string(key) + " must be an array");
  Matrix m(rows, cols);
  if (!v.empty() && v.front().is_array()) {
    if (static_cast<int>(v.size()) != rows)
      fail(ErrorCode::Parse, std::string(key) + " has " +
                                 std::to_string(v.size()) + " rows; expected " +
                                 std::to_string(rows));
    for (int r = 0; r < rows; ++r) {
      const nlohmann::json& row = v[static_cast<std::size_t>(r)];
      const std::string where = std::string(key) + "[" + std::to_string(r) + "]";
      if (!row.is_array())
        fail(ErrorCode::Parse, where + " must be an array (rows cannot mix with scalars)");
      if (static_cast<int>(row.size()) != cols)
        fail(ErrorCode::Parse, where + " has " + std::to_string(row.size()) +
                                   " entries; expected " + std::to_string(cols) +
                                   " (ragged matrix)");
      for (int c = 0; c < cols; ++c)
        m(r, c) = json_number(row[static_cast<std::size_t>(c)],
                              where + "[" + std::to_string(c) + "]");
    }
  } else {
    const long long want = static_cast<long long>(rows) * cols;
    if (static_cast<long long>(v.size()) != want)
      fail(ErrorCode::Parse, std::string(key) + " has " +
                                 std::to_string(v.size()) +
                                 " entries; expected " + std::to_string(want) +
                                 " (flat row-major)");
    for (long long idx = 0; idx < want; ++idx)
      m(static_cast<int>(idx / cols), static_cast<int>(idx % cols)) = json_number(
          v[static_cast<std::size_t>(idx)],
          std::string(key) + "[" + std::to_string(idx) + "]");
  }
  return m;
}

inline std::string read_text_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Parse, std::string("cannot open ") + what + ": " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text,
                            const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorCode::Validation,
         std::string("cannot open ") + what + " for writing: " + path);
  out << text;
  out.flush();
  if (!out)
    fail(ErrorCode::Validation, std::string("failed writing ") + what + ": " + path);
}

inline nlohmann::json parse_json_document(const std::string& text, const char* what) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded())
    fail(ErrorCode::Parse, std::string(what) + " is not valid JSON");
  if (!doc.is_object())
    fail(ErrorCode::Parse, std::string(what) + " must be a JSON object");
  return doc;
}

}  // namespace detail

// Parses an instance from JSON text; throws Parse on structure, Validation on
// values.
inline Instance parse_instance(const std::string& text) {
  nlohmann::json doc = detail::parse_json_document(text, "instance");
  Instance inst;
  inst.tasks_per_type = detail::parse_count_list(doc, "task_types");
  for (long long m : detail::parse_count_list(doc, "machine_types")) {
    if (m > std::numeric_limits<int>::max())
      fail(ErrorCode::Validation,
           "machine_types[" + std::to_string(inst.machines_per_type.size()) +
               "].count exceeds the supported machine count");
    inst.machines_per_type.push_back(static_cast<int>(m));
  }
  const int T = static_cast<int>(inst.tasks_per_type.size());
  const int M = static_cast<int>(inst.machines_per_type.size());
  inst.etc = detail::parse_matrix(doc, "etc", T, M);
  inst.apc = detail::parse_matrix(doc, "apc", T, M);
  inst.price = detail::json_number(detail::json_key(doc, "price", "instance"), "price");
  inst.energy_cost = detail::json_number(
      detail::json_key(doc, "energy_cost", "instance"), "energy_cost");
  inst.validate();
  return inst;
}

inline Instance load_instance(const std::string& path) {
  const std::string text = detail::read_text_file(path, "instance file");
  try {
    return parse_instance(text);
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

// Serializes an instance to the documented JSON form (rows, two-space indent).
// Doubles are written round-trip exactly, so save → load is value-identical.
inline std::string instance_to_json(const Instance& inst) {
  nlohmann::ordered_json doc;
  doc["task_types"] = nlohmann::ordered_json::array();
  for (long long t : inst.tasks_per_type)
    doc["task_types"].push_back(nlohmann::ordered_json{{"count", t}});
  doc["machine_types"] = nlohmann::ordered_json::array();
  for (long long m : inst.machines_per_type)
    doc["machine_types"].push_back(nlohmann::ordered_json{{"count", m}});
  auto matrix_rows = [](const Matrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  doc["etc"] = matrix_rows(inst.etc);
  doc["apc"] = matrix_rows(inst.apc);
  doc["price"] = inst.price;
  doc["energy_cost"] = inst.energy_cost;
  return doc.dump(2) + "\n";
}

inline void save_instance(const Instance& inst, const std::string& path) {
  detail::write_text_file(path, instance_to_json(inst), "instance file");
}

// ---------------------------------------------------------------------------
// Deterministic random streams.
//
// All randomness flows through std::mt19937_64, whose output sequence is
// pinned by the C++ standard, seeded via a splitmix64-style mix of
// (master seed, stream index). Uniform draws map the top 53 bits to (0, 1],
// so generated instances are bit-identical across platforms.
// ---------------------------------------------------------------------------

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ (stream + 0x9E3779B97F4A7C15ULL));
}

// Uniform double in (0, 1]: top 53 bits of the engine output, plus one ulp.
inline double unit_interval(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Experiment specs.
// ---------------------------------------------------------------------------

struct ExperimentSpec {
  std::vector<double> gammas{1.2};  // price multipliers, p = gamma * e_min
  int replications = 1;             // experiment indices q = 1..replications
  std::uint64_t seed = 1;
  int task_type_count = 30;
  int machine_type_count = 9;
  int machines_per_type = 40;
  long long tasks_per_q = 150;  // total tasks = tasks_per_q * q
  double epsilon = 0.1;
  bool include_oracle = false;
  long long oracle_budget = 10'000'000;
  std::string instance_path;  // optional: fixed instance file instead of gen_random
};

inline void validate_experiment_spec(const ExperimentSpec& spec) {
  require(!spec.gammas.empty(), ErrorCode::Validation,
          "experiment spec needs at least one gamma");
  for (std::size_t i = 0; i < spec.gammas.size(); ++i)
    require(std::isfinite(spec.gammas[i]) && spec.gammas[i] > 0.0,
            ErrorCode::Validation,
            "gamma[" + std::to_string(i) + "] must be finite and > 0");
  require(spec.replications >= 1, ErrorCode::Validation,
          "replications must be >= 1");
  require(spec.task_type_count >= 1, ErrorCode::Validation,
          "task_type_count must be >= 1");
  require(spec.machine_type_count >= 1, ErrorCode::Validation,
          "machine_type_count must be >= 1");
  require(spec.machines_per_type >= 1, ErrorCode::Validation,
          "machines_per_type must be >= 1");
  require(spec.tasks_per_q >= 1, ErrorCode::Validation, "tasks_per_q must be >= 1");
  require(std::isfinite(spec.epsilon) && spec.epsilon > 0.0, ErrorCode::Validation,
          "epsilon must be finite and > 0");
  require(spec.oracle_budget >= 1, ErrorCode::Validation,
          "oracle_budget must be >= 1");
}

// Parses an experiment spec from JSON text. "gamma" accepts a number or an
// array of numbers; unknown keys are rejected so config typos fail loudly.
inline ExperimentSpec parse_experiment_spec(const std::string& text) {
  nlohmann::json doc = detail::parse_json_document(text, "experiment spec");
  static const char* known[] = {"gamma",           "replications",
                                "seed",            "task_type_count",
                                "machine_type_count", "machines_per_type",
                                "tasks_per_q",     "epsilon",
                                "include_oracle",  "oracle_budget",
                                "instance"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok)
      fail(ErrorCode::Parse, "unknown key \"" + it.key() + "\" in experiment spec");
  }

  ExperimentSpec spec;
  if (auto it = doc.find("gamma"); it != doc.end()) {
    spec.gammas.clear();
    if (it->is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i)
        spec.gammas.push_back(detail::json_number(
            (*it)[i], "gamma[" + std::to_string(i) + "]"));
    } else {
      spec.gammas.push_back(detail::json_number(*it, "gamma"));
    }
  }
  if (auto it = doc.find("replications"); it != doc.end())
    spec.replications =
        static_cast<int>(detail::json_integer(*it, "replications"));
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_integer() && !it->is_number_unsigned())
      fail(ErrorCode::Parse, "seed must be an integer");
    spec.seed = it->is_number_unsigned()
                    ? it->get<std::uint64_t>()
                    : static_cast<std::uint64_t>(it->get<long long>());
  }
  if (auto it = doc.find("task_type_count"); it != doc.end())
    spec.task_type_count =
        static_cast<int>(detail::json_integer(*it, "task_type_count"));
  if (auto it = doc.find("machine_type_count"); it != doc.end())
    spec.machine_type_count =
        static_cast<int>(detail::json_integer(*it, "machine_type_count"));
  if (auto it = doc.find("machines_per_type"); it != doc.end())
    spec.machines_per_type =
        static_cast<int>(detail::json_integer(*it, "machines_per_type"));
  if (auto it = doc.find("tasks_per_q"); it != doc.end())
    spec.tasks_per_q = detail::json_integer(*it, "tasks_per_q");
  if (auto it = doc.find("epsilon"); it != doc.end())
    spec.epsilon = detail::json_number(*it, "epsilon");
  if (auto it = doc.find("include_oracle"); it != doc.end()) {
    if (!it->is_boolean()) fail(ErrorCode::Parse, "include_oracle must be a boolean");
    spec.include_oracle = it->get<bool>();
  }
  if (auto it = doc.find("oracle_budget"); it != doc.end())
    spec.oracle_budget = detail::json_integer(*it, "oracle_budget");
  if (auto it = doc.find("instance"); it != doc.end()) {
    if (!it->is_string()) fail(ErrorCode::Parse, "instance must be a file path string");
    spec.instance_path = it->get<std::string>();
  }
  validate_experiment_spec(spec);
  return spec;
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
  const std::string text = detail::read_text_file(path, "experiment spec");
  try {
    return parse_experiment_spec(text);
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Random instance generation.
// ---------------------------------------------------------------------------

// Rescales the price to gamma times the minimum achievable energy, i.e.
// break-even at gamma = 1 when energy_cost = 1.
inline Instance reprice(Instance inst, double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0, ErrorCode::Validation,
          "gamma must be finite and > 0");
  inst.price = gamma * min_total_energy(inst);
  return inst;
}

// Deterministic random instance for (spec.seed, q): execution times and power
// draws uniform in (0, 1] (all ETC entries row-major, then all APC entries),
// tasks_per_q * q tasks split as evenly as possible with the remainder on the
// lowest type indices, energy cost 1, price = first gamma * e_min.
inline Instance gen_random(const ExperimentSpec& spec, int q) {
  validate_experiment_spec(spec);
  require(q >= 1, ErrorCode::Contract, "experiment index q must be >= 1");
  std::mt19937_64 rng(stream_seed(spec.seed, static_cast<std::uint64_t>(q)));

  const int T = spec.task_type_count;
  const int M = spec.machine_type_count;
  Instance inst;
  inst.etc = Matrix(T, M);
  inst.apc = Matrix(T, M);
  for (int i = 0; i < T; ++i)
    for (int j = 0; j < M; ++j) inst.etc(i, j) = unit_interval(rng);
  for (int i = 0; i < T; ++i)
    for (int j = 0; j < M; ++j) inst.apc(i, j) = unit_interval(rng);

  const long long total = spec.tasks_per_q * q;
  inst.tasks_per_type.assign(static_cast<std::size_t>(T), total / T);
  for (int i = 0; i < static_cast<int>(total % T); ++i) ++inst.tasks_per_type[i];
  inst.machines_per_type.assign(static_cast<std::size_t>(M),
                                spec.machines_per_type);
  inst.energy_cost = 1.0;
  inst.price = spec.gammas.front() * min_total_energy(inst);
  inst.validate();
  return inst;
}

}  // namespace eapms
