#include "rrsel/config.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "rrsel/error.hpp"

namespace rrsel {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, field + ": " + why);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      invalid(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

const json& require_object(const json& parent, const std::string& key) {
  if (!parent.contains(key)) invalid(key, "missing");
  const json& v = parent.at(key);
  if (!v.is_object()) invalid(key, "must be an object");
  return v;
}

std::size_t get_count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    invalid(field, "must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "must be a number");
  return v.get<double>();
}

bool get_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) invalid(field, "must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) invalid(field, "must be a string");
  return v.get<std::string>();
}

Seed get_seed(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
  invalid(field, "must be an unsigned 64-bit integer");
}

template <typename F>
auto wrap(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    invalid(field, e.what());
  }
}

AlgorithmSpec parse_algorithm_entry(const json& entry, const std::string& field) {
  if (entry.is_string()) {
    return wrap(field, [&] { return parse_algorithm(entry.get<std::string>()); });
  }
  if (!entry.is_object()) invalid(field, "must be a string or an object");
  reject_unknown(entry, field, {"name", "rule", "alpha", "eta", "q", "pfd", "k"});
  if (!entry.contains("name")) invalid(field + ".name", "missing");
  const GreedyRule rule =
      entry.contains("rule")
          ? wrap(field + ".rule",
                 [&] { return parse_greedy_rule(get_string(entry["rule"], field + ".rule")); })
          : GreedyRule::omp;
  AlgorithmSpec spec = wrap(field + ".name", [&] {
    return parse_algorithm(get_string(entry["name"], field + ".name"), rule);
  });
  auto set_if = [&](const char* key, auto setter) {
    if (entry.contains(key)) setter(get_number(entry[key], field + "." + key));
  };
  set_if("alpha", [&](double v) { spec.alpha = v; });
  set_if("eta", [&](double v) { spec.eta = v; });
  set_if("q", [&](double v) { spec.rrta.q = v; });
  set_if("pfd", [&](double v) { spec.rrta.pfd_finite = v; });
  if (entry.contains("k")) spec.fixed_k = get_count(entry["k"], field + ".k");
  wrap(field, [&] {
    spec.validate();
    return 0;
  });
  return spec;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_of_offset(json_text, e.byte)) + ": " + e.what());
  }
  if (!root.is_object()) invalid("<root>", "must be a JSON object");
  reject_unknown(root, "",
                 {"experiment_id", "design", "signal", "snr_db", "trials", "algorithms",
                  "root_seed", "k_max", "regenerate_matrix_per_trial"});

  ExperimentConfig cfg;
  if (root.contains("experiment_id")) {
    cfg.experiment_id = get_string(root["experiment_id"], "experiment_id");
  }

  const json& design = require_object(root, "design");
  reject_unknown(design, "design", {"kind", "n", "p", "seed", "normalize", "path"});
  if (!design.contains("kind")) invalid("design.kind", "missing");
  cfg.design.kind = wrap("design.kind", [&] {
    return parse_design_kind(get_string(design["kind"], "design.kind"));
  });
  if (!design.contains("n")) invalid("design.n", "missing");
  cfg.design.n = get_count(design["n"], "design.n");
  if (design.contains("p")) {
    cfg.design.p = get_count(design["p"], "design.p");
  } else if (cfg.design.kind == DesignKind::identity_hadamard) {
    cfg.design.p = 2 * cfg.design.n;
  } else {
    invalid("design.p", "missing");
  }
  if (design.contains("seed")) cfg.design.seed = get_seed(design["seed"], "design.seed");
  if (design.contains("normalize")) {
    cfg.design.normalize = get_bool(design["normalize"], "design.normalize");
  }
  if (design.contains("path")) cfg.design.path = get_string(design["path"], "design.path");

  const json& signal = require_object(root, "signal");
  reject_unknown(signal, "signal", {"k0", "kind", "ratio"});
  if (!signal.contains("k0")) invalid("signal.k0", "missing");
  cfg.signal.k0 = get_count(signal["k0"], "signal.k0");
  if (signal.contains("kind")) {
    cfg.signal.kind = wrap("signal.kind", [&] {
      return parse_signal_kind(get_string(signal["kind"], "signal.kind"));
    });
  }
  if (signal.contains("ratio")) cfg.signal.ratio = get_number(signal["ratio"], "signal.ratio");

  if (!root.contains("snr_db")) invalid("snr_db", "missing");
  const json& snr = root["snr_db"];
  if (!snr.is_array()) invalid("snr_db", "must be an array of numbers");
  for (std::size_t i = 0; i < snr.size(); ++i) {
    cfg.snr_db.push_back(get_number(snr[i], "snr_db[" + std::to_string(i) + "]"));
  }

  if (!root.contains("trials")) invalid("trials", "missing");
  cfg.trials = get_count(root["trials"], "trials");

  if (!root.contains("algorithms")) invalid("algorithms", "missing");
  const json& algos = root["algorithms"];
  if (!algos.is_array()) invalid("algorithms", "must be an array");
  for (std::size_t i = 0; i < algos.size(); ++i) {
    cfg.algorithms.push_back(
        parse_algorithm_entry(algos[i], "algorithms[" + std::to_string(i) + "]"));
  }

  if (root.contains("root_seed")) cfg.root_seed = get_seed(root["root_seed"], "root_seed");
  if (root.contains("k_max")) cfg.k_max_override = get_count(root["k_max"], "k_max");
  cfg.regenerate_matrix_per_trial =
      root.contains("regenerate_matrix_per_trial")
          ? get_bool(root["regenerate_matrix_per_trial"], "regenerate_matrix_per_trial")
          : cfg.design.kind == DesignKind::gaussian;

  cfg.validate();
  return cfg;
}

}  // namespace rrsel
