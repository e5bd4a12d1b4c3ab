// SPDX-License-Identifier: Apache-2.0

#include <set>

#include "loopmorph/errors.hpp"
#include "loopmorph/gen.hpp"
#include "loopmorph/semantics.hpp"

namespace loopmorph {

void GenConfig::check() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("gen config: " + what);
  };
  need(max_functions >= 1, "max_functions must be >= 1");
  need(max_stmts_per_block >= 1, "max_stmts_per_block must be >= 1");
  need(max_loop_depth >= 1, "max_loop_depth must be >= 1");
  need(max_expr_depth >= 1, "max_expr_depth must be >= 1");
  need(max_globals >= 1, "max_globals must be >= 1");
  need(loop_trip_range.lo >= 0 && loop_trip_range.lo <= loop_trip_range.hi,
       "loop_trip_range must be a nonempty interval of nonnegative counts");
  need(loop_trip_range.hi <= 100000, "loop_trip_range upper bound must be <= 100000");
  need(array_len_range.lo >= 1 && array_len_range.lo <= array_len_range.hi,
       "array_len_range must be a nonempty interval of positive lengths");
  need(array_len_range.hi <= 4096, "array_len_range upper bound must be <= 4096");
  need(multi_loop_fraction >= 0 && multi_loop_fraction <= 1,
       "multi_loop_fraction must lie in [0, 1]");
  double sum = 0;
  for (const auto& [k, w] : type_weights) {
    need(w >= 0, "type weights must be nonnegative");
    sum += w;
  }
  need(sum > 0, "type weights must have a positive sum");
}

nlohmann::json to_json(const GenConfig& cfg) {
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [k, w] : cfg.type_weights) weights[std::string(kind_name(k))] = w;
  return {
      {"max_functions", cfg.max_functions},
      {"max_stmts_per_block", cfg.max_stmts_per_block},
      {"max_loop_depth", cfg.max_loop_depth},
      {"max_expr_depth", cfg.max_expr_depth},
      {"max_globals", cfg.max_globals},
      {"loop_trip_range", {cfg.loop_trip_range.lo, cfg.loop_trip_range.hi}},
      {"array_len_range", {cfg.array_len_range.lo, cfg.array_len_range.hi}},
      {"type_weights", weights},
      {"multi_loop_fraction", cfg.multi_loop_fraction},
      {"seed", cfg.seed},
  };
}

namespace {

IntRange range_from(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw ConfigError(std::string("gen config: ") + key + " must be [lo, hi]");
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

}  // namespace

GenConfig gen_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("gen config must be a JSON object");
  static const std::set<std::string> known = {
      "max_functions", "max_stmts_per_block", "max_loop_depth", "max_expr_depth",
      "max_globals",   "loop_trip_range",     "array_len_range", "type_weights",
      "multi_loop_fraction", "seed"};
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw ConfigError("gen config: unknown key '" + k + "'");
  GenConfig cfg;
  try {
    if (j.contains("max_functions")) cfg.max_functions = j["max_functions"].get<int>();
    if (j.contains("max_stmts_per_block"))
      cfg.max_stmts_per_block = j["max_stmts_per_block"].get<int>();
    if (j.contains("max_loop_depth")) cfg.max_loop_depth = j["max_loop_depth"].get<int>();
    if (j.contains("max_expr_depth")) cfg.max_expr_depth = j["max_expr_depth"].get<int>();
    if (j.contains("max_globals")) cfg.max_globals = j["max_globals"].get<int>();
    if (j.contains("loop_trip_range"))
      cfg.loop_trip_range = range_from(j["loop_trip_range"], "loop_trip_range");
    if (j.contains("array_len_range"))
      cfg.array_len_range = range_from(j["array_len_range"], "array_len_range");
    if (j.contains("multi_loop_fraction"))
      cfg.multi_loop_fraction = j["multi_loop_fraction"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("type_weights")) {
      cfg.type_weights.clear();
      for (const auto& [k, v] : j["type_weights"].items()) {
        auto kind = kind_from_name(k);
        if (!kind) throw ConfigError("gen config: unknown type '" + k + "'");
        cfg.type_weights[*kind] = v.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("gen config: ") + e.what());
  }
  cfg.check();
  return cfg;
}

std::string emit_safe_ops_prelude() { return safe_ops_prelude(); }

}  // namespace loopmorph
