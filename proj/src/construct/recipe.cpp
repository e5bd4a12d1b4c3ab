// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/construct.hpp"
#include "loopmorph/emit.hpp"
#include "loopmorph/errors.hpp"
#include "loopmorph/parse.hpp"

namespace loopmorph {

nlohmann::json to_json(const ConstructRecipe& r) {
  nlohmann::json j;
  j["kind"] = r.kind == TransformKind::unroll ? std::string("unroll_passthrough")
                                              : std::string(transform_name(r.kind));
  j["loop_ids"] = r.loop_ids;
  j["inserted_paths"] = r.inserted_paths;
  j["invariant_expr"] = r.invariant_expr ? nlohmann::json(emit_expr(*r.invariant_expr)) : nlohmann::json();
  j["arrays"] = r.arrays ? nlohmann::json::array({r.arrays->first, r.arrays->second}) : nlohmann::json();
  j["rng_seed"] = r.rng_seed;
  return j;
}

ConstructRecipe recipe_from_json(const nlohmann::json& j) {
  ConstructRecipe r;
  try {
    auto kind = transform_from_name(j.at("kind").get<std::string>());
    if (!kind) throw RecipeMismatch("unknown recipe kind");
    r.kind = *kind;
    r.loop_ids = j.at("loop_ids").get<std::vector<std::string>>();
    r.inserted_paths = j.value("inserted_paths", std::vector<std::string>{});
    if (j.contains("invariant_expr") && !j["invariant_expr"].is_null())
      r.invariant_expr = parse_expr(j["invariant_expr"].get<std::string>());
    if (j.contains("arrays") && !j["arrays"].is_null()) {
      const auto& a = j["arrays"];
      if (!a.is_array() || a.size() != 2) throw RecipeMismatch("arrays must be a pair");
      r.arrays = std::make_pair(a[0].get<std::string>(), a[1].get<std::string>());
    }
    r.rng_seed = j.value("rng_seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw RecipeMismatch(std::string("malformed recipe: ") + e.what());
  } catch (const ParseError& e) {
    throw RecipeMismatch(std::string("malformed recipe expression: ") + e.what());
  }
  if (r.loop_ids.empty()) throw RecipeMismatch("recipe names no loop");
  if (r.kind == TransformKind::unroll && !r.inserted_paths.empty())
    throw RecipeMismatch("unroll passthrough recipe must not insert code");
  return r;
}

}  // namespace loopmorph
