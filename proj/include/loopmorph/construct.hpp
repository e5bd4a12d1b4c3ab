// SPDX-License-Identifier: Apache-2.0
//
// Rewrites admitted seeds into originals eligible for one loop optimization,
// recording what was inserted so the matching transform can be replayed.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "loopmorph/ast.hpp"
#include "loopmorph/interp.hpp"

namespace loopmorph {

enum class TransformKind : std::uint8_t { licm, unswitch, fusion, unroll };
inline constexpr TransformKind kAllTransforms[] = {TransformKind::licm, TransformKind::unswitch,
                                                   TransformKind::fusion, TransformKind::unroll};
std::string_view transform_name(TransformKind k);
std::optional<TransformKind> transform_from_name(std::string_view name);

struct LoopCandidate {
  std::string loop_id;
  /// Iterations per entry of the loop.
  std::uint64_t trip_count = 0;
  std::set<std::string> invariant_vars;
  StmtPath body_path;
};

struct ConstructConfig {
  int expr_depth = 3;
  std::uint64_t max_fusion_trip = 4096;
  Limits limits;
};

/// Recipe kinds use "unroll_passthrough" for TransformKind::unroll.
struct ConstructRecipe {
  TransformKind kind = TransformKind::licm;
  std::vector<std::string> loop_ids;
  std::vector<std::string> inserted_paths;
  /// E for licm, C for unswitch.
  std::optional<Expr> invariant_expr;
  std::optional<std::pair<std::string, std::string>> arrays;
  std::uint64_t rng_seed = 0;
  friend bool operator==(const ConstructRecipe&, const ConstructRecipe&) = default;
};

nlohmann::json to_json(const ConstructRecipe& r);
/// Throws RecipeMismatch on malformed input.
ConstructRecipe recipe_from_json(const nlohmann::json& j);

/// Every canonical loop entered with the same nonzero trip count each time.
std::vector<LoopCandidate> find_candidate_loops(const Program& p, const LoopProfile& prof);

/// i_norm for loop `f` with index expression `index`: the 0-based iteration
/// number, as an i64 expression built from safe ops.
Expr normalized_index(const ForLoop& f, Expr index);

std::pair<Program, ConstructRecipe> construct_licm_original(const Program& p,
                                                            const LoopCandidate& c,
                                                            std::uint64_t seed,
                                                            const ConstructConfig& cfg = {});
std::pair<Program, ConstructRecipe> construct_unswitch_original(const Program& p,
                                                                const LoopCandidate& c,
                                                                std::uint64_t seed,
                                                                const ConstructConfig& cfg = {});
std::pair<Program, ConstructRecipe> construct_fusion_original(const Program& p,
                                                              const LoopCandidate& c,
                                                              const LoopProfile& prof,
                                                              std::uint64_t seed,
                                                              const ConstructConfig& cfg = {});
/// The seed itself serves as the original; recipe names the target loop.
std::pair<Program, ConstructRecipe> construct_unroll_passthrough(const Program& p,
                                                                 const LoopCandidate& c,
                                                                 std::uint64_t seed);

/// Picks a candidate with the seeded RNG and dispatches on `kind`. Throws
/// InsertionFailed when no candidate fits.
std::pair<Program, ConstructRecipe> construct_original(const Program& p, TransformKind kind,
                                                       std::uint64_t seed,
                                                       const ConstructConfig& cfg = {});

}  // namespace loopmorph
