// SPDX-License-Identifier: Apache-2.0
//
// Semantics-preserving loop rewrites and their syntactic preconditions.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopmorph/construct.hpp"

namespace loopmorph {

struct UnrollSplit {
  std::uint64_t m = 0;         // main-loop iterations
  std::uint64_t boundary = 0;  // n - m
  friend bool operator==(const UnrollSplit&, const UnrollSplit&) = default;
};

struct UnrollPlan {
  std::string loop_id;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::optional<UnrollSplit> split;
  friend bool operator==(const UnrollPlan&, const UnrollPlan&) = default;

  /// "k4" or "k3_split6".
  std::string variant() const;
};

nlohmann::json to_json(const UnrollPlan& p);
UnrollPlan unroll_plan_from_json(const nlohmann::json& j);

inline constexpr std::uint64_t kDefaultKMax = 16;

bool is_prime(std::uint64_t n);
/// Largest composite strictly below n; nullopt when none exists.
std::optional<std::uint64_t> largest_composite_below(std::uint64_t n);

/// Plans ascending in k; loop_id left empty.
std::vector<UnrollPlan> plan_unroll(std::uint64_t n, std::uint64_t k_max = kDefaultKMax);

/// Throws PlanMismatch, NonCanonicalLoop.
Program apply_unroll(const Program& p, const UnrollPlan& plan, const Limits& lim = {});

struct Violation {
  std::string rule;
  std::string path;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct PreconditionReport {
  TransformKind kind = TransformKind::licm;
  bool satisfied = true;
  std::vector<Violation> violations;
};

nlohmann::json to_json(const PreconditionReport& r);

/// Purely syntactic. Throws RecipeMismatch when the recipe does not match p.
PreconditionReport check_preconditions(const Program& p, const ConstructRecipe& recipe);

/// Each throws PreconditionViolated (or RecipeMismatch / NotAdjacent).
Program apply_licm(const Program& p, const ConstructRecipe& recipe);
Program apply_unswitch(const Program& p, const ConstructRecipe& recipe);
Program apply_fusion(const Program& p, const ConstructRecipe& recipe);

struct TransformVariant {
  std::string name;  // "k4", "k3_split6" for unroll; "0" otherwise
  Program program;
  nlohmann::json plan;
};

/// Every transformed program the recipe yields: one per unroll plan, one
/// otherwise.
std::vector<TransformVariant> transform_all(const Program& original, const ConstructRecipe& recipe,
                                            const Limits& lim = {},
                                            std::uint64_t k_max = kDefaultKMax);

}  // namespace loopmorph
