// SPDX-License-Identifier: Apache-2.0
//
// Resumable fuzzing campaigns over generated seeds.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopmorph/construct.hpp"
#include "loopmorph/gen.hpp"
#include "loopmorph/harness/finding.hpp"
#include "loopmorph/interp.hpp"

namespace loopmorph {

struct CampaignConfig {
  std::vector<CompilerSpec> compilers;
  std::vector<TransformKind> transforms = {TransformKind::licm, TransformKind::unswitch,
                                           TransformKind::fusion, TransformKind::unroll};
  std::uint64_t iterations = 100;
  std::uint64_t seed = 0;
  /// Explicit per-iteration seeds; when empty, seeds derive from `seed`.
  std::vector<std::uint64_t> seeds;
  Limits limits;
  GenConfig gen;
  ConstructConfig construct;
  /// Fixed levels to run every pair at; when empty, `opt_samples` configs
  /// are sampled per pair and compiler.
  std::vector<OptLevel> levels;
  int opt_samples = 1;
  std::uint64_t k_max = 16;
  /// Unroll plans tried per original, in ascending k; 0 means all.
  std::size_t max_unroll_variants = 0;
  /// Compile every admitted seed at -O0 with each compiler during filtering.
  bool filter_compile = true;
  int threads = 0;  // 0: OpenMP default
};

nlohmann::json to_json(const CampaignConfig& c);
/// Throws ConfigError.
CampaignConfig campaign_config_from_json(const nlohmann::json& j);

std::uint64_t iteration_seed(const CampaignConfig& c, std::uint64_t i);

struct CampaignReport {
  std::uint64_t iterations_run = 0;
  std::uint64_t iterations_skipped = 0;
  std::uint64_t seeds_admitted = 0;
  std::uint64_t pairs = 0;
  std::uint64_t findings = 0;
  std::uint64_t harness_errors = 0;
  /// "transform/compiler/level/verdict" -> count
  std::map<std::string, std::uint64_t> counts;
  /// signature -> finding ids
  std::map<std::string, std::vector<std::string>> signatures;
};

nlohmann::json to_json(const CampaignReport& r);

/// Writes journal.jsonl, findings/ and report.json below `out`. Throws
/// ToolNotFound before any work when a compiler cannot be resolved.
CampaignReport run_campaign(const CampaignConfig& cfg, const std::filesystem::path& out,
                            bool resume = false);

/// Journal line for one iteration; deterministic in (cfg, i).
nlohmann::json run_iteration(const CampaignConfig& cfg, std::uint64_t i,
                             const std::filesystem::path& workdir,
                             std::vector<Finding>* findings);

}  // namespace loopmorph
