// SPDX-License-Identifier: Apache-2.0
//
// Self-contained bug bundles: findings/<signature>/<id>/.

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "loopmorph/construct.hpp"
#include "loopmorph/harness/compare.hpp"

namespace loopmorph {

struct Finding {
  std::string id;
  TransformKind kind = TransformKind::licm;
  std::string variant;
  CompilerSpec compiler;
  OptConfig opt;
  std::string original_src;
  std::string transformed_src;
  ConstructRecipe recipe;
  nlohmann::json plan;
  Verdict verdict;
  std::string signature;
  std::string created_at;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
  std::uint64_t original_checksum = 0;
  std::uint64_t transformed_checksum = 0;
};

/// Hex digest of (compiler id, opt level, transform kind, verdict kind,
/// diff class).
std::string finding_signature(const std::string& compiler_id, OptLevel level, TransformKind kind,
                              VerdictKind verdict, const std::string& diff_class);
std::string finding_signature(const Finding& f);

/// Shell-style compile and run lines for both sides.
std::string commands_text(const Finding& f);

/// Writes the bundle below `findings_root` and returns its directory.
std::filesystem::path persist_finding(const Finding& f, const std::filesystem::path& findings_root);
/// Writes the bundle files directly into `dir`.
void write_finding(const Finding& f, const std::filesystem::path& dir);
/// Throws NotReproducible when files are missing or malformed.
Finding load_finding(const std::filesystem::path& dir);

std::string utc_timestamp();

}  // namespace loopmorph
