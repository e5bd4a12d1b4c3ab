// SPDX-License-Identifier: Apache-2.0
//
// Building, running and comparing one pair, plus the interpreter-side
// soundness gate.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loopmorph/harness/compare.hpp"
#include "loopmorph/harness/finding.hpp"
#include "loopmorph/interp.hpp"
#include "loopmorph/transform.hpp"

namespace loopmorph {

/// Compiles and runs one side.
SideOutcome build_and_run(const std::string& src, const CompilerSpec& cc, const OptConfig& opt,
                          const std::filesystem::path& workdir, const std::string& stem);

/// Both sides under the same compiler and flags, then compare.
Verdict evaluate_pair(const std::string& original_src, const std::string& transformed_src,
                      const CompilerSpec& cc, const OptConfig& opt,
                      const std::filesystem::path& workdir);

struct SoundnessCheck {
  bool sound = false;
  std::uint64_t original_checksum = 0;
  std::uint64_t transformed_checksum = 0;
  std::string detail;
};

/// Both programs execute ok under the interpreter with equal checksums.
SoundnessCheck soundness_gate(const Program& original, const Program& transformed,
                              const Limits& lim = {});

/// Re-runs a bundle. Returns the fresh verdict.
Verdict replay_finding(const Finding& f, const std::filesystem::path& workdir);

/// Replays and throws NotReproducible unless the verdict kind matches.
Verdict repro_finding(const Finding& f, const std::filesystem::path& workdir);

}  // namespace loopmorph
