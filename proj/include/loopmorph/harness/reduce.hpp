// SPDX-License-Identifier: Apache-2.0
//
// Greedy minimization of finding bundles.

#pragma once

#include <filesystem>

#include "loopmorph/harness/finding.hpp"

namespace loopmorph {

struct ReduceStats {
  std::size_t attempts = 0;
  std::size_t accepted = 0;
};

/// Tries statement deletions and simplifications of the constructed
/// expression on the original, re-running transform and comparison after
/// each; keeps changes that preserve the verdict kind. Budget 0 returns `f`
/// unchanged. Throws NotReproducible if `f` does not reproduce.
Finding reduce_finding(const Finding& f, std::size_t budget, const std::filesystem::path& workdir,
                       ReduceStats* stats = nullptr);

}  // namespace loopmorph
