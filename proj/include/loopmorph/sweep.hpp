// SPDX-License-Identifier: Apache-2.0
//
// Interpreter equivalence sweep over generated seeds: every transformed
// program must reproduce its original's checksum. The OpenMP kernel and the
// serial reference produce identical results.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loopmorph/construct.hpp"
#include "loopmorph/gen.hpp"

namespace loopmorph {

enum class SweepStatus : std::uint8_t { equal, mismatch, skipped };

struct SweepItem {
  std::uint64_t seed = 0;
  TransformKind kind = TransformKind::licm;
  SweepStatus status = SweepStatus::skipped;
  std::size_t variants = 0;
  std::string detail;
  friend bool operator==(const SweepItem&, const SweepItem&) = default;
};

struct SweepTotals {
  std::size_t pairs = 0;       // originals with at least one checked variant
  std::size_t variants = 0;
  std::size_t mismatches = 0;
  std::size_t skipped = 0;
};

struct SweepResult {
  /// Ordered by seed index, then kind.
  std::vector<SweepItem> items;
  std::map<TransformKind, SweepTotals> totals() const;
};

SweepItem sweep_one(const GenConfig& base, std::uint64_t seed, TransformKind kind,
                    const ConstructConfig& cfg = {});

SweepResult equivalence_sweep_serial(const GenConfig& base, const std::vector<std::uint64_t>& seeds,
                                     const std::vector<TransformKind>& kinds,
                                     const ConstructConfig& cfg = {});

/// `threads` 0 uses the OpenMP default.
SweepResult equivalence_sweep(const GenConfig& base, const std::vector<std::uint64_t>& seeds,
                              const std::vector<TransformKind>& kinds,
                              const ConstructConfig& cfg = {}, int threads = 0);

}  // namespace loopmorph
