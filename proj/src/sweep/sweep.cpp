// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/sweep.hpp"

#include <omp.h>

#include "loopmorph/errors.hpp"
#include "loopmorph/rng.hpp"
#include "loopmorph/transform.hpp"

namespace loopmorph {

std::map<TransformKind, SweepTotals> SweepResult::totals() const {
  std::map<TransformKind, SweepTotals> out;
  for (const auto& it : items) {
    auto& t = out[it.kind];
    t.variants += it.variants;
    switch (it.status) {
      case SweepStatus::equal: ++t.pairs; break;
      case SweepStatus::mismatch: ++t.pairs; ++t.mismatches; break;
      case SweepStatus::skipped: ++t.skipped; break;
    }
  }
  return out;
}

SweepItem sweep_one(const GenConfig& base, std::uint64_t seed, TransformKind kind,
                    const ConstructConfig& cfg) {
  SweepItem item{seed, kind, SweepStatus::skipped, 0, {}};
  try {
    GenConfig g = base;
    g.seed = seed;
    Program p = generate_seed(g);
    auto [original, recipe] =
        construct_original(p, kind, derive_seed(seed, 0x100 + static_cast<std::uint64_t>(kind)), cfg);
    ExecOutcome o = execute(original, cfg.limits);
    auto variants = transform_all(original, recipe, cfg.limits);
    if (variants.empty()) {
      item.detail = "no variants";
      return item;
    }
    item.status = SweepStatus::equal;
    for (const auto& v : variants) {
      ++item.variants;
      ExecOutcome t = execute(v.program, cfg.limits);
      if (o.status != ExecStatus::ok || t.status != ExecStatus::ok || o.checksum != t.checksum) {
        item.status = SweepStatus::mismatch;
        item.detail += v.name + ": " + describe(o) + " vs " + describe(t) + "; ";
      }
    }
  } catch (const Error& e) {
    item.status = SweepStatus::skipped;
    item.detail = e.what();
  }
  return item;
}

SweepResult equivalence_sweep_serial(const GenConfig& base, const std::vector<std::uint64_t>& seeds,
                                     const std::vector<TransformKind>& kinds,
                                     const ConstructConfig& cfg) {
  SweepResult r;
  for (auto seed : seeds)
    for (auto kind : kinds) r.items.push_back(sweep_one(base, seed, kind, cfg));
  return r;
}

SweepResult equivalence_sweep(const GenConfig& base, const std::vector<std::uint64_t>& seeds,
                              const std::vector<TransformKind>& kinds,
                              const ConstructConfig& cfg, int threads) {
  SweepResult r;
  const auto n = static_cast<std::int64_t>(seeds.size() * kinds.size());
  r.items.resize(static_cast<std::size_t>(n));
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
  for (std::int64_t t = 0; t < n; ++t) {
    auto idx = static_cast<std::size_t>(t);
    r.items[idx] = sweep_one(base, seeds[idx / kinds.size()], kinds[idx % kinds.size()], cfg);
  }
  return r;
}

}  // namespace loopmorph
