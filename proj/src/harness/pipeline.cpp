// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/harness/pipeline.hpp"

#include "loopmorph/errors.hpp"

namespace loopmorph {

namespace fs = std::filesystem;

SideOutcome build_and_run(const std::string& src, const CompilerSpec& cc, const OptConfig& opt,
                          const fs::path& workdir, const std::string& stem) {
  CompileResult c = compile(src, cc, opt, workdir, stem);
  SideOutcome s = side_from(c);
  if (c.ok) s.run = run_binary(c.binary, cc.timeout_run);
  return s;
}

Verdict evaluate_pair(const std::string& original_src, const std::string& transformed_src,
                      const CompilerSpec& cc, const OptConfig& opt, const fs::path& workdir) {
  SideOutcome o = build_and_run(original_src, cc, opt, workdir, "original");
  SideOutcome t = build_and_run(transformed_src, cc, opt, workdir, "transformed");
  return compare_outcomes(o, t);
}

SoundnessCheck soundness_gate(const Program& original, const Program& transformed,
                              const Limits& lim) {
  SoundnessCheck s;
  ExecOutcome o = execute(original, lim);
  ExecOutcome t = execute(transformed, lim);
  s.original_checksum = o.checksum;
  s.transformed_checksum = t.checksum;
  s.sound = o.status == ExecStatus::ok && t.status == ExecStatus::ok && o.checksum == t.checksum;
  if (!s.sound) s.detail = "original " + describe(o) + ", transformed " + describe(t);
  return s;
}

Verdict replay_finding(const Finding& f, const fs::path& workdir) {
  return evaluate_pair(f.original_src, f.transformed_src, f.compiler, f.opt, workdir);
}

Verdict repro_finding(const Finding& f, const fs::path& workdir) {
  Verdict v = replay_finding(f, workdir);
  if (v.kind != f.verdict.kind)
    throw NotReproducible("finding " + f.id + " recorded " +
                          std::string(verdict_name(f.verdict.kind)) + " but replay gave " +
                          std::string(verdict_name(v.kind)));
  return v;
}

}  // namespace loopmorph
