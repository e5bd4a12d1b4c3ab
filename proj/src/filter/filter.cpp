// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/filter.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>

#include "loopmorph/emit.hpp"
#include "loopmorph/validate.hpp"

namespace loopmorph {

namespace fs = std::filesystem;

std::string_view reason_name(FilterReason r) {
  switch (r) {
    case FilterReason::ok: return "ok";
    case FilterReason::ub_trap: return "ub_trap";
    case FilterReason::nonterminating: return "nonterminating";
    case FilterReason::compile_failure: return "compile_failure";
    case FilterReason::validation_failure: return "validation_failure";
  }
  return "?";
}

nlohmann::json to_json(const FilterVerdict& v) {
  nlohmann::json j = {{"admitted", v.admitted}, {"reason", std::string(reason_name(v.reason))}};
  if (v.trap) {
    j["trap"] = std::string(trap_name(*v.trap));
    j["path"] = v.trap_path;
  }
  if (v.reason == FilterReason::nonterminating) j["step_budget"] = v.step_budget;
  if (!v.compiler_id.empty()) j["compiler"] = v.compiler_id;
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

namespace {

std::string excerpt(const std::string& log) {
  constexpr std::size_t kMax = 2000;
  return log.size() <= kMax ? log : log.substr(0, kMax) + "\n[...]";
}

fs::path scratch_dir() {
  static std::atomic<unsigned> counter{0};
  return fs::temp_directory_path() /
         ("loopmorph-filter-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
}

}  // namespace

FilterVerdict filter_seed(const Program& p, const Limits& lim,
                          const std::vector<CompilerSpec>& compilers) {
  FilterVerdict v;
  if (auto diags = validate_program(p); !diags.empty()) {
    v.reason = FilterReason::validation_failure;
    v.detail = format_diagnostics(diags);
    return v;
  }
  ExecOutcome o = execute(p, lim);
  if (o.status == ExecStatus::trap) {
    v.reason = FilterReason::ub_trap;
    v.trap = o.trap;
    v.trap_path = o.trap_path;
    return v;
  }
  if (o.status == ExecStatus::step_budget_exhausted) {
    v.reason = FilterReason::nonterminating;
    v.step_budget = lim.max_steps;
    return v;
  }
  if (!compilers.empty()) {
    std::string src = emit_c(p);
    fs::path dir = scratch_dir();
    for (const auto& cc : compilers) {
      CompileResult r = compile(src, cc, OptConfig{}, dir);
      if (!r.ok) {
        v.reason = FilterReason::compile_failure;
        v.compiler_id = cc.id;
        v.detail = excerpt(r.timed_out ? "compile timed out" : r.log);
        std::error_code ec;
        fs::remove_all(dir, ec);
        return v;
      }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  v.admitted = true;
  v.reason = FilterReason::ok;
  return v;
}

}  // namespace loopmorph
