// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/harness/compare.hpp"

#include "loopmorph/errors.hpp"

namespace loopmorph {

std::string_view verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::agree: return "agree";
    case VerdictKind::wrong_code: return "wrong_code";
    case VerdictKind::timeout: return "timeout";
    case VerdictKind::run_crash: return "run_crash";
    case VerdictKind::compile_crash: return "compile_crash";
  }
  return "?";
}

std::optional<VerdictKind> verdict_from_name(std::string_view name) {
  for (auto k : {VerdictKind::agree, VerdictKind::wrong_code, VerdictKind::timeout,
                 VerdictKind::run_crash, VerdictKind::compile_crash})
    if (verdict_name(k) == name) return k;
  return std::nullopt;
}

std::string_view side_name(Side s) {
  switch (s) {
    case Side::none: return "none";
    case Side::original: return "original";
    case Side::transformed: return "transformed";
    case Side::both: return "both";
  }
  return "?";
}

nlohmann::json to_json(const SideOutcome& s) {
  return {{"compiled", s.compiled},
          {"compile_crash", s.compile_crash},
          {"compile_timeout", s.compile_timeout},
          {"compile_exit", s.compile_exit},
          {"compile_signal", s.compile_signal},
          {"compile_log", s.compile_log},
          {"run", to_json(s.run)}};
}

SideOutcome side_from_json(const nlohmann::json& j) {
  SideOutcome s;
  s.compiled = j.value("compiled", false);
  s.compile_crash = j.value("compile_crash", false);
  s.compile_timeout = j.value("compile_timeout", false);
  s.compile_exit = j.value("compile_exit", 0);
  s.compile_signal = j.value("compile_signal", 0);
  s.compile_log = j.value("compile_log", std::string{});
  if (j.contains("run")) s.run = exec_record_from_json(j["run"]);
  return s;
}

SideOutcome side_from(const CompileResult& c) {
  SideOutcome s;
  s.compiled = c.ok;
  s.compile_timeout = c.timed_out;
  s.compile_crash = !c.ok && !c.timed_out;
  s.compile_exit = c.exit_code;
  s.compile_signal = c.signal;
  s.compile_log = c.log;
  return s;
}

nlohmann::json to_json(const Verdict& v) {
  return {{"kind", std::string(verdict_name(v.kind))},
          {"side", std::string(side_name(v.side))},
          {"phase", v.phase},
          {"diff_class", v.diff_class},
          {"original", to_json(v.original)},
          {"transformed", to_json(v.transformed)}};
}

Verdict verdict_from_json(const nlohmann::json& j) {
  Verdict v;
  auto k = verdict_from_name(j.at("kind").get<std::string>());
  if (!k) throw ConfigError("unknown verdict kind");
  v.kind = *k;
  std::string side = j.value("side", std::string("none"));
  for (auto s : {Side::none, Side::original, Side::transformed, Side::both})
    if (side_name(s) == side) v.side = s;
  v.phase = j.value("phase", std::string{});
  v.diff_class = j.value("diff_class", std::string{});
  v.original = side_from_json(j.at("original"));
  v.transformed = side_from_json(j.at("transformed"));
  return v;
}

namespace {

Side which(bool o, bool t) {
  if (o && t) return Side::both;
  if (o) return Side::original;
  if (t) return Side::transformed;
  return Side::none;
}

std::string crash_class(const SideOutcome& s, bool compile) {
  if (compile) {
    if (s.compile_signal) return "sig" + std::to_string(s.compile_signal);
    return looks_like_ice(s.compile_log) ? "ice" : "error";
  }
  return "sig" + std::to_string(s.run.signal);
}

}  // namespace

Verdict compare_outcomes(const SideOutcome& orig, const SideOutcome& trans) {
  Verdict v;
  v.original = orig;
  v.transformed = trans;

  if (Side s = which(orig.compile_crash, trans.compile_crash); s != Side::none) {
    v.kind = VerdictKind::compile_crash;
    v.side = s;
    v.phase = "compile";
    v.diff_class = std::string(side_name(s)) + ":" +
                   (orig.compile_crash ? crash_class(orig, true) : "-") + "/" +
                   (trans.compile_crash ? crash_class(trans, true) : "-");
    return v;
  }
  bool orig_ran = orig.compiled && !orig.run.timed_out;
  bool trans_ran = trans.compiled && !trans.run.timed_out;
  bool orig_sig = orig_ran && orig.run.signal != 0;
  bool trans_sig = trans_ran && trans.run.signal != 0;
  if (Side s = which(orig_sig, trans_sig); s != Side::none) {
    v.kind = VerdictKind::run_crash;
    v.side = s;
    v.phase = "run";
    v.diff_class = std::string(side_name(s)) + ":" + (orig_sig ? crash_class(orig, false) : "-") +
                   "/" + (trans_sig ? crash_class(trans, false) : "-");
    return v;
  }
  bool orig_to = orig.compile_timeout || (orig.compiled && orig.run.timed_out);
  bool trans_to = trans.compile_timeout || (trans.compiled && trans.run.timed_out);
  if (Side s = which(orig_to, trans_to); s != Side::none) {
    v.kind = VerdictKind::timeout;
    v.side = s;
    bool compile_phase = (orig_to && orig.compile_timeout) || (trans_to && trans.compile_timeout);
    v.phase = compile_phase ? "compile" : "run";
    v.diff_class = std::string(side_name(s)) + ":" + v.phase;
    return v;
  }
  bool out_diff = orig.run.stdout_bytes != trans.run.stdout_bytes;
  bool exit_diff = orig.run.exit_code != trans.run.exit_code;
  if (out_diff || exit_diff) {
    v.kind = VerdictKind::wrong_code;
    v.side = Side::both;
    v.phase = "run";
    v.diff_class = out_diff && exit_diff ? "stdout+exit" : out_diff ? "stdout" : "exit";
    return v;
  }
  v.kind = VerdictKind::agree;
  return v;
}

}  // namespace loopmorph
