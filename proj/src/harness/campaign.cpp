// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/harness/campaign.hpp"

#include <omp.h>

#include <fstream>
#include <set>

#include "loopmorph/emit.hpp"
#include "loopmorph/errors.hpp"
#include "loopmorph/filter.hpp"
#include "loopmorph/harness/pipeline.hpp"
#include "loopmorph/rng.hpp"
#include "loopmorph/transform.hpp"

namespace loopmorph {

namespace fs = std::filesystem;

nlohmann::json to_json(const CampaignConfig& c) {
  nlohmann::json compilers = nlohmann::json::array();
  for (const auto& cc : c.compilers) compilers.push_back(to_json(cc));
  nlohmann::json transforms = nlohmann::json::array();
  for (auto k : c.transforms) transforms.push_back(std::string(transform_name(k)));
  nlohmann::json levels = nlohmann::json::array();
  for (auto l : c.levels) levels.push_back(std::string(level_flag(l)));
  nlohmann::json j = {
      {"compilers", compilers},
      {"transforms", transforms},
      {"iterations", c.iterations},
      {"limits", {{"max_steps", c.limits.max_steps}, {"max_call_depth", c.limits.max_call_depth}}},
      {"gen", to_json(c.gen)},
      {"construct", {{"expr_depth", c.construct.expr_depth},
                     {"max_fusion_trip", c.construct.max_fusion_trip}}},
      {"levels", levels},
      {"opt_samples", c.opt_samples},
      {"k_max", c.k_max},
      {"max_unroll_variants", c.max_unroll_variants},
      {"filter_compile", c.filter_compile},
      {"threads", c.threads},
  };
  if (c.seeds.empty())
    j["seeds"] = c.seed;
  else
    j["seeds"] = c.seeds;
  return j;
}

CampaignConfig campaign_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("campaign config must be a JSON object");
  static const std::set<std::string> known = {
      "compilers", "transforms", "iterations", "seeds", "limits", "gen", "construct",
      "levels", "opt_samples", "k_max", "max_unroll_variants", "filter_compile", "threads"};
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw ConfigError("campaign config: unknown key '" + k + "'");
  CampaignConfig c;
  try {
    if (!j.contains("compilers") || !j["compilers"].is_array() || j["compilers"].empty())
      throw ConfigError("campaign config: compilers[] must list at least one compiler");
    for (const auto& cc : j["compilers"]) c.compilers.push_back(compiler_from_json(cc));
    if (j.contains("transforms")) {
      c.transforms.clear();
      for (const auto& t : j["transforms"]) {
        auto k = transform_from_name(t.get<std::string>());
        if (!k) throw ConfigError("campaign config: unknown transform '" + t.get<std::string>() + "'");
        c.transforms.push_back(*k);
      }
    }
    if (j.contains("seeds")) {
      const auto& s = j["seeds"];
      if (s.is_array())
        c.seeds = s.get<std::vector<std::uint64_t>>();
      else if (s.is_object())
        c.seed = s.at("base").get<std::uint64_t>();
      else
        c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("iterations"))
      c.iterations = j["iterations"].get<std::uint64_t>();
    else if (!c.seeds.empty())
      c.iterations = c.seeds.size();
    if (j.contains("limits")) {
      c.limits.max_steps = j["limits"].value("max_steps", c.limits.max_steps);
      c.limits.max_call_depth = j["limits"].value("max_call_depth", c.limits.max_call_depth);
    }
    if (j.contains("gen")) c.gen = gen_config_from_json(j["gen"]);
    if (j.contains("construct")) {
      c.construct.expr_depth = j["construct"].value("expr_depth", c.construct.expr_depth);
      c.construct.max_fusion_trip =
          j["construct"].value("max_fusion_trip", c.construct.max_fusion_trip);
    }
    if (j.contains("levels")) {
      for (const auto& l : j["levels"]) {
        auto level = level_from_flag(l.get<std::string>());
        if (!level) throw ConfigError("campaign config: unknown level '" + l.get<std::string>() + "'");
        c.levels.push_back(*level);
      }
    }
    c.opt_samples = j.value("opt_samples", c.opt_samples);
    c.k_max = j.value("k_max", c.k_max);
    c.max_unroll_variants = j.value("max_unroll_variants", c.max_unroll_variants);
    c.filter_compile = j.value("filter_compile", c.filter_compile);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("campaign config: ") + e.what());
  }
  if (c.opt_samples < 1) throw ConfigError("campaign config: opt_samples must be >= 1");
  if (c.k_max < 2) throw ConfigError("campaign config: k_max must be >= 2");
  if (c.construct.expr_depth < 1) throw ConfigError("campaign config: expr_depth must be >= 1");
  if (c.seeds.size() > 0 && c.iterations > c.seeds.size())
    throw ConfigError("campaign config: more iterations than explicit seeds");
  c.construct.limits = c.limits;
  return c;
}

std::uint64_t iteration_seed(const CampaignConfig& c, std::uint64_t i) {
  return i < c.seeds.size() ? c.seeds[i] : derive_seed(c.seed, i);
}

nlohmann::json to_json(const CampaignReport& r) {
  return {{"iterations_run", r.iterations_run},
          {"iterations_skipped", r.iterations_skipped},
          {"seeds_admitted", r.seeds_admitted},
          {"pairs", r.pairs},
          {"findings", r.findings},
          {"harness_errors", r.harness_errors},
          {"unique_signatures", r.signatures.size()},
          {"counts", r.counts},
          {"signatures", r.signatures}};
}

namespace {

std::string first_line(const std::string& s) {
  auto nl = s.find('\n');
  return nl == std::string::npos ? s : s.substr(0, nl);
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return s;
}

std::vector<OptConfig> opt_configs(const CampaignConfig& cfg, const CompilerSpec& cc,
                                   std::uint64_t stream_seed) {
  std::vector<OptConfig> out;
  if (!cfg.levels.empty()) {
    for (auto l : cfg.levels) out.push_back(OptConfig{l, {}, 0});
    return out;
  }
  for (int s = 0; s < cfg.opt_samples; ++s)
    out.push_back(sample_opt_config(cc, derive_seed(stream_seed, static_cast<std::uint64_t>(s))));
  return out;
}

void add_to_report(CampaignReport& r, const nlohmann::json& entry) {
  if (entry.value("status", std::string{}) == "error") ++r.harness_errors;
  if (entry.value("filter", std::string{}) == "ok") ++r.seeds_admitted;
  if (!entry.contains("pairs")) return;
  for (const auto& p : entry["pairs"]) {
    if (!p.contains("verdict")) continue;
    ++r.pairs;
    std::string key = p["transform"].get<std::string>() + "/" + p["compiler"].get<std::string>() +
                      "/" + p["level"].get<std::string>() + "/" + p["verdict"].get<std::string>();
    ++r.counts[key];
    if (p.contains("signature")) {
      ++r.findings;
      r.signatures[p["signature"].get<std::string>()].push_back(p["finding"].get<std::string>());
    }
  }
}

}  // namespace

nlohmann::json run_iteration(const CampaignConfig& cfg, std::uint64_t i, const fs::path& workdir,
                             std::vector<Finding>* findings) {
  const std::uint64_t seed = iteration_seed(cfg, i);
  nlohmann::json entry = {{"iteration", i}, {"seed", seed}};
  GenConfig g = cfg.gen;
  g.seed = seed;
  Program p;
  try {
    p = generate_seed(g);
  } catch (const GenerationBudgetExceeded& e) {
    entry["status"] = "generation_failed";
    return entry;
  }
  static const std::vector<CompilerSpec> kNone;
  FilterVerdict fv = filter_seed(p, cfg.limits, cfg.filter_compile ? cfg.compilers : kNone);
  entry["filter"] = std::string(reason_name(fv.reason));
  if (!fv.admitted) {
    entry["status"] = "rejected";
    return entry;
  }
  ConstructConfig ccfg = cfg.construct;
  ccfg.limits = cfg.limits;
  nlohmann::json pairs = nlohmann::json::array();
  for (auto kind : cfg.transforms) {
    const std::string kname(transform_name(kind));
    const std::uint64_t kseed = derive_seed(seed, 0x100 + static_cast<std::uint64_t>(kind));
    Program original;
    ConstructRecipe recipe;
    std::vector<TransformVariant> variants;
    try {
      std::tie(original, recipe) = construct_original(p, kind, kseed, ccfg);
      PreconditionReport rep = check_preconditions(original, recipe);
      if (!rep.satisfied) {
        pairs.push_back({{"transform", kname}, {"status", "precondition_violated"}});
        continue;
      }
      variants = transform_all(original, recipe, cfg.limits, cfg.k_max);
    } catch (const Error& e) {
      pairs.push_back({{"transform", kname}, {"status", "construct_failed"}, {"reason", first_line(e.what())}});
      continue;
    }
    if (cfg.max_unroll_variants > 0 && variants.size() > cfg.max_unroll_variants)
      variants.resize(cfg.max_unroll_variants);
    const std::string original_src = emit_c(original);
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      const auto& v = variants[vi];
      FilterVerdict tv = filter_seed(v.program, cfg.limits);
      if (!tv.admitted) {
        pairs.push_back({{"transform", kname}, {"variant", v.name}, {"status", "transform_rejected"}});
        continue;
      }
      SoundnessCheck gate = soundness_gate(original, v.program, cfg.limits);
      if (!gate.sound) {
        pairs.push_back({{"transform", kname}, {"variant", v.name}, {"status", "unsound"}});
        continue;
      }
      const std::string transformed_src = emit_c(v.program);
      for (std::size_t ci = 0; ci < cfg.compilers.size(); ++ci) {
        const CompilerSpec& cc = cfg.compilers[ci];
        auto opts = opt_configs(cfg, cc, derive_seed(kseed, (vi << 16) | ci));
        for (std::size_t oi = 0; oi < opts.size(); ++oi) {
          const OptConfig& opt = opts[oi];
          std::string tag = sanitize(kname + "-" + v.name + "-" + cc.id + "-" + std::to_string(oi));
          Verdict verdict = evaluate_pair(original_src, transformed_src, cc, opt, workdir / tag);
          nlohmann::json pe = {{"transform", kname},
                               {"variant", v.name},
                               {"compiler", cc.id},
                               {"level", std::string(level_flag(opt.level))},
                               {"opt", opt.str()},
                               {"verdict", std::string(verdict_name(verdict.kind))},
                               {"interp_stdout", checksum_line(gate.original_checksum)},
                               {"original_stdout", verdict.original.run.stdout_bytes}};
          if (verdict.kind != VerdictKind::agree) {
            Finding f;
            f.id = sanitize("i" + std::to_string(i) + "-" + tag);
            f.kind = kind;
            f.variant = v.name;
            f.compiler = cc;
            f.opt = opt;
            f.original_src = original_src;
            f.transformed_src = transformed_src;
            f.recipe = recipe;
            f.plan = v.plan;
            f.verdict = verdict;
            f.seed = seed;
            f.iteration = i;
            f.original_checksum = gate.original_checksum;
            f.transformed_checksum = gate.transformed_checksum;
            f.signature = finding_signature(f);
            pe["signature"] = f.signature;
            pe["finding"] = f.id;
            if (findings) findings->push_back(std::move(f));
          }
          pairs.push_back(std::move(pe));
        }
      }
    }
  }
  entry["pairs"] = std::move(pairs);
  entry["status"] = "ok";
  return entry;
}

CampaignReport run_campaign(const CampaignConfig& cfg, const fs::path& out, bool resume) {
  for (const auto& cc : cfg.compilers) resolve_executable(cc);
  fs::create_directories(out / "findings");
  const fs::path journal_path = out / "journal.jsonl";

  std::set<std::uint64_t> done;
  if (resume && fs::exists(journal_path)) {
    std::ifstream in(journal_path);
    std::string line;
    std::vector<std::string> kept;
    while (std::getline(in, line)) {
      try {
        auto j = nlohmann::json::parse(line);
        done.insert(j.at("iteration").get<std::uint64_t>());
        kept.push_back(line);
      } catch (const nlohmann::json::exception&) {
        break;  // torn final line from an interrupted run
      }
    }
    in.close();
    std::ofstream rewrite(journal_path, std::ios::trunc);
    for (const auto& l : kept) rewrite << l << '\n';
  } else {
    std::ofstream(journal_path, std::ios::trunc);
  }

  std::vector<std::uint64_t> todo;
  for (std::uint64_t i = 0; i < cfg.iterations; ++i)
    if (!done.contains(i)) todo.push_back(i);

  CampaignReport report;
  report.iterations_skipped = cfg.iterations - todo.size();
  std::ofstream journal(journal_path, std::ios::app);
  const auto n = static_cast<std::int64_t>(todo.size());
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) ordered num_threads(threads)
  for (std::int64_t t = 0; t < n; ++t) {
    const std::uint64_t i = todo[static_cast<std::size_t>(t)];
    const fs::path work = out / "work" / std::to_string(i);
    std::vector<Finding> found;
    nlohmann::json entry;
    try {
      entry = run_iteration(cfg, i, work, &found);
    } catch (const std::exception& e) {
      entry = {{"iteration", i}, {"seed", iteration_seed(cfg, i)}, {"status", "error"},
               {"reason", first_line(e.what())}};
      found.clear();
    }
    std::error_code ec;
    fs::remove_all(work, ec);
#pragma omp ordered
    {
      for (auto& f : found) {
        f.created_at = utc_timestamp();
        persist_finding(f, out / "findings");
      }
      journal << entry.dump() << '\n';
      journal.flush();
      ++report.iterations_run;
    }
  }
  journal.close();
  std::error_code ec;
  fs::remove(out / "work", ec);

  std::ifstream in(journal_path);
  std::string line;
  while (std::getline(in, line)) add_to_report(report, nlohmann::json::parse(line));
  std::ofstream(out / "report.json") << to_json(report).dump(2) << '\n';
  return report;
}

}  // namespace loopmorph
