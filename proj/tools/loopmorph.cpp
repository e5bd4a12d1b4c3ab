// SPDX-License-Identifier: Apache-2.0
//
// loopmorph command-line driver.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "loopmorph/construct.hpp"
#include "loopmorph/emit.hpp"
#include "loopmorph/errors.hpp"
#include "loopmorph/filter.hpp"
#include "loopmorph/gen.hpp"
#include "loopmorph/harness/campaign.hpp"
#include "loopmorph/harness/pipeline.hpp"
#include "loopmorph/harness/reduce.hpp"
#include "loopmorph/interp.hpp"
#include "loopmorph/parse.hpp"
#include "loopmorph/semantics.hpp"
#include "loopmorph/transform.hpp"

namespace fs = std::filesystem;
using namespace loopmorph;

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + p.string());
}

nlohmann::json read_json(const fs::path& p) {
  try {
    return nlohmann::json::parse(read_text(p));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

fs::path scratch(const std::string& what) {
  return fs::temp_directory_path() /
         ("loopmorph-" + what + "-" + std::to_string(::getpid()));
}

nlohmann::json profile_json(const LoopProfile& prof) {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [id, e] : prof.entries)
    entries[id] = {{"entries", e.entries}, {"min_trips", e.min_trips}, {"max_trips", e.max_trips}};
  return {{"trip_counts", prof.trip_counts}, {"stmt_exec", prof.stmt_exec}, {"entries", entries}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metamorphic loop-optimization testing for C compilers"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random seed program seed_<N>.c");
  std::uint64_t gen_seed = 0;
  std::string gen_config, gen_out = ".";
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_option("--config", gen_config, "Generator config JSON");
  gen->add_option("--out", gen_out, "Output directory");

  // run-interp
  auto* ri = app.add_subcommand("run-interp", "Interpret a MiniC file");
  std::string ri_file, ri_limits;
  Limits ri_lim;
  ri->add_option("file", ri_file, "MiniC source")->required();
  ri->add_option("--limits", ri_limits, "Limits JSON file ({max_steps, max_call_depth})");
  ri->add_option("--max-steps", ri_lim.max_steps, "Step budget");
  ri->add_option("--max-call-depth", ri_lim.max_call_depth, "Call depth limit");

  // filter
  auto* fl = app.add_subcommand("filter", "Exit 0 iff the program is admitted");
  std::string fl_file;
  std::vector<std::string> fl_cc;
  Limits fl_lim;
  fl->add_option("file", fl_file, "MiniC source")->required();
  fl->add_option("--cc", fl_cc, "Compiler executable checked at -O0 (repeatable)");
  fl->add_option("--max-steps", fl_lim.max_steps, "Step budget");

  // construct
  auto* cs = app.add_subcommand("construct", "Build an original program for one transform");
  std::string cs_file, cs_kind, cs_out = ".";
  std::uint64_t cs_seed = 0;
  cs->add_option("file", cs_file, "Seed program")->required();
  cs->add_option("--kind", cs_kind, "licm|unswitch|fusion|unroll")
      ->required()
      ->check(CLI::IsMember({"licm", "unswitch", "fusion", "unroll"}));
  cs->add_option("--seed", cs_seed, "Construction seed");
  cs->add_option("--out", cs_out, "Output directory");

  // transform
  auto* tr = app.add_subcommand("transform", "Apply the recipe's transformation");
  std::string tr_file, tr_recipe, tr_out = ".";
  std::uint64_t tr_kmax = kDefaultKMax;
  tr->add_option("original", tr_file, "original.c")->required();
  tr->add_option("recipe", tr_recipe, "recipe.json")->required();
  tr->add_option("--out", tr_out, "Output directory");
  tr->add_option("--k-max", tr_kmax, "Largest unroll factor");

  // campaign
  auto* cp = app.add_subcommand("campaign", "Run a fuzzing campaign");
  std::string cp_config, cp_out;
  bool cp_resume = false;
  cp->add_option("--config", cp_config, "Campaign config JSON")->required();
  cp->add_option("--out", cp_out, "Output directory")->required();
  cp->add_flag("--resume", cp_resume, "Skip iterations already in the journal");

  // repro
  auto* rp = app.add_subcommand("repro", "Re-run a finding bundle");
  std::string rp_dir;
  rp->add_option("finding", rp_dir, "Finding directory")->required();

  // reduce
  auto* rd = app.add_subcommand("reduce", "Minimize a finding bundle");
  std::string rd_dir, rd_out;
  std::size_t rd_budget = 100;
  rd->add_option("finding", rd_dir, "Finding directory")->required();
  rd->add_option("--budget", rd_budget, "Maximum compile+run attempts");
  rd->add_option("--out", rd_out, "Output directory (default FINDING/reduced)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      GenConfig cfg = gen_config.empty() ? GenConfig{} : gen_config_from_json(read_json(gen_config));
      cfg.seed = gen_seed;
      fs::create_directories(gen_out);
      fs::path out = fs::path(gen_out) / ("seed_" + std::to_string(gen_seed) + ".c");
      write_text(out, emit_c(generate_seed(cfg)));
      std::cout << out.string() << "\n";
      return 0;
    }
    if (*ri) {
      if (!ri_limits.empty()) {
        auto j = read_json(ri_limits);
        ri_lim.max_steps = j.value("max_steps", ri_lim.max_steps);
        ri_lim.max_call_depth = j.value("max_call_depth", ri_lim.max_call_depth);
      }
      ExecOutcome o = execute(parse_minic(read_text(ri_file)), ri_lim);
      std::cout << "status: " << status_name(o.status);
      if (o.trap) std::cout << " " << trap_name(*o.trap) << " at " << o.trap_path;
      std::cout << "\n";
      if (o.status == ExecStatus::ok) std::cout << checksum_line(o.checksum);
      std::cout << profile_json(o.profile).dump(2) << "\n";
      return o.status == ExecStatus::ok ? 0 : 1;
    }
    if (*fl) {
      std::vector<CompilerSpec> ccs;
      for (const auto& c : fl_cc) {
        CompilerSpec spec;
        spec.id = fs::path(c).filename().string();
        spec.executable = c;
        resolve_executable(spec);
        ccs.push_back(spec);
      }
      FilterVerdict v;
      try {
        v = filter_seed(parse_minic(read_text(fl_file)), fl_lim, ccs);
      } catch (const InvalidProgram& e) {
        v.reason = FilterReason::validation_failure;
        v.detail = e.what();
      } catch (const SubsetViolation& e) {
        v.reason = FilterReason::validation_failure;
        v.detail = e.what();
      }
      std::cout << to_json(v).dump(2) << "\n";
      return v.admitted ? 0 : 1;
    }
    if (*cs) {
      Program p = parse_minic(read_text(cs_file));
      auto [original, recipe] = construct_original(p, *transform_from_name(cs_kind), cs_seed);
      fs::create_directories(cs_out);
      write_text(fs::path(cs_out) / "original.c", emit_c(original));
      write_text(fs::path(cs_out) / "recipe.json", to_json(recipe).dump(2) + "\n");
      std::cout << to_json(recipe).dump(2) << "\n";
      return 0;
    }
    if (*tr) {
      Program p = parse_minic(read_text(tr_file));
      ConstructRecipe recipe = recipe_from_json(read_json(tr_recipe));
      PreconditionReport rep = check_preconditions(p, recipe);
      auto variants = transform_all(p, recipe, Limits{}, tr_kmax);
      fs::create_directories(tr_out);
      nlohmann::json plan = {{"kind", std::string(transform_name(recipe.kind))},
                             {"recipe", to_json(recipe)},
                             {"preconditions", to_json(rep)},
                             {"variants", nlohmann::json::array()}};
      for (const auto& v : variants) {
        std::string name =
            "transformed_" + std::string(transform_name(recipe.kind)) + "_" + v.name + ".c";
        write_text(fs::path(tr_out) / name, emit_c(v.program));
        nlohmann::json entry = v.plan;
        entry["variant"] = v.name;
        entry["file"] = name;
        plan["variants"].push_back(entry);
        std::cout << name << "\n";
      }
      write_text(fs::path(tr_out) / "plan.json", plan.dump(2) + "\n");
      return 0;
    }
    if (*cp) {
      CampaignConfig cfg = campaign_config_from_json(read_json(cp_config));
      CampaignReport r = run_campaign(cfg, cp_out, cp_resume);
      std::cout << to_json(r).dump(2) << "\n";
      if (r.harness_errors > 0 && r.findings == 0) return 1;
      return r.findings > 0 ? 2 : 0;
    }
    if (*rp) {
      Finding f = load_finding(rp_dir);
      fs::path work = scratch("repro");
      Verdict v;
      try {
        v = repro_finding(f, work);
      } catch (const NotReproducible& e) {
        std::error_code ec;
        fs::remove_all(work, ec);
        throw;
      }
      std::error_code ec;
      fs::remove_all(work, ec);
      std::cout << to_json(v).dump(2) << "\n";
      std::cout << "reproduced " << verdict_name(v.kind) << " (" << f.signature << ")\n";
      return 0;
    }
    if (*rd) {
      Finding f = load_finding(rd_dir);
      fs::path work = scratch("reduce");
      ReduceStats stats;
      Finding reduced = reduce_finding(f, rd_budget, work, &stats);
      std::error_code ec;
      fs::remove_all(work, ec);
      fs::path out = rd_out.empty() ? fs::path(rd_dir) / "reduced" : fs::path(rd_out);
      write_finding(reduced, out);
      std::cout << "attempts " << stats.attempts << ", accepted " << stats.accepted << ", size "
                << f.original_src.size() << " -> " << reduced.original_src.size() << "\n"
                << out.string() << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
