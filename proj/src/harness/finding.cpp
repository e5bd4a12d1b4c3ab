// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/harness/finding.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "loopmorph/errors.hpp"
#include "loopmorph/semantics.hpp"

namespace loopmorph {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = kChecksumInit;
  for (unsigned char c : s) h = checksum_mix(h, c);
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw NotReproducible("missing bundle file " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string shell_join(const std::vector<std::string>& argv) {
  std::string out;
  for (const auto& a : argv) {
    if (!out.empty()) out += ' ';
    bool plain = !a.empty() && a.find_first_of(" \t'\"\\$`") == std::string::npos;
    out += plain ? a : "'" + a + "'";
  }
  return out;
}

}  // namespace

std::string finding_signature(const std::string& compiler_id, OptLevel level, TransformKind kind,
                              VerdictKind verdict, const std::string& diff_class) {
  std::string key = compiler_id + '\x1f' + std::string(level_flag(level)) + '\x1f' +
                    std::string(transform_name(kind)) + '\x1f' +
                    std::string(verdict_name(verdict)) + '\x1f' + diff_class;
  return hex16(fnv1a(key));
}

std::string finding_signature(const Finding& f) {
  return finding_signature(f.compiler.id, f.opt.level, f.kind, f.verdict.kind,
                           f.verdict.diff_class);
}

std::string commands_text(const Finding& f) {
  std::string out;
  for (const char* side : {"original", "transformed"}) {
    std::string bin = std::string("./") + side + ".bin";
    out += shell_join(compile_command(f.compiler, f.opt, std::string(side) + ".c", bin)) + "\n";
    out += bin + "\n";
  }
  return out;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_finding(const Finding& f, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "original.c", f.original_src);
  write_file(dir / "transformed.c", f.transformed_src);
  write_file(dir / "recipe.json", to_json(f.recipe).dump(2) + "\n");
  write_file(dir / "plan.json", f.plan.dump(2) + "\n");
  write_file(dir / "commands.txt", commands_text(f));
  nlohmann::json o = {
      {"id", f.id},
      {"transform", std::string(transform_name(f.kind))},
      {"variant", f.variant},
      {"compiler", to_json(f.compiler)},
      {"opt", to_json(f.opt)},
      {"verdict", to_json(f.verdict)},
      {"signature", f.signature},
      {"created_at", f.created_at},
      {"seed", f.seed},
      {"iteration", f.iteration},
      {"interpreter", {{"original_checksum", hex16(f.original_checksum)},
                       {"transformed_checksum", hex16(f.transformed_checksum)}}},
  };
  write_file(dir / "outcome.json", o.dump(2) + "\n");
}

fs::path persist_finding(const Finding& f, const fs::path& findings_root) {
  fs::path dir = findings_root / f.signature / f.id;
  write_finding(f, dir);
  return dir;
}

Finding load_finding(const fs::path& dir) {
  Finding f;
  try {
    f.original_src = read_file(dir / "original.c");
    f.transformed_src = read_file(dir / "transformed.c");
    f.recipe = recipe_from_json(nlohmann::json::parse(read_file(dir / "recipe.json")));
    f.plan = nlohmann::json::parse(read_file(dir / "plan.json"));
    auto o = nlohmann::json::parse(read_file(dir / "outcome.json"));
    f.id = o.at("id").get<std::string>();
    auto kind = transform_from_name(o.at("transform").get<std::string>());
    if (!kind) throw NotReproducible("unknown transform in " + dir.string());
    f.kind = *kind;
    f.variant = o.value("variant", std::string{});
    f.compiler = compiler_from_json(o.at("compiler"));
    f.opt = opt_from_json(o.at("opt"));
    f.verdict = verdict_from_json(o.at("verdict"));
    f.signature = o.value("signature", std::string{});
    f.created_at = o.value("created_at", std::string{});
    f.seed = o.value("seed", std::uint64_t{0});
    f.iteration = o.value("iteration", std::uint64_t{0});
    const auto& interp = o.at("interpreter");
    f.original_checksum = std::stoull(interp.at("original_checksum").get<std::string>(), nullptr, 16);
    f.transformed_checksum =
        std::stoull(interp.at("transformed_checksum").get<std::string>(), nullptr, 16);
  } catch (const nlohmann::json::exception& e) {
    throw NotReproducible("malformed bundle " + dir.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw NotReproducible("malformed bundle " + dir.string() + ": " + e.what());
  } catch (const RecipeMismatch& e) {
    throw NotReproducible("malformed bundle " + dir.string() + ": " + e.what());
  }
  return f;
}

}  // namespace loopmorph
