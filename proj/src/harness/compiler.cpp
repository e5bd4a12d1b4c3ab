// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/harness/compiler.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "loopmorph/errors.hpp"
#include "loopmorph/harness/backend.hpp"
#include "loopmorph/rng.hpp"

extern char** environ;

namespace loopmorph {

namespace fs = std::filesystem;

nlohmann::json to_json(const CompilerSpec& cc) {
  return {{"id", cc.id},
          {"executable", cc.executable},
          {"base_flags", cc.base_flags},
          {"flag_pool", cc.flag_pool},
          {"timeout_compile", cc.timeout_compile},
          {"timeout_run", cc.timeout_run}};
}

CompilerSpec compiler_from_json(const nlohmann::json& j) {
  CompilerSpec cc;
  try {
    cc.executable = j.at("executable").get<std::string>();
    cc.id = j.value("id", cc.executable);
    cc.base_flags = j.value("base_flags", std::vector<std::string>{});
    cc.flag_pool = j.value("flag_pool", std::vector<std::string>{});
    cc.timeout_compile = j.value("timeout_compile", 30);
    cc.timeout_run = j.value("timeout_run", 10);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("compiler spec: ") + e.what());
  }
  if (cc.timeout_compile < 1 || cc.timeout_run < 1)
    throw ConfigError("compiler spec: timeouts must be >= 1s");
  return cc;
}

std::string resolve_executable(const CompilerSpec& cc) {
  if (cc.is_builtin()) {
    if (!builtin_backend(cc.executable)) throw ToolNotFound("unknown builtin backend: " + cc.executable);
    return cc.executable;
  }
  auto usable = [](const fs::path& p) {
    return !p.empty() && fs::is_regular_file(p) && ::access(p.c_str(), X_OK) == 0;
  };
  if (cc.executable.find('/') != std::string::npos) {
    if (usable(cc.executable)) return fs::absolute(cc.executable).string();
    throw ToolNotFound("compiler not found: " + cc.executable);
  }
  const char* path = std::getenv("PATH");
  std::stringstream dirs(path ? path : "/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    fs::path cand = fs::path(dir.empty() ? "." : dir) / cc.executable;
    if (usable(cand)) return fs::absolute(cand).string();
  }
  throw ToolNotFound("compiler not found on PATH: " + cc.executable);
}

std::string_view level_flag(OptLevel l) {
  switch (l) {
    case OptLevel::O0: return "-O0";
    case OptLevel::O1: return "-O1";
    case OptLevel::O2: return "-O2";
    case OptLevel::O3: return "-O3";
    case OptLevel::Os: return "-Os";
  }
  return "-O0";
}

std::optional<OptLevel> level_from_flag(std::string_view flag) {
  for (auto l : kAllLevels)
    if (level_flag(l) == flag) return l;
  return std::nullopt;
}

std::string OptConfig::str() const {
  std::string out(level_flag(level));
  for (const auto& f : extra_flags) out += " " + f;
  return out;
}

nlohmann::json to_json(const OptConfig& o) {
  return {{"level", std::string(level_flag(o.level))},
          {"extra_flags", o.extra_flags},
          {"rng_seed", o.rng_seed}};
}

OptConfig opt_from_json(const nlohmann::json& j) {
  OptConfig o;
  auto l = level_from_flag(j.at("level").get<std::string>());
  if (!l) throw ConfigError("unknown optimization level");
  o.level = *l;
  o.extra_flags = j.value("extra_flags", std::vector<std::string>{});
  o.rng_seed = j.value("rng_seed", std::uint64_t{0});
  return o;
}

OptConfig sample_opt_config(const CompilerSpec& cc, std::uint64_t seed) {
  Rng rng(seed);
  OptConfig o;
  o.rng_seed = seed;
  o.level = kAllLevels[rng.next() % 5];
  for (const auto& f : cc.flag_pool)
    if (rng.next() & 1) o.extra_flags.push_back(f);
  return o;
}

std::vector<std::string> compile_command(const CompilerSpec& cc, const OptConfig& opt,
                                         const std::string& src, const std::string& out) {
  std::vector<std::string> argv = {cc.executable};
  argv.insert(argv.end(), cc.base_flags.begin(), cc.base_flags.end());
  argv.emplace_back(level_flag(opt.level));
  argv.insert(argv.end(), opt.extra_flags.begin(), opt.extra_flags.end());
  argv.push_back(src);
  argv.emplace_back("-o");
  argv.push_back(out);
  return argv;
}

bool looks_like_ice(const std::string& log) {
  return log.find("internal compiler error") != std::string::npos ||
         log.find("PLEASE submit a bug report") != std::string::npos;
}

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const fs::path& stdout_file,
                          const fs::path& stderr_file, double timeout_seconds) {
  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 1, stdout_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addopen(&actions, 2, stderr_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  auto start = std::chrono::steady_clock::now();
  pid_t pid = 0;
  int rc = posix_spawn(&pid, cargv[0], &actions, &attr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) throw ToolNotFound("cannot execute " + argv[0] + ": " + std::strerror(rc));

  ProcessResult out;
  int status = 0;
  auto deadline = start + std::chrono::duration<double>(timeout_seconds);
  auto sleep = std::chrono::microseconds(200);
  for (;;) {
    pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      out.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(sleep);
    sleep = std::min(sleep * 2, std::chrono::microseconds(10000));
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.timed_out) {
    if (WIFEXITED(status)) out.exit_code = WEXITSTATUS(status);
    if (WIFSIGNALED(status)) out.signal = WTERMSIG(status);
  }
  return out;
}

CompileResult compile(const std::string& src, const CompilerSpec& cc, const OptConfig& opt,
                      const fs::path& workdir, const std::string& stem) {
  fs::create_directories(workdir);
  fs::path src_path = workdir / (stem + ".c");
  fs::path bin = workdir / (stem + ".bin");
  {
    std::ofstream out(src_path, std::ios::binary);
    out << src;
  }
  if (cc.is_builtin()) return builtin_compile(src, cc, opt, bin);

  CompilerSpec resolved = cc;
  resolved.executable = resolve_executable(cc);
  CompileResult r;
  r.command = compile_command(cc, opt, src_path.string(), bin.string());
  auto argv = compile_command(resolved, opt, src_path.string(), bin.string());
  fs::path log = workdir / (stem + ".log");
  fs::path sink = workdir / (stem + ".cc.out");
  ProcessResult pr = run_process(argv, sink, log, cc.timeout_compile);
  r.log = slurp(sink) + slurp(log);
  r.exit_code = pr.exit_code;
  r.signal = pr.signal;
  r.timed_out = pr.timed_out;
  r.wall_seconds = pr.wall_seconds;
  r.ice = !pr.timed_out && (pr.signal != 0 || (pr.exit_code != 0 && looks_like_ice(r.log)));
  r.ok = !pr.timed_out && pr.signal == 0 && pr.exit_code == 0 && fs::exists(bin);
  r.binary = bin;
  return r;
}

nlohmann::json to_json(const ExecRecord& r) {
  return {{"stdout", r.stdout_bytes},
          {"exit_code", r.exit_code},
          {"signal", r.signal},
          {"timed_out", r.timed_out}};
}

ExecRecord exec_record_from_json(const nlohmann::json& j) {
  ExecRecord r;
  r.stdout_bytes = j.value("stdout", std::string{});
  r.exit_code = j.value("exit_code", 0);
  r.signal = j.value("signal", 0);
  r.timed_out = j.value("timed_out", false);
  return r;
}

ExecRecord run_binary(const fs::path& bin, int timeout_seconds) {
  if (is_builtin_binary(bin)) return builtin_run(bin, timeout_seconds);
  fs::path out = bin;
  out += ".stdout";
  fs::path err = bin;
  err += ".stderr";
  ProcessResult pr = run_process({fs::absolute(bin).string()}, out, err, timeout_seconds);
  ExecRecord r;
  r.stdout_bytes = slurp(out);
  r.exit_code = pr.exit_code;
  r.signal = pr.signal;
  r.timed_out = pr.timed_out;
  r.wall_seconds = pr.wall_seconds;
  return r;
}

}  // namespace loopmorph
