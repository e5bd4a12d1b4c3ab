// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/harness/backend.hpp"

#include <csignal>
#include <chrono>
#include <fstream>
#include <sstream>

#include "loopmorph/emit.hpp"
#include "loopmorph/errors.hpp"
#include "loopmorph/interp.hpp"
#include "loopmorph/parse.hpp"
#include "loopmorph/walk.hpp"

namespace loopmorph {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic = "#!loopmorph-builtin-binary v1\n";

bool reads_name(const Stmt& s, const std::string& name) {
  bool hit = false;
  stmt_exprs(s, [&](const Expr& e) {
    if (names_read(e).contains(name)) hit = true;
  });
  for (const auto& [sel, b] : sub_blocks(s))
    if (names_read(*b).contains(name)) hit = true;
  return hit;
}

const std::string* written_array(const Stmt& s) {
  const auto* a = std::get_if<Assign>(&s.node);
  return a && a->target.index ? &a->target.name : nullptr;
}

void mutate_block(Block& b, Mutation m, bool in_loop) {
  auto& st = b.stmts;
  switch (m) {
    case Mutation::licm:
      for (std::size_t j = 0; j + 1 < st.size(); ++j) {
        auto* d = std::get_if<Decl>(&st[j].node);
        if (!d || d->type.is_array() || !d->init || !as_loop(&st[j + 1])) continue;
        if (!reads_name(st[j + 1], d->name)) continue;
        d->init = cast(d->type.kind, binary(BinaryOp::bxor, std::move(*d->init), lit_i32(1)));
      }
      break;
    case Mutation::unswitch:
      for (auto& s : st) {
        auto* i = std::get_if<If>(&s.node);
        if (!i || !i->else_block) continue;
        if (i->then_block.stmts.size() == 1 && as_loop(&i->then_block.stmts[0]) &&
            i->else_block->stmts.size() == 1 && as_loop(&i->else_block->stmts[0]))
          i->else_block.reset();
      }
      break;
    case Mutation::fusion:
      if (!in_loop) break;
      for (std::size_t j = 0; j + 1 < st.size(); ++j) {
        const std::string* x = written_array(st[j]);
        if (!x || !std::holds_alternative<Assign>(st[j + 1].node)) continue;
        if (!reads_name(st[j + 1], *x)) continue;
        std::swap(st[j], st[j + 1]);
        ++j;
      }
      break;
    case Mutation::none:
      break;
  }
  for (auto& s : st) {
    bool loop = in_loop || as_loop(&s) != nullptr;
    for (auto& [sel, sub] : sub_blocks(s)) mutate_block(*sub, m, loop);
  }
}

std::string_view mutation_name(Mutation m) {
  switch (m) {
    case Mutation::none: return "reference";
    case Mutation::licm: return "mutant-licm";
    case Mutation::unswitch: return "mutant-unswitch";
    case Mutation::fusion: return "mutant-fusion";
  }
  return "?";
}

int trap_signal(TrapKind k) {
  switch (k) {
    case TrapKind::div_by_zero: return SIGFPE;
    case TrapKind::oob_index: return SIGSEGV;
    default: return SIGILL;
  }
}

}  // namespace

std::optional<Mutation> builtin_backend(std::string_view executable) {
  if (executable.starts_with("builtin:")) executable.remove_prefix(8);
  for (auto m : {Mutation::none, Mutation::licm, Mutation::unswitch, Mutation::fusion})
    if (mutation_name(m) == executable) return m;
  return std::nullopt;
}

Program apply_mutation(const Program& p, Mutation m) {
  Program out = p;
  if (m == Mutation::none) return out;
  for (auto& f : out.functions) mutate_block(f.body, m, false);
  return out;
}

CompileResult builtin_compile(const std::string& src, const CompilerSpec& cc,
                              const OptConfig& opt, const fs::path& out) {
  auto mutation = builtin_backend(cc.executable);
  if (!mutation) throw ToolNotFound("unknown builtin backend: " + cc.executable);
  auto start = std::chrono::steady_clock::now();
  CompileResult r;
  fs::path src_path = out;
  src_path.replace_extension(".c");
  r.command = compile_command(cc, opt, src_path.string(), out.string());
  r.binary = out;
  try {
    Program p = parse_minic(src);
    if (opt.level != OptLevel::O0) p = apply_mutation(p, *mutation);
    std::ofstream bin(out, std::ios::binary);
    bin << kMagic << emit_c(p);
    r.ok = static_cast<bool>(bin);
    if (!r.ok) r.log = "cannot write " + out.string();
  } catch (const Error& e) {
    r.exit_code = 1;
    r.log = e.what();
  }
  if (!r.ok && r.exit_code == 0) r.exit_code = 1;
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

bool is_builtin_binary(const fs::path& bin) {
  std::ifstream in(bin, std::ios::binary);
  std::string head(kMagic.size(), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  return in && head == kMagic;
}

ExecRecord builtin_run(const fs::path& bin, int timeout_seconds) {
  (void)timeout_seconds;
  auto start = std::chrono::steady_clock::now();
  std::ifstream in(bin, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  std::string text = os.str().substr(kMagic.size());
  ExecRecord r;
  ExecOutcome o = execute(parse_minic(text));
  switch (o.status) {
    case ExecStatus::ok: r.stdout_bytes = o.stdout_bytes; break;
    case ExecStatus::trap: r.signal = trap_signal(*o.trap); break;
    case ExecStatus::step_budget_exhausted: r.timed_out = true; break;
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace loopmorph
