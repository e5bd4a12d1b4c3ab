// SPDX-License-Identifier: Apache-2.0

#include <set>

#include "doctest.h"
#include "loopmorph/construct.hpp"
#include "loopmorph/emit.hpp"
#include "loopmorph/errors.hpp"
#include "loopmorph/harness/pipeline.hpp"
#include "loopmorph/interp.hpp"
#include "loopmorph/transform.hpp"
#include "loopmorph/walk.hpp"
#include "support.hpp"

using namespace loopmorph;

namespace {

std::set<std::uint64_t> factors(const std::vector<UnrollPlan>& plans) {
  std::set<std::uint64_t> out;
  for (const auto& p : plans) out.insert(p.k);
  return out;
}

bool brute_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d < n; ++d)
    if (n % d == 0) return false;
  return true;
}

const char* kLicm =
    "  /*@loop:L0*/ for (int32_t i0 = 0; i0 < 4; i0 += 1) {\n"
    "    int32_t t0 = safe_add_i32(g0, 5);\n"
    "    g1 += t0;\n"
    "EXTRA  }\n  lm_fold32(g1);";

ConstructRecipe licm_recipe() {
  ConstructRecipe r;
  r.kind = TransformKind::licm;
  r.loop_ids = {"L0"};
  r.inserted_paths = {"main/0/0/0"};
  r.invariant_expr = parse_expr("safe_add_i32(g0, 5)");
  return r;
}

Program with_extra(const char* tmpl, const std::string& extra, const std::string& globals) {
  std::string body = tmpl;
  body.replace(body.find("EXTRA"), 5, extra);
  return lmtest::program(globals, body);
}

const std::string kGlobals = "static int32_t g0 = 3;\nstatic int32_t g1 = 0;";

}  // namespace

TEST_CASE("unroll plans for small trip counts") {
  CHECK(plan_unroll(1).empty());
  CHECK(plan_unroll(2).empty());
  CHECK(plan_unroll(3).empty());
  CHECK(factors(plan_unroll(12)) == std::set<std::uint64_t>{2, 3, 4, 6, 12});
  for (const auto& p : plan_unroll(12)) CHECK_FALSE(p.split);

  auto seven = plan_unroll(7);
  CHECK(factors(seven) == std::set<std::uint64_t>{2, 3, 6});
  for (const auto& p : seven) {
    REQUIRE(p.split);
    CHECK(p.split->m == 6);
    CHECK(p.split->boundary == 1);
  }
  auto thirteen = plan_unroll(13);
  CHECK(factors(thirteen) == std::set<std::uint64_t>{2, 3, 4, 6, 12});
  for (const auto& p : thirteen) CHECK(p.split->m == 12);

  CHECK(plan_unroll(12, 4).size() == 3);
  CHECK(plan_unroll(7)[1].variant() == "k3_split6");
  CHECK(plan_unroll(12)[2].variant() == "k4");
  CHECK(largest_composite_below(7) == 6);
  CHECK(largest_composite_below(5) == 4);
  CHECK_FALSE(largest_composite_below(4));
}

TEST_CASE("unroll plans match brute-force divisors") {
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    CHECK(is_prime(n) == brute_prime(n));
    auto plans = plan_unroll(n, kDefaultKMax);
    std::set<std::uint64_t> want;
    if (n >= 4) {
      std::uint64_t base = n;
      if (brute_prime(n)) {
        base = n - 1;
        while (brute_prime(base)) --base;
      }
      for (std::uint64_t k = 2; k <= std::min(base, kDefaultKMax); ++k)
        if (base % k == 0) want.insert(k);
      for (const auto& p : plans) {
        CHECK(p.n == n);
        CHECK(p.split.has_value() == brute_prime(n));
        if (p.split) CHECK(p.split->m + p.split->boundary == n);
      }
    }
    CHECK(factors(plans) == want);
  }
}

TEST_CASE("unroll plan JSON round trip") {
  for (const auto& p : plan_unroll(13)) CHECK(unroll_plan_from_json(to_json(p)) == p);
}

TEST_CASE("unrolling by a divisor keeps trips and statement counts") {
  Program p = lmtest::program(kGlobals,
                              "  /*@loop:L0*/ for (int32_t i0 = 0; i0 < 12; i0 += 1) {\n"
                              "    g1 += i0;\n    g0 ^= g1;\n  }\n  lm_fold32(g1);\n  lm_fold32(g0);");
  UnrollPlan plan{"L0", 12, 4, std::nullopt};
  Program t = apply_unroll(p, plan);
  ExecOutcome a = execute(p), b = execute(t);
  REQUIRE(b.status == ExecStatus::ok);
  CHECK(a.checksum == b.checksum);
  CHECK(b.profile.trip_counts.at("L0") == 3);
  CHECK(b.profile.stmt_exec.size() > a.profile.stmt_exec.size());
  CHECK_THROWS_AS(apply_unroll(p, UnrollPlan{"L0", 10, 2, std::nullopt}), PlanMismatch);
  CHECK_THROWS_AS(apply_unroll(p, UnrollPlan{"L0", 12, 5, std::nullopt}), PlanMismatch);
}

TEST_CASE("unrolling a prime trip count splits off a boundary loop") {
  Program p = lmtest::program(kGlobals,
                              "  /*@loop:L0*/ for (int32_t i0 = 20; i0 > 6; i0 -= 2) {\n"
                              "    g1 = safe_mul_i32(g1, 3) ^ i0;\n  }\n  lm_fold32(g1);");
  auto plans = plan_unroll(7);
  for (const auto& plan0 : plans) {
    UnrollPlan plan = plan0;
    plan.loop_id = "L0";
    Program t = apply_unroll(p, plan);
    ExecOutcome b = execute(t);
    REQUIRE(b.status == ExecStatus::ok);
    CHECK(b.checksum == execute(p).checksum);
    CHECK(b.profile.trip_counts.at("L0") == 6 / plan.k);
    CHECK(b.profile.trip_counts.at("L0.b") == 1);
  }
}

TEST_CASE("licm hoists the declaration and detects violations") {
  Program p = with_extra(kLicm, "", kGlobals);
  ConstructRecipe r = licm_recipe();
  REQUIRE(check_preconditions(p, r).satisfied);
  Program t = apply_licm(p, r);
  CHECK(std::holds_alternative<Decl>(t.find_function("main")->body.stmts[0].node));
  CHECK(soundness_gate(p, t).sound);

  auto varying = check_preconditions(with_extra(kLicm, "    g0 += i0;\n", kGlobals), r);
  CHECK_FALSE(varying.satisfied);
  CHECK(varying.violations.at(0).rule == "licm.1");
  auto written = check_preconditions(with_extra(kLicm, "    t0 = 1;\n", kGlobals), r);
  CHECK_FALSE(written.satisfied);
  CHECK(written.violations.at(0).rule == "licm.2");
  CHECK_THROWS_AS(apply_licm(with_extra(kLicm, "    t0 = 1;\n", kGlobals), r), PreconditionViolated);

  ConstructRecipe wrong = r;
  wrong.invariant_expr = parse_expr("g0");
  CHECK_THROWS_AS(check_preconditions(p, wrong), RecipeMismatch);
}

TEST_CASE("unswitch requires a loop-invariant condition") {
  const char* tmpl =
      "  /*@loop:L0*/ for (int32_t i0 = 0; i0 < 4; i0 += 1) {\n"
      "EXTRA    if (g0 > 2) {\n      g1 += i0;\n    } else {\n      g1 ^= 7;\n    }\n"
      "  }\n  lm_fold32(g1);";
  ConstructRecipe r;
  r.kind = TransformKind::unswitch;
  r.loop_ids = {"L0"};
  r.inserted_paths = {"main/0/0/0"};
  r.invariant_expr = parse_expr("g0 > 2");
  Program p = with_extra(tmpl, "", kGlobals);
  REQUIRE(check_preconditions(p, r).satisfied);
  Program t = apply_unswitch(p, r);
  CHECK(find_loop(t, "L0.t"));
  CHECK(find_loop(t, "L0.e"));
  CHECK(soundness_gate(p, t).sound);

  ConstructRecipe r2 = r;
  r2.inserted_paths = {"main/0/0/1"};
  auto rep = check_preconditions(with_extra(tmpl, "    g0 += 1;\n", kGlobals), r2);
  CHECK_FALSE(rep.satisfied);
  CHECK(rep.violations.at(0).rule == "unswitch.invariant_cond");
}

TEST_CASE("fusion requires matching headers and forward dependences") {
  const std::string globals = kGlobals + "\nstatic int32_t fa0[4] = {0};\nstatic int32_t fb0[4] = {0};";
  Program shape = lmtest::program(globals,
                                 "  /*@loop:L0*/ for (int32_t i0 = 0; i0 < 4; i0 += 1) {\n"
                                 "    g1 += 1;\n  }");
  const ForLoop& shape_loop = *as_loop(stmt_at(shape, *find_loop(shape, "L0")));
  const std::string ni = emit_expr(normalized_index(shape_loop, var("i0")));
  const std::string nj = emit_expr(normalized_index(shape_loop, var("j0")));
  auto make = [&](const std::string& second_header, const std::string& second_body) {
    return lmtest::program(globals,
                           "  /*@loop:L0*/ for (int32_t i0 = 0; i0 < 4; i0 += 1) {\n"
                           "    fa0[" + ni + "] = safe_add_i32(g0, i0);\n  }\n"
                           "  /*@loop:L0.f*/ for (int32_t " + second_header + ") {\n" + second_body +
                           "  }\n  lm_fold32(fb0[3]);");
  };
  ConstructRecipe r;
  r.kind = TransformKind::fusion;
  r.loop_ids = {"L0", "L0.f"};
  r.arrays = std::pair<std::string, std::string>{"fa0", "fb0"};

  Program ok = make("j0 = 0; j0 < 4; j0 += 1", "    fb0[" + nj + "] = safe_mul_i32(fa0[" + nj + "], 3);\n");
  REQUIRE(check_preconditions(ok, r).satisfied);
  Program fused = apply_fusion(ok, r);
  CHECK_FALSE(find_loop(fused, "L0.f"));
  CHECK(soundness_gate(ok, fused).sound);

  auto header = check_preconditions(make("j0 = 0; j0 < 5; j0 += 1", "    fb0[0] = 1;\n"), r);
  CHECK_FALSE(header.satisfied);
  CHECK(header.violations.at(0).rule == "fusion.same_header");

  // Reading a later element of the producer's array is a backward dependence once fused.
  auto backward = check_preconditions(
      make("j0 = 0; j0 < 4; j0 += 1", "    fb0[" + nj + "] = fa0[safe_mod_i32(j0 + 1, 4)];\n"), r);
  CHECK_FALSE(backward.satisfied);
  CHECK(backward.violations.at(0).rule == "fusion.forward_dep");
}

TEST_CASE("every variant of constructed originals is sound") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Program p = lmtest::seed_program(seed);
    for (TransformKind kind : kAllTransforms) {
      std::pair<Program, ConstructRecipe> built;
      try {
        built = construct_original(p, kind, seed);
      } catch (const Error&) {
        continue;
      }
      for (const auto& v : transform_all(built.first, built.second)) {
        auto gate = soundness_gate(built.first, v.program);
        CHECK_MESSAGE(gate.sound, transform_name(kind), " seed ", seed, " ", v.name, ": ", gate.detail);
        CHECK(v.plan["kind"] == std::string(transform_name(kind)));
      }
    }
  }
}
