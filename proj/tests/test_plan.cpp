#include <doctest.h>

#include <random>

#include "nafas/catalog.hpp"
#include "nafas/errors.hpp"
#include "nafas/plan.hpp"
#include "support/property.hpp"
#include "support/rational.hpp"
#include "support/table_data.hpp"

using namespace nafas;

TEST_CASE("unit multiplication: 1:0:3:0 at unit 3 gives 3s inhale, 9s exhale") {
    LevelSpec spec{100, 0, 300, 0, 300, 35};
    SessionPlan plan = build_plan(spec, 3000);

    REQUIRE(plan.steps.size() == 1 + 35 * 2);
    CHECK(plan.steps[0] == PlanStep{StepKind::Preparation, 3000, kPrepCycle});
    CHECK(plan.steps[1] == PlanStep{StepKind::Inhale, 3000, 0});
    CHECK(plan.steps[2] == PlanStep{StepKind::Exhale, 9000, 0});
    CHECK(plan.steps.back() == PlanStep{StepKind::Exhale, 9000, 34});
    CHECK(plan.total_ms == 3000 + 35 * 12000);
    CHECK(plan.total_ms == 423000);
}

TEST_CASE("fractional ratios expand exactly") {
    // oracle: exact rational arithmetic
    REQUIRE(oracle::phase_ms("0.66", "3") == 1980);
    REQUIRE(oracle::session_ms("3", "0", "0.66", "0", "3", 20, 0) == 219600);

    LevelSpec anti_stress_b{300, 0, 66, 0, 300, 20};
    SessionPlan plan = build_plan(anti_stress_b, 0);
    REQUIRE(plan.steps.size() == 40);
    CHECK(plan.steps[0] == PlanStep{StepKind::Inhale, 9000, 0});
    CHECK(plan.steps[1] == PlanStep{StepKind::Exhale, 1980, 0});
    CHECK(plan.total_ms == 219600);
}

TEST_CASE("all four phases in order") {
    REQUIRE(oracle::session_ms("2", "1.1", "2.2", "0.8", "2", 1, 0) == 12200);

    LevelSpec cigarette_b{200, 110, 220, 80, 200, 1};
    SessionPlan plan = build_plan(cigarette_b, 0);
    REQUIRE(plan.steps.size() == 4);
    CHECK(plan.steps[0] == PlanStep{StepKind::Inhale, 4000, 0});
    CHECK(plan.steps[1] == PlanStep{StepKind::Retain, 2200, 0});
    CHECK(plan.steps[2] == PlanStep{StepKind::Exhale, 4400, 0});
    CHECK(plan.steps[3] == PlanStep{StepKind::Sustain, 1600, 0});
    CHECK(plan.total_ms == 12200);
}

TEST_CASE("total_duration identities on table rows") {
    REQUIRE(oracle::session_ms("4", "7", "8", "0", "1", 4, 0) == 76000);
    REQUIRE(oracle::session_ms("5", "0", "5", "5", "1", 4, 0) == 60000);

    CHECK(total_duration(build_plan(LevelSpec{400, 700, 800, 0, 100, 4}, 0)) == 76000);
    CHECK(total_duration(build_plan(LevelSpec{500, 0, 500, 500, 100, 4}, 0)) == 60000);

    // smallest legal plan
    CHECK(total_duration(build_plan(LevelSpec{100, 0, 100, 0, 100, 1}, 0)) == 2000);
}

TEST_CASE("plan layout invariants") {
    SUBCASE("preparation leads exactly when prep > 0") {
        LevelSpec spec{100, 0, 300, 0, 300, 2};
        CHECK(build_plan(spec, 1).steps[0].kind == StepKind::Preparation);
        SessionPlan no_prep = build_plan(spec, 0);
        CHECK(no_prep.steps[0].kind == StepKind::Inhale);
        CHECK(no_prep.steps[0].cycle == 0);
    }
    SUBCASE("invalid specs are rejected") {
        CHECK_THROWS_AS(build_plan(LevelSpec{0, 0, 300, 0, 300, 2}, 0), InvalidSpec);
        CHECK_THROWS_AS(build_plan(LevelSpec{100, 0, 300, 0, 300, 0}, 0), InvalidSpec);
        CHECK_THROWS_AS(build_plan(LevelSpec{100, 0, 300, 0, 300, 2}, -1), InvalidSpec);
    }
    SUBCASE("sub-millisecond phases are rejected, not rounded") {
        // 0.33 x 0.33s = 108.9 ms
        CHECK_THROWS_AS(build_plan(LevelSpec{33, 0, 100, 0, 33, 1}, 0), InvalidSpec);
    }
}

namespace {

std::int64_t oracle_total(const prop::SpecCase& c) {
    const LevelSpec& s = c.spec;
    return c.prep_ms + s.cycles * ((ratio_sum_centi(s) * s.unit_centi) / 10);
}

bool cycle_order_ok(const SessionPlan& plan) {
    // Within each cycle the kinds must form a subsequence of I, R, E, S and
    // cycle indices must be non-decreasing, covering 0..cycles-1.
    int last_cycle = kPrepCycle;
    int last_rank = -1;
    auto rank = [](StepKind k) {
        switch (k) {
            case StepKind::Inhale: return 0;
            case StepKind::Retain: return 1;
            case StepKind::Exhale: return 2;
            case StepKind::Sustain: return 3;
            default: return -1;
        }
    };
    for (std::size_t i = (plan.preparation_ms > 0 ? 1 : 0); i < plan.steps.size(); ++i) {
        const PlanStep& step = plan.steps[i];
        if (step.kind == StepKind::Preparation) return false;
        if (step.cycle < last_cycle) return false;
        if (step.cycle == last_cycle && rank(step.kind) <= last_rank) return false;
        if (step.cycle > last_cycle && step.cycle != last_cycle + 1) return false;
        last_rank = rank(step.kind);
        last_cycle = step.cycle;
    }
    return plan.steps.empty() || plan.steps.back().cycle == plan.cycles - 1;
}

}  // namespace

TEST_CASE("property: exact total, phase skip, ordering, unit doubling") {
    std::mt19937_64 rng(20260810);
    const int kCases = 1200;

    auto all_properties = [](const prop::SpecCase& c) {
        SessionPlan plan = build_plan(c.spec, c.prep_ms);

        // exact integer total, no rounding term
        if (total_duration(plan) != oracle_total(c)) return false;
        if (plan.total_ms != total_duration(plan)) return false;

        // phase appears iff its ratio > 0; inhale count == exhale count == cycles
        std::int64_t counts[5] = {};
        for (const auto& step : plan.steps) counts[static_cast<int>(step.kind)]++;
        auto expect = [&](StepKind kind, std::int64_t ratio) {
            return counts[static_cast<int>(kind)] == (ratio > 0 ? c.spec.cycles : 0);
        };
        if (!expect(StepKind::Inhale, c.spec.inhale_centi)) return false;
        if (!expect(StepKind::Retain, c.spec.retain_centi)) return false;
        if (!expect(StepKind::Exhale, c.spec.exhale_centi)) return false;
        if (!expect(StepKind::Sustain, c.spec.sustain_centi)) return false;
        if (counts[static_cast<int>(StepKind::Preparation)] != (c.prep_ms > 0 ? 1 : 0))
            return false;

        if (!cycle_order_ok(plan)) return false;

        // doubling the unit exactly doubles every phase and the active total
        prop::SpecCase doubled = c;
        doubled.spec.unit_centi *= 2;
        SessionPlan plan2 = build_plan(doubled.spec, c.prep_ms);
        if (plan2.total_ms - c.prep_ms != 2 * (plan.total_ms - c.prep_ms)) return false;
        std::size_t offset = c.prep_ms > 0 ? 1 : 0;
        if (plan2.steps.size() != plan.steps.size()) return false;
        for (std::size_t i = offset; i < plan.steps.size(); ++i) {
            if (plan2.steps[i].duration_ms != 2 * plan.steps[i].duration_ms) return false;
        }
        return true;
    };

    auto counterexample = prop::check(rng, kCases, all_properties);
    CHECK(!counterexample.has_value());
}

TEST_CASE("shrinker reduces a seeded mutation to the minimal counterexample") {
    // Deliberately wrong total: one extra millisecond whenever sustain > 0.
    auto mutated_total = [](const prop::SpecCase& c) {
        return oracle_total(c) + (c.spec.sustain_centi > 0 ? 1 : 0);
    };
    auto property = [&](const prop::SpecCase& c) {
        return mutated_total(c) == total_duration(build_plan(c.spec, c.prep_ms));
    };

    std::mt19937_64 rng(99);
    auto counterexample = prop::check(rng, 2000, property);
    REQUIRE(counterexample.has_value());

    prop::SpecCase minimal{{1, 0, 1, 1, 10, 1}, 0};
    CHECK(*counterexample == minimal);
    CHECK(prop::shrink_candidates(*counterexample).size() > 0);
}

TEST_CASE("json plan shape") {
    Catalog catalog = Catalog::with_builtins();
    SessionPlan plan =
        build_plan(catalog.spec("clear-mind", Level::Beginner), 3000, "clear-mind",
                   Level::Beginner);
    std::string json = plan_to_json(plan);
    CHECK(json.find("\"program\": \"clear-mind\"") != std::string::npos);
    CHECK(json.find("\"level\": \"beginner\"") != std::string::npos);
    CHECK(json.find("\"total_ms\": 423000") != std::string::npos);
    CHECK(json.find("\"cycle\": null") != std::string::npos);  // preparation sentinel
    CHECK(json.back() == '\n');
}

TEST_CASE("every table variant expands to the oracle total") {
    Catalog catalog = Catalog::with_builtins();
    for (const auto& row : table::kRows) {
        CAPTURE(row.id);
        CAPTURE(row.level);
        std::int64_t expected = oracle::session_ms(row.inhale, row.retain, row.exhale,
                                                   row.sustain, row.unit_seconds, row.cycles, 0);
        SessionPlan plan = build_plan(catalog.spec(row.id, parse_level(row.level)), 0);
        CHECK(plan.total_ms == expected);
    }
}
