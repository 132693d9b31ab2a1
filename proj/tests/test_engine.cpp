#include <doctest.h>

#include <random>
#include <sstream>

#include "nafas/catalog.hpp"
#include "nafas/engine.hpp"
#include "nafas/errors.hpp"
#include "support/table_data.hpp"

using namespace nafas;

namespace {

struct Recorded {
    std::vector<SessionEvent> events;
    SessionResult result;
};

Recorded run(const SessionPlan& plan, std::vector<VirtualClock::ScriptedCommand> script = {}) {
    Recorded r;
    VirtualClock clock(std::move(script));
    r.result = run_session(plan, clock, [&](const SessionEvent& e) { r.events.push_back(e); });
    return r;
}

// Checks the full event grammar plus the deadline law: scheduled end of step
// i is start + prefix(i) + pauses accrued before that start.
void check_grammar(const SessionPlan& plan, const std::vector<SessionEvent>& events) {
    REQUIRE(!events.empty());
    REQUIRE(events[0].kind == EventKind::StepStarted);

    const std::int64_t start = events[0].at_ms;
    std::int64_t paused_total = 0;
    std::int64_t prefix = 0;
    std::size_t next_step = 0;
    std::int64_t completed_cycles = 0;
    bool in_pause = false;
    bool step_open = false;
    bool terminal_seen = false;
    std::int64_t last_pause_at = 0;

    for (const auto& event : events) {
        REQUIRE(!terminal_seen);  // nothing after the terminal event
        switch (event.kind) {
            case EventKind::StepStarted: {
                REQUIRE(!step_open);
                REQUIRE(event.step_index == static_cast<int>(next_step));
                REQUIRE(next_step < plan.steps.size());
                const PlanStep& step = plan.steps[next_step];
                REQUIRE(event.step_kind == step.kind);
                REQUIRE(event.cycle == step.cycle);
                prefix += step.duration_ms;
                REQUIRE(event.deadline_ms == start + prefix + paused_total);
                step_open = true;
                break;
            }
            case EventKind::StepCompleted:
                REQUIRE(step_open);
                REQUIRE(!in_pause);
                REQUIRE(event.step_index == static_cast<int>(next_step));
                step_open = false;
                ++next_step;
                break;
            case EventKind::CycleCompleted:
                REQUIRE(!step_open);
                REQUIRE(event.cycle == completed_cycles);
                ++completed_cycles;
                break;
            case EventKind::Paused:
                REQUIRE(!in_pause);  // never nested
                in_pause = true;
                last_pause_at = event.at_ms;
                break;
            case EventKind::Resumed:
                REQUIRE(in_pause);
                REQUIRE(event.pause_duration_ms == event.at_ms - last_pause_at);
                paused_total += event.pause_duration_ms;
                in_pause = false;
                break;
            case EventKind::Aborted:
                REQUIRE(event.completed_cycles == completed_cycles);
                terminal_seen = true;
                break;
            case EventKind::Finished:
                REQUIRE(next_step == plan.steps.size());
                REQUIRE(completed_cycles == plan.cycles);
                terminal_seen = true;
                break;
        }
    }
    REQUIRE(terminal_seen);
}

SessionPlan minimal_plan() {
    // Inhale 1000, Exhale 1000
    return build_plan(LevelSpec{100, 0, 100, 0, 100, 1}, 0);
}

}  // namespace

TEST_CASE("clear mind beginner: exact event schedule under virtual time") {
    Catalog catalog = Catalog::with_builtins();
    SessionPlan plan = build_plan(catalog.spec("clear-mind", Level::Beginner), 3000);
    Recorded r = run(plan);

    std::size_t started = 0;
    for (const auto& e : r.events) {
        if (e.kind == EventKind::StepStarted) ++started;
    }
    CHECK(started == 71);  // 1 prep + 35 x 2

    check_grammar(plan, r.events);
    CHECK(r.events.back().kind == EventKind::Finished);
    CHECK(r.events.back().at_ms == 423000);
    CHECK(r.events.back().active_ms == 423000);
    CHECK(r.result.outcome == Outcome::Completed);
    CHECK(r.result.completed_cycles == 35);
    CHECK(r.result.active_ms == plan.total_ms);
    CHECK(r.result.paused_ms == 0);
}

TEST_CASE("pause shifts every later deadline by the pause duration") {
    SessionPlan plan = minimal_plan();
    Recorded r = run(plan, {{500, Command::TogglePause}, {2500, Command::TogglePause}});

    check_grammar(plan, r.events);
    REQUIRE(r.events.back().kind == EventKind::Finished);
    CHECK(r.events.back().at_ms == 4000);
    CHECK(r.result.active_ms == 2000);
    CHECK(r.result.paused_ms == 2000);

    // the interrupted inhale completes at 3000, the exhale at 4000
    std::vector<std::int64_t> completions;
    for (const auto& e : r.events) {
        if (e.kind == EventKind::StepCompleted) completions.push_back(e.at_ms);
    }
    CHECK(completions == std::vector<std::int64_t>{3000, 4000});
}

TEST_CASE("abort during the first step") {
    SessionPlan plan = minimal_plan();
    Recorded r = run(plan, {{700, Command::Abort}});

    REQUIRE(r.events.back().kind == EventKind::Aborted);
    CHECK(r.events.back().completed_cycles == 0);
    CHECK(r.result.outcome == Outcome::AbortedByUser);
    CHECK(r.result.completed_cycles == 0);

    std::size_t started = 0;
    for (const auto& e : r.events) {
        if (e.kind == EventKind::StepStarted) ++started;
    }
    CHECK(started == 1);  // no further steps after abort
}

TEST_CASE("abort while paused accounts the final pause") {
    SessionPlan plan = minimal_plan();
    Recorded r = run(plan, {{400, Command::TogglePause}, {900, Command::Abort}});

    REQUIRE(r.events.back().kind == EventKind::Aborted);
    CHECK(r.events.back().at_ms == 900);
    CHECK(r.result.paused_ms == 500);
    CHECK(r.result.active_ms == 400);
    CHECK(r.result.active_ms + r.result.paused_ms == 900);
}

TEST_CASE("repeated pause/resume leaves the active total exact") {
    Catalog catalog = Catalog::with_builtins();
    SessionPlan plan = build_plan(catalog.spec("relax2", Level::Beginner), 1000);
    // three pauses of 100, 250, 4000 ms
    Recorded r = run(plan, {
                               {500, Command::TogglePause},
                               {600, Command::TogglePause},
                               {20000, Command::TogglePause},
                               {20250, Command::TogglePause},
                               {40000, Command::TogglePause},
                               {44000, Command::TogglePause},
                           });

    check_grammar(plan, r.events);
    REQUIRE(r.events.back().kind == EventKind::Finished);
    CHECK(r.result.outcome == Outcome::Completed);
    CHECK(r.result.active_ms == plan.total_ms);
    CHECK(r.result.paused_ms == 100 + 250 + 4000);
    CHECK(r.events.back().at_ms == plan.total_ms + 4350);
}

TEST_CASE("virtual-clock sweep over every built-in variant") {
    Catalog catalog = Catalog::with_builtins();
    for (const auto& row : table::kRows) {
        CAPTURE(row.id);
        CAPTURE(row.level);
        SessionPlan plan = build_plan(catalog.spec(row.id, parse_level(row.level)), 3000);
        Recorded r = run(plan);
        check_grammar(plan, r.events);
        CHECK(r.events.back().kind == EventKind::Finished);
        CHECK(r.events.back().at_ms == plan.total_ms);
        CHECK(r.result.active_ms == plan.total_ms);
    }
}

TEST_CASE("fuzzed pause schedules conserve time exactly") {
    std::mt19937_64 rng(4242);
    Catalog catalog = Catalog::with_builtins();
    const auto& programs = catalog.programs();

    for (int trial = 0; trial < 200; ++trial) {
        const Program& program = programs[rng() % programs.size()];
        Level level = kAllLevels[rng() % 3];
        SessionPlan plan = build_plan(program.spec(level), rng() % 2 == 0 ? 0 : 3000);

        std::vector<VirtualClock::ScriptedCommand> script;
        std::int64_t t = 0;
        int toggles = static_cast<int>(rng() % 4) * 2;  // even: never left paused
        for (int i = 0; i < toggles; ++i) {
            t += 1 + static_cast<std::int64_t>(rng() % (plan.total_ms / 2 + 1));
            script.push_back({t, Command::TogglePause});
        }
        bool abort = rng() % 3 == 0;
        if (abort) {
            t += 1 + static_cast<std::int64_t>(rng() % plan.total_ms);
            script.push_back({t, Command::Abort});
        }

        Recorded r = run(plan, script);
        check_grammar(plan, r.events);
        const SessionEvent& last = r.events.back();
        // conservation: active + paused = terminal instant - start, exactly
        CHECK(r.result.active_ms + r.result.paused_ms == last.at_ms);
        if (last.kind == EventKind::Finished) {
            CHECK(r.result.active_ms == plan.total_ms);
        }
    }
}

TEST_CASE("determinism: identical script, identical trace bytes") {
    Catalog catalog = Catalog::with_builtins();
    SessionPlan plan = build_plan(catalog.spec("calming2", Level::Beginner), 3000);
    std::vector<VirtualClock::ScriptedCommand> script{{1500, Command::TogglePause},
                                                      {2250, Command::TogglePause},
                                                      {9000, Command::TogglePause},
                                                      {9001, Command::TogglePause}};

    auto trace = [&] {
        std::ostringstream out;
        VirtualClock clock(script);
        run_session(plan, clock,
                    [&](const SessionEvent& e) { out << event_to_json_line(e) << "\n"; });
        return out.str();
    };

    std::string first = trace();
    std::string second = trace();
    CHECK(first == second);
    CHECK(!first.empty());
}

TEST_CASE("a clock that runs backwards aborts the session") {
    class BrokenClock final : public Clock {
    public:
        std::int64_t now_ms() override { return times_[std::min(calls_++, 3)]; }
        std::optional<Command> wait_until(std::int64_t) override { return std::nullopt; }
        Command wait_command() override { return Command::Abort; }

    private:
        int calls_ = 0;
        std::int64_t times_[4] = {100, 50, 50, 50};  // goes backwards after start
    };

    SessionPlan plan = minimal_plan();
    BrokenClock clock;
    CHECK_THROWS_AS(run_session(plan, clock, [](const SessionEvent&) {}), ClockFailure);
}

TEST_CASE("step_transition: pause stores the exact remaining time") {
    // 1980 ms exhale, interrupted 600 ms in
    SessionPlan plan = build_plan(LevelSpec{300, 0, 66, 0, 300, 1}, 0);
    EngineState state;
    state.phase = EnginePhase::Running;
    state.step_index = 1;  // the exhale
    state.deadline_ms = 9000 + 1980;
    state.session_started_ms = 0;

    Transition t = step_transition(plan, state,
                                   EngineInput::user_command(Command::TogglePause, 9000 + 600));
    CHECK(!t.illegal);
    CHECK(t.state.phase == EnginePhase::Paused);
    CHECK(t.state.remaining_ms == 1380);
    REQUIRE(t.events.size() == 1);
    CHECK(t.events[0].kind == EventKind::Paused);
}

TEST_CASE("step_transition: resume rebuilds the deadline from now + remaining") {
    SessionPlan plan = minimal_plan();
    EngineState state;
    state.phase = EnginePhase::Paused;
    state.step_index = 0;
    state.remaining_ms = 640;
    state.pause_started_ms = 400;

    Transition t = step_transition(plan, state,
                                   EngineInput::user_command(Command::TogglePause, 1400));
    CHECK(t.state.phase == EnginePhase::Running);
    CHECK(t.state.deadline_ms == 1400 + 640);
    CHECK(t.state.paused_total_ms == 1000);
    REQUIRE(t.events.size() == 1);
    CHECK(t.events[0].kind == EventKind::Resumed);
    CHECK(t.events[0].pause_duration_ms == 1000);
}

TEST_CASE("step_transition: terminal states absorb commands, paused rejects deadlines") {
    SessionPlan plan = minimal_plan();

    EngineState finished;
    finished.phase = EnginePhase::Finished;
    Transition t = step_transition(plan, finished,
                                   EngineInput::user_command(Command::TogglePause, 5000));
    CHECK(!t.illegal);
    CHECK(t.events.empty());
    CHECK(t.state.phase == EnginePhase::Finished);

    EngineState paused;
    paused.phase = EnginePhase::Paused;
    paused.step_index = 0;
    paused.remaining_ms = 10;
    Transition bad = step_transition(plan, paused, EngineInput::deadline_reached(123));
    CHECK(bad.illegal);
    CHECK(bad.events.empty());
    CHECK(bad.state.phase == EnginePhase::Paused);
    CHECK(bad.state.remaining_ms == 10);

    Transition tick = step_transition(plan, paused, EngineInput::clock_tick(124));
    CHECK(!tick.illegal);
    CHECK(tick.events.empty());
}

TEST_CASE("preparation runs in the Preparing phase") {
    SessionPlan plan = build_plan(LevelSpec{100, 0, 100, 0, 100, 1}, 500);
    auto [state, event] = start_session(plan, 0);
    CHECK(state.phase == EnginePhase::Preparing);
    CHECK(event.step_kind == StepKind::Preparation);
    CHECK(event.deadline_ms == 500);

    Transition t = step_transition(plan, state, EngineInput::deadline_reached(500));
    CHECK(t.state.phase == EnginePhase::Running);
    CHECK(t.state.step_index == 1);
}
