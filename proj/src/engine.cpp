#include "nafas/engine.hpp"

#include <algorithm>

#include "nafas/errors.hpp"

namespace nafas {

namespace {

EnginePhase phase_for_step(const SessionPlan& plan, std::size_t step_index) {
    return plan.steps[step_index].kind == StepKind::Preparation ? EnginePhase::Preparing
                                                                : EnginePhase::Running;
}

bool last_step_of_cycle(const SessionPlan& plan, std::size_t step_index) {
    const PlanStep& step = plan.steps[step_index];
    if (step.cycle == kPrepCycle) return false;
    if (step_index + 1 == plan.steps.size()) return true;
    return plan.steps[step_index + 1].cycle != step.cycle;
}

bool executing(const EngineState& state) {
    return state.phase == EnginePhase::Preparing || state.phase == EnginePhase::Running;
}

}  // namespace

EngineInput EngineInput::deadline_reached(std::int64_t at) {
    return {Kind::DeadlineReached, at, Command::TogglePause};
}

EngineInput EngineInput::user_command(Command c, std::int64_t at) { return {Kind::Command, at, c}; }

EngineInput EngineInput::clock_tick(std::int64_t at) {
    return {Kind::ClockTick, at, Command::TogglePause};
}

std::pair<EngineState, SessionEvent> start_session(const SessionPlan& plan, std::int64_t start_ms) {
    if (plan.steps.empty()) throw InvalidSpec({"plan has no steps"});

    EngineState state;
    state.phase = phase_for_step(plan, 0);
    state.step_index = 0;
    state.deadline_ms = start_ms + plan.steps[0].duration_ms;
    state.session_started_ms = start_ms;

    SessionEvent started = SessionEvent::step_started(start_ms, 0, plan.steps[0].kind,
                                                      plan.steps[0].cycle, state.deadline_ms);
    return {state, started};
}

Transition step_transition(const SessionPlan& plan, const EngineState& state,
                           const EngineInput& input) {
    Transition t{state, {}, false};

    // Terminal states absorb everything.
    if (state.terminal()) return t;

    if (input.kind == EngineInput::Kind::ClockTick) return t;

    if (input.kind == EngineInput::Kind::DeadlineReached) {
        if (!executing(state)) {
            t.illegal = true;  // a deadline cannot fire while paused
            return t;
        }

        const std::size_t i = state.step_index;
        t.events.push_back(SessionEvent::step_completed(input.at_ms, static_cast<int>(i)));
        if (last_step_of_cycle(plan, i)) {
            t.events.push_back(SessionEvent::cycle_completed(input.at_ms, plan.steps[i].cycle));
            t.state.completed_cycles += 1;
        }

        if (i + 1 < plan.steps.size()) {
            const PlanStep& next = plan.steps[i + 1];
            t.state.step_index = i + 1;
            // Absolute schedule: the next end extends the current one, so
            // wake-up lateness never accumulates.
            t.state.deadline_ms = state.deadline_ms + next.duration_ms;
            t.state.phase = phase_for_step(plan, i + 1);
            t.events.push_back(SessionEvent::step_started(input.at_ms, static_cast<int>(i + 1),
                                                          next.kind, next.cycle,
                                                          t.state.deadline_ms));
        } else {
            t.state.phase = EnginePhase::Finished;
            std::int64_t active =
                input.at_ms - state.session_started_ms - state.paused_total_ms;
            t.events.push_back(SessionEvent::finished(input.at_ms, active));
        }
        return t;
    }

    // input.kind == Command
    switch (input.command) {
        case Command::TogglePause:
            if (executing(state)) {
                t.state.phase = EnginePhase::Paused;
                t.state.remaining_ms = std::max<std::int64_t>(0, state.deadline_ms - input.at_ms);
                t.state.pause_started_ms = input.at_ms;
                t.events.push_back(SessionEvent::paused(input.at_ms));
            } else {  // Paused -> resume
                std::int64_t pause_duration = input.at_ms - state.pause_started_ms;
                t.state.paused_total_ms += pause_duration;
                t.state.deadline_ms = input.at_ms + state.remaining_ms;
                t.state.remaining_ms = 0;
                t.state.phase = phase_for_step(plan, state.step_index);
                t.events.push_back(SessionEvent::resumed(input.at_ms, pause_duration));
            }
            return t;
        case Command::Abort: {
            if (state.phase == EnginePhase::Paused) {
                t.state.paused_total_ms += input.at_ms - state.pause_started_ms;
            }
            t.state.phase = EnginePhase::Aborted;
            t.events.push_back(SessionEvent::aborted(input.at_ms, state.completed_cycles));
            return t;
        }
    }
    return t;
}

SessionResult run_session(const SessionPlan& plan, Clock& clock, const EventSink& sink) {
    auto [state, started] = start_session(plan, clock.now_ms());
    sink(started);

    std::int64_t last_seen = state.session_started_ms;
    auto observe = [&](std::int64_t now) {
        if (now < last_seen) {
            throw ClockFailure("clock ran backwards: " + std::to_string(now) + " after " +
                               std::to_string(last_seen));
        }
        last_seen = now;
    };

    while (!state.terminal()) {
        EngineInput input = EngineInput::clock_tick(last_seen);
        if (state.phase == EnginePhase::Paused) {
            Command command = clock.wait_command();
            std::int64_t now = clock.now_ms();
            observe(now);
            input = EngineInput::user_command(command, now);
        } else {
            std::optional<Command> command = clock.wait_until(state.deadline_ms);
            std::int64_t now = clock.now_ms();
            observe(now);
            input = command ? EngineInput::user_command(*command, now)
                            : EngineInput::deadline_reached(now);
        }

        Transition t = step_transition(plan, state, input);
        state = t.state;
        for (const auto& event : t.events) sink(event);
    }

    SessionResult result;
    result.completed_cycles = state.completed_cycles;
    result.paused_ms = state.paused_total_ms;
    result.active_ms = last_seen - state.session_started_ms - state.paused_total_ms;
    result.outcome =
        state.phase == EnginePhase::Finished ? Outcome::Completed : Outcome::AbortedByUser;
    return result;
}

}  // namespace nafas
