#pragma once

#include <cstdint>
#include <vector>

#include "nafas/clock.hpp"
#include "nafas/events.hpp"
#include "nafas/plan.hpp"

namespace nafas {

enum class EnginePhase { Preparing, Running, Paused, Finished, Aborted };

// Complete engine state. The transition function is pure over this struct,
// so everything that influences a transition lives here, including the
// pause/active accounting.
struct EngineState {
    EnginePhase phase = EnginePhase::Running;
    std::size_t step_index = 0;
    std::int64_t deadline_ms = 0;         // absolute end of the current step (Preparing/Running)
    std::int64_t remaining_ms = 0;        // of the interrupted step (Paused)
    std::int64_t pause_started_ms = 0;    // (Paused)
    std::int64_t session_started_ms = 0;
    std::int64_t paused_total_ms = 0;
    std::int64_t completed_cycles = 0;

    bool terminal() const {
        return phase == EnginePhase::Finished || phase == EnginePhase::Aborted;
    }
};

struct EngineInput {
    enum class Kind { DeadlineReached, Command, ClockTick };

    Kind kind;
    std::int64_t at_ms;
    Command command = Command::TogglePause;  // meaningful for Kind::Command

    static EngineInput deadline_reached(std::int64_t at);
    static EngineInput user_command(Command c, std::int64_t at);
    static EngineInput clock_tick(std::int64_t at);
};

struct Transition {
    EngineState state;
    std::vector<SessionEvent> events;
    bool illegal = false;  // input rejected; state unchanged, no events
};

enum class Outcome { Completed, AbortedByUser };

struct SessionResult {
    Outcome outcome = Outcome::Completed;
    std::int64_t completed_cycles = 0;
    std::int64_t active_ms = 0;  // session time excluding pauses
    std::int64_t paused_ms = 0;
};

// State + initial StepStarted event for a fresh session starting at start_ms.
std::pair<EngineState, SessionEvent> start_session(const SessionPlan& plan, std::int64_t start_ms);

// Pure, deterministic transition. Terminal states absorb every input;
// DeadlineReached while Paused is the one illegal combination and leaves the
// state unchanged with illegal = true.
Transition step_transition(const SessionPlan& plan, const EngineState& state,
                           const EngineInput& input);

// Drives step_transition against the clock until a terminal state. All waits
// are on absolute deadlines derived from the session start, so per-step
// timing error never accumulates; pausing stores the remaining time of the
// interrupted step and resuming schedules its end at now + remaining.
//
// Emits, in order: StepStarted/StepCompleted per step, CycleCompleted after
// each cycle's last step, Paused/Resumed as commanded, and exactly one of
// Finished or Aborted. Throws ClockFailure if the clock runs backwards and
// InvalidSpec for an empty plan.
SessionResult run_session(const SessionPlan& plan, Clock& clock, const EventSink& sink);

}  // namespace nafas
