#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "nafas/plan.hpp"

namespace nafas {

enum class EventKind {
    StepStarted,
    StepCompleted,
    CycleCompleted,
    Paused,
    Resumed,
    Aborted,
    Finished,
};

// One session event. Which fields are meaningful depends on kind; at_ms is
// always the session clock instant of emission.
struct SessionEvent {
    EventKind kind;
    std::int64_t at_ms = 0;

    int step_index = -1;                 // StepStarted, StepCompleted
    StepKind step_kind{};                // StepStarted
    int cycle = kPrepCycle;              // StepStarted, CycleCompleted
    std::int64_t deadline_ms = 0;        // StepStarted: scheduled end of the step
    std::int64_t pause_duration_ms = 0;  // Resumed
    std::int64_t completed_cycles = 0;   // Aborted
    std::int64_t active_ms = 0;          // Finished

    static SessionEvent step_started(std::int64_t at, int step, StepKind kind, int cycle,
                                     std::int64_t deadline);
    static SessionEvent step_completed(std::int64_t at, int step);
    static SessionEvent cycle_completed(std::int64_t at, int cycle);
    static SessionEvent paused(std::int64_t at);
    static SessionEvent resumed(std::int64_t at, std::int64_t pause_duration);
    static SessionEvent aborted(std::int64_t at, std::int64_t completed_cycles);
    static SessionEvent finished(std::int64_t at, std::int64_t active);

    friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

// One compact JSON object, no trailing newline. Only the fields meaningful
// for the event's kind are present; this is the --trace line format.
std::string event_to_json_line(const SessionEvent& event);

using EventSink = std::function<void(const SessionEvent&)>;

}  // namespace nafas
