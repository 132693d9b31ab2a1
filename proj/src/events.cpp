#include "nafas/events.hpp"

#include <nlohmann/json.hpp>

namespace nafas {

SessionEvent SessionEvent::step_started(std::int64_t at, int step, StepKind kind, int cycle,
                                        std::int64_t deadline) {
    SessionEvent e;
    e.kind = EventKind::StepStarted;
    e.at_ms = at;
    e.step_index = step;
    e.step_kind = kind;
    e.cycle = cycle;
    e.deadline_ms = deadline;
    return e;
}

SessionEvent SessionEvent::step_completed(std::int64_t at, int step) {
    SessionEvent e;
    e.kind = EventKind::StepCompleted;
    e.at_ms = at;
    e.step_index = step;
    return e;
}

SessionEvent SessionEvent::cycle_completed(std::int64_t at, int cycle) {
    SessionEvent e;
    e.kind = EventKind::CycleCompleted;
    e.at_ms = at;
    e.cycle = cycle;
    return e;
}

SessionEvent SessionEvent::paused(std::int64_t at) {
    SessionEvent e;
    e.kind = EventKind::Paused;
    e.at_ms = at;
    return e;
}

SessionEvent SessionEvent::resumed(std::int64_t at, std::int64_t pause_duration) {
    SessionEvent e;
    e.kind = EventKind::Resumed;
    e.at_ms = at;
    e.pause_duration_ms = pause_duration;
    return e;
}

SessionEvent SessionEvent::aborted(std::int64_t at, std::int64_t completed_cycles) {
    SessionEvent e;
    e.kind = EventKind::Aborted;
    e.at_ms = at;
    e.completed_cycles = completed_cycles;
    return e;
}

SessionEvent SessionEvent::finished(std::int64_t at, std::int64_t active) {
    SessionEvent e;
    e.kind = EventKind::Finished;
    e.at_ms = at;
    e.active_ms = active;
    return e;
}

std::string event_to_json_line(const SessionEvent& event) {
    nlohmann::ordered_json line;
    switch (event.kind) {
        case EventKind::StepStarted:
            line["event"] = "step_started";
            line["at"] = event.at_ms;
            line["step"] = event.step_index;
            line["kind"] = std::string(step_kind_name(event.step_kind));
            if (event.cycle == kPrepCycle) {
                line["cycle"] = nullptr;
            } else {
                line["cycle"] = event.cycle;
            }
            line["deadline"] = event.deadline_ms;
            break;
        case EventKind::StepCompleted:
            line["event"] = "step_completed";
            line["at"] = event.at_ms;
            line["step"] = event.step_index;
            break;
        case EventKind::CycleCompleted:
            line["event"] = "cycle_completed";
            line["at"] = event.at_ms;
            line["cycle"] = event.cycle;
            break;
        case EventKind::Paused:
            line["event"] = "paused";
            line["at"] = event.at_ms;
            break;
        case EventKind::Resumed:
            line["event"] = "resumed";
            line["at"] = event.at_ms;
            line["pause_ms"] = event.pause_duration_ms;
            break;
        case EventKind::Aborted:
            line["event"] = "aborted";
            line["at"] = event.at_ms;
            line["completed_cycles"] = event.completed_cycles;
            break;
        case EventKind::Finished:
            line["event"] = "finished";
            line["at"] = event.at_ms;
            line["active_ms"] = event.active_ms;
            break;
    }
    return line.dump();
}

}  // namespace nafas
