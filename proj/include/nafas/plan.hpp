#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nafas/level.hpp"
#include "nafas/spec.hpp"

namespace nafas {

enum class StepKind { Preparation, Inhale, Retain, Exhale, Sustain };

// "preparation" / "inhale" / "retain" / "exhale" / "sustain"
std::string_view step_kind_name(StepKind kind);

// Cycle index of the preparation step. Real cycles are 0-based.
inline constexpr int kPrepCycle = -1;

struct PlanStep {
    StepKind kind;
    std::int64_t duration_ms;  // always > 0; zero-ratio phases never appear
    int cycle;                 // kPrepCycle for the preparation step

    friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

// The fully expanded, ordered step sequence for one session.
//
// Layout: one Preparation step when preparation_ms > 0, then `cycles`
// repetitions of the present phases in Inhale, Retain, Exhale, Sustain
// order. total_ms is the exact integer sum of all step durations.
struct SessionPlan {
    std::string program_id;
    Level level = Level::Beginner;
    std::int64_t preparation_ms = 0;
    std::vector<PlanStep> steps;
    std::int64_t total_ms = 0;
    std::int64_t cycles = 0;
};

// Expands spec into a timed step sequence. Phase duration in milliseconds is
// ratio_centi * unit_centi / 10, computed in exact integer arithmetic.
//
// Throws InvalidSpec when validate_spec rejects the spec, or when a nonzero
// phase does not expand to a whole number of milliseconds (possible only for
// fractional units combined with fractional ratios; no built-in is affected).
SessionPlan build_plan(const LevelSpec& spec, std::int64_t preparation_ms,
                       std::string program_id = {}, Level level = Level::Beginner);

// Sum of step durations, recomputed from the steps.
std::int64_t total_duration(const SessionPlan& plan);

// The `plan` subcommand's JSON document, pretty-printed, newline-terminated.
std::string plan_to_json(const SessionPlan& plan);

}  // namespace nafas
