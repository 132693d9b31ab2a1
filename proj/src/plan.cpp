#include "nafas/plan.hpp"

#include <nlohmann/json.hpp>

#include "nafas/errors.hpp"

namespace nafas {

std::string_view step_kind_name(StepKind kind) {
    switch (kind) {
        case StepKind::Preparation: return "preparation";
        case StepKind::Inhale: return "inhale";
        case StepKind::Retain: return "retain";
        case StepKind::Exhale: return "exhale";
        case StepKind::Sustain: return "sustain";
    }
    return "preparation";
}

SessionPlan build_plan(const LevelSpec& spec, std::int64_t preparation_ms, std::string program_id,
                       Level level) {
    if (preparation_ms < 0) throw InvalidSpec({"preparation_ms must be >= 0"});
    if (auto violations = validate_spec(spec); !violations.empty()) {
        throw InvalidSpec(std::move(violations));
    }

    // ratio and unit are both hundredths, so ratio_centi * unit_centi is in
    // 10^-4 ratio-seconds = tenths of a millisecond; one exact /10 gives ms.
    struct Phase {
        StepKind kind;
        std::int64_t ratio_centi;
    };
    const Phase phases[] = {
        {StepKind::Inhale, spec.inhale_centi},
        {StepKind::Retain, spec.retain_centi},
        {StepKind::Exhale, spec.exhale_centi},
        {StepKind::Sustain, spec.sustain_centi},
    };

    std::int64_t cycle_durations[4] = {};
    std::size_t phase_count = 0;
    for (std::size_t p = 0; p < 4; ++p) {
        if (phases[p].ratio_centi == 0) continue;
        std::int64_t tenth_ms = phases[p].ratio_centi * spec.unit_centi;
        if (tenth_ms % 10 != 0) {
            throw InvalidSpec({std::string(step_kind_name(phases[p].kind)) +
                               " duration is not a whole number of milliseconds (ratio " +
                               format_centi(phases[p].ratio_centi) + " x unit " +
                               format_centi(spec.unit_centi) + "s)"});
        }
        cycle_durations[p] = tenth_ms / 10;
        ++phase_count;
    }

    SessionPlan plan;
    plan.program_id = std::move(program_id);
    plan.level = level;
    plan.preparation_ms = preparation_ms;
    plan.cycles = spec.cycles;
    plan.steps.reserve((preparation_ms > 0 ? 1 : 0) +
                       static_cast<std::size_t>(spec.cycles) * phase_count);

    if (preparation_ms > 0) {
        plan.steps.push_back({StepKind::Preparation, preparation_ms, kPrepCycle});
    }
    for (std::int64_t cycle = 0; cycle < spec.cycles; ++cycle) {
        for (std::size_t p = 0; p < 4; ++p) {
            if (cycle_durations[p] == 0) continue;
            plan.steps.push_back({phases[p].kind, cycle_durations[p], static_cast<int>(cycle)});
        }
    }

    plan.total_ms = total_duration(plan);
    return plan;
}

std::int64_t total_duration(const SessionPlan& plan) {
    std::int64_t total = 0;
    for (const auto& step : plan.steps) total += step.duration_ms;
    return total;
}

std::string plan_to_json(const SessionPlan& plan) {
    nlohmann::ordered_json doc;
    doc["program"] = plan.program_id;
    doc["level"] = std::string(level_name(plan.level));
    doc["preparation_ms"] = plan.preparation_ms;
    doc["total_ms"] = plan.total_ms;
    doc["cycles"] = plan.cycles;
    auto steps = nlohmann::ordered_json::array();
    for (const auto& step : plan.steps) {
        nlohmann::ordered_json s;
        s["kind"] = std::string(step_kind_name(step.kind));
        s["duration_ms"] = step.duration_ms;
        if (step.cycle == kPrepCycle) {
            s["cycle"] = nullptr;
        } else {
            s["cycle"] = step.cycle;
        }
        steps.push_back(std::move(s));
    }
    doc["steps"] = std::move(steps);
    return doc.dump(2) + "\n";
}

}  // namespace nafas
