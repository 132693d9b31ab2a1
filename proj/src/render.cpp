#include "nafas/render.hpp"

#include <algorithm>
#include <cstdio>

namespace nafas {

namespace {

constexpr int kLabelColumns = 10;  // widest cue is "Hold Empty"
constexpr int kBarBudget = 20;

void append_cells(std::string& out, const char* glyph, int count) {
    for (int i = 0; i < count; ++i) out += glyph;
}

}  // namespace

std::string_view phase_label(StepKind kind) {
    switch (kind) {
        case StepKind::Preparation: return "Get Ready";
        case StepKind::Inhale: return "Inhale";
        case StepKind::Retain: return "Hold";
        case StepKind::Exhale: return "Exhale";
        case StepKind::Sustain: return "Hold Empty";
    }
    return "Get Ready";
}

std::string format_mm_ss(std::int64_t ms) {
    std::int64_t seconds = std::max<std::int64_t>(0, ms) / 1000;
    std::int64_t minutes = std::min<std::int64_t>(seconds / 60, 99);
    seconds = minutes == 99 ? 59 : seconds % 60;
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "%02lld:%02lld", static_cast<long long>(minutes),
                  static_cast<long long>(seconds));
    return buffer;
}

std::string render_frame(const ViewState& view, int width) {
    width = std::max(width, 40);

    const std::int64_t total = std::max<std::int64_t>(view.step_total_ms, 1);
    const std::int64_t elapsed = std::clamp<std::int64_t>(view.step_elapsed_ms, 0, total);

    std::string label(view.phase_label.substr(0, kLabelColumns));
    label.resize(kLabelColumns, ' ');

    const std::string countdown = format_mm_ss(total - elapsed);
    const std::string badge = view.paused ? "  PAUSED" : "";
    const std::string remaining = "  -" + format_mm_ss(view.session_remaining_ms);

    // label + " [" + bar + "] " + countdown + "  " + cycle + badge [+ remaining]
    const int fixed = kLabelColumns + 2 + 2 + static_cast<int>(countdown.size()) + 2 +
                      static_cast<int>(view.cycle_display.size()) + static_cast<int>(badge.size());

    // Session-remaining only rides along when the bar keeps its full budget.
    const bool show_remaining = width >= fixed + kBarBudget + static_cast<int>(remaining.size());
    const int bar_cells = show_remaining ? kBarBudget : std::clamp(width - fixed, 0, kBarBudget);
    const int filled = static_cast<int>(elapsed * bar_cells / total);

    std::string frame = "\r";
    frame += label;
    frame += " [";
    append_cells(frame, view.ascii ? "#" : "█", filled);
    append_cells(frame, view.ascii ? "-" : "░", bar_cells - filled);
    frame += "] ";
    frame += countdown;
    frame += "  ";
    frame += view.cycle_display;
    frame += badge;
    if (show_remaining) frame += remaining;

    // Pad with spaces to exactly `width` columns so this frame fully covers
    // the previous one. Multi-byte bar glyphs occupy one column each.
    int columns = fixed + bar_cells + (show_remaining ? static_cast<int>(remaining.size()) : 0);
    for (; columns < width; ++columns) frame += ' ';
    return frame;
}

}  // namespace nafas
