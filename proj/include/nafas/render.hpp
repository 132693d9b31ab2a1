#pragma once

#include <cstdint>
#include <string>

#include "nafas/plan.hpp"

namespace nafas {

// Everything one frame needs. render_frame is a pure function of this struct
// and the width, so frames are snapshot-testable byte for byte.
struct ViewState {
    std::string phase_label;          // "Get Ready", "Inhale", "Hold", "Exhale", "Hold Empty"
    std::int64_t step_elapsed_ms = 0;
    std::int64_t step_total_ms = 1;
    std::string cycle_display;        // "cycle 3/35", or "prep"
    std::int64_t session_remaining_ms = 0;
    bool paused = false;
    bool silent = false;  // consumed by the view loop (bell), not the renderer
    bool ascii = false;   // bar glyph set
};

// On-screen cue for a step kind.
std::string_view phase_label(StepKind kind);

// One in-place frame: leading '\r', then phase label, progress bar, mm:ss
// step countdown, cycle counter and (when paused) a PAUSED badge, padded
// with spaces to exactly `width` columns so shorter frames erase longer
// predecessors. No control characters besides the leading carriage return.
// Narrow widths shrink the bar, never the countdown. Requires width >= 40.
std::string render_frame(const ViewState& view, int width);

// Floor to whole seconds, rendered "mm:ss" (minutes may exceed 59).
std::string format_mm_ss(std::int64_t ms);

}  // namespace nafas
