#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nafas/level.hpp"

namespace nafas {

// One persisted session outcome; one JSON line in the history file.
// active_seconds is kept in tenths so serialization is exact.
struct HistoryRecord {
    std::string timestamp_utc;  // ISO-8601, e.g. "2026-08-10T07:15:02Z" (session end)
    std::string program_id;
    Level level = Level::Beginner;
    std::int64_t planned_cycles = 0;
    std::int64_t completed_cycles = 0;
    std::int64_t active_tenths = 0;  // active_seconds * 10
    bool completed = false;

    friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;
};

// Compact JSON object with the fixed key set
// {"ts","program","level","planned_cycles","completed_cycles","active_seconds","completed"}.
// No trailing newline.
std::string record_to_json_line(const HistoryRecord& record);

// nullopt for anything malformed: bad JSON, missing/mistyped keys, an
// unparseable timestamp, or a record violating its own invariants.
std::optional<HistoryRecord> parse_record_line(const std::string& line);

// Appends one line, creating the file and parent directory on first write.
// Validates record invariants before touching the file. Throws IoError or
// InvalidSpec (invariant violation).
void append_record(const std::filesystem::path& history_path, const HistoryRecord& record);

struct HistoryLoad {
    std::vector<HistoryRecord> records;
    std::size_t skipped_lines = 0;  // malformed lines, skipped with a warning
};

// Missing file yields an empty load. Malformed lines never poison the rest.
HistoryLoad load_history(const std::filesystem::path& history_path);

struct StatsSummary {
    std::int64_t total_sessions = 0;
    std::int64_t completed_sessions = 0;
    std::int64_t total_active_tenths = 0;  // over completed sessions
    std::map<std::string, std::int64_t> per_program_counts;  // completed sessions per program
    int current_streak_days = 0;

    friend bool operator==(const StatsSummary&, const StatsSummary&) = default;
};

// days since 1970-01-01 (UTC civil calendar)
std::int64_t days_from_ymd(int year, unsigned month, unsigned day);
std::int64_t today_utc_days();

// Aggregates in one pass; record order is irrelevant. The streak counts
// consecutive UTC calendar days with at least one completed session, anchored
// at `today` or, failing that, at yesterday (an unbroken chain that has not
// yet lapsed).
StatsSummary compute_stats(const std::vector<HistoryRecord>& records, std::int64_t today_days);

}  // namespace nafas
