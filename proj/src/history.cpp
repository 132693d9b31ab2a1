#include "nafas/history.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "nafas/errors.hpp"

namespace nafas {

namespace {

bool record_invariants_hold(const HistoryRecord& record) {
    if (record.completed_cycles < 0 || record.completed_cycles > record.planned_cycles)
        return false;
    if (record.completed && record.completed_cycles != record.planned_cycles) return false;
    if (record.active_tenths < 0) return false;
    if (record.program_id.empty()) return false;
    return true;
}

// "YYYY-MM-DD..." -> days since epoch; nullopt for anything not a real date.
std::optional<std::int64_t> parse_utc_days(const std::string& timestamp) {
    int year = 0;
    unsigned month = 0, day = 0, hour = 0, minute = 0, second = 0;
    char z = 0;
    if (std::sscanf(timestamp.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%c", &year, &month, &day, &hour,
                    &minute, &second, &z) != 7 ||
        z != 'Z') {
        return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) return std::nullopt;
    return std::chrono::sys_days(ymd).time_since_epoch().count();
}

}  // namespace

std::string record_to_json_line(const HistoryRecord& record) {
    nlohmann::ordered_json line;
    line["ts"] = record.timestamp_utc;
    line["program"] = record.program_id;
    line["level"] = std::string(level_name(record.level));
    line["planned_cycles"] = record.planned_cycles;
    line["completed_cycles"] = record.completed_cycles;
    line["active_seconds"] = static_cast<double>(record.active_tenths) / 10.0;
    line["completed"] = record.completed;
    return line.dump();
}

std::optional<HistoryRecord> parse_record_line(const std::string& line) {
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;

    if (!doc.contains("ts") || !doc["ts"].is_string()) return std::nullopt;
    if (!doc.contains("program") || !doc["program"].is_string()) return std::nullopt;
    if (!doc.contains("level") || !doc["level"].is_string()) return std::nullopt;
    if (!doc.contains("planned_cycles") || !doc["planned_cycles"].is_number_integer())
        return std::nullopt;
    if (!doc.contains("completed_cycles") || !doc["completed_cycles"].is_number_integer())
        return std::nullopt;
    if (!doc.contains("active_seconds") || !doc["active_seconds"].is_number()) return std::nullopt;
    if (!doc.contains("completed") || !doc["completed"].is_boolean()) return std::nullopt;

    HistoryRecord record;
    record.timestamp_utc = doc["ts"].get<std::string>();
    record.program_id = doc["program"].get<std::string>();
    try {
        record.level = parse_level(doc["level"].get<std::string>());
    } catch (const UnknownLevel&) {
        return std::nullopt;
    }
    record.planned_cycles = doc["planned_cycles"].get<std::int64_t>();
    record.completed_cycles = doc["completed_cycles"].get<std::int64_t>();
    record.active_tenths = std::llround(doc["active_seconds"].get<double>() * 10.0);
    record.completed = doc["completed"].get<bool>();

    if (!parse_utc_days(record.timestamp_utc)) return std::nullopt;
    if (!record_invariants_hold(record)) return std::nullopt;
    return record;
}

void append_record(const std::filesystem::path& history_path, const HistoryRecord& record) {
    if (!record_invariants_hold(record) || !parse_utc_days(record.timestamp_utc)) {
        throw InvalidSpec({"history record violates its invariants"});
    }

    std::error_code ec;
    if (history_path.has_parent_path()) {
        std::filesystem::create_directories(history_path.parent_path(), ec);
        if (ec) throw IoError("cannot create " + history_path.parent_path().string() + ": " +
                              ec.message());
    }

    std::ofstream out(history_path, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot open history file: " + history_path.string());
    out << record_to_json_line(record) << '\n';
    out.flush();
    if (!out) throw IoError("write failed: " + history_path.string());
}

HistoryLoad load_history(const std::filesystem::path& history_path) {
    HistoryLoad result;
    std::ifstream in(history_path, std::ios::binary);
    if (!in) return result;  // no history yet

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (auto record = parse_record_line(line)) {
            result.records.push_back(std::move(*record));
        } else {
            ++result.skipped_lines;
        }
    }
    return result;
}

std::int64_t days_from_ymd(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    return std::chrono::sys_days(ymd).time_since_epoch().count();
}

std::int64_t today_utc_days() {
    auto now = std::chrono::system_clock::now();
    return std::chrono::floor<std::chrono::days>(now).time_since_epoch().count();
}

StatsSummary compute_stats(const std::vector<HistoryRecord>& records, std::int64_t today_days) {
    StatsSummary summary;
    std::set<std::int64_t> completed_days;

    for (const auto& record : records) {
        ++summary.total_sessions;
        if (!record.completed) continue;  // aborted sessions count toward the total only
        ++summary.completed_sessions;
        summary.total_active_tenths += record.active_tenths;
        summary.per_program_counts[record.program_id] += 1;
        if (auto days = parse_utc_days(record.timestamp_utc)) completed_days.insert(*days);
    }

    // Streak: consecutive days ending today, or an unbroken run ending
    // yesterday that has not lapsed yet.
    std::int64_t anchor;
    if (completed_days.count(today_days)) {
        anchor = today_days;
    } else if (completed_days.count(today_days - 1)) {
        anchor = today_days - 1;
    } else {
        return summary;
    }
    int streak = 0;
    while (completed_days.count(anchor - streak)) ++streak;
    summary.current_streak_days = streak;
    return summary;
}

}  // namespace nafas
