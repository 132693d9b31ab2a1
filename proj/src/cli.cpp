#include "nafas/cli.hpp"

#include <poll.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "nafas/catalog.hpp"
#include "nafas/engine.hpp"
#include "nafas/errors.hpp"
#include "nafas/history.hpp"
#include "nafas/plan.hpp"
#include "nafas/render.hpp"
#include "nafas/tui.hpp"
#include "nafas/version.hpp"

namespace nafas {

namespace {

const char* const kUsage =
    "usage: nafas <command> [options]\n"
    "\n"
    "commands:\n"
    "  start [<program>]   run a guided session (interactive menu without <program>)\n"
    "  list                list available programs\n"
    "  info <program>      show a program's levels, timings and source\n"
    "  plan <program>      print the expanded session plan as JSON\n"
    "  stats               show session history statistics\n"
    "  version             print the version\n"
    "\n"
    "options:\n"
    "  -p, --program <id>    program to use\n"
    "  -l, --level <level>   beginner|medium|advanced (or b|m|a)\n"
    "      --prep <seconds>  preparation time before the first inhale (default 3)\n"
    "      --silent          no audio cue on step changes\n"
    "      --json            machine-readable output (list, info, stats)\n"
    "      --programs <path> custom programs file (default <config>/programs.json)\n"
    "      --history <path>  history file (default <data>/history.jsonl)\n"
    "      --trace <path>    write the session event stream as JSON lines\n"
    "      --no-color        disable menu highlighting colors\n"
    "      --ascii           ASCII progress bar glyphs\n"
    "  -h, --help            show this help\n"
    "\n"
    "environment: NAFAS_PROGRAMS, NAFAS_HISTORY, NO_COLOR\n"
    "exit codes: 0 ok, 1 error, 2 usage, 3 session aborted\n";

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t insert_or_delete = std::min(row[j], row[j - 1]) + 1;
            std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
            diagonal = row[j];
            row[j] = std::min(insert_or_delete, substitute);
        }
    }
    return row[b.size()];
}

// require() with a "did you mean" hint for near-miss ids.
const Program& require_program(const Catalog& catalog, const std::string& id) {
    if (const Program* program = catalog.find(id)) return *program;
    std::string message = "unknown program '" + id + "'";
    std::size_t best = 3;
    const Program* suggestion = nullptr;
    for (const auto& candidate : catalog.programs()) {
        std::size_t d = edit_distance(id, candidate.id);
        if (d < best) {
            best = d;
            suggestion = &candidate;
        }
    }
    if (suggestion) message += " (did you mean '" + suggestion->id + "'?)";
    throw Error(message);
}

std::int64_t active_total_ms(const LevelSpec& spec) {
    return spec.cycles * (ratio_sum_centi(spec) * spec.unit_centi) / 10;
}

std::string pad(std::string text, std::size_t columns) {
    if (text.size() < columns) text.resize(columns, ' ');
    return text;
}

std::string now_utc_iso() {
    std::time_t t = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02dZ", utc.tm_year + 1900,
                  utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec);
    return buffer;
}

bool locale_is_utf8(const Env& env) {
    for (const char* name : {"LC_ALL", "LC_CTYPE", "LANG"}) {
        if (auto value = env.get(name); value && !value->empty()) {
            std::string upper = *value;
            std::transform(upper.begin(), upper.end(), upper.begin(),
                           [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
            return upper.find("UTF-8") != std::string::npos ||
                   upper.find("UTF8") != std::string::npos;
        }
    }
    return false;
}

Catalog load_catalog(const Settings& settings, const Env& env) {
    Catalog catalog = Catalog::with_builtins();
    std::filesystem::path path;
    bool explicit_path = false;
    if (settings.programs_path) {
        path = *settings.programs_path;
        explicit_path = true;
    } else {
        path = config_dir(env) / "programs.json";
    }
    if (explicit_path || std::filesystem::exists(path)) {
        catalog.add_custom_programs(load_custom_programs_file(path));
    }
    return catalog;
}

int cmd_version(const Invocation& invocation, std::ostream& out) {
    if (invocation.json) {
        nlohmann::ordered_json doc;
        doc["name"] = "nafas";
        doc["version"] = kVersion;
        out << doc.dump() << "\n";
    } else {
        out << "nafas " << kVersion << "\n";
    }
    return 0;
}

int cmd_list(const Catalog& catalog, const Invocation& invocation, std::ostream& out) {
    if (invocation.json) {
        auto doc = nlohmann::ordered_json::array();
        for (const auto& program : catalog.programs()) {
            nlohmann::ordered_json entry;
            entry["id"] = program.id;
            entry["name"] = program.name;
            entry["description"] = program.description;
            entry["source"] = program.source == Source::BuiltIn ? "built-in" : "custom";
            doc.push_back(std::move(entry));
        }
        out << doc.dump(2) << "\n";
        return 0;
    }
    for (const auto& program : catalog.programs()) {
        out << pad(program.id, 19) << pad(program.name, 19) << program.description << "\n";
    }
    return 0;
}

nlohmann::ordered_json program_json(const Program& program) {
    nlohmann::ordered_json doc;
    doc["id"] = program.id;
    doc["name"] = program.name;
    doc["description"] = program.description;
    doc["source"] = program.source == Source::BuiltIn ? "built-in" : "custom";
    doc["source_note"] = program.source_note;
    nlohmann::ordered_json levels;
    for (Level level : kAllLevels) {
        const LevelSpec& spec = program.spec(level);
        nlohmann::ordered_json entry;
        entry["inhale"] = spec.inhale_centi / 100.0;
        entry["retain"] = spec.retain_centi / 100.0;
        entry["exhale"] = spec.exhale_centi / 100.0;
        entry["sustain"] = spec.sustain_centi / 100.0;
        entry["unit"] = spec.unit_centi / 100.0;
        entry["cycles"] = spec.cycles;
        entry["active_ms"] = active_total_ms(spec);
        levels[std::string(level_name(level))] = std::move(entry);
    }
    doc["levels"] = std::move(levels);
    return doc;
}

int cmd_info(const Catalog& catalog, const Invocation& invocation, std::ostream& out) {
    if (!invocation.program_id) throw UsageError("info requires a program id");
    const Program& program = require_program(catalog, *invocation.program_id);

    if (invocation.json) {
        out << program_json(program).dump(2) << "\n";
        return 0;
    }

    out << program.name << " (" << program.id << ") - "
        << (program.source == Source::BuiltIn ? "built-in" : "custom") << "\n\n";
    out << "  " << program.description << "\n";
    if (!program.source_note.empty()) out << "  Source: " << program.source_note << "\n";
    out << "\n";
    out << "  " << pad("level", 10) << pad("ratios (I:R:E:S)", 20) << pad("unit", 7)
        << pad("cycles", 8) << "duration\n";
    for (Level level : kAllLevels) {
        const LevelSpec& spec = program.spec(level);
        out << "  " << pad(std::string(level_name(level)), 10) << pad(format_ratios(spec), 20)
            << pad(format_centi(spec.unit_centi) + "s", 7)
            << pad(std::to_string(spec.cycles), 8) << format_mm_ss(active_total_ms(spec)) << "\n";
    }
    return 0;
}

int cmd_plan(const Catalog& catalog, const Invocation& invocation, const Settings& settings,
             std::ostream& out) {
    if (!invocation.program_id) throw UsageError("plan requires a program id");
    const Program& program = require_program(catalog, *invocation.program_id);
    SessionPlan plan = build_plan(program.spec(settings.level), settings.preparation_ms,
                                  program.id, settings.level);
    out << plan_to_json(plan);
    return 0;
}

std::string format_hms(std::int64_t tenths) {
    std::int64_t seconds = tenths / 10;
    std::int64_t hours = seconds / 3600;
    char buffer[64];
    if (hours > 0) {
        std::snprintf(buffer, sizeof(buffer), "%lld:%02lld:%02lld", static_cast<long long>(hours),
                      static_cast<long long>((seconds % 3600) / 60),
                      static_cast<long long>(seconds % 60));
    } else {
        std::snprintf(buffer, sizeof(buffer), "%02lld:%02lld",
                      static_cast<long long>(seconds / 60), static_cast<long long>(seconds % 60));
    }
    return buffer;
}

int cmd_stats(const Invocation& invocation, const Settings& settings, std::ostream& out,
              std::ostream& err) {
    HistoryLoad load = load_history(settings.history_path);
    if (load.skipped_lines > 0) {
        err << "warning: skipped " << load.skipped_lines << " malformed history line"
            << (load.skipped_lines == 1 ? "" : "s") << "\n";
    }
    StatsSummary stats = compute_stats(load.records, today_utc_days());

    if (invocation.json) {
        nlohmann::ordered_json doc;
        doc["total_sessions"] = stats.total_sessions;
        doc["completed_sessions"] = stats.completed_sessions;
        doc["total_active_seconds"] = static_cast<double>(stats.total_active_tenths) / 10.0;
        doc["current_streak_days"] = stats.current_streak_days;
        nlohmann::ordered_json per_program;
        for (const auto& [id, count] : stats.per_program_counts) per_program[id] = count;
        doc["per_program"] = std::move(per_program);
        out << doc.dump(2) << "\n";
        return 0;
    }

    out << "Sessions:     " << stats.total_sessions << " (" << stats.completed_sessions
        << " completed)\n";
    out << "Active time:  " << format_hms(stats.total_active_tenths) << "\n";
    out << "Streak:       " << stats.current_streak_days << " day"
        << (stats.current_streak_days == 1 ? "" : "s") << " (UTC calendar)\n";
    if (!stats.per_program_counts.empty()) {
        out << "By program:\n";
        std::vector<std::pair<std::string, std::int64_t>> rows(stats.per_program_counts.begin(),
                                                               stats.per_program_counts.end());
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        for (const auto& [id, count] : rows) out << "  " << pad(id, 20) << count << "\n";
    }
    return 0;
}

// Keyboard bytes and SIGINT, funneled into the engine's command queue from a
// dedicated watcher thread. The self-pipe keeps the signal handler
// async-signal-safe.
class SessionInput {
public:
    SessionInput(CommandQueue& commands, bool read_keyboard) : commands_(commands) {
        if (pipe(stop_pipe_) != 0 || pipe(signal_pipe_) != 0) return;
        g_signal_fd.store(signal_pipe_[1], std::memory_order_release);

        struct sigaction action{};
        action.sa_handler = &SessionInput::on_signal;
        sigemptyset(&action.sa_mask);
        action.sa_flags = SA_RESTART;
        sigaction(SIGINT, &action, &previous_);
        installed_ = true;

        worker_ = std::thread([this, read_keyboard] { watch(read_keyboard); });
    }

    ~SessionInput() {
        if (worker_.joinable()) {
            char byte = 1;
            (void)!write(stop_pipe_[1], &byte, 1);
            worker_.join();
        }
        if (installed_) sigaction(SIGINT, &previous_, nullptr);
        g_signal_fd.store(-1, std::memory_order_release);
        for (int fd : {stop_pipe_[0], stop_pipe_[1], signal_pipe_[0], signal_pipe_[1]}) {
            if (fd >= 0) close(fd);
        }
    }

private:
    static void on_signal(int) {
        int fd = g_signal_fd.load(std::memory_order_acquire);
        if (fd >= 0) {
            char byte = 1;
            (void)!write(fd, &byte, 1);
        }
    }

    void watch(bool read_keyboard) {
        for (;;) {
            pollfd fds[3];
            fds[0] = {stop_pipe_[0], POLLIN, 0};
            fds[1] = {signal_pipe_[0], POLLIN, 0};
            fds[2] = {STDIN_FILENO, POLLIN, 0};
            int count = read_keyboard ? 3 : 2;
            if (poll(fds, count, -1) <= 0) continue;

            if (fds[0].revents & POLLIN) return;
            if (fds[1].revents & POLLIN) {
                char byte;
                (void)!read(signal_pipe_[0], &byte, 1);
                commands_.push(Command::Abort);
                continue;
            }
            if (read_keyboard && (fds[2].revents & (POLLIN | POLLHUP))) {
                char c = 0;
                if (read(STDIN_FILENO, &c, 1) != 1) return;  // stdin closed
                if (auto command = session_command_for_byte(c)) commands_.push(*command);
            }
        }
    }

    static std::atomic<int> g_signal_fd;

    CommandQueue& commands_;
    int stop_pipe_[2] = {-1, -1};
    int signal_pipe_[2] = {-1, -1};
    std::thread worker_;
    struct sigaction previous_{};
    bool installed_ = false;
};

std::atomic<int> SessionInput::g_signal_fd{-1};

// Line-per-event output for redirected stdout.
void headless_view(SessionEventQueue& events, std::int64_t cycles, std::ostream& out) {
    for (;;) {
        auto event = events.pop_wait(1000);
        if (!event) continue;
        switch (event->kind) {
            case EventKind::StepStarted:
                out << format_mm_ss(event->at_ms) << "  "
                    << pad(std::string(phase_label(event->step_kind)), 11);
                if (event->cycle != kPrepCycle) {
                    out << "cycle " << event->cycle + 1 << "/" << cycles;
                }
                out << "\n";
                break;
            case EventKind::Paused:
                out << format_mm_ss(event->at_ms) << "  paused\n";
                break;
            case EventKind::Resumed:
                out << format_mm_ss(event->at_ms) << "  resumed\n";
                break;
            case EventKind::Finished:
            case EventKind::Aborted:
                return;
            default:
                break;
        }
    }
}

int run_session_command(const Catalog& catalog, const Invocation& invocation,
                        const Settings& settings, std::ostream& out, std::ostream& err) {
    std::string program_id;
    Level level = settings.level;

    const bool tty = isatty(STDIN_FILENO) == 1 && isatty(STDOUT_FILENO) == 1;
    RawTerminalMode raw_mode;  // harmless no-op off-TTY

    if (invocation.program_id) {
        program_id = *invocation.program_id;
    } else {
        if (!tty) throw UsageError("start needs --program when no terminal is attached");
        class TerminalKeys final : public KeySource {
            KeyEvent next() override { return read_key_blocking(); }
        } keys;
        MenuStyle style{settings.color};
        auto selection = select_program(catalog, keys, out, style);
        if (!selection) {
            out << "nothing selected\n";
            return 0;
        }
        program_id = selection->program_id;
        level = selection->level;
    }

    const Program& program = require_program(catalog, program_id);
    SessionPlan plan = build_plan(program.spec(level), settings.preparation_ms, program.id, level);

    out << program.name << " - " << level_name(level) << ": " << plan.cycles
        << " cycles, " << format_mm_ss(plan.total_ms) << " total";
    if (tty) out << "  (space pauses, q aborts)";
    out << "\n";

    std::ofstream trace;
    if (settings.trace_path) {
        trace.open(*settings.trace_path, std::ios::binary | std::ios::trunc);
        if (!trace) throw IoError("cannot open trace file: " + settings.trace_path->string());
    }

    CommandQueue commands;
    SteadyClock clock(commands);
    SessionEventQueue view_events;
    SessionInput input(commands, tty);

    EventSink sink = [&](const SessionEvent& event) {
        if (trace.is_open()) trace << event_to_json_line(event) << "\n";
        view_events.push(event);
    };

    SessionResult result;
    std::exception_ptr engine_error;
    std::thread engine([&] {
        try {
            result = run_session(plan, clock, sink);
        } catch (...) {
            engine_error = std::current_exception();
            view_events.push(SessionEvent::aborted(clock.now_ms(), 0));
        }
    });

    if (tty) {
        ViewOptions options;
        options.bell = !settings.silent;
        options.ascii = settings.ascii;
        options.width = terminal_width();
        options.session_total_ms = plan.total_ms;
        options.session_cycles = plan.cycles;
        session_view_loop(view_events, [&] { return clock.now_ms(); }, out, options);
    } else {
        headless_view(view_events, plan.cycles, out);
    }
    engine.join();
    if (engine_error) std::rethrow_exception(engine_error);

    HistoryRecord record;
    record.timestamp_utc = now_utc_iso();
    record.program_id = program.id;
    record.level = level;
    record.planned_cycles = plan.cycles;
    record.completed_cycles = result.completed_cycles;
    record.active_tenths = (result.active_ms + 50) / 100;
    record.completed = result.outcome == Outcome::Completed;
    try {
        append_record(settings.history_path, record);
    } catch (const Error& e) {
        err << "warning: could not record session: " << e.what() << "\n";
    }

    if (result.outcome == Outcome::Completed) {
        out << "Session complete: " << result.completed_cycles << " cycles, "
            << format_mm_ss(result.active_ms) << " active";
    } else {
        out << "Session aborted: " << result.completed_cycles << "/" << plan.cycles
            << " cycles, " << format_mm_ss(result.active_ms) << " active";
    }
    if (result.paused_ms > 0) out << ", " << format_mm_ss(result.paused_ms) << " paused";
    out << "\n";

    return result.outcome == Outcome::Completed ? 0 : 3;
}

int dispatch(const Invocation& invocation, const Env& env, std::ostream& out, std::ostream& err) {
    if (invocation.help) {
        out << kUsage;
        return 0;
    }
    if (invocation.subcommand == Subcommand::Version) return cmd_version(invocation, out);

    FileConfig config = load_config_file(config_dir(env) / "config.json");
    Settings settings = resolve_settings(invocation, env, config);

    if (invocation.subcommand == Subcommand::Stats) {
        return cmd_stats(invocation, settings, out, err);
    }

    Catalog catalog = load_catalog(settings, env);
    switch (invocation.subcommand) {
        case Subcommand::List: return cmd_list(catalog, invocation, out);
        case Subcommand::Info: return cmd_info(catalog, invocation, out);
        case Subcommand::Plan: return cmd_plan(catalog, invocation, settings, out);
        case Subcommand::Start:
            return run_session_command(catalog, invocation, settings, out, err);
        default: break;
    }
    throw Error("unhandled subcommand");
}

}  // namespace

Invocation parse_args(const std::vector<std::string>& args) {
    if (args.empty()) throw UsageError("missing command");

    Invocation invocation;
    std::size_t first = 1;
    const std::string& command = args[0];
    if (command == "start") {
        invocation.subcommand = Subcommand::Start;
    } else if (command == "list") {
        invocation.subcommand = Subcommand::List;
    } else if (command == "info") {
        invocation.subcommand = Subcommand::Info;
    } else if (command == "plan") {
        invocation.subcommand = Subcommand::Plan;
    } else if (command == "stats") {
        invocation.subcommand = Subcommand::Stats;
    } else if (command == "version") {
        invocation.subcommand = Subcommand::Version;
    } else if (command == "--help" || command == "-h") {
        invocation.help = true;
        return invocation;
    } else {
        throw UsageError(command);
    }

    const bool takes_program = invocation.subcommand == Subcommand::Start ||
                               invocation.subcommand == Subcommand::Info ||
                               invocation.subcommand == Subcommand::Plan;

    auto value_of = [&](std::size_t& i) -> const std::string& {
        if (i + 1 >= args.size()) throw UsageError(args[i]);
        return args[++i];
    };

    for (std::size_t i = first; i < args.size(); ++i) {
        const std::string& arg = args[i];
        if (arg == "--program" || arg == "-p") {
            invocation.program_id = value_of(i);
        } else if (arg == "--level" || arg == "-l") {
            const std::string& value = value_of(i);
            try {
                invocation.level = parse_level(value);
            } catch (const UnknownLevel&) {
                throw UsageError(value);
            }
        } else if (arg == "--prep") {
            const std::string& value = value_of(i);
            try {
                std::size_t consumed = 0;
                std::int64_t seconds = std::stoll(value, &consumed);
                if (consumed != value.size() || seconds < 0) throw UsageError(value);
                invocation.prep_seconds = seconds;
            } catch (const UsageError&) {
                throw;
            } catch (const std::exception&) {
                throw UsageError(value);
            }
        } else if (arg == "--silent") {
            invocation.silent = true;
        } else if (arg == "--json") {
            invocation.json = true;
        } else if (arg == "--no-color") {
            invocation.no_color = true;
        } else if (arg == "--ascii") {
            invocation.ascii = true;
        } else if (arg == "--programs") {
            invocation.programs_path = value_of(i);
        } else if (arg == "--history") {
            invocation.history_path = value_of(i);
        } else if (arg == "--trace") {
            invocation.trace_path = value_of(i);
        } else if (arg == "--help" || arg == "-h") {
            invocation.help = true;
        } else if (!arg.empty() && arg[0] == '-') {
            throw UsageError(arg);
        } else if (takes_program && !invocation.program_id) {
            invocation.program_id = arg;
        } else {
            throw UsageError(arg);
        }
    }
    return invocation;
}

Settings resolve_settings(const Invocation& invocation, const Env& env, const FileConfig& config) {
    Settings settings;

    settings.level = invocation.level.value_or(config.default_level.value_or(Level::Beginner));
    settings.preparation_ms =
        invocation.prep_seconds.value_or(config.prep_seconds.value_or(3)) * 1000;
    settings.silent = invocation.silent || config.silent.value_or(false);
    settings.ascii = invocation.ascii || config.ascii.value_or(!locale_is_utf8(env));
    settings.json = invocation.json;

    auto no_color_env = env.get("NO_COLOR");
    settings.color = !invocation.no_color && !(no_color_env && !no_color_env->empty());

    if (invocation.programs_path) {
        settings.programs_path = std::filesystem::path(*invocation.programs_path);
    } else if (auto from_env = env.get("NAFAS_PROGRAMS"); from_env && !from_env->empty()) {
        settings.programs_path = std::filesystem::path(*from_env);
    }

    if (invocation.history_path) {
        settings.history_path = std::filesystem::path(*invocation.history_path);
    } else if (auto from_env = env.get("NAFAS_HISTORY"); from_env && !from_env->empty()) {
        settings.history_path = std::filesystem::path(*from_env);
    } else {
        settings.history_path = data_dir(env) / "history.jsonl";
    }

    if (invocation.trace_path) {
        settings.trace_path = std::filesystem::path(*invocation.trace_path);
    }
    return settings;
}

std::string usage_text() { return kUsage; }

int execute(const Invocation& invocation, const Env& env, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(invocation, env, out, err);
    } catch (const UsageError& e) {
        err << "nafas: " << e.what() << "\n\n" << kUsage;
        return 2;
    } catch (const std::exception& e) {
        err << "nafas: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    Invocation invocation;
    try {
        invocation = parse_args(args);
    } catch (const UsageError& e) {
        std::cerr << "nafas: " << e.what() << "\n\n" << kUsage;
        return 2;
    }
    return execute(invocation, Env::from_process(), std::cout, std::cerr);
}

}  // namespace nafas
