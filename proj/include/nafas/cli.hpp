#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nafas/config.hpp"
#include "nafas/level.hpp"

namespace nafas {

enum class Subcommand { Start, List, Info, Plan, Stats, Version };

struct Invocation {
    Subcommand subcommand = Subcommand::Version;
    std::optional<std::string> program_id;
    std::optional<Level> level;
    std::optional<std::int64_t> prep_seconds;
    bool silent = false;
    bool json = false;
    bool no_color = false;
    bool ascii = false;
    bool help = false;
    std::optional<std::string> programs_path;
    std::optional<std::string> history_path;
    std::optional<std::string> trace_path;
};

// Fully resolved runtime settings: flags > environment > config file >
// defaults, per key.
struct Settings {
    Level level = Level::Beginner;
    std::int64_t preparation_ms = 3000;
    bool silent = false;
    bool ascii = false;
    bool color = true;
    bool json = false;
    std::optional<std::filesystem::path> programs_path;  // nullopt: default path, load if present
    std::filesystem::path history_path;
    std::optional<std::filesystem::path> trace_path;
};

// argv without the program name. Throws UsageError carrying the offending
// token.
Invocation parse_args(const std::vector<std::string>& args);

Settings resolve_settings(const Invocation& invocation, const Env& env, const FileConfig& config);

std::string usage_text();

// Exit codes: 0 success / session completed, 1 runtime error, 2 usage error,
// 3 session aborted by the user.
int execute(const Invocation& invocation, const Env& env, std::ostream& out, std::ostream& err);

// parse + execute + error-to-exit-code mapping; the whole of main().
int run_cli(int argc, char** argv);

}  // namespace nafas
