#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nafas/level.hpp"
#include "nafas/spec.hpp"

namespace nafas {

enum class Source { BuiltIn, Custom };

struct Program {
    std::string id;           // stable machine id, lowercase-hyphenated
    std::string name;         // display name
    std::string description;  // one or two sentences of purpose text
    std::string source_note;  // where the technique comes from, free text
    std::array<LevelSpec, 3> specs{};
    Source source = Source::BuiltIn;

    const LevelSpec& spec(Level level) const { return specs[level_index(level)]; }
};

// Immutable after construction; any number of readers may share one instance.
class Catalog {
public:
    // The 13 built-in programs, in table order.
    static Catalog with_builtins();

    // Built-ins first (table order), then custom programs in file order.
    const std::vector<Program>& programs() const { return programs_; }

    const Program* find(std::string_view id) const;

    // Throws UnknownProgram.
    const Program& require(std::string_view id) const;

    // Throws UnknownProgram / UnknownLevel.
    const LevelSpec& spec(std::string_view id, Level level) const;

    // Appends custom programs; throws DuplicateId on collision with existing
    // entries. Call during construction only (single-threaded).
    void add_custom_programs(std::vector<Program> programs);

private:
    std::vector<Program> programs_;
};

// Parses a custom-program JSON document (top-level array, three level blocks
// per entry). Every returned Program has source = Custom and a spec that
// passes validate_spec and expands to whole-millisecond phase durations.
// Throws ParseError / ValidationError / DuplicateId; never returns a partial
// list.
std::vector<Program> load_custom_programs(const std::string& json_text);

// Reads the file and delegates to load_custom_programs. Throws IoError when
// the file cannot be read.
std::vector<Program> load_custom_programs_file(const std::filesystem::path& path);

}  // namespace nafas
