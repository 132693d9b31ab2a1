#include "nafas/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "nafas/errors.hpp"

namespace nafas {

namespace {

struct BuiltinRow {
    const char* id;
    const char* name;
    const char* description;
    const char* source_note;
    // I, R, E, S in hundredths; unit in hundredths of a second; cycles.
    LevelSpec beginner;
    LevelSpec medium;
    LevelSpec advanced;
};

constexpr std::int64_t kSecond = 100;  // one second in unit hundredths

// The built-in program table: 13 programs, three difficulty rows each.
const BuiltinRow kBuiltins[] = {
    {"clear-mind", "Clear Mind",
     "Quick exercise for cutting through mental fog and sharpening focus. A good reset between "
     "tasks.",
     "Adapted from the Prana Breath exercise collection (2014).",
     {100, 0, 300, 0, 3 * kSecond, 35},
     {100, 0, 400, 0, 3 * kSecond, 28},
     {100, 0, 500, 0, 3 * kSecond, 24}},
    {"relax1", "Relax1",
     "Calms the nerves after an intense stretch of work. Helps wind stress back down.",
     "Adapted from the Prana Breath exercise collection (2014).",
     {100, 0, 200, 200, 3 * kSecond, 28},
     {100, 0, 200, 300, 3 * kSecond, 24},
     {100, 0, 200, 400, 3 * kSecond, 22}},
    {"relax2", "Relax2",
     "Deeper relaxation with an emphasis on breathing depth. Suits unwinding after long "
     "sessions.",
     "Based on Dr. Weil's 4-7-8 relaxing breath (2014).",
     {400, 700, 800, 0, kSecond, 4},
     {400, 700, 800, 0, kSecond, 8},
     {400, 700, 800, 0, kSecond, 12}},
    {"relax3", "Relax3",
     "Extended relaxation for stress relief and a near-meditative state.",
     "Based on the Human Givens Institute's 7/11 breathing technique (2017).",
     {700, 0, 1100, 0, kSecond, 15},
     {700, 0, 1100, 0, kSecond, 20},
     {700, 0, 1100, 0, kSecond, 24}},
    {"calming1", "Calming1",
     "Soothing rhythm that takes the edge off anxiety. Helps stay settled through long hours.",
     "Adapted from the Prana Breath exercise collection (2014).",
     {100, 200, 100, 200, 3 * kSecond, 24},
     {100, 300, 100, 300, 3 * kSecond, 22},
     {100, 400, 100, 400, 3 * kSecond, 20}},
    {"calming2", "Calming2",
     "A longer calming routine for sustained anxiety reduction in high-pressure stretches.",
     "Adapted from a 2015 guide to calming breath practice.",
     {500, 0, 500, 500, kSecond, 4},
     {500, 0, 500, 500, kSecond, 6},
     {500, 0, 500, 500, kSecond, 8}},
    {"power", "Power",
     "Energizing rhythm for a boost in alertness. Helps push through fatigue.",
     "Adapted from the Prana Breath exercise collection (2014).",
     {100, 200, 200, 0, 3 * kSecond, 28},
     {100, 300, 200, 0, 3 * kSecond, 24},
     {100, 400, 200, 0, 3 * kSecond, 20}},
    {"harmony", "Harmony",
     "Balances relaxation with focus. Good for holding concentration.",
     "Adapted from the Prana Breath exercise collection (2014).",
     {100, 300, 200, 100, 3 * kSecond, 20},
     {100, 400, 200, 100, 3 * kSecond, 18},
     {100, 500, 200, 100, 3 * kSecond, 16}},
    {"anti-stress", "Anti-Stress",
     "Targets acute stress, handy during demanding tasks and long debugging sessions.",
     "Adapted from the Prana Breath exercise collection (2014).",
     {300, 0, 66, 0, 3 * kSecond, 20},
     {400, 0, 66, 0, 3 * kSecond, 17},
     {500, 0, 66, 0, 3 * kSecond, 14}},
    {"anti-appetite", "Anti-Appetite",
     "Helps ride out cravings and skip the unnecessary snack.",
     "Adapted from the Prana Breath exercise collection (2014).",
     {500, 0, 500, 500, kSecond, 40},
     {600, 0, 500, 500, kSecond, 38},
     {700, 0, 500, 500, kSecond, 36}},
    {"cigarette-replace", "Cigarette Replace",
     "A mindful stand-in for the smoke break. Aims to defuse habit triggers.",
     "Adapted from the Prana Breath exercise collection (2014).",
     {200, 110, 220, 80, 2 * kSecond, 23},
     {300, 110, 220, 80, 2 * kSecond, 21},
     {400, 110, 220, 80, 2 * kSecond, 19}},
    {"decision-making", "Decision-Making",
     "Settles the mind ahead of a critical decision.",
     "Based on a pre-decision breathing exercise described by Mithu Storoni (2019).",
     {500, 200, 700, 0, kSecond, 6},
     {500, 200, 700, 0, kSecond, 10},
     {500, 200, 700, 0, kSecond, 14}},
    {"balancing", "Balancing",
     "A short grounding exercise for regaining inner balance on hectic days.",
     "Based on a pranayama balancing exercise (2020).",
     {600, 0, 600, 0, kSecond, 6},
     {800, 100, 800, 100, kSecond, 8},
     {600, 200, 600, 200, kSecond, 10}},
};

// Largest values the custom-program loader accepts; keeps all downstream
// integer arithmetic far away from overflow.
constexpr double kMaxRatio = 1000.0;
constexpr double kMaxUnitSeconds = 3600.0;
constexpr std::int64_t kMaxCycles = 100000;

std::string centi_not_whole_ms_message(const char* level, const char* phase,
                                       std::int64_t ratio_centi, std::int64_t unit_centi) {
    return std::string(level) + " " + phase + " duration is not a whole number of milliseconds (" +
           format_centi(ratio_centi) + " x " + format_centi(unit_centi) + "s)";
}

// A JSON number -> hundredths, rejecting more than two decimal places.
std::int64_t to_centi(double value, const std::string& where) {
    double scaled = value * 100.0;
    double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-6 || !std::isfinite(scaled)) {
        throw ParseError("number has more than two decimal places", where);
    }
    return static_cast<std::int64_t>(rounded);
}

const nlohmann::json& member(const nlohmann::json& object, const char* key,
                             const std::string& where) {
    auto it = object.find(key);
    if (it == object.end()) throw ParseError(std::string("missing key \"") + key + "\"", where);
    return *it;
}

LevelSpec parse_level_spec(const nlohmann::json& block, const std::string& where) {
    if (!block.is_object()) throw ParseError("level block must be an object", where);

    auto ratio = [&](const char* key) {
        const auto& value = member(block, key, where);
        if (!value.is_number()) {
            throw ParseError(std::string("\"") + key + "\" must be a number", where);
        }
        double v = value.get<double>();
        if (v > kMaxRatio) throw ParseError(std::string("\"") + key + "\" is too large", where);
        return to_centi(v, where + " key \"" + key + "\"");
    };

    LevelSpec spec;
    spec.inhale_centi = ratio("inhale");
    spec.retain_centi = ratio("retain");
    spec.exhale_centi = ratio("exhale");
    spec.sustain_centi = ratio("sustain");

    const auto& unit = member(block, "unit", where);
    if (!unit.is_number()) throw ParseError("\"unit\" must be a number", where);
    double unit_value = unit.get<double>();
    if (unit_value > kMaxUnitSeconds) throw ParseError("\"unit\" is too large", where);
    spec.unit_centi = to_centi(unit_value, where + " key \"unit\"");

    const auto& cycles = member(block, "cycles", where);
    if (!cycles.is_number_integer()) throw ParseError("\"cycles\" must be an integer", where);
    spec.cycles = cycles.get<std::int64_t>();
    if (spec.cycles > kMaxCycles) throw ParseError("\"cycles\" is too large", where);

    return spec;
}

std::string required_string(const nlohmann::json& object, const char* key,
                            const std::string& where) {
    const auto& value = member(object, key, where);
    if (!value.is_string()) throw ParseError(std::string("\"") + key + "\" must be a string", where);
    return value.get<std::string>();
}

}  // namespace

Catalog Catalog::with_builtins() {
    Catalog catalog;
    catalog.programs_.reserve(std::size(kBuiltins));
    for (const auto& row : kBuiltins) {
        Program program;
        program.id = row.id;
        program.name = row.name;
        program.description = row.description;
        program.source_note = row.source_note;
        program.specs = {row.beginner, row.medium, row.advanced};
        program.source = Source::BuiltIn;
        catalog.programs_.push_back(std::move(program));
    }
    return catalog;
}

const Program* Catalog::find(std::string_view id) const {
    for (const auto& program : programs_) {
        if (program.id == id) return &program;
    }
    return nullptr;
}

const Program& Catalog::require(std::string_view id) const {
    if (const Program* program = find(id)) return *program;
    throw UnknownProgram(std::string(id));
}

const LevelSpec& Catalog::spec(std::string_view id, Level level) const {
    return require(id).spec(level);
}

void Catalog::add_custom_programs(std::vector<Program> programs) {
    for (auto& program : programs) {
        if (find(program.id) != nullptr) throw DuplicateId(program.id);
        programs_.push_back(std::move(program));
    }
}

std::vector<Program> load_custom_programs(const std::string& json_text) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), "byte " + std::to_string(e.byte));
    }

    if (!document.is_array()) {
        throw ParseError("top-level value must be an array of programs", "document root");
    }

    static const char* const kLevelKeys[3] = {"beginner", "medium", "advanced"};
    static const char* const kPhaseNames[4] = {"inhale", "retain", "exhale", "sustain"};

    std::vector<Program> result;
    std::unordered_set<std::string> seen_ids;

    for (std::size_t i = 0; i < document.size(); ++i) {
        const auto& entry = document[i];
        std::string where = "program #" + std::to_string(i + 1);
        if (!entry.is_object()) throw ParseError("program entry must be an object", where);

        Program program;
        program.source = Source::Custom;
        program.id = required_string(entry, "id", where);
        if (program.id.empty() || program.id.find_first_of(" \t\r\n") != std::string::npos) {
            throw ParseError("\"id\" must be a non-empty string without whitespace", where);
        }
        where = "program \"" + program.id + "\"";
        program.name = required_string(entry, "name", where);
        program.description = required_string(entry, "description", where);

        const auto& levels = member(entry, "levels", where);
        if (!levels.is_object()) throw ParseError("\"levels\" must be an object", where);

        std::vector<std::string> violations;
        for (std::size_t l = 0; l < 3; ++l) {
            const auto& block = member(levels, kLevelKeys[l], where + " levels");
            LevelSpec spec = parse_level_spec(block, where + " level \"" + kLevelKeys[l] + "\"");
            for (const auto& v : validate_spec(spec)) {
                violations.push_back(std::string(kLevelKeys[l]) + ": " + v);
            }
            const std::int64_t ratios[4] = {spec.inhale_centi, spec.retain_centi,
                                            spec.exhale_centi, spec.sustain_centi};
            for (std::size_t p = 0; p < 4; ++p) {
                if (ratios[p] > 0 && (ratios[p] * spec.unit_centi) % 10 != 0) {
                    violations.push_back(centi_not_whole_ms_message(kLevelKeys[l], kPhaseNames[p],
                                                                    ratios[p], spec.unit_centi));
                }
            }
            program.specs[l] = spec;
        }
        if (!violations.empty()) throw ValidationError(program.id, std::move(violations));

        if (!seen_ids.insert(program.id).second) throw DuplicateId(program.id);
        result.push_back(std::move(program));
    }

    return result;
}

std::vector<Program> load_custom_programs_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read custom programs file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_custom_programs(buffer.str());
}

}  // namespace nafas
