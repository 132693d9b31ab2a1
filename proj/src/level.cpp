#include "nafas/level.hpp"

#include <algorithm>
#include <cctype>

#include "nafas/errors.hpp"

namespace nafas {

std::string_view level_name(Level level) {
    switch (level) {
        case Level::Beginner: return "beginner";
        case Level::Medium: return "medium";
        case Level::Advanced: return "advanced";
    }
    return "beginner";
}

Level parse_level(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "beginner" || lower == "b") return Level::Beginner;
    if (lower == "medium" || lower == "m") return Level::Medium;
    if (lower == "advanced" || lower == "a") return Level::Advanced;
    throw UnknownLevel(std::string(text));
}

}  // namespace nafas
