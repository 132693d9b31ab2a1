#pragma once

#include <array>
#include <string>
#include <string_view>

namespace nafas {

enum class Level { Beginner = 0, Medium = 1, Advanced = 2 };

inline constexpr std::array<Level, 3> kAllLevels{Level::Beginner, Level::Medium, Level::Advanced};

constexpr std::size_t level_index(Level level) { return static_cast<std::size_t>(level); }

// "beginner" / "medium" / "advanced"
std::string_view level_name(Level level);

// Accepts full names and the single-letter aliases B/M/A, case-insensitive.
// Throws UnknownLevel otherwise.
Level parse_level(std::string_view text);

}  // namespace nafas
