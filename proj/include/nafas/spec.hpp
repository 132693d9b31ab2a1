#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nafas {

// One difficulty row of a breathing program. Ratios and the time unit are
// stored as integer hundredths so that every derived duration is exact
// integer arithmetic; two decimal places is all the domain ever needs.
struct LevelSpec {
    std::int64_t inhale_centi = 0;   // ratio, hundredths
    std::int64_t retain_centi = 0;   // ratio, hundredths
    std::int64_t exhale_centi = 0;   // ratio, hundredths
    std::int64_t sustain_centi = 0;  // ratio, hundredths
    std::int64_t unit_centi = 0;     // hundredths of a second
    std::int64_t cycles = 0;

    friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

// Empty result means the spec is valid; otherwise one message per violated
// invariant. Violations are data, not failures.
std::vector<std::string> validate_spec(const LevelSpec& spec);

std::int64_t ratio_sum_centi(const LevelSpec& spec);

// "3", "0.66", "1.1": hundredths rendered without trailing zeros.
std::string format_centi(std::int64_t centi);

// "1:0:3:0", for display.
std::string format_ratios(const LevelSpec& spec);

}  // namespace nafas
