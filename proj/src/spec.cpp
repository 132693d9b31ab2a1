#include "nafas/spec.hpp"

namespace nafas {

std::vector<std::string> validate_spec(const LevelSpec& spec) {
    std::vector<std::string> violations;
    if (spec.inhale_centi <= 0) violations.push_back("inhale_ratio must be > 0");
    if (spec.exhale_centi <= 0) violations.push_back("exhale_ratio must be > 0");
    if (spec.retain_centi < 0) violations.push_back("retain_ratio must be >= 0");
    if (spec.sustain_centi < 0) violations.push_back("sustain_ratio must be >= 0");
    if (spec.unit_centi <= 0) violations.push_back("unit_seconds must be > 0");
    if (spec.cycles < 1) violations.push_back("cycles must be >= 1");
    return violations;
}

std::int64_t ratio_sum_centi(const LevelSpec& spec) {
    return spec.inhale_centi + spec.retain_centi + spec.exhale_centi + spec.sustain_centi;
}

std::string format_centi(std::int64_t centi) {
    std::string sign = centi < 0 ? "-" : "";
    std::int64_t abs = centi < 0 ? -centi : centi;
    std::int64_t whole = abs / 100;
    std::int64_t frac = abs % 100;
    if (frac == 0) return sign + std::to_string(whole);
    if (frac % 10 == 0) return sign + std::to_string(whole) + "." + std::to_string(frac / 10);
    std::string cents = std::to_string(frac);
    if (cents.size() == 1) cents = "0" + cents;
    return sign + std::to_string(whole) + "." + cents;
}

std::string format_ratios(const LevelSpec& spec) {
    return format_centi(spec.inhale_centi) + ":" + format_centi(spec.retain_centi) + ":" +
           format_centi(spec.exhale_centi) + ":" + format_centi(spec.sustain_centi);
}

}  // namespace nafas
