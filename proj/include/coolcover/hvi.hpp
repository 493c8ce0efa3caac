#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coolcover::hvi {

/// The four index variables, in the fixed order used throughout:
/// afternoon temperature (F), canopy gap percentage (C), residents under 5
/// (Y), residents over 65 (S).
inline constexpr std::array<const char*, 4> kVariableNames = {
    "pm_temp_f", "canopy_gap_pct", "pop_under5", "pop_over65"};

/// One census tract's index inputs; any field may be missing.
struct TractDemographics {
    std::string tract_id;
    std::optional<double> pm_temp_f;
    std::optional<double> canopy_gap_pct; // percent of area NOT covered by canopy
    std::optional<double> pop_under5;
    std::optional<double> pop_over65;

    std::array<std::optional<double>, 4> values() const {
        return {pm_temp_f, canopy_gap_pct, pop_under5, pop_over65};
    }
    bool complete() const {
        return pm_temp_f && canopy_gap_pct && pop_under5 && pop_over65;
    }
};

/// Per-variable population mean and standard deviation over the city's
/// complete-case tracts.
struct CityStats {
    std::array<double, 4> mean{};
    std::array<double, 4> stddev{};
    std::size_t complete_cases = 0;
};

struct HviResult {
    std::string tract_id;
    std::array<std::optional<double>, 4> z{};
    std::optional<double> score;
    bool missing = false;
    std::vector<std::string> missing_fields;
};

/// Population statistics (divide by N) over complete-case tracts only.
/// Throws Error{InsufficientData} with fewer than 2 complete cases and
/// Error{ZeroVariance} when any variable is constant.
CityStats city_stats(std::span<const TractDemographics> tracts);

/// Sum of the four z-scores. A tract with any missing field gets the missing
/// flag and no score; missing is a value here, not an error.
HviResult hvi_score(const TractDemographics& tract, const CityStats& stats);

struct VifEntry {
    std::string variable;
    double vif; // +inf when the design is exactly collinear
};

/// Variance inflation factor of each variable regressed on the other three
/// plus an intercept, over complete-case tracts. Needs >= 6 complete cases.
std::vector<VifEntry> vif(std::span<const TractDemographics> tracts);

/// Top-k scored tracts by score descending; missing-score tracts excluded;
/// ties broken by tract_id ascending.
std::vector<HviResult> rank_tracts(std::span<const HviResult> results, std::size_t k);

} // namespace coolcover::hvi
