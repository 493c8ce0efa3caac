#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coolcover/hvi.hpp"
#include "coolcover/overpass.hpp"
#include "coolcover/persistence.hpp"
#include "coolcover/witness.hpp"

namespace coolcover::report {

/// Five-number summary of finite death values with 1.5*IQR outliers.
/// Quartiles use inclusive linear interpolation; infinite deaths are
/// excluded from the numbers and counted separately.
struct SummaryStats {
    std::size_t count = 0;
    std::size_t infinite = 0;
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    std::vector<double> outliers;

    bool empty() const { return count == 0; }
};

SummaryStats summarize_deaths(std::span<const persistence::PersistencePair> pairs, int dim);

/// Inclusive-interpolation quantile of a sorted sample.
double quantile_inclusive(std::span<const double> sorted_values, double q);

/// Everything cli_analyze serializes.
struct AnalysisReport {
    std::string city;
    witness::LandmarkSet landmarks;
    std::size_t witness_count = 0;
    std::string region_hash;
    std::string witness_hash;
    int max_dim = 2;
    std::size_t top_k = 5;
    persistence::PersistenceDiagram diagram;
    /// Death value of the pair each landmark is the birth vertex of
    /// (one entry per landmark; +inf for the essential component).
    std::vector<double> landmark_death;
    /// Rank of that pair among dimension-0 deaths, descending, 1-based.
    std::vector<std::size_t> landmark_rank;
};

AnalysisReport build_report(std::string city, witness::LandmarkSet landmarks,
                            std::size_t witness_count, std::string region_hash,
                            std::string witness_hash, int max_dim, std::size_t top_k,
                            persistence::PersistenceDiagram diagram);

std::string pairs_csv(const AnalysisReport& report);
std::string deaths_dim0_geojson(const AnalysisReport& report);
std::string deaths_dim1_geojson(const AnalysisReport& report);
std::string top_k_geojson(const AnalysisReport& report);
std::string summary_json(const AnalysisReport& report);

std::string hvi_csv(std::span<const hvi::HviResult> results);
std::string top_k_hvi_csv(std::span<const hvi::HviResult> results, std::size_t k);

struct AnalyzeOptions {
    std::filesystem::path region_path;
    std::filesystem::path witnesses_path; // empty when fetching
    bool fetch = false;
    std::optional<geo::BoundingBox> bbox; // fetch box override
    int max_dim = 2;
    std::size_t top_k = 5;
    std::filesystem::path out_dir = ".";
    std::filesystem::path cache_dir = "cache";
    ingest::OverpassConfig overpass;
    std::string city;
};

/// The analyze pipeline: load, build the filtration, compute persistence,
/// write pairs.csv, deaths_dim0.geojson, deaths_dim1.geojson, top_k.geojson
/// and summary.json. Returns the process exit code (0 ok, 1 input error,
/// 2 upstream fetch failure); nothing is written on failure.
int run_analyze(const AnalyzeOptions& options, std::ostream& err);

/// Summary recomputed from an existing pairs.csv (used by the summary
/// subcommand); stats only, no input fingerprints.
std::string summary_json_from_pairs_csv(const std::string& csv_text);

struct HviOptions {
    std::filesystem::path demographics_path;
    std::size_t top_k = 5;
    std::filesystem::path out_dir = ".";
    bool print_vif = false;
};

/// The hvi pipeline: writes hvi.csv and top_k_hvi.csv.
int run_hvi(const HviOptions& options, std::ostream& out, std::ostream& err);

} // namespace coolcover::report
