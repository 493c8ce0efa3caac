#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "coolcover/geo.hpp"
#include "coolcover/witness.hpp"

namespace coolcover::ingest {

/// One Overpass selector: ANDed key=value clauses, e.g.
/// {{"amenity","social_facility"},{"social_facility:for","senior"}}.
struct TagSelector {
    std::vector<std::pair<std::string, std::string>> clauses;
};

/// A colloquial cooling-center tag ("library", "senior", ...) mapped to the
/// concrete OSM selectors queried for it.
struct TagGroup {
    std::string name;
    std::vector<TagSelector> selectors;
};

struct OverpassConfig {
    std::string endpoint = "https://overpass-api.de/api/interpreter";
    std::vector<TagGroup> tag_groups;
    int timeout_seconds = 30;
    int max_retries = 3;
    double backoff_seconds = 1.0;

    /// The default tag mapping: amenity=library; amenity=community_centre;
    /// senior facilities (social_facility=assisted_living,
    /// amenity=social_facility + social_facility:for=senior,
    /// amenity=social_centre); leisure=fitness_centre / sports_centre as the
    /// recreation-center proxy.
    static OverpassConfig defaults();
};

/// Reads a JSON config file overriding any subset of the defaults. Schema:
/// {"endpoint": "...", "timeout_seconds": N, "max_retries": N,
///  "backoff_seconds": X,
///  "tag_groups": [{"name": "...", "selectors": [["k=v", "k2=v2"], ...]}]}
OverpassConfig load_overpass_config(const std::filesystem::path& path);

struct WitnessQuery {
    geo::BoundingBox bbox;
    std::vector<TagGroup> tag_groups; // defaults applied when empty
};

/// Overpass QL issued for one tag group over the box (nodes and ways,
/// centers requested for ways).
std::string overpass_query(const TagGroup& group, const geo::BoundingBox& bbox,
                           int timeout_seconds);

/// Deterministic cache key over endpoint, bbox, and the group's selectors.
std::uint64_t cache_key(const std::string& endpoint, const geo::BoundingBox& bbox,
                        const TagGroup& group);

/// Fetches cooling-center candidates: one request per tag group (served from
/// cache_dir when an identical query was cached), elements deduplicated by
/// OSM id, ways represented by their center or first geometry node, merged
/// and sorted by element id.
///
/// Network calls are serialized; do not invoke concurrently against one
/// cache directory. Throws Error{NetworkError} on connection failure with no
/// cached copy, Error{UpstreamError} on non-success status, and
/// Error{ParseError} on malformed responses.
witness::WitnessSet fetch_witnesses(const WitnessQuery& query, const OverpassConfig& config,
                                    const std::filesystem::path& cache_dir);

} // namespace coolcover::ingest
