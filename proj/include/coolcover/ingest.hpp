#pragma once

#include <filesystem>
#include <vector>

#include "coolcover/hvi.hpp"
#include "coolcover/witness.hpp"

namespace coolcover::ingest {

/// Loads a GeoJSON FeatureCollection of Polygon/MultiPolygon/Point features
/// (WGS84 lon-lat order) into one landmark per feature. The id comes from the
/// feature's "id" member or an "id" property; polygon centroids are computed,
/// point geometries pass through unchanged.
///
/// Throws Error{ParseError} on malformed documents, Error{MissingId} on
/// absent or duplicate ids, and propagates DegeneratePolygon with the feature
/// id attached.
witness::LandmarkSet load_regions(const std::filesystem::path& path);

/// Loads witnesses from an id,lat,lon CSV or a GeoJSON point collection
/// (chosen by content, not extension).
witness::WitnessSet load_witnesses(const std::filesystem::path& path);

/// Loads the tract_id,pm_temp_f,canopy_pct,pop_under5,pop_over65 CSV. Empty
/// cells mean missing; canopy_gap_pct is 100 minus the canopy percentage.
std::vector<hvi::TractDemographics> load_demographics(const std::filesystem::path& path);

/// Point-feature GeoJSON of the landmark set; load_regions reads it back to
/// an identical set.
void save_landmarks_geojson(const witness::LandmarkSet& landmarks,
                            const std::filesystem::path& path);

std::string witnesses_to_csv(const witness::WitnessSet& witnesses);
void save_witnesses_csv(const witness::WitnessSet& witnesses,
                        const std::filesystem::path& path);

} // namespace coolcover::ingest
