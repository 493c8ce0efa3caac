#pragma once

#include <span>
#include <vector>

namespace coolcover::geo {

/// Mean Earth radius in kilometers (IUGG mean radius R1).
inline constexpr double kEarthRadiusKm = 6371.0088;

/// Kilometers per degree of latitude used for buffer-to-degree conversion.
inline constexpr double kKmPerDegree = 111.195;

/// Latitude/longitude position in degrees. lat in [-90, 90], lon in [-180, 180].
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    bool valid() const;
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Simple polygon given by an outer ring (implicit closure, first vertex not
/// repeated) and optional interior rings that cut holes out of it.
struct PolygonRing {
    std::vector<GeoPoint> vertices;
    std::vector<std::vector<GeoPoint>> holes;
};

/// Axis-aligned box. No antimeridian support: southwest.lon <= northeast.lon.
struct BoundingBox {
    GeoPoint southwest;
    GeoPoint northeast;

    bool contains(const GeoPoint& p) const {
        return p.lat >= southwest.lat && p.lat <= northeast.lat &&
               p.lon >= southwest.lon && p.lon <= northeast.lon;
    }
    bool strictly_contains(const GeoPoint& p) const {
        return p.lat > southwest.lat && p.lat < northeast.lat &&
               p.lon > southwest.lon && p.lon < northeast.lon;
    }
};

/// Great-circle distance in kilometers (haversine on the kEarthRadiusKm
/// sphere). Exactly symmetric in its arguments: swapping a and b evaluates
/// the identical floating-point expression.
double geodesic_distance_km(const GeoPoint& a, const GeoPoint& b);

/// Planar area-weighted centroid (shoelace formula) computed directly in
/// lon/lat coordinates. Interior rings subtract. Invariant under vertex
/// rotation and orientation reversal.
///
/// Throws Error{DegeneratePolygon} when the net area is below 1e-12 square
/// degrees.
GeoPoint polygon_centroid(const PolygonRing& poly);

/// Centroid of a multi-polygon: area-weighted combination of the parts.
GeoPoint polygon_centroid(std::span<const PolygonRing> parts);

/// Largest geodesic distance over all point pairs. Parallelized over rows.
double max_pairwise_distance_km(std::span<const GeoPoint> points);

/// Axis-aligned box of the landmarks expanded on every side by half the
/// maximum pairwise geodesic distance, converted to degrees as
/// dlat = r / kKmPerDegree and dlon = r / (kKmPerDegree * cos(mean lat)).
///
/// Throws Error{TooFewLandmarks} for fewer than two points and
/// Error{AntimeridianSpan} when the longitude extent exceeds 180 degrees.
BoundingBox buffered_bbox(std::span<const GeoPoint> landmarks);

} // namespace coolcover::geo
