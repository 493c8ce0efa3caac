#include "coolcover/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coolcover/errors.hpp"

namespace coolcover::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Shoelace accumulator for one ring: signed area plus area-weighted centroid
// numerators, all in planar lon/lat space.
struct RingMoments {
    double signed_area = 0.0;
    double cx = 0.0; // lon numerator
    double cy = 0.0; // lat numerator
};

RingMoments ring_moments(const std::vector<GeoPoint>& ring) {
    RingMoments m;
    const size_t n = ring.size();
    for (size_t k = 0; k < n; ++k) {
        const GeoPoint& p = ring[k];
        const GeoPoint& q = ring[(k + 1) % n];
        const double cross = p.lon * q.lat - q.lon * p.lat;
        m.signed_area += cross;
        m.cx += (p.lon + q.lon) * cross;
        m.cy += (p.lat + q.lat) * cross;
    }
    m.signed_area *= 0.5;
    m.cx /= 6.0;
    m.cy /= 6.0;
    return m;
}

// Accumulates |outer| - sumed |holes| so the result does not depend on the
// winding direction the input happens to use.
void accumulate(const PolygonRing& poly, double& area, double& cx, double& cy) {
    RingMoments outer = ring_moments(poly.vertices);
    double s = outer.signed_area >= 0 ? 1.0 : -1.0;
    area += s * outer.signed_area;
    cx += s * outer.cx;
    cy += s * outer.cy;
    for (const auto& hole : poly.holes) {
        RingMoments h = ring_moments(hole);
        s = h.signed_area >= 0 ? -1.0 : 1.0;
        area += s * h.signed_area;
        cx += s * h.cx;
        cy += s * h.cy;
    }
}

} // namespace

bool GeoPoint::valid() const {
    return std::isfinite(lat) && std::isfinite(lon) &&
           lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

double geodesic_distance_km(const GeoPoint& a, const GeoPoint& b) {
    const double phi_a = a.lat * kDegToRad;
    const double phi_b = b.lat * kDegToRad;
    const double half_dphi = 0.5 * (b.lat - a.lat) * kDegToRad;
    const double half_dlam = 0.5 * (b.lon - a.lon) * kDegToRad;
    const double s_lat = std::sin(half_dphi);
    const double s_lon = std::sin(half_dlam);
    const double h = s_lat * s_lat + std::cos(phi_a) * std::cos(phi_b) * s_lon * s_lon;
    // Clamp guards against h marginally above 1 from rounding near antipodes.
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(h, 1.0)));
}

GeoPoint polygon_centroid(const PolygonRing& poly) {
    return polygon_centroid(std::span<const PolygonRing>(&poly, 1));
}

GeoPoint polygon_centroid(std::span<const PolygonRing> parts) {
    if (parts.empty())
        throw Error(ErrorKind::DegeneratePolygon, "no polygon rings");
    for (const auto& part : parts) {
        if (part.vertices.size() < 3)
            throw Error(ErrorKind::DegeneratePolygon, "ring has fewer than 3 vertices");
        for (const auto& hole : part.holes)
            if (hole.size() < 3)
                throw Error(ErrorKind::DegeneratePolygon, "interior ring has fewer than 3 vertices");
    }

    double area = 0.0, cx = 0.0, cy = 0.0;
    for (const auto& part : parts)
        accumulate(part, area, cx, cy);

    if (std::abs(area) < 1e-12)
        throw Error(ErrorKind::DegeneratePolygon, "polygon area below 1e-12 square degrees");

    return GeoPoint{cy / area, cx / area};
}

double max_pairwise_distance_km(std::span<const GeoPoint> points) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(points.size());
    double best = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t j = i + 1; j < n; ++j) {
            const double d = geodesic_distance_km(points[i], points[j]);
            if (d > best)
                best = d;
        }
    }
    return best;
}

BoundingBox buffered_bbox(std::span<const GeoPoint> landmarks) {
    if (landmarks.size() < 2)
        throw Error(ErrorKind::TooFewLandmarks, "buffered_bbox needs at least 2 landmarks");

    double lat_min = landmarks[0].lat, lat_max = landmarks[0].lat;
    double lon_min = landmarks[0].lon, lon_max = landmarks[0].lon;
    double lat_sum = 0.0;
    for (const auto& p : landmarks) {
        lat_min = std::min(lat_min, p.lat);
        lat_max = std::max(lat_max, p.lat);
        lon_min = std::min(lon_min, p.lon);
        lon_max = std::max(lon_max, p.lon);
        lat_sum += p.lat;
    }
    if (lon_max - lon_min > 180.0)
        throw Error(ErrorKind::AntimeridianSpan,
                    "landmark longitudes span more than 180 degrees; antimeridian boxes are unsupported");

    const double radius_km = 0.5 * max_pairwise_distance_km(landmarks);
    const double mean_lat = lat_sum / static_cast<double>(landmarks.size());
    const double dlat = radius_km / kKmPerDegree;
    const double dlon = radius_km / (kKmPerDegree * std::cos(mean_lat * kDegToRad));

    return BoundingBox{GeoPoint{lat_min - dlat, lon_min - dlon},
                       GeoPoint{lat_max + dlat, lon_max + dlon}};
}

} // namespace coolcover::geo
