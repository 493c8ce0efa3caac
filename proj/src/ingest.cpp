#include "coolcover/ingest.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coolcover/errors.hpp"
#include "coolcover/util.hpp"

namespace coolcover::ingest {

using nlohmann::json;

namespace {

geo::GeoPoint parse_position(const json& coords, const std::string& context) {
    if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() || !coords[1].is_number())
        throw Error(ErrorKind::ParseError, context + ": position must be [lon, lat]");
    geo::GeoPoint p{coords[1].get<double>(), coords[0].get<double>()};
    if (!p.valid())
        throw Error(ErrorKind::ParseError,
                    context + ": coordinates out of range (lat " + util::format_double(p.lat) +
                        ", lon " + util::format_double(p.lon) + ")");
    return p;
}

std::vector<geo::GeoPoint> parse_ring(const json& ring, const std::string& context) {
    if (!ring.is_array() || ring.size() < 3)
        throw Error(ErrorKind::ParseError, context + ": ring needs at least 3 positions");
    std::vector<geo::GeoPoint> vertices;
    vertices.reserve(ring.size());
    for (const auto& pos : ring)
        vertices.push_back(parse_position(pos, context));
    // GeoJSON rings repeat the first position; our rings close implicitly.
    if (vertices.size() > 3 && vertices.front() == vertices.back())
        vertices.pop_back();
    return vertices;
}

geo::PolygonRing parse_polygon(const json& rings, const std::string& context) {
    if (!rings.is_array() || rings.empty())
        throw Error(ErrorKind::ParseError, context + ": polygon needs an outer ring");
    geo::PolygonRing poly;
    poly.vertices = parse_ring(rings[0], context);
    for (std::size_t r = 1; r < rings.size(); ++r)
        poly.holes.push_back(parse_ring(rings[r], context));
    return poly;
}

std::string feature_id(const json& feature) {
    if (feature.contains("id")) {
        const auto& id = feature["id"];
        if (id.is_string())
            return id.get<std::string>();
        if (id.is_number_integer())
            return std::to_string(id.get<long long>());
        if (id.is_number())
            return util::format_double(id.get<double>());
    }
    if (feature.contains("properties") && feature["properties"].is_object()) {
        const auto& props = feature["properties"];
        if (props.contains("id")) {
            const auto& id = props["id"];
            if (id.is_string())
                return id.get<std::string>();
            if (id.is_number_integer())
                return std::to_string(id.get<long long>());
            if (id.is_number())
                return util::format_double(id.get<double>());
        }
    }
    return {};
}

json parse_json_file(const std::filesystem::path& path) {
    const std::string text = util::read_file(path.string());
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorKind::ParseError, path.string() + ": not valid JSON");
    return doc;
}

double parse_number(const std::string& field, const std::string& context) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw Error(ErrorKind::ParseError, context + ": not a number: '" + field + "'");
    return value;
}

witness::WitnessSet witnesses_from_geojson(const json& doc, const std::string& context) {
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array())
        throw Error(ErrorKind::ParseError, context + ": expected a FeatureCollection");
    witness::WitnessSet witnesses;
    std::set<std::string> seen;
    std::size_t index = 0;
    for (const auto& feature : doc["features"]) {
        const std::string where = context + ": feature " + std::to_string(index);
        if (!feature.contains("geometry") || !feature["geometry"].is_object())
            throw Error(ErrorKind::ParseError, where + ": missing geometry");
        const auto& geom = feature["geometry"];
        if (geom.value("type", "") != "Point")
            throw Error(ErrorKind::ParseError, where + ": witness features must be points");
        std::string id = feature_id(feature);
        if (id.empty())
            id = "w" + std::to_string(index);
        if (!seen.insert(id).second)
            throw Error(ErrorKind::MissingId, where + ": duplicate witness id '" + id + "'");
        witnesses.points.push_back(parse_position(geom["coordinates"], where));
        witnesses.ids.push_back(std::move(id));
        ++index;
    }
    return witnesses;
}

} // namespace

witness::LandmarkSet load_regions(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array())
        throw Error(ErrorKind::ParseError, path.string() + ": expected a FeatureCollection");

    witness::LandmarkSet landmarks;
    std::set<std::string> seen;
    std::size_t index = 0;
    for (const auto& feature : doc["features"]) {
        const std::string where = path.string() + ": feature " + std::to_string(index);
        ++index;
        const std::string id = feature_id(feature);
        if (id.empty())
            throw Error(ErrorKind::MissingId, where + ": feature has no id");
        if (!seen.insert(id).second)
            throw Error(ErrorKind::MissingId, where + ": duplicate id '" + id + "'");
        if (!feature.contains("geometry") || !feature["geometry"].is_object())
            throw Error(ErrorKind::ParseError, where + " (id " + id + "): missing geometry");
        const auto& geom = feature["geometry"];
        const std::string type = geom.value("type", "");

        geo::GeoPoint centroid;
        if (type == "Point") {
            centroid = parse_position(geom["coordinates"], where);
        } else if (type == "Polygon") {
            const geo::PolygonRing poly = parse_polygon(geom["coordinates"], where);
            try {
                centroid = geo::polygon_centroid(poly);
            } catch (const Error& e) {
                throw Error(e.kind(), "feature '" + id + "': " + e.message());
            }
        } else if (type == "MultiPolygon") {
            std::vector<geo::PolygonRing> parts;
            if (!geom["coordinates"].is_array() || geom["coordinates"].empty())
                throw Error(ErrorKind::ParseError, where + ": empty MultiPolygon");
            for (const auto& rings : geom["coordinates"])
                parts.push_back(parse_polygon(rings, where));
            try {
                centroid = geo::polygon_centroid(parts);
            } catch (const Error& e) {
                throw Error(e.kind(), "feature '" + id + "': " + e.message());
            }
        } else {
            throw Error(ErrorKind::ParseError,
                        where + ": unsupported geometry type '" + type + "'");
        }
        landmarks.ids.push_back(id);
        landmarks.points.push_back(centroid);
    }
    if (landmarks.size() == 0)
        throw Error(ErrorKind::ParseError, path.string() + ": no features");
    return landmarks;
}

witness::WitnessSet load_witnesses(const std::filesystem::path& path) {
    const std::string text = util::read_file(path.string());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc = json::parse(text, nullptr, false);
        if (doc.is_discarded())
            throw Error(ErrorKind::ParseError, path.string() + ": not valid JSON");
        return witnesses_from_geojson(doc, path.string());
    }

    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::ParseError, path.string() + ": empty file");
    auto header = util::split_csv_line(line);
    if (header != std::vector<std::string>{"id", "lat", "lon"})
        throw Error(ErrorKind::ParseError, path.string() + ": expected header id,lat,lon");

    witness::WitnessSet witnesses;
    std::set<std::string> seen;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        const auto fields = util::split_csv_line(line);
        const std::string where = path.string() + ": row " + std::to_string(row);
        if (fields.size() != 3)
            throw Error(ErrorKind::ParseError, where + ": expected 3 fields");
        if (!seen.insert(fields[0]).second)
            throw Error(ErrorKind::MissingId, where + ": duplicate witness id '" + fields[0] + "'");
        geo::GeoPoint p{parse_number(fields[1], where), parse_number(fields[2], where)};
        if (!p.valid())
            throw Error(ErrorKind::ParseError, where + ": coordinates out of range");
        witnesses.ids.push_back(fields[0]);
        witnesses.points.push_back(p);
    }
    return witnesses;
}

std::vector<hvi::TractDemographics> load_demographics(const std::filesystem::path& path) {
    const std::string text = util::read_file(path.string());
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::ParseError, path.string() + ": empty file");
    const auto header = util::split_csv_line(line);
    const std::vector<std::string> expected{"tract_id", "pm_temp_f", "canopy_pct",
                                            "pop_under5", "pop_over65"};
    if (header != expected)
        throw Error(ErrorKind::ParseError,
                    path.string() + ": expected header tract_id,pm_temp_f,canopy_pct,"
                                    "pop_under5,pop_over65");

    std::vector<hvi::TractDemographics> tracts;
    std::set<std::string> seen;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        const auto fields = util::split_csv_line(line);
        const std::string where = path.string() + ": row " + std::to_string(row);
        if (fields.size() != 5)
            throw Error(ErrorKind::ParseError, where + ": expected 5 fields");
        if (fields[0].empty())
            throw Error(ErrorKind::MissingId, where + ": empty tract_id");
        if (!seen.insert(fields[0]).second)
            throw Error(ErrorKind::MissingId, where + ": duplicate tract_id '" + fields[0] + "'");

        hvi::TractDemographics tract;
        tract.tract_id = fields[0];
        if (!fields[1].empty())
            tract.pm_temp_f = parse_number(fields[1], where);
        if (!fields[2].empty()) {
            const double canopy = parse_number(fields[2], where);
            if (canopy < 0.0 || canopy > 100.0)
                throw Error(ErrorKind::ParseError,
                            where + ": canopy_pct outside [0, 100]: " + fields[2]);
            tract.canopy_gap_pct = 100.0 - canopy;
        }
        if (!fields[3].empty()) {
            const double count = parse_number(fields[3], where);
            if (count < 0.0)
                throw Error(ErrorKind::ParseError, where + ": negative pop_under5");
            tract.pop_under5 = count;
        }
        if (!fields[4].empty()) {
            const double count = parse_number(fields[4], where);
            if (count < 0.0)
                throw Error(ErrorKind::ParseError, where + ": negative pop_over65");
            tract.pop_over65 = count;
        }
        tracts.push_back(std::move(tract));
    }
    return tracts;
}

void save_landmarks_geojson(const witness::LandmarkSet& landmarks,
                            const std::filesystem::path& path) {
    std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
    for (std::size_t i = 0; i < landmarks.size(); ++i) {
        if (i)
            out += ',';
        out += "{\"type\":\"Feature\",\"id\":\"" + util::json_escape(landmarks.ids[i]) +
               "\",\"properties\":{},\"geometry\":{\"type\":\"Point\",\"coordinates\":[" +
               util::format_double(landmarks.points[i].lon) + ',' +
               util::format_double(landmarks.points[i].lat) + "]}}";
    }
    out += "]}\n";
    util::write_file(path.string(), out);
}

std::string witnesses_to_csv(const witness::WitnessSet& witnesses) {
    std::string out = "id,lat,lon\n";
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
        out += witnesses.ids[i];
        out += ',';
        out += util::format_double(witnesses.points[i].lat);
        out += ',';
        out += util::format_double(witnesses.points[i].lon);
        out += '\n';
    }
    return out;
}

void save_witnesses_csv(const witness::WitnessSet& witnesses,
                        const std::filesystem::path& path) {
    util::write_file(path.string(), witnesses_to_csv(witnesses));
}

} // namespace coolcover::ingest
