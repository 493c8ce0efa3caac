#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iostream>
#include <map>
#include <thread>

#include <json.hpp>

#include "coolcover/errors.hpp"
#include "coolcover/overpass.hpp"
#include "coolcover/util.hpp"

namespace coolcover::ingest {

using nlohmann::json;

namespace {

TagGroup make_group(std::string name, std::vector<TagSelector> selectors) {
    return TagGroup{std::move(name), std::move(selectors)};
}

std::string bbox_string(const geo::BoundingBox& bbox) {
    // Overpass order: south,west,north,east.
    return util::format_double(bbox.southwest.lat) + ',' + util::format_double(bbox.southwest.lon) +
           ',' + util::format_double(bbox.northeast.lat) + ',' +
           util::format_double(bbox.northeast.lon);
}

std::string canonical_selectors(const TagGroup& group) {
    std::string out;
    for (const auto& sel : group.selectors) {
        for (const auto& [key, value] : sel.clauses)
            out += '[' + key + '=' + value + ']';
        out += ';';
    }
    return out;
}

struct SplitUrl {
    std::string base; // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorKind::InvalidArgument, "endpoint must include a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string fetch_with_retries(const std::string& endpoint, const std::string& query,
                               const OverpassConfig& config) {
    const SplitUrl url = split_url(endpoint);
    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            const double delay = config.backoff_seconds * static_cast<double>(1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
        httplib::Client client(url.base);
        client.set_connection_timeout(config.timeout_seconds, 0);
        client.set_read_timeout(config.timeout_seconds, 0);
        auto res = client.Post(url.path, "data=" + httplib::detail::encode_url(query),
                               "application/x-www-form-urlencoded");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 200 && res->status < 300)
            return res->body;
        if (res->status == 429 || res->status >= 500) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        throw Error(ErrorKind::UpstreamError,
                    "status " + std::to_string(res->status) + " from " + endpoint + ": " +
                        res->body.substr(0, 200));
    }
    throw Error(ErrorKind::NetworkError, "request to " + endpoint + " failed after " +
                                             std::to_string(config.max_retries + 1) +
                                             " attempts (" + last_error + ")");
}

struct Element {
    std::string type;
    std::uint64_t id;
    geo::GeoPoint point;
};

std::vector<Element> parse_elements(const std::string& body, const std::string& context) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("elements") ||
        !doc["elements"].is_array())
        throw Error(ErrorKind::ParseError, context + ": response is not an Overpass JSON document");

    std::vector<Element> out;
    for (const auto& el : doc["elements"]) {
        if (!el.is_object() || !el.contains("type") || !el.contains("id"))
            continue;
        Element item;
        item.type = el.value("type", "");
        item.id = el["id"].get<std::uint64_t>();
        if (el.contains("lat") && el.contains("lon")) {
            item.point = {el["lat"].get<double>(), el["lon"].get<double>()};
        } else if (el.contains("center") && el["center"].is_object()) {
            item.point = {el["center"].value("lat", 0.0), el["center"].value("lon", 0.0)};
        } else if (el.contains("geometry") && el["geometry"].is_array() &&
                   !el["geometry"].empty()) {
            const auto& first = el["geometry"][0];
            item.point = {first.value("lat", 0.0), first.value("lon", 0.0)};
        } else {
            continue; // no usable coordinate
        }
        if (!item.point.valid())
            throw Error(ErrorKind::ParseError, context + ": element coordinate out of range");
        out.push_back(std::move(item));
    }
    return out;
}

} // namespace

OverpassConfig OverpassConfig::defaults() {
    OverpassConfig config;
    config.tag_groups = {
        make_group("library", {TagSelector{{{"amenity", "library"}}}}),
        make_group("community_center", {TagSelector{{{"amenity", "community_centre"}}}}),
        make_group("senior",
                   {TagSelector{{{"social_facility", "assisted_living"}}},
                    TagSelector{{{"amenity", "social_facility"}, {"social_facility:for", "senior"}}},
                    TagSelector{{{"amenity", "social_centre"}}}}),
        make_group("recreation_center", {TagSelector{{{"leisure", "fitness_centre"}}},
                                         TagSelector{{{"leisure", "sports_centre"}}}}),
    };
    return config;
}

OverpassConfig load_overpass_config(const std::filesystem::path& path) {
    OverpassConfig config = OverpassConfig::defaults();
    json doc = json::parse(util::read_file(path.string()), nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error(ErrorKind::ParseError, path.string() + ": not a JSON object");
    if (doc.contains("endpoint"))
        config.endpoint = doc["endpoint"].get<std::string>();
    if (doc.contains("timeout_seconds"))
        config.timeout_seconds = doc["timeout_seconds"].get<int>();
    if (doc.contains("max_retries"))
        config.max_retries = doc["max_retries"].get<int>();
    if (doc.contains("backoff_seconds"))
        config.backoff_seconds = doc["backoff_seconds"].get<double>();
    if (doc.contains("tag_groups")) {
        if (!doc["tag_groups"].is_array() || doc["tag_groups"].empty())
            throw Error(ErrorKind::ParseError, path.string() + ": tag_groups must be a nonempty array");
        config.tag_groups.clear();
        for (const auto& g : doc["tag_groups"]) {
            TagGroup group;
            group.name = g.value("name", "");
            if (group.name.empty())
                throw Error(ErrorKind::ParseError, path.string() + ": tag group without a name");
            for (const auto& sel : g.value("selectors", json::array())) {
                TagSelector selector;
                for (const auto& clause : sel) {
                    const std::string text = clause.get<std::string>();
                    const auto eq = text.find('=');
                    if (eq == std::string::npos)
                        throw Error(ErrorKind::ParseError,
                                    path.string() + ": selector clause must be key=value: " + text);
                    selector.clauses.emplace_back(text.substr(0, eq), text.substr(eq + 1));
                }
                if (selector.clauses.empty())
                    throw Error(ErrorKind::ParseError, path.string() + ": empty selector");
                group.selectors.push_back(std::move(selector));
            }
            if (group.selectors.empty())
                throw Error(ErrorKind::ParseError,
                            path.string() + ": tag group '" + group.name + "' has no selectors");
            config.tag_groups.push_back(std::move(group));
        }
    }
    return config;
}

std::string overpass_query(const TagGroup& group, const geo::BoundingBox& bbox,
                           int timeout_seconds) {
    const std::string box = '(' + bbox_string(bbox) + ')';
    std::string q = "[out:json][timeout:" + std::to_string(timeout_seconds) + "];(";
    for (const auto& sel : group.selectors) {
        std::string filters;
        for (const auto& [key, value] : sel.clauses)
            filters += "[\"" + key + "\"=\"" + value + "\"]";
        q += "node" + filters + box + ";";
        q += "way" + filters + box + ";";
    }
    q += ");out center;";
    return q;
}

std::uint64_t cache_key(const std::string& endpoint, const geo::BoundingBox& bbox,
                        const TagGroup& group) {
    std::string material = endpoint;
    material += '\n';
    material += bbox_string(bbox);
    material += '\n';
    material += canonical_selectors(group);
    return util::fnv1a64(material);
}

witness::WitnessSet fetch_witnesses(const WitnessQuery& query, const OverpassConfig& config,
                                    const std::filesystem::path& cache_dir) {
    const std::vector<TagGroup>& groups =
        query.tag_groups.empty() ? config.tag_groups : query.tag_groups;
    if (groups.empty())
        throw Error(ErrorKind::InvalidArgument, "no tag groups to query");
    std::filesystem::create_directories(cache_dir);

    std::map<std::pair<std::string, std::uint64_t>, geo::GeoPoint> merged;
    for (const TagGroup& group : groups) {
        const std::uint64_t key = cache_key(config.endpoint, query.bbox, group);
        const std::filesystem::path cache_path =
            cache_dir / ("overpass-" + util::hex64(key) + ".json");

        std::string body;
        if (std::filesystem::exists(cache_path)) {
            json entry = json::parse(util::read_file(cache_path.string()), nullptr, false);
            if (!entry.is_discarded() && entry.is_object() && entry.contains("response"))
                body = entry["response"].get<std::string>();
        }
        if (body.empty()) {
            const std::string q = overpass_query(group, query.bbox, config.timeout_seconds);
            try {
                body = fetch_with_retries(config.endpoint, q, config);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::NetworkError)
                    throw Error(ErrorKind::NetworkError,
                                e.message() + "; no cached copy at " +
                                    cache_path.string());
                throw;
            }
            json entry;
            entry["endpoint"] = config.endpoint;
            entry["query"] = q;
            entry["group"] = group.name;
            entry["fetched_at"] = static_cast<std::int64_t>(std::time(nullptr));
            entry["response"] = body;
            util::write_file(cache_path.string(), entry.dump());
        }

        for (const Element& el : parse_elements(body, "group '" + group.name + "'"))
            merged.emplace(std::make_pair(el.type, el.id), el.point);
    }

    witness::WitnessSet witnesses;
    for (const auto& [id, point] : merged) {
        witnesses.ids.push_back(id.first + "/" + std::to_string(id.second));
        witnesses.points.push_back(point);
    }
    if (witnesses.size() == 0)
        std::cerr << "warning: Overpass query returned no cooling-center candidates\n";
    return witnesses;
}

} // namespace coolcover::ingest
