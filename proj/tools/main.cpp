#include <cstdlib>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "coolcover/errors.hpp"
#include "coolcover/geo.hpp"
#include "coolcover/ingest.hpp"
#include "coolcover/overpass.hpp"
#include "coolcover/report.hpp"
#include "coolcover/util.hpp"

namespace {

using namespace coolcover;

ingest::OverpassConfig resolve_overpass(const std::string& endpoint_flag,
                                        const std::string& tags_config_flag) {
    std::string tags_config = tags_config_flag;
    if (tags_config.empty())
        if (const char* env = std::getenv("COOLCOVER_TAGS_CONFIG"))
            tags_config = env;
    ingest::OverpassConfig config = tags_config.empty()
                                        ? ingest::OverpassConfig::defaults()
                                        : ingest::load_overpass_config(tags_config);
    if (const char* env = std::getenv("COOLCOVER_ENDPOINT"))
        config.endpoint = env;
    if (!endpoint_flag.empty())
        config.endpoint = endpoint_flag;
    return config;
}

geo::BoundingBox parse_bbox(const std::string& text) {
    // Table A.1 corner order: sw_lon,sw_lat,ne_lon,ne_lat.
    const auto fields = util::split_csv_line(text);
    if (fields.size() != 4)
        throw Error(ErrorKind::InvalidArgument, "--bbox expects sw_lon,sw_lat,ne_lon,ne_lat");
    geo::BoundingBox bbox{{std::stod(fields[1]), std::stod(fields[0])},
                          {std::stod(fields[3]), std::stod(fields[2])}};
    if (!bbox.southwest.valid() || !bbox.northeast.valid() ||
        bbox.southwest.lat > bbox.northeast.lat || bbox.southwest.lon > bbox.northeast.lon)
        throw Error(ErrorKind::InvalidArgument, "--bbox corners out of order or out of range");
    return bbox;
}

int run_fetch(const std::string& region, const std::string& bbox_text,
              const std::string& out_path, const ingest::OverpassConfig& config,
              const std::string& cache_dir) {
    try {
        ingest::WitnessQuery query;
        if (!bbox_text.empty()) {
            query.bbox = parse_bbox(bbox_text);
        } else if (!region.empty()) {
            const auto landmarks = ingest::load_regions(region);
            query.bbox = geo::buffered_bbox(landmarks.points);
        } else {
            std::cerr << "error: fetch-witnesses needs --region or --bbox\n";
            return 1;
        }
        const auto witnesses = ingest::fetch_witnesses(query, config, cache_dir);
        ingest::save_witnesses_csv(witnesses, out_path);
        std::cout << "fetched " << witnesses.size() << " witnesses -> " << out_path << "\n";
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return (e.kind() == ErrorKind::NetworkError || e.kind() == ErrorKind::UpstreamError) ? 2
                                                                                             : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run_synth(std::size_t n_landmarks, std::size_t n_witnesses, unsigned seed,
              double box_degrees, const std::string& out_dir) {
    try {
        std::filesystem::create_directories(out_dir);
        std::mt19937 rng(seed);
        const double lat0 = 30.0, lon0 = -97.9; // arbitrary city-scale anchor
        std::uniform_real_distribution<double> dlat(lat0, lat0 + box_degrees);
        std::uniform_real_distribution<double> dlon(lon0, lon0 + box_degrees);

        // Landmarks as small square blocks so the centroid path is exercised.
        const double half = 0.00025;
        std::string region = "{\"type\":\"FeatureCollection\",\"features\":[";
        for (std::size_t i = 0; i < n_landmarks; ++i) {
            const double lat = dlat(rng), lon = dlon(rng);
            if (i)
                region += ',';
            region += "{\"type\":\"Feature\",\"id\":\"B" + std::to_string(i) +
                      "\",\"properties\":{},\"geometry\":{\"type\":\"Polygon\",\"coordinates\":[[";
            const double corners[4][2] = {{lon - half, lat - half},
                                          {lon + half, lat - half},
                                          {lon + half, lat + half},
                                          {lon - half, lat + half}};
            for (int c = 0; c < 4; ++c) {
                region += '[' + util::format_double(corners[c][0]) + ',' +
                          util::format_double(corners[c][1]) + "],";
            }
            region += '[' + util::format_double(corners[0][0]) + ',' +
                      util::format_double(corners[0][1]) + "]]]}}";
        }
        region += "]}\n";
        util::write_file(out_dir + "/region.geojson", region);

        std::string csv = "id,lat,lon\n";
        const double margin = 0.1 * box_degrees;
        std::uniform_real_distribution<double> wlat(lat0 - margin, lat0 + box_degrees + margin);
        std::uniform_real_distribution<double> wlon(lon0 - margin, lon0 + box_degrees + margin);
        for (std::size_t j = 0; j < n_witnesses; ++j)
            csv += "w" + std::to_string(j) + ',' + util::format_double(wlat(rng)) + ',' +
                   util::format_double(wlon(rng)) + '\n';
        util::write_file(out_dir + "/witnesses.csv", csv);
        std::cout << "wrote " << out_dir << "/region.geojson and " << out_dir
                  << "/witnesses.csv\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooling-center coverage: persistent homology of a filtered witness complex "
                 "and a heat-vulnerability index"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string cache_dir = "cache";
    std::string endpoint;
    std::string tags_config;
    int max_dim = 2;
    std::size_t top_k = 5;
    unsigned seed = 0;
    app.add_option("--cache-dir", cache_dir, "Overpass response cache directory")
        ->capture_default_str();
    app.add_option("--endpoint", endpoint, "Overpass endpoint URL override");
    app.add_option("--tags-config", tags_config, "JSON tag-mapping config file");
    app.add_option("--max-dim", max_dim, "Maximum simplex dimension")->capture_default_str();
    app.add_option("--top-k", top_k, "Entries in top-k rankings")->capture_default_str();
    app.add_option("--seed", seed, "Seed for synthetic fixture generation")
        ->capture_default_str();
    int timeout_s = -1, retries = -1;
    app.add_option("--timeout", timeout_s, "Overpass request timeout in seconds");
    app.add_option("--retries", retries, "Overpass retry count");

    auto* analyze = app.add_subcommand("analyze", "Run the coverage pipeline on a region");
    std::string region, witnesses_path, out_dir = "out", city, bbox_text;
    bool fetch = false;
    analyze->add_option("--region", region, "Region GeoJSON FeatureCollection")->required();
    analyze->add_option("--witnesses", witnesses_path, "Witness CSV (id,lat,lon) or GeoJSON");
    analyze->add_flag("--fetch", fetch, "Fetch witnesses from the Overpass endpoint");
    analyze->add_option("--bbox", bbox_text, "Fetch box: sw_lon,sw_lat,ne_lon,ne_lat");
    analyze->add_option("--out", out_dir, "Output directory")->capture_default_str();
    analyze->add_option("--city", city, "City label for summary.json");

    auto* hvi_cmd = app.add_subcommand("hvi", "Compute heat-vulnerability index scores");
    std::string demographics, hvi_out = "out";
    bool print_vif = false;
    hvi_cmd->add_option("--demographics", demographics, "Demographics CSV")->required();
    hvi_cmd->add_option("--out", hvi_out, "Output directory")->capture_default_str();
    hvi_cmd->add_flag("--vif", print_vif, "Print the variance inflation factor table");

    auto* fetch_cmd = app.add_subcommand("fetch-witnesses", "Query cooling-center candidates");
    std::string fetch_region, fetch_bbox, fetch_out = "witnesses.csv";
    fetch_cmd->add_option("--region", fetch_region, "Region file to derive the buffered box");
    fetch_cmd->add_option("--bbox", fetch_bbox, "Explicit box: sw_lon,sw_lat,ne_lon,ne_lat");
    fetch_cmd->add_option("--out", fetch_out, "Output witness CSV")->capture_default_str();

    auto* summary_cmd = app.add_subcommand("summary", "Recompute death summaries from pairs.csv");
    std::string pairs_path, summary_out;
    summary_cmd->add_option("--pairs", pairs_path, "pairs.csv from a previous analyze run")
        ->required();
    summary_cmd->add_option("--out", summary_out, "Output file (stdout when omitted)");

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic fixture");
    std::size_t synth_landmarks = 100, synth_witnesses = 20;
    double synth_box = 0.3;
    std::string synth_out = "fixture";
    synth_cmd->add_option("--landmarks", synth_landmarks, "Landmark count")->capture_default_str();
    synth_cmd->add_option("--witnesses", synth_witnesses, "Witness count")->capture_default_str();
    synth_cmd->add_option("--box-deg", synth_box, "Square side in degrees")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    auto overpass_config = [&] {
        auto config = resolve_overpass(endpoint, tags_config);
        if (timeout_s >= 0)
            config.timeout_seconds = timeout_s;
        if (retries >= 0)
            config.max_retries = retries;
        return config;
    };

    try {
        if (analyze->parsed()) {
            if (witnesses_path.empty() && !fetch) {
                std::cerr << "error: analyze needs --witnesses or --fetch\n";
                return 1;
            }
            report::AnalyzeOptions opts;
            opts.region_path = region;
            opts.witnesses_path = witnesses_path;
            opts.fetch = fetch;
            if (!bbox_text.empty())
                opts.bbox = parse_bbox(bbox_text);
            opts.max_dim = max_dim;
            opts.top_k = top_k;
            opts.out_dir = out_dir;
            opts.cache_dir = cache_dir;
            opts.overpass = overpass_config();
            opts.city = city;
            return report::run_analyze(opts, std::cerr);
        }
        if (hvi_cmd->parsed()) {
            report::HviOptions opts;
            opts.demographics_path = demographics;
            opts.top_k = top_k;
            opts.out_dir = hvi_out;
            opts.print_vif = print_vif;
            return report::run_hvi(opts, std::cout, std::cerr);
        }
        if (fetch_cmd->parsed())
            return run_fetch(fetch_region, fetch_bbox, fetch_out, overpass_config(), cache_dir);
        if (summary_cmd->parsed()) {
            const std::string json =
                report::summary_json_from_pairs_csv(util::read_file(pairs_path));
            if (summary_out.empty())
                std::cout << json;
            else
                util::write_file(summary_out, json);
            return 0;
        }
        if (synth_cmd->parsed())
            return run_synth(synth_landmarks, synth_witnesses, seed, synth_box, synth_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
