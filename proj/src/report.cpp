#include "coolcover/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "coolcover/errors.hpp"
#include "coolcover/ingest.hpp"
#include "coolcover/util.hpp"

namespace coolcover::report {

using persistence::PersistencePair;
using util::format_double;

double quantile_inclusive(std::span<const double> sorted_values, double q) {
    const std::size_t n = sorted_values.size();
    if (n == 1)
        return sorted_values[0];
    const double h = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

SummaryStats summarize_deaths(std::span<const PersistencePair> pairs, int dim) {
    SummaryStats stats;
    std::vector<double> deaths;
    for (const auto& p : pairs) {
        if (p.dim != dim)
            continue;
        if (std::isinf(p.death))
            ++stats.infinite;
        else
            deaths.push_back(p.death);
    }
    if (deaths.empty())
        return stats;
    std::sort(deaths.begin(), deaths.end());
    stats.count = deaths.size();
    stats.min = deaths.front();
    stats.max = deaths.back();
    stats.q1 = quantile_inclusive(deaths, 0.25);
    stats.median = quantile_inclusive(deaths, 0.5);
    stats.q3 = quantile_inclusive(deaths, 0.75);
    const double iqr = stats.q3 - stats.q1;
    const double lo = stats.q1 - 1.5 * iqr;
    const double hi = stats.q3 + 1.5 * iqr;
    for (double d : deaths)
        if (d < lo || d > hi)
            stats.outliers.push_back(d);
    return stats;
}

namespace {

std::string simplex_ids(const witness::Simplex& simplex, const witness::LandmarkSet& landmarks) {
    std::string out;
    for (std::size_t k = 0; k < simplex.vertices.size(); ++k) {
        if (k)
            out += '-';
        out += landmarks.ids.at(static_cast<std::size_t>(simplex.vertices[k]));
    }
    return out;
}

// Death ordering shared by map ranks and top-k lists: infinite first, then
// death descending, ties by birth ascending then birth simplex.
bool death_rank_less(const PersistencePair& a, const PersistencePair& b) {
    if (a.death != b.death)
        return a.death > b.death;
    if (a.birth != b.birth)
        return a.birth < b.birth;
    return a.birth_simplex.vertices < b.birth_simplex.vertices;
}

std::string point_feature(const geo::GeoPoint& p, const std::string& properties) {
    return "{\"type\":\"Feature\",\"geometry\":{\"type\":\"Point\",\"coordinates\":[" +
           format_double(p.lon) + ',' + format_double(p.lat) + "]},\"properties\":{" +
           properties + "}}";
}

std::string death_value_json(double death) {
    return std::isinf(death) ? std::string("\"inf\"") : format_double(death);
}

std::string stats_json(const SummaryStats& stats, int dim) {
    std::string out = "{\"dim\":" + std::to_string(dim);
    out += ",\"count\":" + std::to_string(stats.count);
    out += ",\"infinite\":" + std::to_string(stats.infinite);
    if (!stats.empty()) {
        out += ",\"min\":" + format_double(stats.min);
        out += ",\"q1\":" + format_double(stats.q1);
        out += ",\"median\":" + format_double(stats.median);
        out += ",\"q3\":" + format_double(stats.q3);
        out += ",\"max\":" + format_double(stats.max);
        out += ",\"outliers\":[";
        for (std::size_t i = 0; i < stats.outliers.size(); ++i) {
            if (i)
                out += ',';
            out += format_double(stats.outliers[i]);
        }
        out += ']';
    }
    out += '}';
    return out;
}

} // namespace

AnalysisReport build_report(std::string city, witness::LandmarkSet landmarks,
                            std::size_t witness_count, std::string region_hash,
                            std::string witness_hash, int max_dim, std::size_t top_k,
                            persistence::PersistenceDiagram diagram) {
    AnalysisReport report;
    report.city = std::move(city);
    report.landmarks = std::move(landmarks);
    report.witness_count = witness_count;
    report.region_hash = std::move(region_hash);
    report.witness_hash = std::move(witness_hash);
    report.max_dim = max_dim;
    report.top_k = top_k;
    report.diagram = std::move(diagram);

    // Every landmark is the birth vertex of exactly one 0-pair; pairs killed
    // at their birth value live in the zero-persistence listing.
    const std::size_t n = report.landmarks.size();
    std::vector<const PersistencePair*> dim0;
    for (const auto& p : report.diagram.pairs)
        if (p.dim == 0)
            dim0.push_back(&p);
    for (const auto& p : report.diagram.zero_persistence)
        if (p.dim == 0)
            dim0.push_back(&p);
    std::sort(dim0.begin(), dim0.end(),
              [](const PersistencePair* a, const PersistencePair* b) {
                  return death_rank_less(*a, *b);
              });

    report.landmark_death.assign(n, 0.0);
    report.landmark_rank.assign(n, 0);
    for (std::size_t rank = 0; rank < dim0.size(); ++rank) {
        const auto v = static_cast<std::size_t>(dim0[rank]->birth_simplex.vertices.at(0));
        report.landmark_death.at(v) = dim0[rank]->death;
        report.landmark_rank.at(v) = rank + 1;
    }
    return report;
}

std::string pairs_csv(const AnalysisReport& report) {
    std::string out = "dim,birth_km,death_km,birth_simplex,death_simplex\n";
    for (const auto& p : report.diagram.pairs) {
        out += std::to_string(p.dim);
        out += ',';
        out += format_double(p.birth);
        out += ',';
        out += format_double(p.death);
        out += ',';
        out += simplex_ids(p.birth_simplex, report.landmarks);
        out += ',';
        if (p.death_simplex)
            out += simplex_ids(*p.death_simplex, report.landmarks);
        out += '\n';
    }
    return out;
}

std::string deaths_dim0_geojson(const AnalysisReport& report) {
    std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
    for (std::size_t i = 0; i < report.landmarks.size(); ++i) {
        if (i)
            out += ',';
        std::string props = "\"id\":\"" + util::json_escape(report.landmarks.ids[i]) + "\"";
        props += ",\"death_km\":" + death_value_json(report.landmark_death[i]);
        props += ",\"pair_rank\":" + std::to_string(report.landmark_rank[i]);
        out += point_feature(report.landmarks.points[i], props);
    }
    out += "]}\n";
    return out;
}

std::string deaths_dim1_geojson(const AnalysisReport& report) {
    std::vector<const PersistencePair*> dim1;
    for (const auto& p : report.diagram.pairs)
        if (p.dim == 1 && p.death_simplex)
            dim1.push_back(&p);
    std::sort(dim1.begin(), dim1.end(), [](const PersistencePair* a, const PersistencePair* b) {
        return death_rank_less(*a, *b);
    });

    std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
    for (std::size_t rank = 0; rank < dim1.size(); ++rank) {
        if (rank)
            out += ',';
        const PersistencePair& p = *dim1[rank];
        double lat = 0.0, lon = 0.0;
        for (int v : p.death_simplex->vertices) {
            lat += report.landmarks.points.at(static_cast<std::size_t>(v)).lat;
            lon += report.landmarks.points.at(static_cast<std::size_t>(v)).lon;
        }
        const double k = static_cast<double>(p.death_simplex->vertices.size());
        std::string props =
            "\"vertices\":\"" + util::json_escape(simplex_ids(*p.death_simplex, report.landmarks)) +
            "\"";
        props += ",\"birth_km\":" + format_double(p.birth);
        props += ",\"death_km\":" + death_value_json(p.death);
        props += ",\"pair_rank\":" + std::to_string(rank + 1);
        out += point_feature(geo::GeoPoint{lat / k, lon / k}, props);
    }
    out += "]}\n";
    return out;
}

std::string top_k_geojson(const AnalysisReport& report) {
    std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
    bool first = true;
    for (int dim = 0; dim < report.max_dim; ++dim) {
        const auto ranked =
            persistence::top_k_deaths(report.diagram, dim, report.top_k, true, report.landmarks);
        for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
            const PersistencePair& p = ranked[rank].pair;
            double lat = 0.0, lon = 0.0;
            const witness::Simplex& location =
                dim == 0 ? p.birth_simplex : (p.death_simplex ? *p.death_simplex : p.birth_simplex);
            for (int v : location.vertices) {
                lat += report.landmarks.points.at(static_cast<std::size_t>(v)).lat;
                lon += report.landmarks.points.at(static_cast<std::size_t>(v)).lon;
            }
            const double k = static_cast<double>(location.vertices.size());
            std::string ids;
            for (std::size_t s = 0; s < ranked[rank].landmark_ids.size(); ++s) {
                if (s)
                    ids += '-';
                ids += ranked[rank].landmark_ids[s];
            }
            std::string props = "\"dim\":" + std::to_string(dim);
            props += ",\"rank\":" + std::to_string(rank + 1);
            props += ",\"ids\":\"" + util::json_escape(ids) + "\"";
            props += ",\"birth_km\":" + format_double(p.birth);
            props += ",\"death_km\":" + death_value_json(p.death);
            if (!first)
                out += ',';
            first = false;
            out += point_feature(geo::GeoPoint{lat / k, lon / k}, props);
        }
    }
    out += "]}\n";
    return out;
}

std::string summary_json(const AnalysisReport& report) {
    std::string out = "{\"city\":\"" + util::json_escape(report.city) + "\"";
    out += ",\"inputs\":{\"landmark_count\":" + std::to_string(report.landmarks.size());
    out += ",\"witness_count\":" + std::to_string(report.witness_count);
    out += ",\"region_hash\":\"" + report.region_hash + "\"";
    out += ",\"witness_hash\":\"" + report.witness_hash + "\"}";
    out += ",\"max_dim\":" + std::to_string(report.max_dim);
    out += ",\"dimensions\":[";
    for (int dim = 0; dim < report.max_dim; ++dim) {
        if (dim)
            out += ',';
        out += stats_json(summarize_deaths(report.diagram.pairs, dim), dim);
    }
    out += "]}\n";
    return out;
}

std::string hvi_csv(std::span<const hvi::HviResult> results) {
    std::string out = "tract_id,z_pm_temp,z_canopy_gap,z_under5,z_over65,score,missing\n";
    for (const auto& r : results) {
        out += r.tract_id;
        for (int v = 0; v < 4; ++v) {
            out += ',';
            if (r.z[v])
                out += format_double(*r.z[v]);
        }
        out += ',';
        if (r.score)
            out += format_double(*r.score);
        out += ',';
        out += r.missing ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string top_k_hvi_csv(std::span<const hvi::HviResult> results, std::size_t k) {
    const auto ranked = hvi::rank_tracts(results, k);
    return hvi_csv(ranked);
}

std::string summary_json_from_pairs_csv(const std::string& csv_text) {
    std::vector<PersistencePair> pairs;
    std::size_t pos = 0;
    bool header = true;
    int max_dim_seen = 0;
    while (pos < csv_text.size()) {
        auto end = csv_text.find('\n', pos);
        if (end == std::string::npos)
            end = csv_text.size();
        const std::string line = csv_text.substr(pos, end - pos);
        pos = end + 1;
        if (header) {
            if (line != "dim,birth_km,death_km,birth_simplex,death_simplex")
                throw Error(ErrorKind::ParseError, "pairs.csv: unexpected header");
            header = false;
            continue;
        }
        if (line.empty())
            continue;
        const auto fields = util::split_csv_line(line);
        if (fields.size() != 5)
            throw Error(ErrorKind::ParseError, "pairs.csv: expected 5 fields per row");
        PersistencePair p;
        p.dim = std::stoi(fields[0]);
        p.birth = std::stod(fields[1]);
        p.death = fields[2] == "inf" ? persistence::kInfDeath : std::stod(fields[2]);
        pairs.push_back(std::move(p));
        max_dim_seen = std::max(max_dim_seen, pairs.back().dim);
    }
    std::string out = "{\"dimensions\":[";
    for (int dim = 0; dim <= max_dim_seen; ++dim) {
        if (dim)
            out += ',';
        out += stats_json(summarize_deaths(pairs, dim), dim);
    }
    out += "]}\n";
    return out;
}

int run_analyze(const AnalyzeOptions& options, std::ostream& err) {
    witness::LandmarkSet landmarks;
    witness::WitnessSet witnesses;
    std::string region_hash, witness_hash;
    try {
        const std::string region_text = util::read_file(options.region_path.string());
        region_hash = util::hex64(util::fnv1a64(region_text));
        landmarks = ingest::load_regions(options.region_path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (options.fetch) {
        try {
            ingest::WitnessQuery query;
            query.bbox = options.bbox ? *options.bbox
                                      : geo::buffered_bbox(landmarks.points);
            witnesses = ingest::fetch_witnesses(query, options.overpass, options.cache_dir);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return (e.kind() == ErrorKind::NetworkError || e.kind() == ErrorKind::UpstreamError)
                       ? 2
                       : 1;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    } else {
        try {
            witnesses = ingest::load_witnesses(options.witnesses_path);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }
    witness_hash = util::hex64(util::fnv1a64(ingest::witnesses_to_csv(witnesses)));

    try {
        int max_dim = options.max_dim;
        const int dim_cap = std::max<int>(1, static_cast<int>(landmarks.size()) - 1);
        if (max_dim > dim_cap) {
            err << "warning: max_dim " << max_dim << " exceeds |L|-1; clamped to " << dim_cap
                << "\n";
            max_dim = dim_cap;
        }

        persistence::PersistenceDiagram diagram;
        if (max_dim == 2) {
            const auto dist = witness::distance_matrix(landmarks, witnesses);
            const auto edge_values = witness::edge_filtration_values(dist);
            diagram = persistence::flag_persistence_h01(landmarks.size(), edge_values);
        } else {
            const auto complex = witness::build_filtered_complex(landmarks, witnesses, max_dim);
            diagram = persistence::compute_persistence(complex);
        }

        const AnalysisReport report =
            build_report(options.city, std::move(landmarks), witnesses.size(), region_hash,
                         witness_hash, max_dim, options.top_k, std::move(diagram));

        std::filesystem::create_directories(options.out_dir);
        util::write_file((options.out_dir / "pairs.csv").string(), pairs_csv(report));
        util::write_file((options.out_dir / "deaths_dim0.geojson").string(),
                         deaths_dim0_geojson(report));
        util::write_file((options.out_dir / "deaths_dim1.geojson").string(),
                         deaths_dim1_geojson(report));
        util::write_file((options.out_dir / "top_k.geojson").string(), top_k_geojson(report));
        util::write_file((options.out_dir / "summary.json").string(), summary_json(report));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run_hvi(const HviOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const auto tracts = ingest::load_demographics(options.demographics_path);
        const auto stats = hvi::city_stats(tracts);
        std::vector<hvi::HviResult> results;
        results.reserve(tracts.size());
        for (const auto& t : tracts)
            results.push_back(hvi::hvi_score(t, stats));

        if (options.print_vif) {
            for (const auto& entry : hvi::vif(tracts))
                out << entry.variable << " VIF " << format_double(entry.vif) << "\n";
        }

        std::filesystem::create_directories(options.out_dir);
        util::write_file((options.out_dir / "hvi.csv").string(), hvi_csv(results));
        util::write_file((options.out_dir / "top_k_hvi.csv").string(),
                         top_k_hvi_csv(results, options.top_k));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace coolcover::report
