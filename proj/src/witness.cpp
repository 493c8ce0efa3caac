#include "coolcover/witness.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "coolcover/errors.hpp"

namespace coolcover::witness {

DistanceMatrix distance_matrix(const LandmarkSet& landmarks, const WitnessSet& witnesses) {
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(landmarks.size());
    const std::size_t cols = witnesses.size();
    DistanceMatrix dist(landmarks.size(), cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            dist.at(i, j) = geo::geodesic_distance_km(landmarks.points[i], witnesses.points[j]);
    return dist;
}

double edge_filtration_value(std::size_t i, std::size_t j, const DistanceMatrix& dist) {
    const std::size_t w = dist.cols();
    double best = kInfValue;
    for (std::size_t k = 0; k < w; ++k) {
        const double v = std::max(dist.at(i, k), dist.at(j, k));
        if (v < best)
            best = v;
    }
    return best;
}

std::vector<double> edge_filtration_values_serial(const DistanceMatrix& dist) {
    const std::size_t n = dist.rows();
    std::vector<double> values(n >= 2 ? n * (n - 1) / 2 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            values[pair_index(i, j, n)] = edge_filtration_value(i, j, dist);
    return values;
}

std::vector<double> edge_filtration_values(const DistanceMatrix& dist) {
    const std::size_t n = dist.rows();
    std::vector<double> values(n >= 2 ? n * (n - 1) / 2 : 0);
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j)
            values[pair_index(i, j, n)] = edge_filtration_value(i, j, dist);
    return values;
}

namespace {

struct Builder {
    std::size_t n;
    std::span<const double> w;
    int max_dim;
    std::vector<std::vector<int>> adj; // finite-edge neighbors above each vertex
    std::vector<FilteredSimplex> out;

    double edge(int i, int j) const { return w[pair_index(i, j, n)]; }

    // Extends `simplex` (ending at vertex v) by every common neighbor above v,
    // carrying the running max of edge values. Emits each extension.
    void expand(std::vector<int>& simplex, const std::vector<int>& candidates, double value) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const int u = candidates[c];
            double ext = value;
            for (int s : simplex)
                ext = std::max(ext, edge(s, u));
            simplex.push_back(u);
            out.push_back({Simplex{simplex}, ext});
            if (static_cast<int>(simplex.size()) <= max_dim) {
                std::vector<int> next;
                std::set_intersection(candidates.begin() + c + 1, candidates.end(),
                                      adj[u].begin(), adj[u].end(), std::back_inserter(next));
                if (!next.empty())
                    expand(simplex, next, ext);
            }
            simplex.pop_back();
        }
    }
};

} // namespace

FilteredComplex build_flag_complex(std::size_t vertex_count,
                                   std::span<const double> edge_values, int max_dim) {
    Builder b;
    b.n = vertex_count;
    b.w = edge_values;
    b.max_dim = max_dim;
    b.adj.resize(vertex_count);
    for (std::size_t i = 0; i + 1 < vertex_count; ++i)
        for (std::size_t j = i + 1; j < vertex_count; ++j)
            if (std::isfinite(edge_values[pair_index(i, j, vertex_count)]))
                b.adj[i].push_back(static_cast<int>(j));

    b.out.reserve(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v)
        b.out.push_back({Simplex{{static_cast<int>(v)}}, 0.0});
    if (max_dim >= 1) {
        std::vector<int> simplex;
        for (std::size_t v = 0; v < vertex_count; ++v) {
            simplex.assign(1, static_cast<int>(v));
            b.expand(simplex, b.adj[v], 0.0);
        }
    }

    std::sort(b.out.begin(), b.out.end(), [](const FilteredSimplex& a, const FilteredSimplex& c) {
        if (a.value != c.value)
            return a.value < c.value;
        if (a.simplex.dim() != c.simplex.dim())
            return a.simplex.dim() < c.simplex.dim();
        return a.simplex.vertices < c.simplex.vertices;
    });

    FilteredComplex complex;
    complex.simplices = std::move(b.out);
    complex.max_dim = max_dim;
    complex.vertex_count = vertex_count;
    return complex;
}

FilteredComplex build_filtered_complex(const LandmarkSet& landmarks,
                                       const WitnessSet& witnesses, int max_dim) {
    if (landmarks.size() == 0)
        throw Error(ErrorKind::InvalidArgument, "landmark set is empty");
    if (max_dim < 1)
        throw Error(ErrorKind::InvalidArgument, "max_dim must be >= 1");

    const int dim_cap = std::max<int>(1, static_cast<int>(landmarks.size()) - 1);
    if (max_dim > dim_cap) {
        std::cerr << "warning: max_dim " << max_dim << " exceeds |L|-1; clamped to "
                  << dim_cap << "\n";
        max_dim = dim_cap;
    }

    const DistanceMatrix dist = distance_matrix(landmarks, witnesses);
    const std::vector<double> values = edge_filtration_values(dist);
    return build_flag_complex(landmarks.size(), values, max_dim);
}

} // namespace coolcover::witness
