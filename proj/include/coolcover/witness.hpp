#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "coolcover/geo.hpp"

namespace coolcover::witness {

inline constexpr double kInfValue = std::numeric_limits<double>::infinity();

/// Vertices of the complex: one point per geographic subdivision, keyed by an
/// opaque id (e.g. a census block GEOID). Ids are unique, the set nonempty.
struct LandmarkSet {
    std::vector<geo::GeoPoint> points;
    std::vector<std::string> ids;

    std::size_t size() const { return points.size(); }
};

/// Points that certify simplices among landmarks (cooling-center locations).
/// May be empty, in which case the complex has vertices only.
struct WitnessSet {
    std::vector<geo::GeoPoint> points;
    std::vector<std::string> ids;

    std::size_t size() const { return points.size(); }
};

/// Dense |L| x |W| matrix of landmark-to-witness distances in kilometers.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values_).subspan(i * cols_, cols_);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Entry (i, j) = geodesic_distance_km(L[i], W[j]). Rows computed in parallel.
DistanceMatrix distance_matrix(const LandmarkSet& landmarks, const WitnessSet& witnesses);

/// Index of pair (i, j), i < j, in the packed upper-triangle layout used by
/// the edge-value kernels.
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Smallest scale at which some witness lies within that distance of both
/// landmarks: min over witnesses of max(d(i, w), d(j, w)). +inf when the
/// witness set is empty.
double edge_filtration_value(std::size_t i, std::size_t j, const DistanceMatrix& dist);

/// All-pairs edge filtration values in pair_index order. The serial variant
/// is the reference; the default is OpenMP-parallel over rows and produces
/// bit-identical output (per-pair arithmetic is unchanged).
std::vector<double> edge_filtration_values_serial(const DistanceMatrix& dist);
std::vector<double> edge_filtration_values(const DistanceMatrix& dist);

/// Abstract simplex over landmark indices; vertices strictly increasing.
struct Simplex {
    std::vector<int> vertices;

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
    friend bool operator==(const Simplex&, const Simplex&) = default;
    friend auto operator<=>(const Simplex& a, const Simplex& b) {
        return a.vertices <=> b.vertices;
    }
};

struct FilteredSimplex {
    Simplex simplex;
    double value = 0.0;
};

/// Simplices sorted by (value, dimension, lexicographic vertices) — a valid
/// filtration order with every face preceding its cofaces.
struct FilteredComplex {
    std::vector<FilteredSimplex> simplices;
    int max_dim = 2;
    std::size_t vertex_count = 0;
};

/// Flag (clique) complex over precomputed edge values: all vertices at 0,
/// every k-clique of finite edges (k-1 <= max_dim) at the max of its edge
/// values. Infinite edges and their cofaces are omitted.
FilteredComplex build_flag_complex(std::size_t vertex_count,
                                   std::span<const double> edge_values, int max_dim);

/// Filtered witness complex of the landmark and witness sets. max_dim must be
/// >= 1 and is clamped to |L| - 1 (with a warning) when larger.
FilteredComplex build_filtered_complex(const LandmarkSet& landmarks,
                                       const WitnessSet& witnesses, int max_dim = 2);

} // namespace coolcover::witness
