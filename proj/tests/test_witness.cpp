#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "coolcover/errors.hpp"
#include "coolcover/witness.hpp"
#include "test_support.hpp"

using namespace coolcover;
using test_support::random_landmarks;
using test_support::random_witnesses;
using witness::DistanceMatrix;
using witness::LandmarkSet;
using witness::WitnessSet;

TEST_CASE("distance matrix: identical single landmark and witness") {
    LandmarkSet L{{{30.0, -97.8}}, {"a"}};
    WitnessSet W{{{30.0, -97.8}}, {"w"}};
    const auto dist = witness::distance_matrix(L, W);
    CHECK(dist.rows() == 1);
    CHECK(dist.cols() == 1);
    CHECK(dist.at(0, 0) == 0.0);
}

TEST_CASE("distance matrix: empty witness set yields a 2x0 matrix") {
    LandmarkSet L{{{30.0, -97.8}, {30.1, -97.7}}, {"a", "b"}};
    WitnessSet W;
    const auto dist = witness::distance_matrix(L, W);
    CHECK(dist.rows() == 2);
    CHECK(dist.cols() == 0);
}

TEST_CASE("distance matrix: entries match per-pair geodesic calls") {
    std::mt19937 rng(41);
    const auto L = random_landmarks(3, rng);
    const auto W = random_witnesses(2, rng);
    const auto dist = witness::distance_matrix(L, W);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(dist.at(i, j) == geo::geodesic_distance_km(L.points[i], W.points[j]));
}

namespace {

// Distance matrix with prescribed entries, for value-level fixtures.
DistanceMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
    DistanceMatrix dist(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            dist.at(i, j) = rows[i][j];
    return dist;
}

} // namespace

TEST_CASE("edge filtration value: single equidistant witness") {
    const auto dist = matrix_from({{3.0}, {3.0}});
    CHECK(witness::edge_filtration_value(0, 1, dist) == 3.0);
}

TEST_CASE("edge filtration value: min over witnesses of the pair max") {
    const auto dist = matrix_from({{2.0, 4.0}, {5.0, 4.0}});
    CHECK(witness::edge_filtration_value(0, 1, dist) == 4.0);
}

TEST_CASE("edge filtration value: empty witness set is +inf") {
    const auto dist = matrix_from({{}, {}});
    CHECK(std::isinf(witness::edge_filtration_value(0, 1, dist)));
}

TEST_CASE("edge filtration values: brute-force scan over witnesses agrees") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng() % 7; // up to 8 landmarks
        const std::size_t w = rng() % 6;     // up to 5 witnesses
        const auto L = random_landmarks(n, rng);
        const auto W = random_witnesses(w, rng);
        const auto dist = witness::distance_matrix(L, W);
        const auto values = witness::edge_filtration_values(dist);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double expected = witness::kInfValue;
                for (std::size_t k = 0; k < w; ++k)
                    expected = std::min(
                        expected, std::max(geo::geodesic_distance_km(L.points[i], W.points[k]),
                                           geo::geodesic_distance_km(L.points[j], W.points[k])));
                CHECK(values[witness::pair_index(i, j, n)] == expected);
            }
        }
    }
}

TEST_CASE("edge filtration values: serial reference and OpenMP kernel agree bitwise") {
    std::mt19937 rng(43);
    const auto L = random_landmarks(60, rng);
    const auto W = random_witnesses(15, rng);
    const auto dist = witness::distance_matrix(L, W);
    CHECK(witness::edge_filtration_values_serial(dist) == witness::edge_filtration_values(dist));
}

TEST_CASE("build complex: single landmark") {
    LandmarkSet L{{{30.0, -97.8}}, {"a"}};
    WitnessSet W{{{30.2, -97.8}}, {"w"}};
    const auto complex = witness::build_filtered_complex(L, W, 2);
    REQUIRE(complex.simplices.size() == 1);
    CHECK(complex.simplices[0].simplex.vertices == std::vector<int>{0});
    CHECK(complex.simplices[0].value == 0.0);
}

TEST_CASE("build complex: three landmarks, one witness at distances 1,2,3") {
    const auto dist = matrix_from({{1.0}, {2.0}, {3.0}});
    const auto values = witness::edge_filtration_values(dist);
    const auto complex = witness::build_flag_complex(3, values, 2);
    REQUIRE(complex.simplices.size() == 7);
    // Vertices at 0; edges (0,1)@2, (0,2)@3, (1,2)@3; triangle @3.
    CHECK(complex.simplices[3].simplex.vertices == std::vector<int>{0, 1});
    CHECK(complex.simplices[3].value == 2.0);
    CHECK(complex.simplices[4].simplex.vertices == std::vector<int>{0, 2});
    CHECK(complex.simplices[4].value == 3.0);
    CHECK(complex.simplices[5].simplex.vertices == std::vector<int>{1, 2});
    CHECK(complex.simplices[5].value == 3.0);
    CHECK(complex.simplices[6].simplex.vertices == std::vector<int>{0, 1, 2});
    CHECK(complex.simplices[6].value == 3.0);
}

TEST_CASE("build complex: infinite edges and their cofaces are omitted") {
    const double inf = witness::kInfValue;
    // Pairs (0,1)=1, (0,2)=inf, (1,2)=2: no triangle.
    const std::vector<double> values{1.0, inf, 2.0};
    const auto complex = witness::build_flag_complex(3, values, 2);
    CHECK(complex.simplices.size() == 5);
    for (const auto& s : complex.simplices)
        CHECK(std::isfinite(s.value));
}

TEST_CASE("build complex: max_dim above |L|-1 is clamped") {
    std::mt19937 rng(44);
    const auto L = random_landmarks(3, rng);
    const auto W = random_witnesses(2, rng);
    const auto complex = witness::build_filtered_complex(L, W, 10);
    CHECK(complex.max_dim == 2);
    CHECK_THROWS_AS(witness::build_filtered_complex(L, W, 0), Error);
}

TEST_CASE("build complex: filtration invariants hold on random instances") {
    std::mt19937 rng(45);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const std::size_t w = rng() % 6;
        const auto L = random_landmarks(n, rng);
        const auto W = random_witnesses(w, rng);
        const int max_dim = 1 + static_cast<int>(rng() % 3);
        const auto complex = witness::build_filtered_complex(
            L, W, std::min<int>(max_dim, std::max<int>(1, static_cast<int>(n) - 1)));
        std::string why;
        const bool ok = test_support::validate_filtered_complex(complex, &why);
        CHECK_MESSAGE(ok, why);
    }
}

TEST_CASE("build complex: flag property by recomputation") {
    std::mt19937 rng(46);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + rng() % 7;
        const auto L = random_landmarks(n, rng);
        const auto W = random_witnesses(1 + rng() % 5, rng);
        const auto dist = witness::distance_matrix(L, W);
        const auto values = witness::edge_filtration_values(dist);
        const auto complex = witness::build_flag_complex(n, values, 2);

        std::size_t edges = 0, triangles = 0;
        for (const auto& s : complex.simplices) {
            if (s.simplex.dim() == 1) {
                ++edges;
                CHECK(s.value ==
                      values[witness::pair_index(
                          static_cast<std::size_t>(s.simplex.vertices[0]),
                          static_cast<std::size_t>(s.simplex.vertices[1]), n)]);
            } else if (s.simplex.dim() == 2) {
                ++triangles;
                const auto& v = s.simplex.vertices;
                const double expected = std::max(
                    {values[witness::pair_index(static_cast<std::size_t>(v[0]),
                                                static_cast<std::size_t>(v[1]), n)],
                     values[witness::pair_index(static_cast<std::size_t>(v[0]),
                                                static_cast<std::size_t>(v[2]), n)],
                     values[witness::pair_index(static_cast<std::size_t>(v[1]),
                                                static_cast<std::size_t>(v[2]), n)]});
                CHECK(s.value == expected);
            }
        }
        // Every 3-clique of finite edges must appear as a 2-simplex.
        std::size_t expected_edges = 0, expected_triangles = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!std::isfinite(values[witness::pair_index(i, j, n)]))
                    continue;
                ++expected_edges;
                for (std::size_t k = j + 1; k < n; ++k)
                    if (std::isfinite(values[witness::pair_index(i, k, n)]) &&
                        std::isfinite(values[witness::pair_index(j, k, n)]))
                        ++expected_triangles;
            }
        CHECK(edges == expected_edges);
        CHECK(triangles == expected_triangles);
    }
}

TEST_CASE("witness monotonicity: adding a witness never increases edge values") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng() % 7;
        const auto L = random_landmarks(n, rng);
        auto W = random_witnesses(1 + rng() % 4, rng);
        const auto before = witness::edge_filtration_values(witness::distance_matrix(L, W));
        W.points.push_back(test_support::random_point(rng));
        W.ids.push_back("extra");
        const auto after = witness::edge_filtration_values(witness::distance_matrix(L, W));
        for (std::size_t p = 0; p < before.size(); ++p)
            CHECK(after[p] <= before[p]);
    }
}

TEST_CASE("permuting witnesses leaves the complex unchanged") {
    std::mt19937 rng(48);
    const auto L = random_landmarks(6, rng);
    auto W = random_witnesses(5, rng);
    const auto base = witness::build_filtered_complex(L, W, 2);
    std::shuffle(W.points.begin(), W.points.end(), rng);
    const auto shuffled = witness::build_filtered_complex(L, W, 2);
    REQUIRE(base.simplices.size() == shuffled.simplices.size());
    for (std::size_t i = 0; i < base.simplices.size(); ++i) {
        CHECK(base.simplices[i].simplex == shuffled.simplices[i].simplex);
        CHECK(base.simplices[i].value == shuffled.simplices[i].value);
    }
}

TEST_CASE("permuting landmarks yields an isomorphic complex") {
    std::mt19937 rng(49);
    auto L = random_landmarks(6, rng);
    const auto W = random_witnesses(4, rng);
    const auto base = witness::build_filtered_complex(L, W, 2);

    std::vector<std::size_t> perm(L.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    witness::LandmarkSet permuted;
    for (std::size_t i : perm) {
        permuted.points.push_back(L.points[i]);
        permuted.ids.push_back(L.ids[i]);
    }
    const auto other = witness::build_filtered_complex(permuted, W, 2);

    auto signature = [](const witness::FilteredComplex& K) {
        std::vector<std::pair<int, double>> sig;
        for (const auto& s : K.simplices)
            sig.emplace_back(s.simplex.dim(), s.value);
        std::sort(sig.begin(), sig.end());
        return sig;
    };
    CHECK(signature(base) == signature(other));
}
