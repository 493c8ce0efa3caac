#include "oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>

namespace oracle {

namespace {

using coolcover::witness::FilteredComplex;

using Bits = std::vector<std::uint64_t>;

void set_bit(Bits& v, std::size_t i) { v[i / 64] |= std::uint64_t(1) << (i % 64); }

int highest_bit(const Bits& v) {
    for (std::size_t w = v.size(); w-- > 0;)
        if (v[w])
            return static_cast<int>(w * 64 + 63 - static_cast<std::size_t>(__builtin_clzll(v[w])));
    return -1;
}

void xor_into(Bits& a, const Bits& b) {
    for (std::size_t w = 0; w < a.size(); ++w)
        a[w] ^= b[w];
}

// Rank over GF(2) by elimination on the columns' highest set bits.
int gf2_rank(std::vector<Bits> columns) {
    std::map<int, Bits> pivots;
    int rank = 0;
    for (Bits& col : columns) {
        int hi = highest_bit(col);
        while (hi >= 0) {
            auto it = pivots.find(hi);
            if (it == pivots.end())
                break;
            xor_into(col, it->second);
            hi = highest_bit(col);
        }
        if (hi >= 0) {
            pivots.emplace(hi, std::move(col));
            ++rank;
        }
    }
    return rank;
}

// Simplices of one dimension, in filtration order, with row indexing.
struct DimSlice {
    std::vector<std::vector<int>> vertex_sets;
    std::vector<double> values;
    std::map<std::vector<int>, int> row_of;

    std::size_t count_at(double alpha) const {
        std::size_t c = 0;
        while (c < values.size() && values[c] <= alpha)
            ++c;
        return c;
    }
};

struct ComplexView {
    std::vector<DimSlice> dims;
    std::vector<double> thresholds; // distinct filtration values, ascending

    explicit ComplexView(const FilteredComplex& K) {
        int top = 0;
        for (const auto& s : K.simplices)
            top = std::max(top, s.simplex.dim());
        dims.resize(static_cast<std::size_t>(top) + 1);
        for (const auto& s : K.simplices) {
            auto& slice = dims[static_cast<std::size_t>(s.simplex.dim())];
            slice.row_of[s.simplex.vertices] = static_cast<int>(slice.vertex_sets.size());
            slice.vertex_sets.push_back(s.simplex.vertices);
            slice.values.push_back(s.value);
            thresholds.push_back(s.value);
        }
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    }

    // Boundary columns of d-simplices with value <= col_alpha; rows may be
    // restricted to (d-1)-simplices with value > row_min_alpha (pass -inf to
    // keep all rows).
    std::vector<Bits> boundary_columns(int d, double col_alpha, double row_min_alpha) const {
        std::vector<Bits> cols;
        if (d <= 0 || d >= static_cast<int>(dims.size()))
            return cols;
        const DimSlice& faces = dims[static_cast<std::size_t>(d - 1)];
        const DimSlice& cells = dims[static_cast<std::size_t>(d)];
        const std::size_t words = (faces.vertex_sets.size() + 63) / 64;
        const std::size_t n_cols = cells.count_at(col_alpha);
        for (std::size_t c = 0; c < n_cols; ++c) {
            Bits col(words, 0);
            std::vector<int> facet(cells.vertex_sets[c]);
            for (std::size_t drop = 0; drop < cells.vertex_sets[c].size(); ++drop) {
                facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
                const int row = faces.row_of.at(facet);
                if (faces.values[static_cast<std::size_t>(row)] > row_min_alpha)
                    set_bit(col, static_cast<std::size_t>(row));
                facet.insert(facet.begin() + static_cast<std::ptrdiff_t>(drop),
                             cells.vertex_sets[c][drop]);
            }
            cols.push_back(std::move(col));
        }
        return cols;
    }

    std::size_t simplex_count(int d, double alpha) const {
        if (d < 0 || d >= static_cast<int>(dims.size()))
            return 0;
        return dims[static_cast<std::size_t>(d)].count_at(alpha);
    }
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Persistent Betti number beta_d(alpha_i -> alpha_j): cycles alive in the
// i-sublevel complex modulo boundaries from the j-sublevel complex.
//
//   dim Z_d(K_i) = n_d(K_i) - rank boundary_d(K_i)
//   dim (B_d(K_j) ∩ C_d(K_i)) = rank boundary_{d+1}(K_j)
//                             - rank [boundary_{d+1}(K_j) rows outside K_i]
//
// A boundary chain lies in Z_d(K_i) exactly when its support is inside K_i.
int persistent_betti(const ComplexView& view, int d, double alpha_i, double alpha_j) {
    const int n_d = static_cast<int>(view.simplex_count(d, alpha_i));
    const int rank_d = gf2_rank(view.boundary_columns(d, alpha_i, kNegInf));
    const int cycles = n_d - rank_d;
    const int rank_d1 = gf2_rank(view.boundary_columns(d + 1, alpha_j, kNegInf));
    const int rank_outside = gf2_rank(view.boundary_columns(d + 1, alpha_j, alpha_i));
    return cycles - (rank_d1 - rank_outside);
}

} // namespace

std::vector<DiagramPoint> brute_force_diagram(const FilteredComplex& K) {
    const ComplexView view(K);
    const auto& alphas = view.thresholds;
    const std::size_t m = alphas.size();
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<DiagramPoint> out;
    for (int d = 0; d < K.max_dim; ++d) {
        // betti[i][j] = persistent Betti from threshold i to threshold j.
        std::vector<std::vector<int>> betti(m, std::vector<int>(m, 0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j)
                betti[i][j] = persistent_betti(view, d, alphas[i], alphas[j]);

        auto b = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
            return i < 0 ? 0 : betti[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        };
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
            for (std::ptrdiff_t j = i + 1; j < static_cast<std::ptrdiff_t>(m); ++j) {
                const int mult = (b(i, j - 1) - b(i, j)) - (b(i - 1, j - 1) - b(i - 1, j));
                for (int c = 0; c < mult; ++c)
                    out.push_back({d, alphas[static_cast<std::size_t>(i)],
                                   alphas[static_cast<std::size_t>(j)]});
            }
            const int essential = b(i, static_cast<std::ptrdiff_t>(m) - 1) -
                                  b(i - 1, static_cast<std::ptrdiff_t>(m) - 1);
            for (int c = 0; c < essential; ++c)
                out.push_back({d, alphas[static_cast<std::size_t>(i)], inf});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int betti_rank(const FilteredComplex& K, double alpha, int dim) {
    const ComplexView view(K);
    const int n_d = static_cast<int>(view.simplex_count(dim, alpha));
    const int rank_d = gf2_rank(view.boundary_columns(dim, alpha, kNegInf));
    const int rank_d1 = gf2_rank(view.boundary_columns(dim + 1, alpha, kNegInf));
    return n_d - rank_d - rank_d1;
}

} // namespace oracle
