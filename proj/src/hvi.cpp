#include "coolcover/hvi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coolcover/errors.hpp"

namespace coolcover::hvi {

namespace {

// Gaussian elimination on the normal equations (symmetric positive
// semidefinite). Columns whose pivot falls below the relative rank
// tolerance of 1e-10 are exactly dependent on earlier ones and are dropped
// with coefficient zero; the fitted values are unchanged by the exclusion.
std::array<double, 4> solve_normal_equations(std::array<std::array<double, 4>, 4> a,
                                             std::array<double, 4> b) {
    constexpr double kRelTol = 1e-10;
    double scale = 0.0;
    for (int r = 0; r < 4; ++r)
        scale = std::max(scale, std::abs(a[r][r]));

    std::array<bool, 4> used{};
    for (int col = 0; col < 4; ++col) {
        const double p = a[col][col];
        if (scale == 0.0 || std::abs(p) < kRelTol * scale)
            continue; // dependent column
        used[col] = true;
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / p;
            if (f == 0.0)
                continue;
            for (int c = col; c < 4; ++c)
                a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 4> x{};
    for (int col = 3; col >= 0; --col) {
        if (!used[col])
            continue;
        double s = b[col];
        for (int c = col + 1; c < 4; ++c)
            s -= a[col][c] * x[c];
        x[col] = s / a[col][col];
    }
    return x;
}

std::vector<std::array<double, 4>> complete_rows(std::span<const TractDemographics> tracts) {
    std::vector<std::array<double, 4>> rows;
    for (const auto& t : tracts) {
        if (!t.complete())
            continue;
        const auto v = t.values();
        rows.push_back({*v[0], *v[1], *v[2], *v[3]});
    }
    return rows;
}

} // namespace

CityStats city_stats(std::span<const TractDemographics> tracts) {
    const auto rows = complete_rows(tracts);
    if (rows.size() < 2)
        throw Error(ErrorKind::InsufficientData,
                    "city_stats needs at least 2 complete-case tracts");

    CityStats stats;
    stats.complete_cases = rows.size();
    const double n = static_cast<double>(rows.size());
    for (int v = 0; v < 4; ++v) {
        double sum = 0.0;
        for (const auto& r : rows)
            sum += r[v];
        stats.mean[v] = sum / n;
        double ss = 0.0;
        for (const auto& r : rows) {
            const double d = r[v] - stats.mean[v];
            ss += d * d;
        }
        stats.stddev[v] = std::sqrt(ss / n);
        if (stats.stddev[v] == 0.0)
            throw Error(ErrorKind::ZeroVariance,
                        std::string("variable ") + kVariableNames[v] +
                            " is constant across complete-case tracts");
    }
    return stats;
}

HviResult hvi_score(const TractDemographics& tract, const CityStats& stats) {
    HviResult result;
    result.tract_id = tract.tract_id;
    const auto values = tract.values();
    for (int v = 0; v < 4; ++v)
        if (!values[v]) {
            result.missing = true;
            result.missing_fields.push_back(kVariableNames[v]);
        }
    if (result.missing)
        return result;

    double score = 0.0;
    for (int v = 0; v < 4; ++v) {
        const double z = (*values[v] - stats.mean[v]) / stats.stddev[v];
        result.z[v] = z;
        score += z;
    }
    result.score = score;
    return result;
}

std::vector<VifEntry> vif(std::span<const TractDemographics> tracts) {
    const auto rows = complete_rows(tracts);
    if (rows.size() < 6)
        throw Error(ErrorKind::InsufficientData, "vif needs at least 6 complete-case tracts");
    const double n = static_cast<double>(rows.size());

    std::vector<VifEntry> out;
    for (int target = 0; target < 4; ++target) {
        // Regress `target` on the other three variables plus an intercept.
        std::array<int, 3> predictors{};
        int p = 0;
        for (int v = 0; v < 4; ++v)
            if (v != target)
                predictors[p++] = v;

        // Normal equations over columns [1, x0, x1, x2].
        std::array<std::array<double, 4>, 4> xtx{};
        std::array<double, 4> xty{};
        auto design = [&](const std::array<double, 4>& row, int c) {
            return c == 0 ? 1.0 : row[predictors[c - 1]];
        };
        for (const auto& row : rows) {
            for (int r = 0; r < 4; ++r) {
                xty[r] += design(row, r) * row[target];
                for (int c = 0; c < 4; ++c)
                    xtx[r][c] += design(row, r) * design(row, c);
            }
        }

        double mean_y = 0.0;
        for (const auto& row : rows)
            mean_y += row[target];
        mean_y /= n;
        double sst = 0.0;
        for (const auto& row : rows) {
            const double d = row[target] - mean_y;
            sst += d * d;
        }

        const auto coeff = solve_normal_equations(xtx, xty);

        double ssr = 0.0;
        for (const auto& row : rows) {
            double fit = 0.0;
            for (int c = 0; c < 4; ++c)
                fit += coeff[c] * design(row, c);
            const double r = row[target] - fit;
            ssr += r * r;
        }
        if (sst == 0.0 || ssr <= 1e-12 * sst) {
            // SingularDesign: the variable is exactly collinear with the rest.
            out.push_back({kVariableNames[target], std::numeric_limits<double>::infinity()});
            continue;
        }
        const double r2 = 1.0 - ssr / sst;
        out.push_back({kVariableNames[target], 1.0 / (1.0 - r2)});
    }
    return out;
}

std::vector<HviResult> rank_tracts(std::span<const HviResult> results, std::size_t k) {
    std::vector<HviResult> scored;
    for (const auto& r : results)
        if (r.score)
            scored.push_back(r);
    std::sort(scored.begin(), scored.end(), [](const HviResult& a, const HviResult& b) {
        if (*a.score != *b.score)
            return *a.score > *b.score;
        return a.tract_id < b.tract_id;
    });
    if (scored.size() > k)
        scored.resize(k);
    return scored;
}

} // namespace coolcover::hvi
