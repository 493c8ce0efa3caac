#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "coolcover/persistence.hpp"
#include "coolcover/union_find.hpp"

namespace coolcover::persistence {

namespace {

struct Edge {
    double value;
    int i, j;
};

struct Triangle {
    std::array<int, 3> vertices;
    std::array<int, 3> edge_orders;
};

std::vector<int> add_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            out.push_back(*ia++);
        else if (*ib < *ia)
            out.push_back(*ib++);
        else {
            ++ia;
            ++ib;
        }
    }
    out.insert(out.end(), ia, a.end());
    out.insert(out.end(), ib, b.end());
    return out;
}

} // namespace

PersistenceDiagram flag_persistence_h01(std::size_t vertex_count,
                                        std::span<const double> edge_values) {
    const std::size_t n = vertex_count;
    const double inf = std::numeric_limits<double>::infinity();

    // Enclosing radius: min over vertices of the largest incident edge value.
    // Once some vertex is within alpha of every other, the flag complex is a
    // cone, so every class of dimension >= 1 is dead; edges and triangles
    // past that value contribute nothing but zero-persistence noise.
    std::vector<double> row_max(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = edge_values[witness::pair_index(i, j, n)];
            row_max[i] = std::max(row_max[i], v);
            row_max[j] = std::max(row_max[j], v);
        }
    double cap = inf;
    for (std::size_t i = 0; i < n; ++i)
        cap = std::min(cap, row_max[i]);

    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = edge_values[witness::pair_index(i, j, n)];
            if (std::isfinite(v) && v <= cap)
                edges.push_back({v, static_cast<int>(i), static_cast<int>(j)});
        }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.value != b.value)
            return a.value < b.value;
        if (a.i != b.i)
            return a.i < b.i;
        return a.j < b.j;
    });

    PersistenceDiagram diagram;
    UnionFind components(n);
    std::vector<int> oldest(n);
    for (std::size_t v = 0; v < n; ++v)
        oldest[v] = static_cast<int>(v);

    std::vector<char> positive(edges.size(), 0);
    std::vector<char> killed(edges.size(), 0);
    std::vector<char> lazy(edges.size(), 0); // killed, column not yet materialized
    std::vector<std::vector<std::pair<int, int>>> adj(n); // vertex -> (neighbor, edge order)
    std::vector<std::size_t> stamp(n, static_cast<std::size_t>(-1));
    std::vector<int> stamp_order(n, -1);
    std::size_t stamp_tick = 0;

    std::unordered_map<int, std::vector<int>> low_to_column;

    // Boundary of the lex-first triangle over edge `order`: its smallest
    // common neighbor among strictly earlier edges. Deterministic in the
    // edge orders alone, so deferring the computation changes nothing.
    auto lazy_column = [&](int order) {
        const Edge& edge = edges[static_cast<std::size_t>(order)];
        int best_k = -1, best_ik = -1, best_jk = -1;
        ++stamp_tick;
        for (const auto& [k, o] : adj[edge.i]) {
            stamp[k] = stamp_tick;
            stamp_order[k] = o;
        }
        for (const auto& [k, o_jk] : adj[edge.j]) {
            if (stamp[k] != stamp_tick)
                continue;
            const int o_ik = stamp_order[k];
            if (o_ik >= order || o_jk >= order)
                continue;
            if (best_k < 0 || k < best_k) {
                best_k = k;
                best_ik = o_ik;
                best_jk = o_jk;
            }
        }
        if (best_k < 0)
            throw std::logic_error("flag reduction: lazily killed edge has no coface");
        std::vector<int> column{best_ik, best_jk, order};
        std::sort(column.begin(), column.end());
        return column;
    };
    long long alive = 0; // positive edges seen minus triangle kills
    std::vector<Triangle> plateau_triangles;
    std::vector<std::size_t> instant_kills;

    std::size_t e = 0;
    while (e < edges.size()) {
        std::size_t plateau_end = e;
        while (plateau_end < edges.size() && edges[plateau_end].value == edges[e].value)
            ++plateau_end;
        const long long alive_before = alive;

        // Dimension-1 phase: all edges of this value precede its triangles.
        for (std::size_t t = e; t < plateau_end; ++t) {
            const Edge& edge = edges[t];
            const std::size_t ra = components.find(static_cast<std::size_t>(edge.i));
            const std::size_t rb = components.find(static_cast<std::size_t>(edge.j));
            if (ra != rb) {
                const int oa = oldest[ra], ob = oldest[rb];
                const int dying = std::max(oa, ob);
                const std::size_t root = components.unite(ra, rb);
                oldest[root] = std::min(oa, ob);
                PersistencePair pair{0, 0.0, edge.value, Simplex{{dying}},
                                     Simplex{{edge.i, edge.j}}};
                if (edge.value > 0.0)
                    diagram.pairs.push_back(std::move(pair));
                else
                    diagram.zero_persistence.push_back(std::move(pair));
            } else {
                positive[t] = 1;
                ++alive;
            }
            adj[edge.i].emplace_back(edge.j, static_cast<int>(t));
            adj[edge.j].emplace_back(edge.i, static_cast<int>(t));
        }

        // Dimension-2 phase. Skipped entirely while no class is alive: every
        // triangle column would reduce to zero and is never consulted later.
        //
        // Fast path when the plateau starts with nothing alive: each
        // positive edge that has any coface in its group — a common neighbor
        // with both edges strictly earlier in the order — dies at this very
        // value. The witness columns (the lex-first coface per edge) have
        // distinct lows, hence are independent, so all these kills hold in
        // the canonical pairing; the pairs are zero-persistence and the
        // columns are materialized only if a later reduction consults them.
        // The existence scan marks the lower-degree endpoint and stops at
        // the first hit. If any positive edge lacks such a coface its fate
        // depends on cross-group chains, so the tentative kills are rolled
        // back and the plateau goes through the full reduction instead.
        if (alive_before == 0 && alive > 0) {
            instant_kills.clear();
            for (std::size_t t = e; t < plateau_end; ++t) {
                if (!positive[t])
                    continue;
                const Edge& edge = edges[t];
                const int order = static_cast<int>(t);
                const bool i_smaller = adj[edge.i].size() <= adj[edge.j].size();
                const auto& mark_side = i_smaller ? adj[edge.i] : adj[edge.j];
                const auto& scan_side = i_smaller ? adj[edge.j] : adj[edge.i];
                ++stamp_tick;
                for (const auto& [k, o] : mark_side) {
                    stamp[k] = stamp_tick;
                    stamp_order[k] = o;
                }
                for (const auto& [k, o_scan] : scan_side) {
                    if (stamp[k] != stamp_tick)
                        continue;
                    if (stamp_order[k] >= order || o_scan >= order)
                        continue;
                    killed[t] = 1;
                    lazy[t] = 1;
                    --alive;
                    instant_kills.push_back(t);
                    break;
                }
            }
            if (alive > 0) {
                for (std::size_t t : instant_kills) {
                    killed[t] = 0;
                    lazy[t] = 0;
                    ++alive;
                }
            }
        }
        if (alive > 0) {
            plateau_triangles.clear();
            for (std::size_t t = e; t < plateau_end; ++t) {
                const Edge& edge = edges[t];
                const int order = static_cast<int>(t);
                ++stamp_tick;
                for (const auto& [k, o] : adj[edge.i]) {
                    stamp[k] = stamp_tick;
                    stamp_order[k] = o;
                }
                for (const auto& [k, o_jk] : adj[edge.j]) {
                    if (stamp[k] != stamp_tick)
                        continue;
                    const int o_ik = stamp_order[k];
                    if (o_ik >= order || o_jk >= order)
                        continue; // triangle belongs to a later edge's group
                    std::array<int, 3> vs{edge.i, edge.j, k};
                    std::sort(vs.begin(), vs.end());
                    std::array<int, 3> cols{o_ik, o_jk, order};
                    std::sort(cols.begin(), cols.end());
                    plateau_triangles.push_back({vs, cols});
                }
            }
            std::sort(plateau_triangles.begin(), plateau_triangles.end(),
                      [](const Triangle& a, const Triangle& b) { return a.vertices < b.vertices; });

            for (const Triangle& tri : plateau_triangles) {
                std::vector<int> column(tri.edge_orders.begin(), tri.edge_orders.end());
                while (!column.empty()) {
                    const int low = column.back();
                    auto it = low_to_column.find(low);
                    if (it == low_to_column.end()) {
                        if (!lazy[low])
                            break;
                        it = low_to_column.emplace(low, lazy_column(low)).first;
                        lazy[low] = 0;
                    }
                    column = add_sorted(column, it->second);
                }
                if (column.empty())
                    continue; // creates a 2-class we do not track
                const int low = column.back();
                if (!positive[low] || killed[low])
                    throw std::logic_error("flag reduction: low landed on a non-creating edge");
                killed[low] = 1;
                --alive;
                const Edge& birth = edges[low];
                if (edges[e].value > birth.value) {
                    diagram.pairs.push_back(
                        PersistencePair{1, birth.value, edges[e].value,
                                        Simplex{{birth.i, birth.j}},
                                        Simplex{{tri.vertices[0], tri.vertices[1], tri.vertices[2]}}});
                }
                low_to_column.emplace(low, std::move(column));
                if (alive == 0)
                    break;
            }
        }
        e = plateau_end;
    }

    // Essential classes: one 0-class per remaining component, one 1-class per
    // positive edge never killed (possible only when the cap is infinite).
    for (std::size_t v = 0; v < n; ++v)
        if (components.find(v) == v)
            diagram.pairs.push_back(
                PersistencePair{0, 0.0, kInfDeath, Simplex{{oldest[v]}}, {}});
    for (std::size_t t = 0; t < edges.size(); ++t)
        if (positive[t] && !killed[t])
            diagram.pairs.push_back(PersistencePair{1, edges[t].value, kInfDeath,
                                                    Simplex{{edges[t].i, edges[t].j}}, {}});

    sort_pairs(diagram.pairs);
    sort_pairs(diagram.zero_persistence);
    return diagram;
}

} // namespace coolcover::persistence
