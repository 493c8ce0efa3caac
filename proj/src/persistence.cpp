#include "coolcover/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "coolcover/errors.hpp"

namespace coolcover::persistence {

namespace {

bool pair_less(const PersistencePair& a, const PersistencePair& b) {
    if (a.dim != b.dim)
        return a.dim < b.dim;
    if (a.birth != b.birth)
        return a.birth < b.birth;
    if (a.death != b.death)
        return a.death < b.death;
    return a.birth_simplex.vertices < b.birth_simplex.vertices;
}

// Symmetric difference of two ascending index lists (column addition over GF(2)).
std::vector<int> add_columns(const std::vector<int>& a, const std::vector<int>& b) {
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

void sort_pairs(std::vector<PersistencePair>& pairs) {
    std::sort(pairs.begin(), pairs.end(), pair_less);
}

std::vector<PersistencePair> PersistenceDiagram::dimension(int dim) const {
    std::vector<PersistencePair> out;
    for (const auto& p : pairs)
        if (p.dim == dim)
            out.push_back(p);
    return out;
}

PersistenceDiagram compute_persistence(const FilteredComplex& complex) {
    const std::size_t n = complex.simplices.size();

    // Index simplices by vertex set and validate the filtration order.
    std::map<std::vector<int>, int> index_of;
    for (std::size_t i = 0; i < n; ++i)
        index_of[complex.simplices[i].simplex.vertices] = static_cast<int>(i);

    int actual_max_dim = 0;
    std::vector<std::vector<int>> boundary(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& entry = complex.simplices[i];
        actual_max_dim = std::max(actual_max_dim, entry.simplex.dim());
        if (i > 0 && complex.simplices[i - 1].value > entry.value)
            throw Error(ErrorKind::InvalidFiltration, "filtration values decrease along the order");
        if (entry.simplex.dim() == 0)
            continue;
        std::vector<int> facet(entry.simplex.vertices);
        std::vector<int>& rows = boundary[i];
        for (std::size_t drop = 0; drop < entry.simplex.vertices.size(); ++drop) {
            facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
            auto it = index_of.find(facet);
            if (it == index_of.end())
                throw Error(ErrorKind::InvalidFiltration, "face of a simplex is missing");
            if (static_cast<std::size_t>(it->second) >= i)
                throw Error(ErrorKind::InvalidFiltration, "coface precedes a face in the order");
            if (complex.simplices[it->second].value > entry.value)
                throw Error(ErrorKind::InvalidFiltration, "face has a larger filtration value");
            rows.push_back(it->second);
            facet.insert(facet.begin() + static_cast<std::ptrdiff_t>(drop),
                         entry.simplex.vertices[drop]);
        }
        std::sort(rows.begin(), rows.end());
    }

    // Left-to-right reduction per dimension, highest first, clearing the
    // column of every simplex paired as a birth.
    std::vector<int> partner(n, -1);
    std::vector<char> cleared(n, 0);
    std::unordered_map<int, std::vector<int>> low_to_column;
    for (int d = actual_max_dim; d >= 1; --d) {
        low_to_column.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (complex.simplices[j].simplex.dim() != d || cleared[j])
                continue;
            std::vector<int> column = boundary[j];
            while (!column.empty()) {
                auto it = low_to_column.find(column.back());
                if (it == low_to_column.end())
                    break;
                column = add_columns(column, it->second);
            }
            if (!column.empty()) {
                const int low = column.back();
                partner[low] = static_cast<int>(j);
                partner[j] = low;
                cleared[low] = 1;
                low_to_column.emplace(low, std::move(column));
            }
        }
    }

    PersistenceDiagram diagram;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& entry = complex.simplices[i];
        const int d = entry.simplex.dim();
        if (partner[i] >= 0 && static_cast<std::size_t>(partner[i]) > i) {
            const auto& killer = complex.simplices[partner[i]];
            PersistencePair pair{d, entry.value, killer.value, entry.simplex, killer.simplex};
            if (killer.value > entry.value)
                diagram.pairs.push_back(std::move(pair));
            else
                diagram.zero_persistence.push_back(std::move(pair));
        } else if (partner[i] < 0 && d < complex.max_dim) {
            diagram.pairs.push_back(PersistencePair{d, entry.value, kInfDeath, entry.simplex, {}});
        }
    }
    sort_pairs(diagram.pairs);
    sort_pairs(diagram.zero_persistence);
    return diagram;
}

int betti_number(const PersistenceDiagram& diagram, double alpha, int dim) {
    int count = 0;
    for (const auto& p : diagram.pairs)
        if (p.dim == dim && p.birth <= alpha && alpha < p.death)
            ++count;
    return count;
}

int betti_number(const FilteredComplex& complex, double alpha, int dim) {
    return betti_number(compute_persistence(complex), alpha, dim);
}

std::vector<RankedPair> top_k_deaths(const PersistenceDiagram& diagram, int dim,
                                     std::size_t k, bool finite_only,
                                     const witness::LandmarkSet& landmarks) {
    std::vector<const PersistencePair*> selected;
    for (const auto& p : diagram.pairs) {
        if (p.dim != dim)
            continue;
        if (finite_only && p.essential())
            continue;
        selected.push_back(&p);
    }
    std::sort(selected.begin(), selected.end(),
              [](const PersistencePair* a, const PersistencePair* b) {
                  if (a->death != b->death)
                      return a->death > b->death; // +inf first
                  if (a->birth != b->birth)
                      return a->birth < b->birth;
                  return a->birth_simplex.vertices < b->birth_simplex.vertices;
              });
    if (selected.size() > k)
        selected.resize(k);

    std::vector<RankedPair> out;
    out.reserve(selected.size());
    for (const PersistencePair* p : selected) {
        RankedPair ranked{*p, {}};
        const std::vector<int>* vertices = &p->birth_simplex.vertices;
        if (dim > 0 && p->death_simplex.has_value())
            vertices = &p->death_simplex->vertices;
        else if (dim == 0)
            vertices = &p->birth_simplex.vertices;
        for (int v : *vertices)
            ranked.landmark_ids.push_back(landmarks.ids.at(static_cast<std::size_t>(v)));
        out.push_back(std::move(ranked));
    }
    return out;
}

} // namespace coolcover::persistence
