#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coolcover/witness.hpp"

namespace coolcover::persistence {

using witness::FilteredComplex;
using witness::Simplex;

inline constexpr double kInfDeath = std::numeric_limits<double>::infinity();

/// One homology class: born when birth_simplex enters the filtration, killed
/// by death_simplex (absent for essential classes, death = +inf).
struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = kInfDeath;
    Simplex birth_simplex;
    std::optional<Simplex> death_simplex;

    bool essential() const { return !death_simplex.has_value(); }
    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
    /// Pairs with death > birth, sorted by (dim, birth, death, birth simplex).
    std::vector<PersistencePair> pairs;
    /// Classes born and killed at the same filtration value. Diagnostic only;
    /// the streamed pipeline fills dimension 0 here and omits dimension 1.
    std::vector<PersistencePair> zero_persistence;

    std::vector<PersistencePair> dimension(int dim) const;
};

/// Canonical order used for diagram output.
void sort_pairs(std::vector<PersistencePair>& pairs);

/// Persistence of a filtered complex by column reduction of the GF(2)
/// boundary matrix in the complex's total order, with the clearing
/// optimization (columns are processed by decreasing dimension and a column
/// paired as a birth is skipped). Unpaired simplices of dimension < max_dim
/// become essential classes.
///
/// Throws Error{InvalidFiltration} when a face is missing, a coface precedes
/// a face, or values decrease along the order.
PersistenceDiagram compute_persistence(const FilteredComplex& complex);

/// Streamed H0/H1 persistence of the flag filtration over packed edge values
/// (max_dim = 2 semantics). Produces the same diagram as compute_persistence
/// on build_flag_complex(n, values, 2) without materializing 2-simplices:
/// dimension 0 via union-find with the elder rule, dimension 1 by reducing
/// triangle columns streamed in filtration order, truncated at the enclosing
/// radius (min over vertices of the max edge value), past which every class
/// is already dead. Dimension-1 zero-persistence pairs are not recorded.
PersistenceDiagram flag_persistence_h01(std::size_t vertex_count,
                                        std::span<const double> edge_values);

/// Betti number of the alpha-sublevel complex: pairs with birth <= alpha < death.
int betti_number(const PersistenceDiagram& diagram, double alpha, int dim);
int betti_number(const FilteredComplex& complex, double alpha, int dim);

/// A ranked pair plus the landmark ids used for map annotation: the birth
/// vertex for dimension 0, the death (or birth, when essential) simplex
/// vertices otherwise.
struct RankedPair {
    PersistencePair pair;
    std::vector<std::string> landmark_ids;
};

/// Pairs of the given dimension sorted by death descending, ties by birth
/// ascending then birth simplex. Infinite deaths are excluded when
/// finite_only, otherwise listed first.
std::vector<RankedPair> top_k_deaths(const PersistenceDiagram& diagram, int dim,
                                     std::size_t k, bool finite_only,
                                     const witness::LandmarkSet& landmarks);

} // namespace coolcover::persistence
