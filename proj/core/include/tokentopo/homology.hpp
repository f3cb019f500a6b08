#pragma once

#include <cstdint>
#include <vector>

#include "tokentopo/graph.hpp"

namespace tokentopo::homology {

/// Parameters for the Vietoris-Rips construction over a daily graph.
struct FiltrationSpec {
    int max_homology_dim = 2;  // Betti numbers computed for p = 0..max_homology_dim
    double scale_cap = 1.0;    // right end L of the curve domain [0, L]

    void validate() const;
};

/// One simplex of the filtered complex: its sorted vertex list and the scale
/// at which it enters (0 for vertices, max pairwise edge weight otherwise).
struct Simplex {
    double value = 0.0;
    std::vector<std::int32_t> vertices;

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Vietoris-Rips filtration of a weighted graph, simplices sorted by
/// (value, dimension, lexicographic vertex list). Nestedness is inherent:
/// every face of a simplex enters at a value no later than the simplex.
struct FilteredComplex {
    std::size_t num_vertices = 0;
    int max_dim = 0;                 // highest simplex dimension enumerated
    std::vector<Simplex> simplices;  // filtration order
};

/// A Betti number as a right-continuous step function of the scale.
/// `values[i]` holds on [breakpoints[i], breakpoints[i+1]) and the last
/// value holds to the end of the domain. breakpoints[0] is always 0.
struct BettiCurve {
    int dim = 0;
    std::vector<double> breakpoints;
    std::vector<int> values;

    /// Value at scale `epsilon` (clamped below to the first interval).
    [[nodiscard]] int value_at(double epsilon) const;

    bool operator==(const BettiCurve&) const = default;
};

/// Constant curve `value` on the whole domain.
[[nodiscard]] BettiCurve constant_curve(int dim, int value);

/// Enumerate the clique filtration of `g` up to simplex dimension
/// `max_simplex_dim`. Every vertex subset whose pairs all share finite-weight
/// edges becomes a simplex with value max over pairwise weights; absent pairs
/// are at infinite dissimilarity and never produce a simplex. Pass
/// max_simplex_dim < 0 to enumerate to the full clique dimension.
[[nodiscard]] FilteredComplex build_filtration(const DailyGraph& g, int max_simplex_dim);

/// Convenience overload driven by a FiltrationSpec: enumerates to dimension
/// max_homology_dim + 1, the least needed for the requested Betti numbers.
[[nodiscard]] FilteredComplex build_filtration(const DailyGraph& g, const FiltrationSpec& spec);

/// Persistence pair [birth, death) in one homology dimension; death is
/// +infinity for features alive at the end of the filtration.
struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = 0.0;
};

/// Boundary-matrix column reduction over the two-element field, with the
/// clearing optimization. Returns all pairs with positive persistence for
/// dimensions 0..max_p. The complex must be enumerated at least to dimension
/// max_p + 1 (or to its full clique dimension) for deaths to be correct.
[[nodiscard]] std::vector<PersistencePair> persistence_pairs(const FilteredComplex& complex,
                                                             int max_p);

/// Exact Betti curves for p = 0..spec.max_homology_dim, read off the
/// persistence barcode: B_p(eps) counts pairs with birth <= eps < death.
/// Breakpoints appear only where some count changes, so the curves realize
/// the scale-continuum step function with no grid approximation.
[[nodiscard]] std::vector<BettiCurve> betti_curves(const FilteredComplex& complex,
                                                   const FiltrationSpec& spec);

/// Curves for p = 0..max_p from an already computed barcode.
[[nodiscard]] std::vector<BettiCurve> curves_from_pairs(const std::vector<PersistencePair>& pairs,
                                                        int max_p);

}  // namespace tokentopo::homology
