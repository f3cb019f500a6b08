#include "tokentopo/homology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace tokentopo::homology {

void FiltrationSpec::validate() const {
    if (max_homology_dim < 0 || max_homology_dim > 2)
        throw std::invalid_argument("max_homology_dim must be in [0, 2]");
    if (scale_cap <= 0.0) throw std::invalid_argument("scale_cap must be positive");
}

int BettiCurve::value_at(double epsilon) const {
    if (breakpoints.empty()) return 0;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), epsilon);
    if (it == breakpoints.begin()) return values.front();
    return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

BettiCurve constant_curve(int dim, int value) {
    return BettiCurve{dim, {0.0}, {value}};
}

namespace {

struct WeightedNeighbor {
    std::int32_t v;
    double w;
};

struct Candidate {
    std::int32_t v;
    double max_weight_to_clique;
};

// Grows cliques one ascending vertex at a time so each clique is enumerated
// exactly once. `candidates` holds the common neighbors of the current
// clique that exceed its largest vertex, with the max edge weight into the
// clique tracked incrementally.
class CliqueEnumerator {
public:
    CliqueEnumerator(const std::vector<std::vector<WeightedNeighbor>>& adj, int max_vertices,
                     std::vector<Simplex>& out)
        : adj_(adj), max_vertices_(max_vertices), out_(out) {}

    void expand(std::vector<std::int32_t>& clique, double value,
                const std::vector<Candidate>& candidates) {
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const Candidate& c = candidates[i];
            clique.push_back(c.v);
            const double new_value = std::max(value, c.max_weight_to_clique);
            out_.push_back(Simplex{new_value, clique});

            if (max_vertices_ < 0 || static_cast<int>(clique.size()) < max_vertices_) {
                std::vector<Candidate> next;
                const auto& nbrs = adj_[static_cast<std::size_t>(c.v)];
                // Intersect remaining candidates (all > c.v) with N(c.v).
                std::size_t j = i + 1;
                auto nb = std::lower_bound(
                    nbrs.begin(), nbrs.end(), c.v,
                    [](const WeightedNeighbor& n, std::int32_t x) { return n.v <= x; });
                while (j < candidates.size() && nb != nbrs.end()) {
                    if (candidates[j].v < nb->v) {
                        ++j;
                    } else if (nb->v < candidates[j].v) {
                        ++nb;
                    } else {
                        next.push_back({candidates[j].v,
                                        std::max(candidates[j].max_weight_to_clique, nb->w)});
                        ++j;
                        ++nb;
                    }
                }
                if (!next.empty()) expand(clique, new_value, next);
            }
            clique.pop_back();
        }
    }

private:
    const std::vector<std::vector<WeightedNeighbor>>& adj_;
    int max_vertices_;
    std::vector<Simplex>& out_;
};

}  // namespace

FilteredComplex build_filtration(const DailyGraph& g, int max_simplex_dim) {
    const std::size_t n = g.num_nodes();
    FilteredComplex complex;
    complex.num_vertices = n;

    for (std::size_t v = 0; v < n; ++v)
        complex.simplices.push_back(Simplex{0.0, {static_cast<std::int32_t>(v)}});

    if (max_simplex_dim != 0 && !g.edges().empty()) {
        std::vector<std::vector<WeightedNeighbor>> adj(n);
        for (const auto& e : g.edges()) {
            adj[static_cast<std::size_t>(e.u)].push_back({e.v, e.weight});
            adj[static_cast<std::size_t>(e.v)].push_back({e.u, e.weight});
        }
        for (auto& nbrs : adj)
            std::sort(nbrs.begin(), nbrs.end(),
                      [](const WeightedNeighbor& a, const WeightedNeighbor& b) { return a.v < b.v; });

        const int max_vertices = max_simplex_dim < 0 ? -1 : max_simplex_dim + 1;
        CliqueEnumerator enumerator(adj, max_vertices, complex.simplices);
        std::vector<std::int32_t> clique;
        for (const auto& e : g.edges()) {
            clique = {e.u, e.v};
            complex.simplices.push_back(Simplex{e.weight, clique});
            if (max_vertices < 0 || max_vertices > 2) {
                std::vector<Candidate> candidates;
                const auto& nu = adj[static_cast<std::size_t>(e.u)];
                const auto& nv = adj[static_cast<std::size_t>(e.v)];
                auto iu = nu.begin();
                auto iv = nv.begin();
                while (iu != nu.end() && iv != nv.end()) {
                    if (iu->v < iv->v) {
                        ++iu;
                    } else if (iv->v < iu->v) {
                        ++iv;
                    } else {
                        if (iu->v > e.v) candidates.push_back({iu->v, std::max(iu->w, iv->w)});
                        ++iu;
                        ++iv;
                    }
                }
                if (!candidates.empty()) enumerator.expand(clique, e.weight, candidates);
            }
        }
    }

    std::sort(complex.simplices.begin(), complex.simplices.end(),
              [](const Simplex& a, const Simplex& b) {
                  if (a.value != b.value) return a.value < b.value;
                  if (a.vertices.size() != b.vertices.size())
                      return a.vertices.size() < b.vertices.size();
                  return a.vertices < b.vertices;
              });

    int max_dim = 0;
    for (const auto& s : complex.simplices) max_dim = std::max(max_dim, s.dim());
    complex.max_dim = max_dim;
    return complex;
}

FilteredComplex build_filtration(const DailyGraph& g, const FiltrationSpec& spec) {
    spec.validate();
    for (const auto& e : g.edges())
        if (e.weight > spec.scale_cap)
            throw std::invalid_argument("edge weight exceeds the filtration scale cap");
    return build_filtration(g, spec.max_homology_dim + 1);
}

namespace {

struct VertexListHash {
    std::size_t operator()(const std::vector<std::int32_t>& v) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::int32_t x : v) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

// Symmetric difference of two ascending index lists (GF(2) column addition).
void add_column(std::vector<std::int32_t>& target, const std::vector<std::int32_t>& other) {
    std::vector<std::int32_t> result;
    result.reserve(target.size() + other.size());
    std::set_symmetric_difference(target.begin(), target.end(), other.begin(), other.end(),
                                  std::back_inserter(result));
    target = std::move(result);
}

}  // namespace

std::vector<PersistencePair> persistence_pairs(const FilteredComplex& complex, int max_p) {
    const std::size_t m = complex.simplices.size();
    const int top_dim = std::min(complex.max_dim, max_p + 1);

    std::unordered_map<std::vector<std::int32_t>, std::int32_t, VertexListHash> index_of;
    index_of.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (complex.simplices[i].dim() <= top_dim)
            index_of.emplace(complex.simplices[i].vertices, static_cast<std::int32_t>(i));
    }

    std::vector<std::int32_t> pivot_owner(m, -1);
    std::vector<std::vector<std::int32_t>> reduced(m);
    std::vector<bool> cleared(m, false);
    std::vector<PersistencePair> pairs;
    std::vector<bool> paired(m, false);

    // Columns of each dimension in filtration order, highest dimension first
    // so that pivot columns of the next dimension down are cleared before
    // they would be reduced.
    std::vector<std::vector<std::int32_t>> by_dim(static_cast<std::size_t>(top_dim) + 1);
    for (std::size_t i = 0; i < m; ++i) {
        const int d = complex.simplices[i].dim();
        if (d <= top_dim) by_dim[static_cast<std::size_t>(d)].push_back(static_cast<std::int32_t>(i));
    }

    std::vector<std::int32_t> face;
    for (int d = top_dim; d >= 1; --d) {
        for (std::int32_t idx : by_dim[static_cast<std::size_t>(d)]) {
            if (cleared[static_cast<std::size_t>(idx)]) continue;

            const auto& vertices = complex.simplices[static_cast<std::size_t>(idx)].vertices;
            std::vector<std::int32_t> column;
            column.reserve(vertices.size());
            for (std::size_t omit = 0; omit < vertices.size(); ++omit) {
                face.clear();
                for (std::size_t k = 0; k < vertices.size(); ++k)
                    if (k != omit) face.push_back(vertices[k]);
                column.push_back(index_of.at(face));
            }
            std::sort(column.begin(), column.end());

            while (!column.empty()) {
                const std::int32_t low = column.back();
                const std::int32_t owner = pivot_owner[static_cast<std::size_t>(low)];
                if (owner < 0) break;
                add_column(column, reduced[static_cast<std::size_t>(owner)]);
            }

            if (!column.empty()) {
                const std::int32_t low = column.back();
                pivot_owner[static_cast<std::size_t>(low)] = idx;
                cleared[static_cast<std::size_t>(low)] = true;
                paired[static_cast<std::size_t>(low)] = true;
                const double birth = complex.simplices[static_cast<std::size_t>(low)].value;
                const double death = complex.simplices[static_cast<std::size_t>(idx)].value;
                if (birth < death && d - 1 <= max_p)
                    pairs.push_back({d - 1, birth, death});
                reduced[static_cast<std::size_t>(idx)] = std::move(column);
            }
        }
    }

    // Unpaired creators are essential classes. Destroyer columns are exactly
    // the ones that stored a nonzero reduced column; everything else (zero
    // columns, cleared columns, vertices) created a class.
    for (std::size_t i = 0; i < m; ++i) {
        const int d = complex.simplices[i].dim();
        if (d > max_p || paired[i] || !reduced[i].empty()) continue;
        pairs.push_back({d, complex.simplices[i].value, std::numeric_limits<double>::infinity()});
    }

    return pairs;
}

std::vector<BettiCurve> curves_from_pairs(const std::vector<PersistencePair>& pairs, int max_p) {
    std::vector<BettiCurve> curves;
    curves.reserve(static_cast<std::size_t>(max_p) + 1);
    for (int p = 0; p <= max_p; ++p) {
        std::map<double, int> delta;
        for (const auto& pair : pairs) {
            if (pair.dim != p) continue;
            delta[pair.birth] += 1;
            if (std::isfinite(pair.death)) delta[pair.death] -= 1;
        }
        BettiCurve curve;
        curve.dim = p;
        curve.breakpoints.push_back(0.0);
        curve.values.push_back(0);
        int running = 0;
        for (const auto& [scale, change] : delta) {
            if (change == 0) continue;
            running += change;
            if (curve.breakpoints.back() == scale) {
                curve.values.back() = running;
            } else {
                curve.breakpoints.push_back(scale);
                curve.values.push_back(running);
            }
        }
        // Collapse adjacent intervals that ended up with equal values.
        std::size_t out = 1;
        for (std::size_t i = 1; i < curve.values.size(); ++i) {
            if (curve.values[i] != curve.values[out - 1]) {
                curve.breakpoints[out] = curve.breakpoints[i];
                curve.values[out] = curve.values[i];
                ++out;
            }
        }
        curve.breakpoints.resize(out);
        curve.values.resize(out);
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<BettiCurve> betti_curves(const FilteredComplex& complex, const FiltrationSpec& spec) {
    spec.validate();
    const auto pairs = persistence_pairs(complex, spec.max_homology_dim);
    return curves_from_pairs(pairs, spec.max_homology_dim);
}

}  // namespace tokentopo::homology
