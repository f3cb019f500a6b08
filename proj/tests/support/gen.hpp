#pragma once

// Seeded generators and small filesystem helpers shared by the test suites.

#include <filesystem>
#include <string>
#include <vector>

#include "tokentopo/graph.hpp"
#include "tokentopo/homology.hpp"
#include "tokentopo/records.hpp"
#include "tokentopo/rng.hpp"

namespace tokentopo::testsupport {

// Erdos-Renyi style graph: 1..max_nodes vertices, each pair an edge with
// probability edge_prob, weights uniform in [0.1, 1], amounts uniform.
[[nodiscard]] DailyGraph random_graph(Rng& rng, int max_nodes, double edge_prob);

// Graph from an explicit weighted edge list over vertices 0..n-1.
struct WeightedEdge {
    int u;
    int v;
    double weight;
    double amount = 1.0;
};
[[nodiscard]] DailyGraph make_graph(int n, std::vector<WeightedEdge> edges);

// The same graph under a random permutation of its address labels.
[[nodiscard]] DailyGraph relabel(const DailyGraph& g, Rng& rng);

// Step function with up to max_breaks interior breakpoints in (0, L) and
// integer values in [0, max_value].
[[nodiscard]] homology::BettiCurve random_step_curve(Rng& rng, int max_breaks, int max_value,
                                                     double domain_end = 1.0);

// Constant curve helper mirroring production but local to tests.
[[nodiscard]] homology::BettiCurve const_curve(int value, double at = 0.0);

// Price series over `days` consecutive dates with multiplicative noise and
// occasional gaps (gap_prob per day, first day never a gap).
[[nodiscard]] PriceSeries random_prices(Rng& rng, const std::string& token, Date start, int days,
                                        double vol, double gap_prob);

// Unique scratch directory under the system temp dir; removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name, const std::string& contents) const;

private:
    std::filesystem::path path_;
};

[[nodiscard]] std::string read_file(const std::filesystem::path& p);

// Equality helpers for whole-graph comparisons.
[[nodiscard]] bool same_graph(const DailyGraph& a, const DailyGraph& b);

}  // namespace tokentopo::testsupport
