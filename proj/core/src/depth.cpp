#include "tokentopo/depth.hpp"

#include <algorithm>
#include <stdexcept>

namespace tokentopo::depth {

using homology::BettiCurve;

void DepthParams::validate() const {
    if (domain_end <= 0.0) throw std::invalid_argument("domain_end must be positive");
}

namespace {

double choose2(double x) { return x * (x - 1.0) * 0.5; }

// Depths of every curve at once. The band-membership measure is additive
// over the cells of the merged breakpoint grid, where all curves are
// constant; within a cell the number of index pairs whose band covers value
// v is C(m,2) minus the pairs lying entirely below or entirely above v,
// which needs only the per-value occupancy counts. Exact, no quadrature.
std::vector<double> all_depths(std::span<const BettiCurve> curves, const DepthParams& params) {
    params.validate();
    const std::size_t m = curves.size();
    if (m < 2) throw std::invalid_argument("band depth needs at least two curves");
    const double L = params.domain_end;

    std::vector<double> grid;
    for (const auto& c : curves)
        for (double b : c.breakpoints)
            if (b < L) grid.push_back(b);
    grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    struct Event {
        std::int32_t curve;
        int value;
    };
    std::vector<std::vector<Event>> events(grid.size());
    int max_value = 0;
    for (std::size_t c = 0; c < m; ++c) {
        const auto& bp = curves[c].breakpoints;
        for (std::size_t k = 0; k < bp.size(); ++k) {
            if (bp[k] >= L) break;
            const auto cell = static_cast<std::size_t>(
                std::lower_bound(grid.begin(), grid.end(), bp[k]) - grid.begin());
            events[cell].push_back({static_cast<std::int32_t>(c), curves[c].values[k]});
            max_value = std::max(max_value, curves[c].values[k]);
        }
    }

    // Every curve has a breakpoint at 0, so the synthetic initial value 0 is
    // replaced by the real one when cell 0's events are applied.
    std::vector<int> current(m, 0);
    std::vector<std::size_t> count(static_cast<std::size_t>(max_value) + 1, 0);
    count[0] = m;
    std::vector<std::size_t> prefix(count.size());
    std::vector<double> acc(m, 0.0);
    const double all_pairs = choose2(static_cast<double>(m));

    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (const Event& e : events[i]) {
            --count[static_cast<std::size_t>(current[static_cast<std::size_t>(e.curve)])];
            ++count[static_cast<std::size_t>(e.value)];
            current[static_cast<std::size_t>(e.curve)] = e.value;
        }
        const double right = i + 1 < grid.size() ? grid[i + 1] : L;
        const double len = right - grid[i];
        if (len <= 0.0) continue;

        std::size_t running = 0;
        for (std::size_t v = 0; v < count.size(); ++v) {
            running += count[v];
            prefix[v] = running;
        }
        for (std::size_t s = 0; s < m; ++s) {
            const auto v = static_cast<std::size_t>(current[s]);
            const auto below = static_cast<double>(v > 0 ? prefix[v - 1] : 0);
            const auto above = static_cast<double>(m - prefix[v]);
            double covered = all_pairs - choose2(below) - choose2(above);
            if (params.include_self_pairs)
                covered += static_cast<double>(prefix[v]) - below;  // bands of width zero at v
            acc[s] += len * covered;
        }
    }

    const double normalizer =
        (all_pairs + (params.include_self_pairs ? static_cast<double>(m) : 0.0)) * L;
    for (double& d : acc) d /= normalizer;
    return acc;
}

}  // namespace

double mbd(std::span<const BettiCurve> curves, std::size_t subject, const DepthParams& params) {
    if (subject >= curves.size()) throw std::invalid_argument("subject index out of range");
    return all_depths(curves, params)[subject];
}

std::vector<double> mbd_all(std::span<const BettiCurve> curves, const DepthParams& params) {
    return all_depths(curves, params);
}

std::size_t betti_pivot(std::span<const BettiCurve> curves, const DepthParams& params) {
    if (curves.size() < 2) return 0;
    const auto depths = all_depths(curves, params);
    std::size_t best = 0;
    for (std::size_t i = 1; i < depths.size(); ++i)
        if (depths[i] > depths[best]) best = i;
    return best;
}

std::vector<double> rolling_depth(std::span<const Date> dates,
                                  std::span<const homology::BettiCurve> curves, int window_days,
                                  const DepthParams& params) {
    params.validate();
    if (dates.size() != curves.size())
        throw std::invalid_argument("dates and curves must be aligned");
    if (window_days < 1) throw std::invalid_argument("window must be at least one day");
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (!(dates[i - 1] < dates[i]))
            throw std::invalid_argument("dates must be strictly increasing");

    std::vector<double> depths;
    depths.reserve(dates.size());
    for (std::size_t t = 0; t < dates.size(); ++t) {
        const Date cutoff = dates[t] - (window_days - 1);
        std::size_t start = t;
        while (start > 0 && dates[start - 1] >= cutoff) --start;
        const std::size_t m = t - start + 1;
        if (m == 1) {
            depths.push_back(1.0);
        } else {
            depths.push_back(mbd(curves.subspan(start, m), t - start, params));
        }
    }
    return depths;
}

}  // namespace tokentopo::depth
