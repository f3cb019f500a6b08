#include "tokentopo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "tokentopo/rng.hpp"

namespace tokentopo::synth {

namespace {

std::string vertex_name(int i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "v%03d", i);
    return buf;
}

}  // namespace

SynthData generate(const SynthParams& params) {
    if (params.days < 40) throw std::invalid_argument("need at least 40 days");
    if (params.min_gap < 3 || params.max_gap < params.min_gap)
        throw std::invalid_argument("bad shock gap range");
    if (params.spokes_per_hub < 2 * params.rings)
        throw std::invalid_argument("not enough spokes for the requested rings");

    Rng rng(derive_seed(params.seed, hash_name(params.token)));

    SynthData data;
    std::set<int> planted;
    {
        int s = params.first_shock;
        while (s < params.days) {
            data.shock_days.push_back(params.start_date + s);
            if (s >= 1) planted.insert(s - 1);
            if (s >= 2) planted.insert(s - 2);
            s += static_cast<int>(rng.range(params.min_gap, params.max_gap));
        }
        for (int t : planted) data.planted_days.push_back(params.start_date + t);
    }

    // Price path: small clipped daily noise, big jumps on shock days. The
    // noise ceiling (3 sigma = 3%) stays far under the anomaly threshold, so
    // labels come from planted shocks only.
    {
        std::vector<std::pair<Date, double>> entries;
        double price = 100.0;
        std::set<Date> shock_set(data.shock_days.begin(), data.shock_days.end());
        for (int t = 0; t < params.days; ++t) {
            const Date day = params.start_date + t;
            if (t > 0) {
                if (shock_set.count(day)) {
                    const double magnitude = params.shock_magnitude * rng.uniform(1.0, 1.15);
                    price *= rng.bernoulli(0.5) ? 1.0 + magnitude : 1.0 - magnitude;
                } else {
                    double r = rng.normal(0.0, params.daily_vol);
                    r = std::clamp(r, -3.0 * params.daily_vol, 3.0 * params.daily_vol);
                    price *= 1.0 + r;
                }
            }
            entries.emplace_back(day, price);
        }
        data.prices = PriceSeries(params.token, std::move(entries));
    }

    // Maps a target dissimilarity u in [0.1, 1] to the transfer amount that
    // produces it under the default steepness (alpha = 9), given the two
    // anchor edges pinning the day's amount extremes.
    const auto amount_for = [&](double u) {
        const double r = (1.0 / u - 1.0) / 9.0;
        return params.amount_low + (params.amount_high - params.amount_low) * r;
    };

    for (int t = 0; t < params.days; ++t) {
        const Date day = params.start_date + t;
        const std::int64_t day_epoch = day.days_since_epoch() * 86400;
        const bool preshock = planted.count(t) > 0;

        int next_vertex = 0;
        std::int64_t tick = 0;
        std::set<std::pair<int, int>> used;
        const auto add_edge = [&](int a, int b, double amount) {
            if (a == b) return;
            if (!used.insert(std::minmax(a, b)).second) return;  // keep amounts un-aggregated
            data.transactions.push_back(TokenTransaction{params.token, vertex_name(a),
                                                         vertex_name(b), amount,
                                                         day_epoch + tick++});
        };
        const auto fresh = [&] { return next_vertex++; };

        // Anchors: one minimal and one maximal transfer on isolated edges, so
        // every day's weight normalization spans the same amount range.
        add_edge(fresh(), fresh(), params.amount_low);
        add_edge(fresh(), fresh(), params.amount_high);

        // Clique background, equally distributed across regimes.
        const int cliques = static_cast<int>(rng.range(0, params.cliques_max));
        for (int c = 0; c < cliques; ++c) {
            int verts[4];
            for (int& vt : verts) vt = fresh();
            const double u = rng.uniform(0.3, 0.9);
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    add_edge(verts[i], verts[j], amount_for(u * rng.uniform(0.95, 1.05)));
        }

        std::vector<int> pool;  // filler vertices usable for extra edges
        int filler = params.filler_target + (params.cliques_max - cliques) * 4 +
                     static_cast<int>(rng.range(-5, 5));

        if (preshock) {
            // Hub regime: high-amount stars collapse components early, and
            // low-amount rings threaded across hubs open cycles late.
            std::vector<std::vector<int>> spokes(static_cast<std::size_t>(params.hubs));
            for (int h = 0; h < params.hubs; ++h) {
                const int hub = fresh();
                for (int s = 0; s < params.spokes_per_hub; ++s) {
                    const int spoke = fresh();
                    spokes[static_cast<std::size_t>(h)].push_back(spoke);
                    add_edge(hub, spoke, amount_for(rng.uniform(0.10, 0.15)));
                }
                filler -= params.spokes_per_hub + 1;
            }
            for (int r = 0; r < params.rings; ++r) {
                std::vector<int> ring;
                for (int h = 0; h < params.hubs; ++h)
                    ring.push_back(spokes[static_cast<std::size_t>(h)][static_cast<std::size_t>(2 * r)]);
                for (int h = 0; h < params.hubs; ++h)
                    ring.push_back(
                        spokes[static_cast<std::size_t>(h)][static_cast<std::size_t>(2 * r + 1)]);
                for (std::size_t i = 0; i < ring.size(); ++i)
                    add_edge(ring[i], ring[(i + 1) % ring.size()],
                             amount_for(rng.uniform(0.96, 1.0)));
            }
            for (const auto& s : spokes) pool.insert(pool.end(), s.begin(), s.end());
        }

        // Filler chains with dissimilarities spread over the full range.
        while (filler > 0) {
            const int len = static_cast<int>(rng.range(2, 6));
            int prev = fresh();
            pool.push_back(prev);
            --filler;
            for (int i = 1; i < len && filler > 0; ++i) {
                const int nxt = fresh();
                pool.push_back(nxt);
                --filler;
                add_edge(prev, nxt, amount_for(rng.uniform(0.3, 0.95)));
                prev = nxt;
            }
        }

        // Extra random edges; normal days get more of them so total edge
        // counts overlap across regimes (the hub wiring is edge-heavy).
        const int extras = preshock ? static_cast<int>(rng.range(2, 8))
                                    : static_cast<int>(rng.range(20, 34));
        for (int e = 0; e < extras && pool.size() >= 2; ++e) {
            const auto a = pool[static_cast<std::size_t>(rng.below(pool.size()))];
            const auto b = pool[static_cast<std::size_t>(rng.below(pool.size()))];
            add_edge(a, b, amount_for(rng.uniform(0.12, 1.0)));
        }
    }

    return data;
}

}  // namespace tokentopo::synth
