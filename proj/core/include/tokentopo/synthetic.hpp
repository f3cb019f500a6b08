#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tokentopo/date.hpp"
#include "tokentopo/records.hpp"

namespace tokentopo::synth {

// Generator for a token whose transaction topology shifts regime one and two
// days ahead of each planted price shock. Normal days carry small cliques
// plus loosely connected filler with transfer amounts tuned so edge
// dissimilarities spread across the whole filtration range. Pre-shock days
// rewire the filler into a few high-amount hubs (early coordinate-wise
// collapse of components) threaded by low-amount cross-hub rings (late cycle
// births). Node and edge counts stay in overlapping ranges across regimes,
// so plain size statistics carry at most a weak echo of the plant while the
// Betti-curve shapes separate cleanly.
struct SynthParams {
    std::string token = "synthalpha";
    int days = 300;
    std::uint64_t seed = 1;
    Date start_date = Date(18628);  // 2021-01-01

    int first_shock = 20;
    int min_gap = 12;   // days between consecutive shocks
    int max_gap = 24;
    double shock_magnitude = 0.35;  // absolute price move on shock days
    double daily_vol = 0.01;        // normal-day return stddev, clipped at 3 sigma

    int cliques_max = 4;        // per-day clique count drawn from 0..cliques_max
    int hubs = 3;               // pre-shock hub count
    int spokes_per_hub = 12;
    int rings = 3;              // low-amount cycles threaded across hub spokes
    int filler_target = 30;     // filler vertices per day before jitter
    double amount_low = 1.0;    // anchor amounts pinning the day's A_min/A_max
    double amount_high = 20000.0;
};

struct SynthData {
    std::vector<TokenTransaction> transactions;
    PriceSeries prices;
    std::vector<Date> shock_days;
    std::vector<Date> planted_days;  // the two days ahead of each shock
};

[[nodiscard]] SynthData generate(const SynthParams& params);

}  // namespace tokentopo::synth
