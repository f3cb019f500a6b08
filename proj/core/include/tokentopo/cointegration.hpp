#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tokentopo/date.hpp"

namespace tokentopo::cointegration {

// Which deterministic terms the unit-root regression carries. Raw series are
// tested with a constant; residuals of a cointegrating regression already
// have mean zero, so their test runs without deterministic terms and uses
// the two-variable residual critical values.
enum class AdfKind { ConstantTerm, Residual };

struct AdfResult {
    double statistic = 0.0;  // NaN when degenerate
    int lag = 0;             // augmentation order chosen by AIC
    double critical_value_1 = 0.0;
    double critical_value_5 = 0.0;
    double critical_value_10 = 0.0;
    bool stationary = false;  // unit root rejected at 5%
    bool degenerate = false;  // constant input, reported stationary
};

// Augmented Dickey-Fuller test. The augmentation order is picked by AIC over
// 0..floor(12 * (n/100)^(1/4)) on a fixed comparison sample, then the chosen
// order is refit on the full usable sample. Needs at least 20 observations.
// A constant (zero-variance) series short-circuits to a degenerate
// stationary verdict.
[[nodiscard]] AdfResult adf_test(std::span<const double> series, AdfKind kind);

struct EngleGrangerSide {
    double slope = 0.0;
    double intercept = 0.0;
    AdfResult residual_test;
};

struct EngleGrangerResult {
    EngleGrangerSide forward;   // residuals of y regressed on x
    EngleGrangerSide backward;  // residuals of x regressed on y
    bool cointegrated = false;  // either direction rejects at 5%
};

// Two-step Engle-Granger test, run in both regression directions so the
// verdict does not depend on an arbitrary regressand choice. Lengths must
// match and reach 20; a zero-variance regressor on both sides is an error.
[[nodiscard]] EngleGrangerResult engle_granger(std::span<const double> y,
                                               std::span<const double> x);

// Cumulative positive and negative shock components: plus_t = s_0 +
// sum_{i<=t} max(ds_i, 0), minus_t = sum_{i<=t} min(ds_i, 0). They sum back
// to the original series at every t.
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> shock_components(
    std::span<const double> s);

struct HiddenComponent {
    bool tested = false;  // false when a component has zero variance
    EngleGrangerResult result;
};

struct HiddenResult {
    HiddenComponent plus;   // (y+, x+)
    HiddenComponent minus;  // (y-, x-)
    bool cointegrated = false;  // any tested component passes
};

// Hidden cointegration: Engle-Granger on the positive and negative shock
// components of both series. Components that stayed flat are skipped.
[[nodiscard]] HiddenResult hidden_cointegration(std::span<const double> y,
                                                std::span<const double> x);

// Dated scalar channels for one token: its price series and one descriptor
// series (for example the rolling-depth of a Betti dimension).
struct TokenChannels {
    std::string token;
    std::vector<std::pair<Date, double>> price;
    std::vector<std::pair<Date, double>> descriptor;
};

// One channel-period test for one pair.
struct PairCell {
    bool tested = false;
    std::string skip_reason;  // set when not tested
    std::size_t length = 0;
    EngleGrangerResult plain;
    HiddenResult hidden;
};

struct PairVerdict {
    std::string token_a;  // lexicographically smaller
    std::string token_b;
    bool skipped = false;
    std::string skip_reason;
    std::size_t overlap_days = 0;
    PairCell price[2];       // period 1 and 2
    PairCell descriptor[2];
};

struct ProtocolSummary {
    std::size_t pairs_tested = 0;
    std::size_t price_both_periods = 0;       // price cointegrated in P1 and P2
    std::size_t descriptor_then_price = 0;    // descriptor in P1, price in P2
};

struct ProtocolResult {
    std::vector<PairVerdict> pairs;
    ProtocolSummary summary;
};

// For every unordered token pair: intersect price dates, require at least
// `min_overlap` common days, split them into two equal periods, and run the
// plain and hidden tests per channel and period. The summary counts use the
// hidden verdicts. Each channel-period needs 20 usable points or it is
// skipped with a reason.
[[nodiscard]] ProtocolResult pairwise_protocol(const std::vector<TokenChannels>& tokens,
                                               std::size_t min_overlap = 40);

}  // namespace tokentopo::cointegration
