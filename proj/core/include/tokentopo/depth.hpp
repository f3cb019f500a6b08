#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tokentopo/date.hpp"
#include "tokentopo/homology.hpp"

namespace tokentopo::depth {

struct DepthParams {
    // Right end of the curve domain [0, domain_end]; band membership is
    // measured with respect to Lebesgue measure on this interval.
    double domain_end = 1.0;
    // When set, bands formed by a curve with itself also count, and the
    // normalizer grows accordingly so the result stays within [0, 1].
    bool include_self_pairs = false;

    void validate() const;
};

// Fraction of [0, domain_end], averaged over all index pairs i1 < i2, on
// which the subject curve lies inside the closed band spanned by curves i1
// and i2. Computed exactly from the step-function breakpoints. Requires at
// least two curves.
[[nodiscard]] double mbd(std::span<const homology::BettiCurve> curves, std::size_t subject,
                         const DepthParams& params = {});

// Depth of every curve within the same sample.
[[nodiscard]] std::vector<double> mbd_all(std::span<const homology::BettiCurve> curves,
                                          const DepthParams& params = {});

// Index of the deepest curve; ties resolve to the lowest index.
[[nodiscard]] std::size_t betti_pivot(std::span<const homology::BettiCurve> curves,
                                      const DepthParams& params = {});

// Depth of each day's curve within the trailing calendar window
// [date_t - window_days + 1, date_t], restricted to days present in the
// series. The day itself is part of its window; a window holding a single
// curve yields depth 1. Dates must be strictly increasing and aligned with
// the curves.
[[nodiscard]] std::vector<double> rolling_depth(std::span<const Date> dates,
                                                std::span<const homology::BettiCurve> curves,
                                                int window_days, const DepthParams& params = {});

}  // namespace tokentopo::depth
