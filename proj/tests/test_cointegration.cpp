#include <cmath>
#include <vector>

#include "doctest.h"
#include "support/gen.hpp"
#include "tokentopo/cointegration.hpp"

using namespace tokentopo;
using namespace tokentopo::testsupport;
using namespace tokentopo::cointegration;

namespace {

std::vector<double> random_walk(Rng& rng, std::size_t n, double step = 1.0) {
    std::vector<double> w(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += rng.normal(0.0, step);
        w[i] = s;
    }
    return w;
}

std::vector<double> ar1(Rng& rng, std::size_t n, double phi) {
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) x[i] = phi * x[i - 1] + rng.normal();
    return x;
}

}  // namespace

TEST_CASE("adf input validation and degenerate series") {
    std::vector<double> tiny(10, 1.0);
    CHECK_THROWS_AS((void)adf_test(tiny, AdfKind::ConstantTerm), std::invalid_argument);

    std::vector<double> flat(50, 3.25);
    const auto r = adf_test(flat, AdfKind::ConstantTerm);
    CHECK(r.degenerate);
    CHECK(r.stationary);
    CHECK(std::isnan(r.statistic));
}

TEST_CASE("adf rejects unit roots for stationary series and keeps them for walks") {
    int reject_ar = 0;
    int reject_rw = 0;
    for (int seed = 0; seed < 20; ++seed) {
        Rng ra(derive_seed(100, static_cast<std::uint64_t>(seed)));
        if (adf_test(ar1(ra, 400, 0.5), AdfKind::ConstantTerm).stationary) ++reject_ar;
        Rng rw(derive_seed(200, static_cast<std::uint64_t>(seed)));
        if (adf_test(random_walk(rw, 400), AdfKind::ConstantTerm).stationary) ++reject_rw;
    }
    CHECK(reject_ar >= 19);
    CHECK(reject_rw <= 3);
}

TEST_CASE("critical values approach the asymptotic response-surface constants") {
    Rng rng(9);
    const auto w = random_walk(rng, 5000);
    const auto c = adf_test(w, AdfKind::ConstantTerm);
    CHECK(c.critical_value_5 == doctest::Approx(-2.86154).epsilon(1e-3));
    CHECK(c.critical_value_1 == doctest::Approx(-3.43035).epsilon(1e-3));
    CHECK(c.critical_value_10 == doctest::Approx(-2.56677).epsilon(1e-3));

    // residual flavor uses the wider two-variable table
    const auto r = adf_test(w, AdfKind::Residual);
    CHECK(r.critical_value_5 == doctest::Approx(-3.33613).epsilon(1e-3));
    CHECK(r.critical_value_1 == doctest::Approx(-3.89644).epsilon(1e-3));
    CHECK(r.critical_value_10 == doctest::Approx(-3.04445).epsilon(1e-3));

    // finite-sample adjustment makes small-sample thresholds strictly wider
    Rng rng2(10);
    const auto small = adf_test(random_walk(rng2, 50), AdfKind::ConstantTerm);
    CHECK(small.critical_value_5 < c.critical_value_5);
}

TEST_CASE("engle-granger on a cointegrated pair") {
    int detected = 0;
    for (int seed = 0; seed < 20; ++seed) {
        Rng rng(derive_seed(300, static_cast<std::uint64_t>(seed)));
        const auto x = random_walk(rng, 400);
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] + 1.0 + rng.normal(0.0, 0.5);
        const auto r = engle_granger(y, x);
        if (r.cointegrated) ++detected;
        CHECK(std::abs(r.forward.slope - 2.0) < 0.2);
    }
    CHECK(detected >= 18);
}

TEST_CASE("engle-granger seldom flags independent walks") {
    int flagged = 0;
    for (int seed = 0; seed < 20; ++seed) {
        Rng rng(derive_seed(400, static_cast<std::uint64_t>(seed)));
        const auto x = random_walk(rng, 400);
        const auto y = random_walk(rng, 400);
        if (engle_granger(y, x).cointegrated) ++flagged;
    }
    CHECK(flagged <= 3);
}

TEST_CASE("engle-granger validation") {
    Rng rng(5);
    const auto x = random_walk(rng, 100);
    auto y = random_walk(rng, 99);
    CHECK_THROWS_AS((void)engle_granger(y, x), std::invalid_argument);
    const std::vector<double> flat(100, 1.0);
    CHECK_THROWS_AS((void)engle_granger(flat, flat), std::invalid_argument);
}

TEST_CASE("verdicts are invariant under affine rescaling") {
    Rng rng(606);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_walk(rng, 300);
        std::vector<double> y(x.size());
        const bool make_pair = trial % 2 == 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = make_pair ? 1.5 * x[i] + rng.normal(0.0, 0.4) : rng.normal(0.0, 2.0) + y[i ? i - 1 : 0];
        const auto base = engle_granger(y, x);
        for (int k = 0; k < 5; ++k) {
            const double c = rng.uniform(0.01, 50.0);
            const double d = rng.uniform(-100.0, 100.0);
            std::vector<double> scaled(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) scaled[i] = c * y[i] + d;
            const auto r = engle_granger(scaled, x);
            CHECK(r.cointegrated == base.cointegrated);
            CHECK(r.forward.residual_test.statistic ==
                  doctest::Approx(base.forward.residual_test.statistic).epsilon(1e-8));
        }
    }
}

TEST_CASE("shock components decompose the series") {
    Rng rng(707);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_walk(rng, 80, 2.0);
        s[0] = rng.uniform(-10.0, 10.0);
        const auto [plus, minus] = shock_components(s);
        REQUIRE(plus.size() == s.size());
        CHECK(plus[0] == s[0]);
        CHECK(minus[0] == 0.0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(plus[i] + minus[i] == doctest::Approx(s[i]).epsilon(1e-12));
            if (i > 0) {
                CHECK(plus[i] >= plus[i - 1]);
                CHECK(minus[i] <= minus[i - 1]);
            }
        }
    }
}

TEST_CASE("hidden cointegration ties shock components") {
    SUBCASE("shared positive shocks are found in the plus components") {
        // Even steps carry a shared upward shock (y's twice x's, plus a bounded
        // wobble that telescopes out), odd steps carry independent downward
        // shocks. The raw series are not cointegrated, their plus parts are.
        int detected = 0;
        for (int seed = 0; seed < 10; ++seed) {
            Rng rng(derive_seed(800, static_cast<std::uint64_t>(seed)));
            std::vector<double> x(300), y(300);
            double sx = 0.0, sy = 0.0, wob_prev = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (i % 2 == 0) {
                    const double p = std::abs(rng.normal()) + 0.4;
                    const double wob =
                        0.2 * std::sin(0.9 * static_cast<double>(i)) + 0.1 * rng.uniform(-1.0, 1.0);
                    sx += p;
                    sy += 2.0 * p + (wob - wob_prev);  // stays positive: 2p >= 0.8 > |dwob|
                    wob_prev = wob;
                } else {
                    sx -= std::abs(rng.normal());
                    sy -= std::abs(rng.normal());
                }
                x[i] = sx;
                y[i] = sy;
            }
            const auto h = hidden_cointegration(y, x);
            CHECK(h.plus.tested);
            if (h.cointegrated) ++detected;
        }
        CHECK(detected >= 8);
    }
    SUBCASE("strictly increasing series have no minus component to test") {
        std::vector<double> x(60), y(60);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = static_cast<double>(i) * 1.5;
            y[i] = static_cast<double>(i) * 2.0 + (i % 2 ? 0.25 : 0.0);
        }
        const auto h = hidden_cointegration(y, x);
        CHECK(!h.minus.tested);
        CHECK(h.plus.tested);
    }
}

TEST_CASE("pairwise protocol splits, tests, and counts") {
    const Date d0(18628);
    auto walk_channel = [d0](Rng& rng, const std::string& name, int days) {
        TokenChannels ch;
        ch.token = name;
        double s = 10000.0;
        for (int i = 0; i < days; ++i) {
            s += rng.normal(0.0, 1.0);
            ch.price.emplace_back(d0 + i, s);
            ch.descriptor.emplace_back(d0 + i, 0.5 + 0.4 * std::sin(i * 0.7));
        }
        return ch;
    };

    SUBCASE("cointegrated prices in both halves are counted in the summary") {
        Rng rng(41);
        std::vector<double> base(120);
        double s = 0.0;
        for (auto& v : base) {
            s += rng.normal(0.0, 1.0);
            v = s;
        }
        TokenChannels a, b;
        a.token = "zeta";
        b.token = "alpha";
        for (int i = 0; i < 120; ++i) {
            const double va = base[static_cast<std::size_t>(i)] + 100.0 + rng.normal(0.0, 0.2);
            const double vb = 2.0 * base[static_cast<std::size_t>(i)] + 300.0 + rng.normal(0.0, 0.2);
            a.price.emplace_back(d0 + i, va);
            b.price.emplace_back(d0 + i, vb);
            a.descriptor.emplace_back(d0 + i, va);
            b.descriptor.emplace_back(d0 + i, vb);
        }
        const auto res = pairwise_protocol({a, b});
        REQUIRE(res.pairs.size() == 1);
        const auto& pr = res.pairs[0];
        CHECK(pr.token_a == "alpha");  // lexicographic order, not input order
        CHECK(pr.token_b == "zeta");
        CHECK(!pr.skipped);
        CHECK(pr.overlap_days == 120);
        for (int period = 0; period < 2; ++period) {
            CHECK(pr.price[period].tested);
            CHECK(pr.price[period].length == 60);
        }
        CHECK(res.summary.pairs_tested == 1);

        // consistency between the cells and the summary counters
        std::size_t price_both = 0, desc_then_price = 0;
        for (const auto& p : res.pairs) {
            if (p.skipped) continue;
            const bool p1 = p.price[0].tested && p.price[0].hidden.cointegrated;
            const bool p2 = p.price[1].tested && p.price[1].hidden.cointegrated;
            const bool dsc = p.descriptor[0].tested && p.descriptor[0].hidden.cointegrated;
            if (p1 && p2) ++price_both;
            if (dsc && p2) ++desc_then_price;
        }
        CHECK(res.summary.price_both_periods == price_both);
        CHECK(res.summary.descriptor_then_price == desc_then_price);
    }

    SUBCASE("short overlaps are skipped") {
        Rng rng(42);
        auto a = walk_channel(rng, "aa", 30);
        auto b = walk_channel(rng, "bb", 30);
        const auto res = pairwise_protocol({a, b});
        REQUIRE(res.pairs.size() == 1);
        CHECK(res.pairs[0].skipped);
        CHECK(!res.pairs[0].skip_reason.empty());
        CHECK(res.summary.pairs_tested == 0);
    }

    SUBCASE("sparse descriptors skip only their own cells") {
        Rng rng(43);
        auto a = walk_channel(rng, "aa", 100);
        auto b = walk_channel(rng, "bb", 100);
        b.descriptor.resize(10);  // too few common descriptor days
        const auto res = pairwise_protocol({a, b});
        REQUIRE(res.pairs.size() == 1);
        const auto& pr = res.pairs[0];
        CHECK(!pr.skipped);
        CHECK(pr.price[0].tested);
        CHECK(!pr.descriptor[0].tested);
        CHECK(!pr.descriptor[0].skip_reason.empty());
        CHECK(!pr.descriptor[1].tested);
    }

    SUBCASE("three tokens give three pairs") {
        Rng rng(44);
        auto a = walk_channel(rng, "aa", 90);
        auto b = walk_channel(rng, "bb", 90);
        auto c = walk_channel(rng, "cc", 90);
        const auto res = pairwise_protocol({a, b, c});
        CHECK(res.pairs.size() == 3);
    }
}
