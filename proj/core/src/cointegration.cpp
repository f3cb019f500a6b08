#include "tokentopo/cointegration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace tokentopo::cointegration {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Response-surface coefficients from MacKinnon (2010), "Critical Values for
// Cointegration Tests", Queen's Economics Department working paper 1227,
// Table 1: cv(T) = b_inf + b1/T + b2/T^2 + b3/T^3 at significance levels
// 1%, 5%, 10%. First block: tau with constant, one variable (plain
// unit-root test). Second block: tau with constant, two variables, applied
// to residuals of a bivariate cointegrating regression.
constexpr double kTauConstN1[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.04},
    {-2.56677, -1.5384, -2.809, 0.0},
};
constexpr double kTauConstN2[3][4] = {
    {-3.89644, -10.9519, -22.527, 0.0},
    {-3.33613, -6.1101, -6.823, 0.0},
    {-3.04445, -4.2412, -2.720, 0.0},
};

double surface(const double (&row)[4], double t) {
    return row[0] + row[1] / t + row[2] / (t * t) + row[3] / (t * t * t);
}

bool is_constant(std::span<const double> s) {
    for (double v : s)
        if (v != s[0]) return false;
    return true;
}

struct OlsFit {
    std::vector<double> coef;
    double ssr = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    double se_first = 0.0;  // standard error of coefficient 0
};

// Ordinary least squares via normal equations, Gaussian elimination with
// partial pivoting. Columns are the regressors; the caller puts the
// coefficient of interest first. Returns nullopt when X'X is singular.
std::optional<OlsFit> ols(const std::vector<std::vector<double>>& columns,
                          std::span<const double> y) {
    const std::size_t k = columns.size();
    const std::size_t n = y.size();

    std::vector<double> a(k * k);  // X'X
    std::vector<double> rhs(k * 2);  // [X'y | e_0] stacked column-wise
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double dot = 0.0;
            for (std::size_t t = 0; t < n; ++t) dot += columns[i][t] * columns[j][t];
            a[i * k + j] = dot;
            a[j * k + i] = dot;
        }
        double dy = 0.0;
        for (std::size_t t = 0; t < n; ++t) dy += columns[i][t] * y[t];
        rhs[i * 2] = dy;
        rhs[i * 2 + 1] = i == 0 ? 1.0 : 0.0;
    }

    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(a[i * k + i]));
    if (scale == 0.0) return std::nullopt;

    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(a[r * k + col]) > std::abs(a[pivot * k + col])) pivot = r;
        if (std::abs(a[pivot * k + col]) < 1e-12 * scale) return std::nullopt;
        if (pivot != col) {
            for (std::size_t c = 0; c < k; ++c) std::swap(a[col * k + c], a[pivot * k + c]);
            std::swap(rhs[col * 2], rhs[pivot * 2]);
            std::swap(rhs[col * 2 + 1], rhs[pivot * 2 + 1]);
        }
        const double inv = 1.0 / a[col * k + col];
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = a[r * k + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
            rhs[r * 2] -= f * rhs[col * 2];
            rhs[r * 2 + 1] -= f * rhs[col * 2 + 1];
        }
    }

    std::vector<double> coef(k);
    std::vector<double> inv0(k);  // solves X'X z = e_0; z[0] is the needed diagonal
    for (std::size_t ri = k; ri-- > 0;) {
        double s0 = rhs[ri * 2];
        double s1 = rhs[ri * 2 + 1];
        for (std::size_t c = ri + 1; c < k; ++c) {
            s0 -= a[ri * k + c] * coef[c];
            s1 -= a[ri * k + c] * inv0[c];
        }
        coef[ri] = s0 / a[ri * k + ri];
        inv0[ri] = s1 / a[ri * k + ri];
    }

    OlsFit fit;
    fit.coef = coef;
    fit.n = n;
    fit.k = k;
    for (std::size_t t = 0; t < n; ++t) {
        double pred = 0.0;
        for (std::size_t i = 0; i < k; ++i) pred += coef[i] * columns[i][t];
        const double e = y[t] - pred;
        fit.ssr += e * e;
    }
    if (n > k) {
        const double sigma2 = fit.ssr / static_cast<double>(n - k);
        fit.se_first = std::sqrt(std::max(0.0, sigma2 * inv0[0]));
    }
    return fit;
}

// Dickey-Fuller regression at augmentation order p over response indices
// [start, m): D[t] on (level s[t], D[t-1..t-p], const?). The level
// coefficient comes first so its standard error is available.
std::optional<OlsFit> df_regression(std::span<const double> s, const std::vector<double>& d,
                                    int p, std::size_t start, bool with_const) {
    const std::size_t m = d.size();
    const std::size_t rows = m - start;
    std::vector<std::vector<double>> columns;
    columns.reserve(static_cast<std::size_t>(p) + 2);

    std::vector<double> level(rows);
    for (std::size_t t = start; t < m; ++t) level[t - start] = s[t];
    columns.push_back(std::move(level));
    for (int lag = 1; lag <= p; ++lag) {
        std::vector<double> col(rows);
        for (std::size_t t = start; t < m; ++t) col[t - start] = d[t - static_cast<std::size_t>(lag)];
        columns.push_back(std::move(col));
    }
    if (with_const) columns.push_back(std::vector<double>(rows, 1.0));

    std::vector<double> response(rows);
    for (std::size_t t = start; t < m; ++t) response[t - start] = d[t];
    return ols(columns, response);
}

AdfResult degenerate_result() {
    AdfResult r;
    r.statistic = kNaN;
    r.critical_value_1 = kNaN;
    r.critical_value_5 = kNaN;
    r.critical_value_10 = kNaN;
    r.stationary = true;
    r.degenerate = true;
    return r;
}

}  // namespace

AdfResult adf_test(std::span<const double> series, AdfKind kind) {
    const std::size_t n = series.size();
    if (n < 20) throw std::invalid_argument("unit-root test needs at least 20 observations");
    if (is_constant(series)) return degenerate_result();

    const bool with_const = kind == AdfKind::ConstantTerm;
    const std::size_t m = n - 1;
    std::vector<double> d(m);
    for (std::size_t t = 0; t < m; ++t) d[t] = series[t + 1] - series[t];

    // D[t] = s[t+1] - s[t], so the lagged level for response D[t] is s[t].
    const int rule = static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    const int nconst = with_const ? 1 : 0;
    const int cap = (static_cast<int>(m) - nconst - 3) / 2;
    const int max_lag = std::max(0, std::min(rule, cap));

    // AIC comparison over a fixed sample so every order sees the same rows.
    const auto fixed_start = static_cast<std::size_t>(max_lag);
    int best_p = -1;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= max_lag; ++p) {
        const auto fit = df_regression(series, d, p, fixed_start, with_const);
        if (!fit) continue;
        const auto rows = static_cast<double>(fit->n);
        const double aic =
            rows * std::log(std::max(fit->ssr, 1e-300) / rows) + 2.0 * static_cast<double>(fit->k);
        if (aic < best_aic) {
            best_aic = aic;
            best_p = p;
        }
    }
    if (best_p < 0) return degenerate_result();  // every candidate was collinear

    const auto fit = df_regression(series, d, best_p, static_cast<std::size_t>(best_p), with_const);
    if (!fit || fit->se_first <= 0.0) return degenerate_result();

    AdfResult r;
    r.lag = best_p;
    r.statistic = fit->coef[0] / fit->se_first;
    const auto t_eff = static_cast<double>(fit->n);
    const auto& table = kind == AdfKind::Residual ? kTauConstN2 : kTauConstN1;
    r.critical_value_1 = surface(table[0], t_eff);
    r.critical_value_5 = surface(table[1], t_eff);
    r.critical_value_10 = surface(table[2], t_eff);
    r.stationary = r.statistic < r.critical_value_5;
    return r;
}

namespace {

EngleGrangerSide regress_and_test(std::span<const double> response,
                                  std::span<const double> regressor) {
    const auto n = static_cast<double>(response.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < response.size(); ++i) {
        mx += regressor[i];
        my += response[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < response.size(); ++i) {
        sxx += (regressor[i] - mx) * (regressor[i] - mx);
        sxy += (regressor[i] - mx) * (response[i] - my);
    }

    EngleGrangerSide side;
    side.slope = sxy / sxx;
    side.intercept = my - side.slope * mx;
    std::vector<double> resid(response.size());
    for (std::size_t i = 0; i < response.size(); ++i)
        resid[i] = response[i] - side.intercept - side.slope * regressor[i];
    side.residual_test = adf_test(resid, AdfKind::Residual);
    return side;
}

}  // namespace

EngleGrangerResult engle_granger(std::span<const double> y, std::span<const double> x) {
    if (y.size() != x.size()) throw std::invalid_argument("series lengths differ");
    if (y.size() < 20) throw std::invalid_argument("cointegration test needs at least 20 points");
    if (is_constant(x)) throw std::invalid_argument("regressor has zero variance");
    if (is_constant(y)) throw std::invalid_argument("response has zero variance");

    EngleGrangerResult result;
    result.forward = regress_and_test(y, x);
    result.backward = regress_and_test(x, y);
    result.cointegrated =
        result.forward.residual_test.stationary || result.backward.residual_test.stationary;
    return result;
}

std::pair<std::vector<double>, std::vector<double>> shock_components(std::span<const double> s) {
    std::vector<double> plus(s.size());
    std::vector<double> minus(s.size());
    if (s.empty()) return {plus, minus};
    plus[0] = s[0];
    minus[0] = 0.0;
    for (std::size_t t = 1; t < s.size(); ++t) {
        const double ds = s[t] - s[t - 1];
        plus[t] = plus[t - 1] + std::max(ds, 0.0);
        minus[t] = minus[t - 1] + std::min(ds, 0.0);
    }
    return {plus, minus};
}

HiddenResult hidden_cointegration(std::span<const double> y, std::span<const double> x) {
    if (y.size() != x.size()) throw std::invalid_argument("series lengths differ");
    if (y.size() < 20) throw std::invalid_argument("cointegration test needs at least 20 points");

    const auto [y_plus, y_minus] = shock_components(y);
    const auto [x_plus, x_minus] = shock_components(x);

    HiddenResult r;
    if (!is_constant(y_plus) && !is_constant(x_plus)) {
        r.plus.tested = true;
        r.plus.result = engle_granger(y_plus, x_plus);
    }
    if (!is_constant(y_minus) && !is_constant(x_minus)) {
        r.minus.tested = true;
        r.minus.result = engle_granger(y_minus, x_minus);
    }
    r.cointegrated = (r.plus.tested && r.plus.result.cointegrated) ||
                     (r.minus.tested && r.minus.result.cointegrated);
    return r;
}

namespace {

std::vector<Date> common_dates(const std::vector<std::pair<Date, double>>& a,
                               const std::vector<std::pair<Date, double>>& b) {
    std::vector<Date> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (b[j].first < a[i].first) {
            ++j;
        } else {
            out.push_back(a[i].first);
            ++i;
            ++j;
        }
    }
    return out;
}

std::optional<double> lookup(const std::vector<std::pair<Date, double>>& series, Date day) {
    auto it = std::lower_bound(series.begin(), series.end(), day,
                               [](const auto& e, Date d) { return e.first < d; });
    if (it == series.end() || it->first != day) return std::nullopt;
    return it->second;
}

PairCell run_cell(const std::vector<double>& a, const std::vector<double>& b) {
    PairCell cell;
    cell.length = a.size();
    if (a.size() < 20) {
        cell.skip_reason = "fewer than 20 usable points";
        return cell;
    }
    try {
        cell.plain = engle_granger(a, b);
        cell.hidden = hidden_cointegration(a, b);
        cell.tested = true;
    } catch (const std::invalid_argument& e) {
        cell.skip_reason = e.what();
    }
    return cell;
}

}  // namespace

ProtocolResult pairwise_protocol(const std::vector<TokenChannels>& tokens,
                                 std::size_t min_overlap) {
    ProtocolResult result;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        for (std::size_t j = i + 1; j < tokens.size(); ++j) {
            const TokenChannels* a = &tokens[i];
            const TokenChannels* b = &tokens[j];
            if (b->token < a->token) std::swap(a, b);

            PairVerdict verdict;
            verdict.token_a = a->token;
            verdict.token_b = b->token;

            const auto dates = common_dates(a->price, b->price);
            verdict.overlap_days = dates.size();
            if (dates.size() < min_overlap) {
                verdict.skipped = true;
                verdict.skip_reason = "common trading interval shorter than " +
                                      std::to_string(min_overlap) + " days";
                result.pairs.push_back(std::move(verdict));
                continue;
            }

            const std::size_t half = dates.size() / 2;
            for (int period = 0; period < 2; ++period) {
                const std::size_t begin = period == 0 ? 0 : half;
                const std::size_t end = period == 0 ? half : dates.size();

                std::vector<double> pa;
                std::vector<double> pb;
                std::vector<double> da;
                std::vector<double> db;
                for (std::size_t t = begin; t < end; ++t) {
                    pa.push_back(*lookup(a->price, dates[t]));
                    pb.push_back(*lookup(b->price, dates[t]));
                    const auto va = lookup(a->descriptor, dates[t]);
                    const auto vb = lookup(b->descriptor, dates[t]);
                    if (va && vb) {
                        da.push_back(*va);
                        db.push_back(*vb);
                    }
                }
                verdict.price[period] = run_cell(pa, pb);
                verdict.descriptor[period] = run_cell(da, db);
            }

            ++result.summary.pairs_tested;
            const bool price1 = verdict.price[0].tested && verdict.price[0].hidden.cointegrated;
            const bool price2 = verdict.price[1].tested && verdict.price[1].hidden.cointegrated;
            const bool desc1 =
                verdict.descriptor[0].tested && verdict.descriptor[0].hidden.cointegrated;
            if (price1 && price2) ++result.summary.price_both_periods;
            if (desc1 && price2) ++result.summary.descriptor_then_price;
            result.pairs.push_back(std::move(verdict));
        }
    }
    return result;
}

}  // namespace tokentopo::cointegration
