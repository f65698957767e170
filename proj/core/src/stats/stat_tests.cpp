#include "tsreason/stats/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tsreason/core/error.hpp"
#include "tsreason/numerics/linreg.hpp"
#include "tsreason/numerics/special.hpp"
#include "tsreason/stats/ops.hpp"

namespace tsreason::stats {
namespace {

constexpr double kAlpha = 0.05;

double clamp_p(double p) { return std::clamp(p, 1e-4, 0.9999); }

// Piecewise-linear interpolation of p against (stat, p) anchors that are
// monotone in stat; outer segments extrapolate with the adjacent slope.
double interp_pvalue(double stat, const std::vector<std::pair<double, double>>& anchors) {
    std::size_t seg = 0;
    if (stat >= anchors.back().first) {
        seg = anchors.size() - 2;
    } else {
        while (seg + 2 < anchors.size() && stat > anchors[seg + 1].first) ++seg;
    }
    const auto [x0, p0] = anchors[seg];
    const auto [x1, p1] = anchors[seg + 1];
    return clamp_p(p0 + (p1 - p0) * (stat - x0) / (x1 - x0));
}

// Dickey-Fuller tau (constant, no trend) finite-sample critical values.
struct DfRow {
    double n, cv1, cv5, cv10;
};
const DfRow kDfTable[] = {
    {25, -3.75, -3.00, -2.63},  {50, -3.58, -2.93, -2.60},  {100, -3.51, -2.89, -2.58},
    {250, -3.46, -2.88, -2.57}, {500, -3.44, -2.87, -2.57}, {1e9, -3.43, -2.86, -2.57},
};

DfRow df_critical_values(double n) {
    if (n <= kDfTable[0].n) return kDfTable[0];
    for (std::size_t i = 0; i + 1 < std::size(kDfTable); ++i) {
        const DfRow& lo = kDfTable[i];
        const DfRow& hi = kDfTable[i + 1];
        if (n <= hi.n) {
            const double f = (n - lo.n) / (hi.n - lo.n);
            return DfRow{n, lo.cv1 + f * (hi.cv1 - lo.cv1), lo.cv5 + f * (hi.cv5 - lo.cv5),
                         lo.cv10 + f * (hi.cv10 - lo.cv10)};
        }
    }
    return kDfTable[std::size(kDfTable) - 1];
}

TestResult adf_test(const TimeSeries& series, std::optional<int> lags) {
    const auto& y = series.values();
    const std::size_t n = y.size();
    const int p = lags.value_or(static_cast<int>(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    if (p < 0) fail("DomainError", "adf lag order must be non-negative");
    const std::size_t rows = n >= static_cast<std::size_t>(p) + 1 ? n - 1 - p : 0;
    const std::size_t cols = static_cast<std::size_t>(p) + 2;  // const, y_{t-1}, p lagged diffs
    if (rows < cols + 2)
        fail("SeriesTooShort", "adf with " + std::to_string(p) + " lags needs more than " +
                                   std::to_string(cols + p + 3) + " points, got " + std::to_string(n));

    Matrix X = Matrix::zeros(rows, cols);
    std::vector<double> dy(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + 1 + static_cast<std::size_t>(p);
        dy[r] = y[t] - y[t - 1];
        X.at(r, 0) = 1.0;
        X.at(r, 1) = y[t - 1];
        for (int j = 1; j <= p; ++j)
            X.at(r, 1 + static_cast<std::size_t>(j)) =
                y[t - static_cast<std::size_t>(j)] - y[t - static_cast<std::size_t>(j) - 1];
    }
    const auto fit = numerics::lstsq(X, dy);
    if (fit.std_errors.empty() || fit.std_errors[1] == 0.0)
        fail("SingularRegression", "adf regression is singular");
    const double stat = fit.beta[1] / fit.std_errors[1];

    const DfRow cv = df_critical_values(static_cast<double>(rows));
    const double p_value =
        interp_pvalue(stat, {{cv.cv1, 0.01}, {cv.cv5, 0.05}, {cv.cv10, 0.10}});
    return TestResult{"adf", stat, p_value, stat < cv.cv5};
}

TestResult kpss_test(const TimeSeries& series, std::optional<int> lags) {
    const auto& y = series.values();
    const std::size_t n = y.size();
    if (n < 12) fail("SeriesTooShort", "kpss needs at least 12 points");
    const int bandwidth =
        lags.value_or(static_cast<int>(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    if (bandwidth < 0) fail("DomainError", "kpss bandwidth must be non-negative");

    // Residuals of y on (1, t): the trend-stationarity variant.
    Matrix X = Matrix::zeros(n, 2);
    for (std::size_t t = 0; t < n; ++t) {
        X.at(t, 0) = 1.0;
        X.at(t, 1) = static_cast<double>(t);
    }
    const auto fit = numerics::lstsq(X, y);
    std::vector<double> e(n);
    for (std::size_t t = 0; t < n; ++t)
        e[t] = y[t] - fit.beta[0] - fit.beta[1] * static_cast<double>(t);

    // Long-run variance, Bartlett kernel.
    double gamma0 = 0.0;
    for (const double v : e) gamma0 += v * v;
    gamma0 /= static_cast<double>(n);
    double lrv = gamma0;
    for (int l = 1; l <= bandwidth; ++l) {
        double g = 0.0;
        for (std::size_t t = static_cast<std::size_t>(l); t < n; ++t)
            g += e[t] * e[t - static_cast<std::size_t>(l)];
        g /= static_cast<double>(n);
        lrv += 2.0 * (1.0 - static_cast<double>(l) / (bandwidth + 1.0)) * g;
    }
    if (lrv <= 0.0) fail("ConstantSeries", "kpss long-run variance is zero");

    double cumsum = 0.0, num = 0.0;
    for (const double v : e) {
        cumsum += v;
        num += cumsum * cumsum;
    }
    const double stat = num / (static_cast<double>(n) * static_cast<double>(n) * lrv);

    // Trend-case critical values (10/5/2.5/1%): 0.119, 0.146, 0.176, 0.216.
    const double p_value = interp_pvalue(
        stat, {{0.0, 0.95}, {0.119, 0.10}, {0.146, 0.05}, {0.176, 0.025}, {0.216, 0.01}});
    return TestResult{"kpss", stat, p_value, stat < 0.146};
}

TestResult ks_test(const TimeSeries& sa, const TimeSeries& sb) {
    std::vector<double> a = sa.values();
    std::vector<double> b = sb.values();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double en = std::sqrt(na * nb / (na + nb));
    const double lambda = (en + 0.12 + 0.11 / en) * d;
    const double p_value = numerics::ks_survival(lambda);
    return TestResult{"ks", d, p_value, p_value >= kAlpha};
}

TestResult ljung_box_test(const TimeSeries& series, std::optional<int> lags) {
    if (!lags || *lags < 1) fail("DomainError", "ljung_box needs lags >= 1");
    const std::size_t h = static_cast<std::size_t>(*lags);
    const std::size_t n = series.size();
    if (h >= n) fail("LagTooLarge", "ljung_box lags must be smaller than the series length");
    const std::vector<double> r = acf(series, h);
    double q = 0.0;
    for (std::size_t k = 1; k <= h; ++k)
        q += r[k] * r[k] / static_cast<double>(n - k);
    q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);
    const double p_value = 1.0 - numerics::chi_square_cdf(q, static_cast<double>(h));
    return TestResult{"ljung_box", q, p_value, p_value >= kAlpha};
}

}  // namespace

const char* to_string(TestKind kind) {
    switch (kind) {
        case TestKind::adf: return "adf";
        case TestKind::kpss: return "kpss";
        case TestKind::ks: return "ks";
        case TestKind::ljung_box: return "ljung_box";
    }
    return "unknown";
}

std::optional<TestKind> test_kind_from_string(const std::string& name) {
    if (name == "adf") return TestKind::adf;
    if (name == "kpss") return TestKind::kpss;
    if (name == "ks") return TestKind::ks;
    if (name == "ljung_box") return TestKind::ljung_box;
    return std::nullopt;
}

TestResult stat_test(TestKind kind, const TimeSeries& a, const TimeSeries* b,
                     std::optional<int> lags) {
    if (a.size() < 20) fail("SeriesTooShort", "statistical tests need at least 20 points");
    switch (kind) {
        case TestKind::adf: return adf_test(a, lags);
        case TestKind::kpss: return kpss_test(a, lags);
        case TestKind::ks:
            if (b == nullptr) fail("MissingSecondSeries", "ks compares two samples; pass b=");
            return ks_test(a, *b);
        case TestKind::ljung_box: return ljung_box_test(a, lags);
    }
    fail("DomainError", "unknown test kind");
}

}  // namespace tsreason::stats
