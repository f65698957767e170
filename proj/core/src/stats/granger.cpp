#include "tsreason/stats/granger.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "tsreason/core/error.hpp"
#include "tsreason/numerics/linreg.hpp"
#include "tsreason/numerics/special.hpp"

namespace tsreason::stats {
namespace {

// F-test p-value for "x Granger-causes y" at lag order L.
double granger_pvalue(const std::vector<double>& x, const std::vector<double>& y, int lag) {
    const std::size_t L = static_cast<std::size_t>(lag);
    const std::size_t n = y.size();
    const std::size_t rows = n - L;

    Matrix Xr = Matrix::zeros(rows, 1 + L);
    Matrix Xu = Matrix::zeros(rows, 1 + 2 * L);
    std::vector<double> target(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + L;
        target[r] = y[t];
        Xr.at(r, 0) = 1.0;
        Xu.at(r, 0) = 1.0;
        for (std::size_t k = 1; k <= L; ++k) {
            Xr.at(r, k) = y[t - k];
            Xu.at(r, k) = y[t - k];
            Xu.at(r, L + k) = x[t - k];
        }
    }

    const auto restricted = numerics::lstsq(Xr, target);
    const auto unrestricted = numerics::lstsq(Xu, target);

    const double df2 = static_cast<double>(rows) - (2.0 * static_cast<double>(L) + 1.0);
    if (df2 <= 0.0) fail("SeriesTooShort", "granger regression has no residual degrees of freedom");
    if (unrestricted.rss <= 0.0) {
        // Perfect fit: the extra lags explain everything that is left.
        return restricted.rss > unrestricted.rss ? 0.0 : 1.0;
    }
    const double f = ((restricted.rss - unrestricted.rss) / static_cast<double>(L)) /
                     (unrestricted.rss / df2);
    if (f <= 0.0) return 1.0;
    return 1.0 - numerics::f_cdf(f, static_cast<double>(L), df2);
}

}  // namespace

Matrix causal_matrix(const Frame& frame, int max_lag) {
    if (max_lag < 1) fail("DomainError", "causal_matrix needs max_lag >= 1");
    const std::size_t d = frame.n_cols();
    if (d < 2) fail("ShapeMismatch", "causal_matrix needs at least two columns");
    const std::size_t n = frame.n_rows();
    if (n < static_cast<std::size_t>(10 * max_lag))
        fail("SeriesTooShort", "causal_matrix with max_lag=" + std::to_string(max_lag) +
                                   " needs at least " + std::to_string(10 * max_lag) +
                                   " points, got " + std::to_string(n));

    Matrix out = Matrix::zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& x = frame.column(i).values();
        for (std::size_t j = 0; j < d; ++j) {
            if (i == j) continue;
            out.at(i, j) = granger_pvalue(x, frame.column(j).values(), max_lag);
        }
    }
    return out;
}

Matrix select_top_ratio(const Matrix& pvals, double ratio) {
    if (pvals.rows != pvals.cols || pvals.rows < 2)
        fail("ShapeMismatch", "select_top_ratio needs a square matrix of size >= 2");
    if (ratio < 0.0 || ratio > 1.0)
        fail("DomainError", "select_top_ratio ratio must lie in [0, 1]");
    const std::size_t d = pvals.rows;
    const std::size_t slots = d * (d - 1);
    const std::size_t k = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(slots)));

    std::vector<std::tuple<double, std::size_t, std::size_t>> entries;
    entries.reserve(slots);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) entries.emplace_back(pvals.at(i, j), i, j);
    std::sort(entries.begin(), entries.end());

    Matrix out = Matrix::zeros(d, d);
    for (std::size_t e = 0; e < std::min(k, entries.size()); ++e)
        out.at(std::get<1>(entries[e]), std::get<2>(entries[e])) = 1.0;
    return out;
}

}  // namespace tsreason::stats
