#include "tsreason/benchgen/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "tsreason/core/error.hpp"
#include "tsreason/core/num_text.hpp"

namespace tsreason::benchgen {
namespace {

// 2024-01-01T00:00:00Z; every generated series starts here so fixtures and
// golden traces stay byte-stable.
constexpr std::int64_t kEpoch = 1704067200;

constexpr double kTau = 2.0 * std::numbers::pi;

const std::vector<std::string>& causal_names() {
    static const std::vector<std::string> names = {"temperature", "humidity",   "pressure",
                                                   "wind_speed",  "radiation",  "precipitation"};
    return names;
}

// AR(1) noise, started at its stationary scale.
std::vector<double> ar1_noise(Rng& rng, std::size_t n, double sigma, double phi) {
    std::vector<double> out(n);
    const double stat = sigma / std::sqrt(1.0 - phi * phi);
    double prev = rng.normal(0.0, stat);
    for (std::size_t t = 0; t < n; ++t) {
        prev = phi * prev + rng.normal(0.0, sigma);
        out[t] = prev;
    }
    return out;
}

}  // namespace

Frame gen_electricity_like(const ElectricityConfig& cfg) {
    if (cfg.length < 10) fail("DomainError", "electricity series needs at least 10 rows");
    if (cfg.n_covariates > 2)
        fail("DomainError", "at most 2 covariate columns are supported, got " +
                                std::to_string(cfg.n_covariates));

    Rng rng(cfg.seed);
    const std::size_t n = cfg.length;

    const double phase_hour = rng.uniform(0.0, kTau);
    const double phase_drift = rng.uniform(0.0, kTau);

    struct Cov {
        double amp, period, phase, weight;
        std::size_t lag;
        std::vector<double> values;
    };
    static const char* kCovNames[] = {"temperature", "humidity"};
    std::vector<Cov> covs;
    for (std::size_t k = 0; k < cfg.n_covariates; ++k) {
        Cov c;
        c.amp = rng.uniform(10.0, 20.0);
        c.period = 90.0 + 60.0 * static_cast<double>(k);
        c.phase = rng.uniform(0.0, kTau);
        c.weight = rng.uniform(0.8, 1.2);
        c.lag = static_cast<std::size_t>(rng.uniform_int(1, 5));
        const double sigma = rng.uniform(1.0, 2.0);
        c.values = ar1_noise(rng, n, sigma, 0.5);
        for (std::size_t t = 0; t < n; ++t)
            c.values[t] += c.amp * std::sin(kTau * static_cast<double>(t) / c.period + c.phase);
        covs.push_back(std::move(c));
    }

    const std::vector<double> noise = ar1_noise(rng, n, cfg.noise_sigma, cfg.ar1);

    std::vector<double> load(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double td = static_cast<double>(t);
        double v = cfg.base + cfg.hourly_amp * std::sin(kTau * td / 60.0 + phase_hour) +
                   cfg.drift_amp * std::sin(kTau * td / 360.0 + phase_drift) + noise[t];
        for (const Cov& c : covs) {
            const std::size_t s = t >= c.lag ? t - c.lag : 0;
            v += c.weight * c.values[s];
        }
        load[t] = v;
    }

    const TimeAxis axis{kEpoch, 60};
    Frame frame;
    frame.add_column(TimeSeries("load", axis, std::move(load)));
    for (std::size_t k = 0; k < covs.size(); ++k)
        frame.add_column(TimeSeries(kCovNames[k], axis, std::move(covs[k].values)));
    return frame;
}

AnomalySeries gen_temperature_like(const TemperatureConfig& cfg) {
    if (cfg.length < 10) fail("DomainError", "temperature series needs at least 10 rows");
    Rng rng(cfg.seed);
    const std::size_t n = cfg.length;

    const double phase = rng.uniform(0.0, kTau);
    std::vector<double> values(n);
    for (std::size_t t = 0; t < n; ++t)
        values[t] = cfg.base + cfg.daily_amp * std::sin(kTau * static_cast<double>(t) / 24.0 + phase) +
                    rng.normal(0.0, cfg.noise_sigma);

    BinVec truth;
    truth.bits.assign(n, 0);

    if (cfg.n_anomalies > 0) {
        // Keep events away from the edges (decomposition is least reliable
        // there) and apart from each other so they read as distinct points.
        const std::size_t margin = 24;
        const std::size_t gap = 8;
        if (n < 2 * margin + cfg.n_anomalies * gap)
            fail("InfeasibleSample", "series too short for " + std::to_string(cfg.n_anomalies) +
                                         " separated anomalies");
        std::vector<std::size_t> positions;
        int tries = 0;
        while (positions.size() < cfg.n_anomalies) {
            if (++tries > 1000) fail("InfeasibleSample", "could not place separated anomalies");
            const auto p = static_cast<std::size_t>(
                rng.uniform_int(static_cast<std::int64_t>(margin),
                                static_cast<std::int64_t>(n - margin - 2)));
            bool ok = true;
            for (const std::size_t q : positions)
                if ((p > q ? p - q : q - p) < gap) { ok = false; break; }
            if (ok) positions.push_back(p);
        }
        for (const std::size_t p : positions) {
            const auto width = static_cast<std::size_t>(rng.uniform_int(1, 2));
            const double mag = rng.uniform(cfg.min_magnitude, cfg.max_magnitude) * cfg.noise_sigma;
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            for (std::size_t u = p; u < p + width && u < n; ++u) {
                values[u] += sign * mag;
                truth.bits[u] = 1;
            }
        }
    }

    return AnomalySeries{TimeSeries("t2m", TimeAxis{kEpoch, 3600}, std::move(values)),
                         std::move(truth)};
}

RelationMatrix sample_relation(std::size_t d, double ratio, Rng& rng) {
    if (d < 2) fail("DomainError", "relation needs at least 2 variables");
    if (ratio < 0.0) fail("DomainError", "edge ratio must be non-negative");
    const std::size_t slots = d * (d - 1) / 2;
    const auto k = static_cast<std::size_t>(
        std::llround(ratio * static_cast<double>(d * (d - 1))));
    if (k > slots)
        fail("DomainError", "ratio " + format_double(ratio) + " asks for " + std::to_string(k) +
                                " edges but an acyclic order over " + std::to_string(d) +
                                " variables holds at most " + std::to_string(slots));

    std::vector<std::size_t> perm(d);
    for (std::size_t i = 0; i < d; ++i) perm[i] = i;
    rng.shuffle(perm);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(slots);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
    rng.shuffle(pairs);

    RelationMatrix relation = Matrix::zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) relation.at(i, i) = 1.0;
    for (std::size_t e = 0; e < k; ++e)
        relation.at(perm[pairs[e].first], perm[pairs[e].second]) = 1.0;
    return relation;
}

std::vector<std::size_t> topological_order(const RelationMatrix& relation) {
    const std::size_t d = relation.rows;
    if (d == 0 || relation.cols != d) fail("DomainError", "relation matrix must be square");

    std::vector<std::size_t> indeg(d, 0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j && relation.at(i, j) != 0.0) ++indeg[j];

    std::set<std::size_t> ready;
    for (std::size_t j = 0; j < d; ++j)
        if (indeg[j] == 0) ready.insert(j);

    std::vector<std::size_t> order;
    order.reserve(d);
    while (!ready.empty()) {
        const std::size_t i = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(i);
        for (std::size_t j = 0; j < d; ++j)
            if (i != j && relation.at(i, j) != 0.0 && --indeg[j] == 0) ready.insert(j);
    }
    if (order.size() != d) fail("CyclicRelation", "influence matrix contains a directed cycle");
    return order;
}

std::pair<Frame, RelationMatrix> gen_causal_dataset(const RelationMatrix& relation,
                                                    const GenConfig& cfg) {
    const std::size_t d = relation.rows;
    if (d < 2 || relation.cols != d) fail("DomainError", "relation matrix must be square, d >= 2");
    if (d > causal_names().size())
        fail("DomainError", "at most " + std::to_string(causal_names().size()) +
                                " variables are supported, got " + std::to_string(d));
    for (const double v : relation.data)
        if (v != 0.0 && v != 1.0) fail("DomainError", "relation entries must be 0 or 1");
    if (cfg.lag_lo < 1 || cfg.lag_hi < cfg.lag_lo)
        fail("DomainError", "lag range must satisfy 1 <= lo <= hi");
    if (cfg.length < 50) fail("DomainError", "causal series needs at least 50 rows");

    const std::vector<std::size_t> order = topological_order(relation);

    Rng rng(cfg.seed);

    // Distinct per-variable season periods, assigned in a shuffled order.
    std::vector<double> periods = {18, 22, 26, 30, 34, 38};
    rng.shuffle(periods);

    std::vector<double> trend(d), amp(d), phase(d), sigma(d);
    for (std::size_t j = 0; j < d; ++j) {
        trend[j] = rng.uniform(0.0, cfg.trend_max) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        amp[j] = rng.uniform(cfg.amp_lo, cfg.amp_hi);
        phase[j] = rng.uniform(0.0, kTau);
        sigma[j] = rng.uniform(cfg.noise_lo, cfg.noise_hi);
    }

    Matrix coef = Matrix::zeros(d, d);
    std::vector<std::vector<std::size_t>> lag(d, std::vector<std::size_t>(d, 0));
    std::size_t max_lag = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j && relation.at(i, j) != 0.0) {
                coef.at(i, j) = rng.uniform(cfg.coef_lo, cfg.coef_hi);
                lag[i][j] = static_cast<std::size_t>(
                    rng.uniform_int(static_cast<std::int64_t>(cfg.lag_lo),
                                    static_cast<std::int64_t>(cfg.lag_hi)));
                max_lag = std::max(max_lag, lag[i][j]);
            }

    const std::size_t total = cfg.length + max_lag;
    std::vector<std::vector<double>> noise(d);
    for (std::size_t j = 0; j < d; ++j) {
        noise[j].resize(total);
        for (std::size_t t = 0; t < total; ++t) noise[j][t] = rng.normal(0.0, sigma[j]);
    }

    std::vector<std::vector<double>> x(d, std::vector<double>(total, 0.0));
    for (const std::size_t j : order) {
        for (std::size_t t = 0; t < total; ++t) {
            double v = trend[j] * static_cast<double>(t) +
                       amp[j] * std::sin(kTau * static_cast<double>(t) / periods[j] + phase[j]) +
                       noise[j][t];
            for (std::size_t i = 0; i < d; ++i)
                if (i != j && relation.at(i, j) != 0.0 && t >= lag[i][j])
                    v += coef.at(i, j) * x[i][t - lag[i][j]];
            x[j][t] = v;
        }
    }

    const TimeAxis axis{kEpoch, 3600};
    Frame frame;
    for (std::size_t j = 0; j < d; ++j)
        frame.add_column(TimeSeries(
            causal_names()[j], axis,
            std::vector<double>(x[j].begin() + static_cast<std::ptrdiff_t>(max_lag), x[j].end())));
    return {std::move(frame), relation};
}

}  // namespace tsreason::benchgen
