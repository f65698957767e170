#include "tsreason/benchgen/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "tsreason/benchgen/generate.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/core/metrics.hpp"
#include "tsreason/core/num_text.hpp"
#include "tsreason/core/rng.hpp"

namespace tsreason::benchgen {
namespace {

const std::map<std::string, std::string>& templates() {
    static const std::map<std::string, std::string> t = {
        {"predictive_with_covariates",
         "I have historical {influence_variables} data and the corresponding {target_variable} "
         "data for the past {historical_length} minutes. {constraint_clause} Think about how "
         "{influence_variables} influence {target_variable}. Please give me a forecast for the "
         "next {future_length} minutes for {target_variable}. Your goal is to make the most "
         "accurate forecast as possible, refine prediction result based on the constraint "
         "previously described. {output_requirement}.{variable_spec}"},
        {"predictive_without_covariates",
         "I have historical {target_variable} data for the past {historical_length} minutes. "
         "{constraint_clause} Please give me a forecast for the next {future_length} minutes "
         "for {target_variable}. Your goal is to make the most accurate forecast as possible, "
         "refine prediction result based on the constraint previously described. "
         "{output_requirement}.{variable_spec}"},
        {"constraint_max_load",
         "I need to ensure that the maximum allowable system load does not exceed "
         "{constraint_value} MW."},
        {"constraint_min_load",
         "I require that the system load is maintained above a minimum of {constraint_value} "
         "MW."},
        {"constraint_ramp_rate",
         "I must monitor the load ramp rate to ensure it does not exceed {constraint_value} MW "
         "for each time step."},
        {"constraint_variability",
         "I need to manage the load variability so that it does not exceed {constraint_value} "
         "MW over the given period."},
        {"anomaly",
         "I have 2m temperature data that spans {sequence_length} hours. Please tell me whether "
         "there are anomalies (extreme weather events) and where are anomalies if present in "
         "this sequence. {knowledge_clause} {output_requirement}.{variable_spec}"},
        {"knowledge_reference",
         "I also have some anomaly-free 2m temperature data from the same region."},
        {"knowledge_rate", "I know that {anomaly_ratio} percent of the times have anomalies."},
        {"causal",
         "I have historical {variable_names} data and want to get the causal relationship "
         "between each pair of the variables. I know that {pair_ratio}% of the variable pairs "
         "have relationship. Consider the potential influence of each variable on the others in "
         "this variable list: {variable_names}. {output_requirement}.{variable_spec}"},
    };
    return t;
}

double sample_stdev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = 0.0;
    for (const double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

// Reference scale for each constraint kind, measured on the true future.
// The bound is a random multiple of it; the ranges are chosen so that about
// 75% of draws make the constraint binding on the unmodified truth.
double constraint_scale(constraints::Kind kind, const TimeSeries& truth, double anchor) {
    const std::vector<double>& v = truth.values();
    switch (kind) {
        case constraints::Kind::max_load: return *std::max_element(v.begin(), v.end());
        case constraints::Kind::min_load: return *std::min_element(v.begin(), v.end());
        case constraints::Kind::ramp_rate: {
            double md = std::fabs(v.front() - anchor);
            for (std::size_t i = 1; i < v.size(); ++i)
                md = std::max(md, std::fabs(v[i] - v[i - 1]));
            return md;
        }
        case constraints::Kind::variability: return sample_stdev(v);
    }
    fail("DomainError", "unknown constraint kind");
}

std::pair<double, double> band_for(constraints::Kind kind) {
    switch (kind) {
        case constraints::Kind::max_load: return {0.94, 1.02};
        case constraints::Kind::min_load: return {0.98, 1.06};
        case constraints::Kind::ramp_rate:
        case constraints::Kind::variability: return {0.70, 1.10};
    }
    fail("DomainError", "unknown constraint kind");
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ",";
        out += names[i];
    }
    return out;
}

}  // namespace

std::string render_question(const std::string& template_id,
                            const std::map<std::string, std::string>& params) {
    const auto it = templates().find(template_id);
    if (it == templates().end())
        fail("UnknownTemplate", "no question template named '" + template_id + "'");
    const std::string& tpl = it->second;

    std::string out;
    out.reserve(tpl.size());
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        const std::size_t open = tpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tpl, pos, std::string::npos);
            break;
        }
        out.append(tpl, pos, open - pos);
        const std::size_t close = tpl.find('}', open);
        if (close == std::string::npos)
            fail("BadTemplate", "unterminated placeholder in template '" + template_id + "'");
        const std::string name = tpl.substr(open + 1, close - open - 1);
        const auto p = params.find(name);
        if (p == params.end())
            fail("MissingPlaceholder",
                 "template '" + template_id + "' references unbound placeholder {" + name + "}");
        out += p->second;
        pos = close + 1;
    }
    return out;
}

TaskInstance make_predictive_task(const PredictiveTaskConfig& cfg) {
    Rng rng(cfg.seed);

    TimeSeries full;
    std::size_t history_len = 0;
    std::size_t horizon = 0;
    Frame source;

    if (cfg.prepared != nullptr) {
        if (cfg.prepared->size() <= cfg.prepared_horizon + 10)
            fail("DomainError", "prepared series too short for the requested horizon");
        full = *cfg.prepared;
        horizon = cfg.prepared_horizon;
        history_len = full.size() - horizon;
        if (cfg.with_covariates)
            fail("DomainError", "prepared series tasks do not carry covariates");
    } else {
        history_len = static_cast<std::size_t>(rng.uniform_int(180, 360));
        horizon = static_cast<std::size_t>(rng.uniform_int(30, 60));
        ElectricityConfig ec;
        ec.seed = rng.next_u64();
        ec.length = history_len + horizon;
        ec.n_covariates = cfg.with_covariates ? 2 : 0;
        source = gen_electricity_like(ec);
        full = source.column("load");
    }

    const TimeSeries truth = full.slice(history_len, horizon);
    const double anchor = full[history_len - 1];

    constraints::ConstraintSpec spec;
    spec.kind = cfg.constraint_kind;
    if (spec.kind == constraints::Kind::ramp_rate) spec.anchor = anchor;

    const double scale = constraint_scale(spec.kind, truth, anchor);
    const auto [ulo, uhi] = band_for(spec.kind);
    bool ok = false;
    for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
        spec.value = round4(rng.uniform(ulo, uhi) * scale);
        if (spec.value <= 0.0) continue;
        try {
            const TimeSeries projected = constraints::project(truth, spec);
            ok = mape_guarded(truth.values(), projected.values()) < 1.0;
        } catch (const OpError&) {
            // bound unusable for this sample; redraw
        }
    }
    if (!ok)
        fail("InfeasibleSample",
             "could not sample a workable " + std::string(constraints::to_string(spec.kind)) +
                 " bound for task " + cfg.id);

    TaskInstance task;
    task.id = cfg.id;
    task.family = cfg.family;
    task.kind = TaskKind::predictive;
    task.seed = cfg.seed;
    task.horizon = horizon;
    task.constraint = spec;
    task.binding = !constraints::check(truth, spec).empty();
    task.output_contract = OutputContract{Value::Kind::series, {horizon}};
    task.ground_truth = Value(truth);

    const TimeSeries history = full.slice(0, history_len);
    std::string variable_spec = " The historical data is stored in variable VAL.";
    if (cfg.with_covariates) {
        Frame env_frame;
        for (const TimeSeries& col : source.columns()) env_frame.add_column(col.slice(0, history_len));
        task.env.emplace("VAL", Value(env_frame));
        task.env.emplace("VAL_TARGET", Value(history));
        variable_spec =
            " The historical data is stored in variable VAL and the target load series is "
            "stored in variable VAL_TARGET.";
    } else {
        task.env.emplace("VAL", Value(history));
    }

    const std::string clause = render_question(
        std::string("constraint_") + constraints::to_string(spec.kind),
        {{"constraint_value", format_fixed(spec.value, 4)}});

    std::map<std::string, std::string> params = {
        {"target_variable", "load"},
        {"historical_length", std::to_string(history_len)},
        {"future_length", std::to_string(horizon)},
        {"constraint_clause", clause},
        {"output_requirement", "Please return a 1D numpy array"},
        {"variable_spec", variable_spec},
    };
    std::string template_id = "predictive_without_covariates";
    if (cfg.with_covariates) {
        template_id = "predictive_with_covariates";
        std::vector<std::string> covs;
        for (std::size_t i = 1; i < source.n_cols(); ++i) covs.push_back(source.column(i).name());
        params.emplace("influence_variables", join_names(covs));
    }
    task.question = render_question(template_id, params);
    return task;
}

const char* to_string(DiagnosticVariant variant) {
    switch (variant) {
        case DiagnosticVariant::reference: return "reference";
        case DiagnosticVariant::anomaly_rate: return "anomaly_rate";
        case DiagnosticVariant::causal: return "causal";
    }
    return "unknown";
}

TaskInstance make_diagnostic_task(const DiagnosticTaskConfig& cfg) {
    Rng rng(cfg.seed);

    TaskInstance task;
    task.id = cfg.id;
    task.family = cfg.family;
    task.seed = cfg.seed;

    if (cfg.variant == DiagnosticVariant::causal) {
        task.kind = TaskKind::diagnostic_causal;
        const auto d = static_cast<std::size_t>(rng.uniform_int(3, 6));
        const double requested = rng.uniform(0.20, 0.45);
        const RelationMatrix relation = sample_relation(d, requested, rng);

        GenConfig gc;
        gc.seed = rng.next_u64();
        auto [frame, rel] = gen_causal_dataset(relation, gc);

        std::size_t edges = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (i != j && rel.at(i, j) != 0.0) ++edges;
        const double true_ratio = static_cast<double>(edges) / static_cast<double>(d * (d - 1));

        task.knowledge.relation_ratio = true_ratio;
        task.output_contract = OutputContract{Value::Kind::matrix, {d, d}};
        task.ground_truth = Value(rel);
        const std::string names = join_names(frame.names());
        task.env.emplace("VAL", Value(std::move(frame)));
        task.question = render_question(
            "causal", {{"variable_names", names},
                       {"pair_ratio", format_fixed(true_ratio * 100.0, 4)},
                       {"output_requirement", "Please return a 2D numpy array of 0s and 1s"},
                       {"variable_spec", " The data is stored in variable VAL."}});
        return task;
    }

    task.kind = TaskKind::diagnostic_anomaly;
    const auto len = static_cast<std::size_t>(rng.uniform_int(200, 300));
    const auto n_anoms = static_cast<std::size_t>(rng.uniform_int(5, 10));

    TemperatureConfig tc;
    tc.seed = rng.next_u64();
    tc.length = len;
    tc.n_anomalies = n_anoms;
    AnomalySeries test = gen_temperature_like(tc);

    task.output_contract = OutputContract{Value::Kind::bin_vec, {len}};
    task.ground_truth = Value(test.truth);
    task.env.emplace("VAL", Value(test.values));

    std::string knowledge_clause;
    std::string variable_spec;
    if (cfg.variant == DiagnosticVariant::reference) {
        TemperatureConfig nc;
        nc.seed = rng.next_u64();
        nc.length = 200;
        nc.n_anomalies = 0;
        AnomalySeries norm = gen_temperature_like(nc);
        task.env.emplace("NORM_VAL", Value(norm.values.renamed("t2m_normal")));
        knowledge_clause = render_question("knowledge_reference", {});
        variable_spec =
            " The data is stored in variable VAL and some anomaly-free normal samples are "
            "stored in variable NORM_VAL.";
    } else {
        const double rate =
            static_cast<double>(test.truth.count_ones()) / static_cast<double>(len);
        task.knowledge.anomaly_rate = rate;
        task.env.emplace("ANOMALY_RATE", Value(rate));
        knowledge_clause =
            render_question("knowledge_rate", {{"anomaly_ratio", format_fixed(rate * 100.0, 4)}});
        variable_spec =
            " The data is stored in variable VAL and the anomaly rate is stored in variable "
            "ANOMALY_RATE.";
    }

    task.question = render_question(
        "anomaly", {{"sequence_length", std::to_string(len)},
                    {"knowledge_clause", knowledge_clause},
                    {"output_requirement",
                     "Please return a 1D numpy array with 1 indicating an anomaly and 0 "
                     "indicating no anomaly"},
                    {"variable_spec", variable_spec}});
    return task;
}

}  // namespace tsreason::benchgen
