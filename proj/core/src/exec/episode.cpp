#include "tsreason/exec/episode.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "tsreason/core/error.hpp"
#include "tsreason/core/num_text.hpp"
#include "tsreason/plan/parse.hpp"
#include "tsreason/plan/serialize.hpp"
#include "tsreason/plan/validate.hpp"

namespace tsreason::exec {

namespace {

std::string error_feedback(long step, const std::string& code, const std::string& message) {
    return "ERROR(step=" + std::to_string(step) + ", code=" + code + ", message=" + message + ")";
}

std::string quality_feedback(const std::string& model, double mape) {
    return "QUALITY(model=" + model + ", mape=" + format_double(mape) + ")";
}

std::string buffer_summary(const std::vector<BufferEntry>& buffer) {
    std::string out = "BUFFER_SUMMARY(";
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        if (i > 0) out += ", ";
        out += buffer[i].model + "=" + format_double(buffer[i].quality.value);
    }
    out += ")";
    return out;
}

bool is_forecast_op(const std::string& name) {
    const auto* spec = plan::Registry::instance().find(name);
    return spec != nullptr && (spec->name == "forecast_uni" || spec->name == "forecast_multi");
}

bool is_project_op(const std::string& name) {
    const auto* spec = plan::Registry::instance().find(name);
    return spec != nullptr && spec->name == "project";
}

}  // namespace

EpisodeTrace run_episode(const TaskInstance& task, decomp::Decomposer& decomposer,
                         const EpisodeOptions& options) {
    EpisodeTrace trace;
    trace.task_id = task.id;

    std::vector<decomp::FeedbackTurn> turns;
    bool buffer_summary_sent = false;
    bool accepted = false;
    ExecOutcome last_outcome =
        ExecOutcome::failed({0, "", "", "NoResult", "no proposal was executed"});

    plan::ExecContext ctx{&task, options.retrieval};
    std::map<std::string, Value::Kind> env_kinds;
    for (const auto& [name, value] : task.env) env_kinds.emplace(name, value.kind());

    for (int iter = 0; iter < options.budget && !accepted; ++iter) {
        IterationRecord rec;
        const std::string proposal = decomposer.propose(task, turns);
        rec.plan_text = proposal;

        const auto send = [&](std::string feedback) {
            rec.feedback = feedback;
            turns.push_back({proposal, std::move(feedback)});
        };

        plan::Plan program;
        try {
            program = plan::parse_plan(proposal);
        } catch (const OpError& e) {
            last_outcome = ExecOutcome::failed({0, "", "", e.code(), e.what()});
            rec.error = last_outcome.error;
            send(error_feedback(-1, e.code(), e.what()));
            trace.iterations.push_back(std::move(rec));
            continue;
        }

        if (options.strip_project) {
            auto& steps = program.steps;
            steps.erase(std::remove_if(steps.begin(), steps.end(),
                                       [](const plan::Step& s) { return is_project_op(s.op); }),
                        steps.end());
        }
        rec.canonical_plan = plan::serialize_plan(program);

        const auto diags = plan::validate_plan(program, env_kinds, plan::Registry::instance(),
                                               &task.output_contract);
        for (const auto& d : diags) rec.diagnostics.push_back(plan::render_diagnostics({d}));
        if (!plan::diagnostics_clean(diags)) {
            std::string feedback;
            std::optional<ExecError> first;
            for (const auto& d : diags) {
                if (d.severity != plan::Severity::error) continue;
                if (!feedback.empty()) feedback.push_back('\n');
                feedback += error_feedback(static_cast<long>(d.step_index), to_string(d.code),
                                           d.message);
                if (!first) {
                    ExecError err{d.step_index, "", "", to_string(d.code), d.message};
                    if (d.step_index < program.steps.size()) {
                        err.target = program.steps[d.step_index].target;
                        err.op = program.steps[d.step_index].op;
                    }
                    first = std::move(err);
                }
            }
            last_outcome = ExecOutcome::failed(*first);
            rec.error = last_outcome.error;
            send(std::move(feedback));
            trace.iterations.push_back(std::move(rec));
            continue;
        }

        ExecOutcome outcome = execute_plan(program, task.env, ctx);
        last_outcome = outcome;
        if (!outcome.success) {
            const ExecError& err = *outcome.error;
            rec.error = err;
            send(error_feedback(static_cast<long>(err.step_index), err.code, err.message));
            trace.iterations.push_back(std::move(rec));
            continue;
        }
        rec.success = true;

        // Backtest the model the plan's last forecast step chose.
        std::optional<ForecastQuality> fq;
        if (task.kind == TaskKind::predictive) {
            for (auto it = program.steps.rbegin(); it != program.steps.rend(); ++it) {
                if (!is_forecast_op(it->op)) continue;
                fq = forecast_step_quality(*it, outcome.bindings, task);
                break;
            }
        }
        rec.quality = fq;

        if (!fq) {
            // Nothing to iterate on: diagnostic task or no measurable forecast.
            rec.accepted = true;
            accepted = true;
            trace.final = std::move(outcome);
            trace.accepted_iteration = iter;
            trace.iterations.push_back(std::move(rec));
            break;
        }

        const auto dup = std::find_if(
            trace.buffer.begin(), trace.buffer.end(),
            [&](const BufferEntry& e) { return e.canonical_plan == rec.canonical_plan; });
        if (dup != trace.buffer.end()) {
            if (buffer_summary_sent) {
                // The decomposer saw the summary and still picked this plan.
                rec.accepted = true;
                accepted = true;
                trace.final = std::move(outcome);
                trace.final_quality = fq;
                trace.accepted_iteration = iter;
                trace.iterations.push_back(std::move(rec));
                break;
            }
            buffer_summary_sent = true;
            send(buffer_summary(trace.buffer));
            trace.iterations.push_back(std::move(rec));
            continue;
        }

        if (fq->quality.value <= options.tau) {
            rec.accepted = true;
            accepted = true;
            trace.final = std::move(outcome);
            trace.final_quality = fq;
            trace.accepted_iteration = iter;
            trace.iterations.push_back(std::move(rec));
            break;
        }

        trace.buffer.push_back({rec.canonical_plan, outcome, fq->quality, fq->model});
        send(quality_feedback(fq->model, fq->quality.value));
        trace.iterations.push_back(std::move(rec));
    }

    if (!accepted) {
        if (!trace.buffer.empty()) {
            const auto best = std::min_element(
                trace.buffer.begin(), trace.buffer.end(),
                [](const BufferEntry& a, const BufferEntry& b) {
                    return a.quality.value < b.quality.value;
                });
            trace.final = best->outcome;
            trace.final_quality = ForecastQuality{best->quality, best->model};
            trace.from_buffer = true;
        } else {
            trace.final = std::move(last_outcome);
        }
    }
    return trace;
}

namespace {

nlohmann::json error_json(const ExecError& e) {
    return {{"step", e.step_index},
            {"target", e.target},
            {"op", e.op},
            {"code", e.code},
            {"message", e.message}};
}

nlohmann::json outcome_json(const ExecOutcome& o) {
    nlohmann::json j;
    j["success"] = o.success;
    if (o.success) {
        j["result_kind"] = o.result.kind_name();
        j["result_shape"] = o.result.shape_string();
    } else if (o.error) {
        j["error"] = error_json(*o.error);
    }
    return j;
}

}  // namespace

std::string trace_json(const EpisodeTrace& trace) {
    nlohmann::json j;
    j["task_id"] = trace.task_id;
    j["accepted_iteration"] = trace.accepted_iteration;
    j["from_buffer"] = trace.from_buffer;
    j["final"] = outcome_json(trace.final);
    if (trace.final_quality) {
        j["final"]["model"] = trace.final_quality->model;
        j["final"]["mape"] = trace.final_quality->quality.value;
    }

    auto& iters = j["iterations"] = nlohmann::json::array();
    for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
        const IterationRecord& rec = trace.iterations[i];
        nlohmann::json r;
        r["index"] = i;
        r["plan"] = rec.plan_text;
        r["canonical"] = rec.canonical_plan;
        r["diagnostics"] = rec.diagnostics;
        r["success"] = rec.success;
        if (rec.error) r["error"] = error_json(*rec.error);
        if (rec.quality) {
            r["quality"] = {{"model", rec.quality->model}, {"mape", rec.quality->quality.value}};
        }
        r["feedback"] = rec.feedback;
        r["accepted"] = rec.accepted;
        iters.push_back(std::move(r));
    }

    auto& buf = j["buffer"] = nlohmann::json::array();
    for (const BufferEntry& e : trace.buffer) {
        buf.push_back({{"plan", e.canonical_plan},
                       {"model", e.model},
                       {"mape", e.quality.value}});
    }
    return j.dump(2);
}

}  // namespace tsreason::exec
