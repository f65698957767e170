#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <thread>

#include "tsreason/benchgen/dataset.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/core/num_text.hpp"
#include "tsreason/core/task_io.hpp"
#include "tsreason/decomp/llm.hpp"
#include "tsreason/decomp/prompt.hpp"
#include "tsreason/decomp/scripted.hpp"
#include "tsreason/eval/evaluator.hpp"
#include "tsreason/exec/episode.hpp"
#include "tsreason/plan/parse.hpp"
#include "tsreason/plan/serialize.hpp"
#include "tsreason/plan/validate.hpp"
#include "tsreason/retrieval/client.hpp"
#include "tsreason/util/fs.hpp"

namespace tsreason::cli {
namespace {

using nlohmann::json;

struct GenArgs {
    std::string out;
    std::string config;
    std::uint64_t seed = 7;
    int predictive_per_kind = 20;
    int diagnostic_per_variant = 25;
    bool grid = false;
    bool skip_no_cov = false;
    bool skip_with_cov = false;
    bool skip_diagnostics = false;
};

struct RunArgs {
    std::string dataset;
    std::string out;
    std::string config;
    std::string decomposer = "scripted";
    int budget = 6;
    double tau = 0.1;
    std::string ablation;
    int parallel = 1;
    bool inject_unimplemented = false;
    bool verbose = false;
    std::string llm_mode = "replay";
    std::string llm_fixtures = "fixtures/llm";
    std::string llm_model = "gpt-4o";
    std::string llm_endpoint = "https://api.openai.com/v1/chat/completions";
    std::string retrieval_fixtures;
    std::string retrieval_cache;
    bool retrieval_live = false;
};

struct EvalArgs {
    std::string dataset;
    std::string run;
    std::string json_out;  // defaults to <run>/report.json
    bool quiet = false;
};

struct PlanArgs {
    std::string file;
    std::string task_dir;
};

// --config files are flat JSON objects whose keys mirror the long option
// names; command line flags win over config values.
const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "seed",          "predictive_per_kind", "diagnostic_per_variant",
        "grid",          "skip_no_cov",         "skip_with_cov",
        "skip_diagnostics", "decomposer",       "budget",
        "tau",           "ablation",            "parallel",
        "inject_unimplemented", "llm_mode",     "llm_fixtures",
        "llm_model",     "llm_endpoint",        "retrieval_fixtures",
        "retrieval_cache", "retrieval_live",    "verbose",
    };
    return keys;
}

json load_config(const std::string& path) {
    json j = json::parse(util::read_text_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        fail("BadConfig", "config file must hold a JSON object: " + path);
    const auto& keys = known_config_keys();
    for (const auto& [key, value] : j.items())
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            fail("BadConfig", "unknown config key '" + key + "' in " + path);
    return j;
}

template <class T>
void config_get(const json& j, const char* key, T& into) {
    if (j.contains(key)) {
        try {
            into = j.at(key).get<T>();
        } catch (const json::exception&) {
            fail("BadConfig", std::string("config key '") + key + "' has the wrong type");
        }
    }
}

// The config file is applied before CLI11 parses, so explicit flags override
// it; this scans argv by hand because defaults must be in place first.
std::string find_config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return "";
}

void apply_config(const json& j, GenArgs& a) {
    config_get(j, "seed", a.seed);
    config_get(j, "predictive_per_kind", a.predictive_per_kind);
    config_get(j, "diagnostic_per_variant", a.diagnostic_per_variant);
    config_get(j, "grid", a.grid);
    config_get(j, "skip_no_cov", a.skip_no_cov);
    config_get(j, "skip_with_cov", a.skip_with_cov);
    config_get(j, "skip_diagnostics", a.skip_diagnostics);
}

void apply_config(const json& j, RunArgs& a) {
    config_get(j, "decomposer", a.decomposer);
    config_get(j, "budget", a.budget);
    config_get(j, "tau", a.tau);
    config_get(j, "ablation", a.ablation);
    config_get(j, "parallel", a.parallel);
    config_get(j, "inject_unimplemented", a.inject_unimplemented);
    config_get(j, "verbose", a.verbose);
    config_get(j, "llm_mode", a.llm_mode);
    config_get(j, "llm_fixtures", a.llm_fixtures);
    config_get(j, "llm_model", a.llm_model);
    config_get(j, "llm_endpoint", a.llm_endpoint);
    config_get(j, "retrieval_fixtures", a.retrieval_fixtures);
    config_get(j, "retrieval_cache", a.retrieval_cache);
    config_get(j, "retrieval_live", a.retrieval_live);
}

int cmd_gen(const GenArgs& a) {
    benchgen::DatasetSpec spec;
    spec.master_seed = a.seed;
    spec.predictive_per_kind = a.predictive_per_kind;
    spec.diagnostic_per_variant = a.diagnostic_per_variant;
    spec.include_no_cov = !a.skip_no_cov;
    spec.include_with_cov = !a.skip_with_cov;
    spec.include_grid = a.grid;
    spec.include_diagnostics = !a.skip_diagnostics;

    const benchgen::DatasetSummary summary = benchgen::write_dataset(a.out, spec);
    std::printf("wrote %zu tasks in %zu families to %s\n", summary.task_count,
                summary.families.size(), a.out.c_str());
    if (summary.predictive_count > 0)
        std::printf("binding constraints: %zu/%zu predictive instances\n", summary.binding_count,
                    summary.predictive_count);
    return 0;
}

std::unique_ptr<decomp::Decomposer> make_decomposer(const RunArgs& a) {
    if (a.decomposer == "scripted") {
        decomp::ScriptedOptions opts;
        opts.use_unimplemented_first = a.inject_unimplemented;
        return std::make_unique<decomp::ScriptedDecomposer>(opts);
    }
    decomp::LlmConfig cfg;
    cfg.mode = a.llm_mode == "live"     ? decomp::LlmMode::live
               : a.llm_mode == "record" ? decomp::LlmMode::record
                                        : decomp::LlmMode::replay;
    cfg.fixture_dir = a.llm_fixtures;
    cfg.model = a.llm_model;
    cfg.endpoint = a.llm_endpoint;
    return std::make_unique<decomp::LlmDecomposer>(cfg);
}

int cmd_run(const RunArgs& a) {
    const std::vector<TaskInstance> tasks = benchgen::load_dataset(a.dataset);
    if (tasks.empty()) fail("BadDataset", "dataset lists no tasks: " + a.dataset);

    std::unique_ptr<retrieval::Client> retrieval_client;
    if (!a.retrieval_fixtures.empty() || a.retrieval_live) {
        retrieval::ClientConfig rc;
        rc.mode = a.retrieval_live ? retrieval::ClientConfig::Mode::live
                                   : retrieval::ClientConfig::Mode::offline;
        rc.fixture_dir = a.retrieval_fixtures;
        rc.cache_dir = a.retrieval_cache;
        retrieval_client = std::make_unique<retrieval::Client>(std::move(rc));
    }

    const std::filesystem::path out(a.out);
    std::filesystem::create_directories(out);

    struct Row {
        bool success = false;
        bool hard_error = false;
        std::string line;
    };
    std::vector<Row> rows(tasks.size());
    std::atomic<std::size_t> cursor{0};

    const auto worker = [&]() {
        for (std::size_t i; (i = cursor.fetch_add(1)) < tasks.size();) {
            const TaskInstance& task = tasks[i];
            Row& row = rows[i];
            try {
                const auto decomposer = make_decomposer(a);
                exec::EpisodeOptions opt;
                opt.budget = a.budget;
                opt.tau = a.tau;
                opt.strip_project = a.ablation == "no_project";
                opt.retrieval = retrieval_client.get();
                const exec::EpisodeTrace trace = exec::run_episode(task, *decomposer, opt);
                util::write_text_atomic(out / task.id / "trace.json", exec::trace_json(trace));
                row.success = trace.final.success;
                if (trace.final.success) {
                    eval::write_answer(out / task.id, trace.final.result);
                    row.line = task.id + ": ok (" + std::to_string(trace.iterations.size()) +
                               " iterations)";
                } else {
                    std::string detail = trace.final.error
                                             ? trace.final.error->code
                                             : std::string("no result");
                    row.line = task.id + ": failed (" + detail + ")";
                }
            } catch (const OpError& e) {
                row.hard_error = true;
                row.line = task.id + ": error [" + e.code() + "] " + e.what();
            }
        }
    };

    const auto t0 = std::chrono::steady_clock::now();
    const int n_threads = std::max(1, std::min<int>(a.parallel, static_cast<int>(tasks.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::size_t succeeded = 0, hard_errors = 0;
    json ids = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ids.push_back(tasks[i].id);
        if (rows[i].success) ++succeeded;
        if (rows[i].hard_error) {
            ++hard_errors;
            std::fprintf(stderr, "%s\n", rows[i].line.c_str());
        } else if (a.verbose) {
            std::printf("%s\n", rows[i].line.c_str());
        }
    }

    const json run_meta = {{"schema", 1},
                           {"decomposer", a.decomposer},
                           {"budget", a.budget},
                           {"tau", a.tau},
                           {"ablation", a.ablation},
                           {"tasks", ids},
                           {"succeeded", succeeded},
                           {"hard_errors", hard_errors}};
    util::write_text_atomic(out / "run.json", run_meta.dump(2) + "\n");

    std::printf("ran %zu tasks: %zu succeeded, %zu failed, %zu errors (%.1fs, %d thread%s)\n",
                tasks.size(), succeeded, tasks.size() - succeeded - hard_errors, hard_errors,
                seconds, n_threads, n_threads == 1 ? "" : "s");
    return hard_errors == 0 ? 0 : 3;
}

int cmd_eval(const EvalArgs& a) {
    const std::vector<TaskInstance> tasks = benchgen::load_dataset(a.dataset);
    if (tasks.empty()) fail("BadDataset", "dataset lists no tasks: " + a.dataset);

    const std::filesystem::path run_dir(a.run);
    std::vector<eval::EvalResult> results;
    results.reserve(tasks.size());
    for (const TaskInstance& task : tasks) {
        std::optional<Value> answer;
        try {
            answer = eval::read_answer(run_dir / task.id, task);
        } catch (const OpError& e) {
            std::fprintf(stderr, "%s: [%s] %s\n", task.id.c_str(), e.code().c_str(), e.what());
        }
        results.push_back(eval::evaluate(answer ? &*answer : nullptr, task));
    }

    const eval::Report report = eval::aggregate(results);
    const std::string json_path =
        a.json_out.empty() ? (run_dir / "report.json").string() : a.json_out;
    util::write_text_atomic(json_path, eval::report_json(report));
    if (!a.quiet) std::fputs(eval::report_table(report).c_str(), stdout);
    std::printf("report written to %s\n", json_path.c_str());
    return 0;
}

int cmd_plan(const PlanArgs& a) {
    const std::string text = util::read_text_file(a.file);

    plan::Plan parsed;
    try {
        parsed = plan::parse_plan(text);
    } catch (const OpError& e) {
        std::fprintf(stderr, "%s: [%s] %s\n", a.file.c_str(), e.code().c_str(), e.what());
        return 1;
    }

    std::map<std::string, Value::Kind> env_kinds;
    const OutputContract* contract = nullptr;
    TaskInstance task;
    if (!a.task_dir.empty()) {
        task = read_task(a.task_dir);
        for (const auto& [name, value] : task.env) env_kinds.emplace(name, value.kind());
        contract = &task.output_contract;
    }

    const auto diags = plan::validate_plan(parsed, env_kinds, plan::Registry::instance(), contract);
    if (!diags.empty()) std::fputs((plan::render_diagnostics(diags) + "\n").c_str(), stdout);
    if (!plan::diagnostics_clean(diags)) return 1;
    std::printf("ok: %zu steps, result variable %s\n", parsed.steps.size(),
                parsed.result_name().c_str());
    std::fputs((plan::serialize_plan(parsed) + "\n").c_str(), stdout);
    return 0;
}

int cmd_ops() {
    std::fputs(decomp::render_operator_defs(plan::Registry::instance()).c_str(), stdout);
    return 0;
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Operator-program agent for time series questions"};
    app.require_subcommand(1);

    GenArgs gen_args;
    RunArgs run_args;
    EvalArgs eval_args;
    PlanArgs plan_args;

    const std::string config_path = find_config_path(args);
    if (!config_path.empty()) {
        const json cfg = load_config(config_path);
        apply_config(cfg, gen_args);
        apply_config(cfg, run_args);
    }

    auto* gen = app.add_subcommand("gen", "Generate a benchmark dataset");
    gen->add_option("--out", gen_args.out, "Dataset output directory")->required();
    gen->add_option("--config", gen_args.config, "JSON config file (flags override it)");
    gen->add_option("--seed", gen_args.seed, "Master seed");
    gen->add_option("--predictive-per-kind", gen_args.predictive_per_kind,
                    "Instances per constraint kind per variant");
    gen->add_option("--diagnostic-per-variant", gen_args.diagnostic_per_variant,
                    "Instances per diagnostic variant");
    gen->add_flag("--grid", gen_args.grid, "Also emit the shared-grid predictive families");
    gen->add_flag("--skip-no-cov", gen_args.skip_no_cov, "Skip plain predictive families");
    gen->add_flag("--skip-with-cov", gen_args.skip_with_cov, "Skip covariate families");
    gen->add_flag("--skip-diagnostics", gen_args.skip_diagnostics, "Skip diagnostic families");

    auto* run = app.add_subcommand("run", "Run a decomposer over a dataset");
    run->add_option("--dataset", run_args.dataset, "Dataset directory (from gen)")->required();
    run->add_option("--out", run_args.out, "Run output directory")->required();
    run->add_option("--config", run_args.config, "JSON config file (flags override it)");
    run->add_option("--decomposer", run_args.decomposer, "scripted or llm")
        ->check(CLI::IsMember({"scripted", "llm"}));
    run->add_option("--budget", run_args.budget, "Max proposals per task")
        ->check(CLI::PositiveNumber);
    run->add_option("--tau", run_args.tau, "Backtest MAPE acceptance threshold");
    run->add_option("--ablation", run_args.ablation, "Ablation name (no_project)")
        ->check(CLI::IsMember({"no_project"}));
    run->add_option("--parallel", run_args.parallel, "Worker threads")
        ->check(CLI::PositiveNumber);
    run->add_flag("--inject-unimplemented", run_args.inject_unimplemented,
                  "Scripted: lead with a declared-only operator to exercise repair");
    run->add_flag("--verbose", run_args.verbose, "Print one line per task");
    run->add_option("--llm-mode", run_args.llm_mode, "replay, record or live")
        ->check(CLI::IsMember({"replay", "record", "live"}));
    run->add_option("--llm-fixtures", run_args.llm_fixtures, "LLM fixture directory");
    run->add_option("--llm-model", run_args.llm_model, "Chat completion model name");
    run->add_option("--llm-endpoint", run_args.llm_endpoint, "Chat completion endpoint");
    run->add_option("--retrieval-fixtures", run_args.retrieval_fixtures,
                    "Offline retrieval fixture directory");
    run->add_option("--retrieval-cache", run_args.retrieval_cache, "Live retrieval cache");
    run->add_flag("--retrieval-live", run_args.retrieval_live, "Allow live retrieval fetches");

    auto* ev = app.add_subcommand("eval", "Grade a run against its dataset");
    ev->add_option("--dataset", eval_args.dataset, "Dataset directory")->required();
    ev->add_option("--run", eval_args.run, "Run directory (from run)")->required();
    ev->add_option("--json", eval_args.json_out, "Report path (default <run>/report.json)");
    ev->add_flag("--quiet", eval_args.quiet, "Suppress the table, write JSON only");

    auto* pl = app.add_subcommand("plan", "Parse and validate an operator program");
    pl->add_option("file", plan_args.file, "Program text file")->required();
    pl->add_option("--task", plan_args.task_dir,
                   "Task directory giving the environment and contract");

    auto* ops = app.add_subcommand("ops", "List the operator catalog");
    (void)ops;

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("tsreason");
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    if (gen->parsed()) return cmd_gen(gen_args);
    if (run->parsed()) return cmd_run(run_args);
    if (ev->parsed()) return cmd_eval(eval_args);
    if (pl->parsed()) return cmd_plan(plan_args);
    return cmd_ops();
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const OpError& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace tsreason::cli
