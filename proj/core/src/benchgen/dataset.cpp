#include "tsreason/benchgen/dataset.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

#include "tsreason/benchgen/generate.hpp"
#include "tsreason/benchgen/tasks.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/core/rng.hpp"
#include "tsreason/core/task_io.hpp"
#include "tsreason/util/fs.hpp"

namespace tsreason::benchgen {
namespace {

using nlohmann::json;

constexpr constraints::Kind kKinds[] = {constraints::Kind::max_load, constraints::Kind::min_load,
                                        constraints::Kind::ramp_rate,
                                        constraints::Kind::variability};

std::string task_id_for(const std::string& family, int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", index);
    return family_dir(family) + "_" + buf;
}

void emit(const std::filesystem::path& root, const TaskInstance& task, FamilyInfo& info,
          DatasetSummary& summary) {
    write_task(root / info.dir / task.id, task);
    info.task_ids.push_back(task.id);
    ++summary.task_count;
    if (task.kind == TaskKind::predictive) {
        ++summary.predictive_count;
        if (task.binding) ++summary.binding_count;
    }
}

// Multi-grid variant: grid_columns independent zone loads share one frame;
// each column becomes its own task over a fixed 48-step horizon.
void write_grid_family(const std::filesystem::path& root, const DatasetSpec& spec,
                       constraints::Kind kind, DatasetSummary& summary) {
    FamilyInfo info;
    info.name = std::string("predictive:") + constraints::to_string(kind) + ":grid";
    info.dir = family_dir(info.name);

    for (int g = 0; g < spec.grid_groups; ++g) {
        Frame grid;
        for (int c = 0; c < spec.grid_columns; ++c) {
            ElectricityConfig ec;
            ec.seed = derive_seed(spec.master_seed, info.name + ":src",
                                  static_cast<std::uint64_t>(g * spec.grid_columns + c));
            ec.length = 348;
            grid.add_column(gen_electricity_like(ec).column("load").renamed(
                "load_z" + std::to_string(c + 1)));
        }
        for (int c = 0; c < spec.grid_columns; ++c) {
            const int index = g * spec.grid_columns + c;
            PredictiveTaskConfig cfg;
            cfg.seed = derive_seed(spec.master_seed, info.name, static_cast<std::uint64_t>(index));
            cfg.id = task_id_for(info.name, index);
            cfg.family = info.name;
            cfg.constraint_kind = kind;
            const TimeSeries& column = grid.column(static_cast<std::size_t>(c));
            cfg.prepared = &column;
            cfg.prepared_horizon = 48;
            emit(root, make_predictive_task(cfg), info, summary);
        }
    }
    summary.families.push_back(std::move(info));
}

void write_predictive_family(const std::filesystem::path& root, const DatasetSpec& spec,
                             constraints::Kind kind, bool with_cov, DatasetSummary& summary) {
    FamilyInfo info;
    info.name = std::string("predictive:") + constraints::to_string(kind) +
                (with_cov ? ":with_cov" : ":no_cov");
    info.dir = family_dir(info.name);
    for (int i = 0; i < spec.predictive_per_kind; ++i) {
        PredictiveTaskConfig cfg;
        cfg.seed = derive_seed(spec.master_seed, info.name, static_cast<std::uint64_t>(i));
        cfg.id = task_id_for(info.name, i);
        cfg.family = info.name;
        cfg.constraint_kind = kind;
        cfg.with_covariates = with_cov;
        emit(root, make_predictive_task(cfg), info, summary);
    }
    summary.families.push_back(std::move(info));
}

void write_diagnostic_family(const std::filesystem::path& root, const DatasetSpec& spec,
                             DiagnosticVariant variant, DatasetSummary& summary) {
    FamilyInfo info;
    info.name = variant == DiagnosticVariant::causal
                    ? "diagnostic:causal"
                    : std::string("diagnostic:anomaly:") +
                          (variant == DiagnosticVariant::reference ? "reference" : "rate");
    info.dir = family_dir(info.name);
    for (int i = 0; i < spec.diagnostic_per_variant; ++i) {
        DiagnosticTaskConfig cfg;
        cfg.seed = derive_seed(spec.master_seed, info.name, static_cast<std::uint64_t>(i));
        cfg.id = task_id_for(info.name, i);
        cfg.family = info.name;
        cfg.variant = variant;
        emit(root, make_diagnostic_task(cfg), info, summary);
    }
    summary.families.push_back(std::move(info));
}

json read_manifest(const std::filesystem::path& root) {
    const auto file = root / "manifest.json";
    std::string text;
    try {
        text = util::read_text_file(file);
    } catch (const OpError& e) {
        fail("BadDataset", std::string(e.what()));
    }
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("schema", 0) != 1 ||
        !j.contains("families") || !j["families"].is_object())
        fail("BadDataset", "not a dataset manifest: " + file.string());
    return j;
}

}  // namespace

std::string family_dir(const std::string& family) {
    std::string out = family;
    std::replace(out.begin(), out.end(), ':', '_');
    return out;
}

DatasetSummary write_dataset(const std::filesystem::path& root, const DatasetSpec& spec) {
    if (spec.predictive_per_kind < 0 || spec.diagnostic_per_variant < 0 || spec.grid_groups < 0 ||
        spec.grid_columns < 1)
        fail("DomainError", "dataset counts must be non-negative");

    DatasetSummary summary;
    for (const constraints::Kind kind : kKinds) {
        if (spec.include_no_cov) write_predictive_family(root, spec, kind, false, summary);
        if (spec.include_with_cov) write_predictive_family(root, spec, kind, true, summary);
        if (spec.include_grid) write_grid_family(root, spec, kind, summary);
    }
    if (spec.include_diagnostics) {
        write_diagnostic_family(root, spec, DiagnosticVariant::reference, summary);
        write_diagnostic_family(root, spec, DiagnosticVariant::anomaly_rate, summary);
        write_diagnostic_family(root, spec, DiagnosticVariant::causal, summary);
    }

    json families = json::object();
    for (const FamilyInfo& info : summary.families)
        families[info.name] = {{"dir", info.dir},
                               {"count", info.task_ids.size()},
                               {"tasks", info.task_ids}};
    const json manifest = {{"schema", 1},
                           {"master_seed", spec.master_seed},
                           {"task_count", summary.task_count},
                           {"predictive_count", summary.predictive_count},
                           {"binding_count", summary.binding_count},
                           {"families", families}};
    util::write_text_atomic(root / "manifest.json", manifest.dump(2) + "\n");
    return summary;
}

std::vector<TaskInstance> load_dataset(const std::filesystem::path& root) {
    const json manifest = read_manifest(root);
    std::vector<TaskInstance> tasks;
    try {
        for (const auto& [name, info] : manifest["families"].items()) {
            const auto dir = info.at("dir").get<std::string>();
            for (const auto& id : info.at("tasks"))
                tasks.push_back(read_task(root / dir / id.get<std::string>()));
        }
    } catch (const json::exception& e) {
        fail("BadDataset", std::string("malformed manifest: ") + e.what());
    }
    std::sort(tasks.begin(), tasks.end(),
              [](const TaskInstance& a, const TaskInstance& b) { return a.id < b.id; });
    return tasks;
}

TaskInstance load_task(const std::filesystem::path& root, const std::string& task_id) {
    const json manifest = read_manifest(root);
    try {
        for (const auto& [name, info] : manifest["families"].items())
            for (const auto& id : info.at("tasks"))
                if (id.get<std::string>() == task_id)
                    return read_task(root / info.at("dir").get<std::string>() / task_id);
    } catch (const json::exception& e) {
        fail("BadDataset", std::string("malformed manifest: ") + e.what());
    }
    fail("UnknownTask", "dataset has no task with id '" + task_id + "'");
}

}  // namespace tsreason::benchgen
