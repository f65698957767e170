#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tsreason/core/task.hpp"

namespace tsreason::benchgen {

/// Which families to materialize and how many instances each gets. Every
/// instance seed derives from master_seed, the family name, and the index,
/// so any subset regenerates byte-identically.
struct DatasetSpec {
    std::uint64_t master_seed = 7;
    int predictive_per_kind = 20;     // per constraint kind, per variant
    int diagnostic_per_variant = 25;  // reference / rate / causal
    bool include_no_cov = true;
    bool include_with_cov = true;
    bool include_grid = false;  // one task per column of a shared frame
    bool include_diagnostics = true;
    int grid_groups = 5;
    int grid_columns = 4;
};

struct FamilyInfo {
    std::string name;  // colon form, e.g. "predictive:max_load:no_cov"
    std::string dir;   // directory-safe form
    std::vector<std::string> task_ids;
};

struct DatasetSummary {
    std::size_t task_count = 0;
    std::size_t predictive_count = 0;
    std::size_t binding_count = 0;  // predictive tasks whose bound binds the truth
    std::vector<FamilyInfo> families;
};

/// Family name with ':' replaced by '_' (used for directories and task ids).
std::string family_dir(const std::string& family);

/// Write `dataset root/<family dir>/<task id>/task.json` (+ CSV sidecars)
/// for every instance plus a manifest.json at the root.
DatasetSummary write_dataset(const std::filesystem::path& root, const DatasetSpec& spec);

/// Everything the manifest lists, sorted by task id.
/// Throws OpError("BadDataset") when the root has no readable manifest.
std::vector<TaskInstance> load_dataset(const std::filesystem::path& root);

/// One instance by id (looked up through the manifest).
TaskInstance load_task(const std::filesystem::path& root, const std::string& task_id);

}  // namespace tsreason::benchgen
