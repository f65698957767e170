#pragma once

#include <filesystem>

#include "tsreason/core/task.hpp"

namespace tsreason {

/// On-disk task layout: `<dir>/task.json` describes the instance; series and
/// frame values live in CSV sidecars next to it (`env_<NAME>.csv`,
/// `truth.csv`) so the data stays inspectable with ordinary tools. Scalars,
/// masks, and matrices are inlined in the JSON.

void write_task(const std::filesystem::path& dir, const TaskInstance& task);

/// Throws OpError("BadTaskFile") on missing or malformed files.
TaskInstance read_task(const std::filesystem::path& dir);

}  // namespace tsreason
