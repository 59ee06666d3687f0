#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "cli/support.hpp"
#include "crosslink/graph.hpp"

namespace crosslink::cli {

/// Ingests users + edges, recording both digests and any skipped lines.
GraphBuild load_inputs(RunManifest& manifest, const fs::path& users, const fs::path& edges);

/// generate -> metrics -> pagerank -> dataset -> chi2 -> train -> eval, all
/// written under `out_dir`.
void run_pipeline(const nlohmann::json& config, const fs::path& out_dir, RunManifest& manifest);

}  // namespace crosslink::cli
