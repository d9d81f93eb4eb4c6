#pragma once

#include <cstdint>
#include <string>

#include "empipe/pipeline.hpp"
#include "empipe/progress.hpp"

namespace empipe {

/// Executes a validated pipeline phase by phase: distributes memory over the
/// phase's nodes, drives the propagate / begin / go / end protocol, reports
/// weighted overall progress and maintains the execution time database named
/// in the options.
pipeline_run run_pipeline(pipeline& pl, std::uint64_t instance_size,
                          progress_indicator& progress, std::string pipeline_id,
                          const run_options& options);

}  // namespace empipe
