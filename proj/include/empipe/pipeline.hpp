#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "empipe/block_config.hpp"
#include "empipe/flow_graph.hpp"
#include "empipe/metadata.hpp"
#include "empipe/node.hpp"
#include "empipe/progress.hpp"

namespace empipe {

/// Outcome of one pipeline execution.
struct pipeline_run {
  std::string pipeline_id;
  std::uint64_t instance_size = 0;
  std::vector<std::uint64_t> phase_durations_ms;
};

struct run_options {
  block_config config{};
  /// When set, phase weights are read from this execution time database and
  /// the run's own timings are merged back into it.
  std::filesystem::path timedb{};
};

/// Owns the nodes of one pipeline and the edges between them. Nodes are
/// created through emplace(), which assigns ids in creation order and
/// materializes any edges the node declared in its constructor.
class pipeline {
 public:
  pipeline() = default;
  pipeline(const pipeline&) = delete;
  pipeline& operator=(const pipeline&) = delete;

  template <class N, class... Args>
  N& emplace(Args&&... args) {
    auto owned = std::make_unique<N>(std::forward<Args>(args)...);
    N& ref = *owned;
    register_node(std::move(owned));
    return ref;
  }

  // Explicit wiring for nodes that do not declare edges themselves.
  void add_push_edge(const node& from, const node& to);
  void add_pull_edge(const node& from, const node& to);

  /// Marks `input_side` / `output_side` as the two sub-nodes of one blocking
  /// component and installs the blocking edge between them.
  void link_blocking(node& input_side, node& output_side);

  /// Boundary metadata, visible to every node of the pipeline.
  void forward(std::string key, metadata_value value);

  std::size_t node_count() const { return nodes_.size(); }
  node& node_at(std::size_t id) { return *nodes_.at(id); }
  const node& node_at(std::size_t id) const { return *nodes_.at(id); }

  flow_graph build_graph() const;

  /// Validates, plans and executes the pipeline. `instance_size` and
  /// `pipeline_id` key the execution time database.
  pipeline_run run(std::uint64_t instance_size, progress_indicator& progress,
                   std::string pipeline_id, const run_options& options);

 private:
  friend class node;
  friend struct detail::run_context;

  void register_node(std::unique_ptr<node> n);
  void require_registered(const node& n, const char* what) const;

  std::vector<std::unique_ptr<node>> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> push_edges_;
  std::vector<std::pair<std::size_t, std::size_t>> pull_edges_;
  std::vector<std::pair<std::size_t, std::size_t>> blocking_edges_;
  std::vector<std::pair<std::string, metadata_value>> boundary_forwards_;
  detail::run_context* active_run_ = nullptr;
};

}  // namespace empipe
