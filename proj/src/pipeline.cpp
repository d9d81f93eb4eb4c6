#include "empipe/pipeline.hpp"

#include <algorithm>

#include "empipe/executor.hpp"

namespace empipe {

void pipeline::register_node(std::unique_ptr<node> n) {
  n->owner_ = this;
  n->id_ = nodes_.size();
  nodes_.push_back(std::move(n));
  node& added = *nodes_.back();
  for (const node* dest : added.pending_push_dests_) add_push_edge(added, *dest);
  for (const node* src : added.pending_pull_sources_) add_pull_edge(*src, added);
  added.pending_push_dests_.clear();
  added.pending_pull_sources_.clear();
}

void pipeline::require_registered(const node& n, const char* what) const {
  if (n.owner_ != this || n.id_ >= nodes_.size() || nodes_[n.id_].get() != &n)
    throw contract_violation(std::string(what) + ": node \"" + n.name() +
                             "\" is not registered with this pipeline");
}

void pipeline::add_push_edge(const node& from, const node& to) {
  require_registered(from, "add_push_edge");
  require_registered(to, "add_push_edge");
  push_edges_.emplace_back(from.id_, to.id_);
}

void pipeline::add_pull_edge(const node& from, const node& to) {
  require_registered(from, "add_pull_edge");
  require_registered(to, "add_pull_edge");
  pull_edges_.emplace_back(from.id_, to.id_);
}

void pipeline::link_blocking(node& input_side, node& output_side) {
  require_registered(input_side, "link_blocking");
  require_registered(output_side, "link_blocking");
  input_side.kind_ = node_kind::input_sub;
  input_side.partner_ = output_side.id_;
  output_side.kind_ = node_kind::output_sub;
  output_side.partner_ = input_side.id_;
  blocking_edges_.emplace_back(input_side.id_, output_side.id_);
}

void pipeline::forward(std::string key, metadata_value value) {
  boundary_forwards_.emplace_back(std::move(key), std::move(value));
}

flow_graph pipeline::build_graph() const {
  flow_graph g;
  g.nodes.reserve(nodes_.size());
  for (const auto& n : nodes_)
    g.nodes.push_back({n->id_, n->name_, n->kind_, n->partner_, n->request_});

  auto dedupe = [](std::vector<std::pair<std::size_t, std::size_t>> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
  };
  g.push_edges = dedupe(push_edges_);
  g.pull_edges = dedupe(pull_edges_);
  g.blocking_edges = dedupe(blocking_edges_);
  return g;
}

pipeline_run pipeline::run(std::uint64_t instance_size, progress_indicator& progress,
                           std::string pipeline_id, const run_options& options) {
  return run_pipeline(*this, instance_size, progress, std::move(pipeline_id), options);
}

}  // namespace empipe
