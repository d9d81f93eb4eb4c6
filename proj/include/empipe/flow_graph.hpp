#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "empipe/memory.hpp"
#include "empipe/node.hpp"

namespace empipe {

/// Immutable structural view of a pipeline: one entry per node plus the
/// push, pull and blocking edge sets, all directed along the streaming
/// direction. Node ids are dense indices into `nodes`.
struct flow_graph {
  struct node_info {
    std::size_t id = 0;
    std::string name;
    node_kind kind = node_kind::regular;
    std::size_t partner = no_node;
    memory_request request{};
  };

  using edge = std::pair<std::size_t, std::size_t>;

  std::vector<node_info> nodes;
  std::vector<edge> push_edges;
  std::vector<edge> pull_edges;
  std::vector<edge> blocking_edges;
};

/// One schedulable unit: the nodes that stream together, the node whose
/// go() drives them, and the three call orders the executor follows.
struct phase {
  std::vector<std::size_t> nodes;  // ascending ids
  std::size_t initiator = no_node;
  std::vector<std::size_t> propagate_order;
  std::vector<std::size_t> begin_order;
  std::vector<std::size_t> end_order;  // exact reverse of begin_order
};

struct phase_plan {
  std::vector<phase> phases;  // in execution order
};

/// Checks the structural requirements:
///   - no node has both an outgoing push and an outgoing pull edge;
///   - with blocking edges removed, the two sub-nodes of a blocking
///     component never share a connected component;
///   - contracting all push/pull edges leaves an acyclic graph;
///   - every phase has exactly one initiator (no incoming push edge and no
///     outgoing pull edge).
/// Throws validation_error with a description of the first violation.
void validate(const flow_graph& g);

/// Connected components of the graph with blocking edges removed (push and
/// pull edges treated as undirected). Each component is an ascending id
/// list; components are ordered by their smallest id. Requires validate().
std::vector<std::vector<std::size_t>> identify_phases(const flow_graph& g);

/// Topological order of the contracted phase graph; ties broken by the
/// smallest node id contained in the phase.
std::vector<std::vector<std::size_t>> phase_order(const flow_graph& g,
                                                  std::vector<std::vector<std::size_t>> phases);

/// The propagate / begin / end orders for one phase's node set. Ties broken
/// by ascending node id.
struct node_orders {
  std::vector<std::size_t> propagate_order;
  std::vector<std::size_t> begin_order;
  std::vector<std::size_t> end_order;
};
node_orders compute_node_orders(const flow_graph& g, const std::vector<std::size_t>& phase_nodes);

/// validate + identify + order + per-phase orders, composed.
phase_plan make_phase_plan(const flow_graph& g);

/// Human-readable plan report: phases, call orders and the memory grants a
/// run with `memory_limit_bytes` would hand out. Stable formatting, suitable
/// for golden-file comparison.
std::string format_phase_plan(const flow_graph& g, const phase_plan& plan,
                              std::uint64_t memory_limit_bytes);

}  // namespace empipe
