#include "empipe/flow_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace empipe {

namespace {

std::string name_of(const flow_graph& g, std::size_t id) {
  return "#" + std::to_string(id) + " (" + g.nodes[id].name + ")";
}

struct union_find {
  explicit union_find(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

// Adjacency over push + pull edges, directed along the streaming direction.
std::vector<std::vector<std::size_t>> stream_adjacency(const flow_graph& g, bool undirected) {
  std::vector<std::vector<std::size_t>> adj(g.nodes.size());
  for (const auto& [u, v] : g.push_edges) {
    adj[u].push_back(v);
    if (undirected) adj[v].push_back(u);
  }
  for (const auto& [u, v] : g.pull_edges) {
    adj[u].push_back(v);
    if (undirected) adj[v].push_back(u);
  }
  return adj;
}

// Kahn's algorithm with an id-ordered ready queue; returns nullopt on a cycle.
std::optional<std::vector<std::size_t>> topological_order(
    const std::vector<std::size_t>& members,
    const std::vector<flow_graph::edge>& edges) {
  std::map<std::size_t, std::size_t> indegree;
  for (std::size_t m : members) indegree[m] = 0;
  std::map<std::size_t, std::vector<std::size_t>> out;
  for (const auto& [u, v] : edges) {
    if (!indegree.count(u) || !indegree.count(v)) continue;
    out[u].push_back(v);
    ++indegree[v];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree)
    if (deg == 0) ready.push(id);
  std::vector<std::size_t> order;
  order.reserve(members.size());
  while (!ready.empty()) {
    std::size_t u = ready.top();
    ready.pop();
    order.push_back(u);
    for (std::size_t v : out[u])
      if (--indegree[v] == 0) ready.push(v);
  }
  if (order.size() != members.size()) return std::nullopt;
  return order;
}

union_find phase_components(const flow_graph& g) {
  union_find uf(g.nodes.size());
  for (const auto& [u, v] : g.push_edges) uf.unite(u, v);
  for (const auto& [u, v] : g.pull_edges) uf.unite(u, v);
  return uf;
}

std::vector<std::size_t> undirected_path(const flow_graph& g, std::size_t from, std::size_t to) {
  auto adj = stream_adjacency(g, /*undirected=*/true);
  std::vector<std::size_t> prev(g.nodes.size(), no_node);
  std::deque<std::size_t> queue{from};
  std::vector<bool> seen(g.nodes.size(), false);
  seen[from] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    if (u == to) break;
    for (std::size_t v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      prev[v] = u;
      queue.push_back(v);
    }
  }
  std::vector<std::size_t> path;
  for (std::size_t n = to; n != no_node; n = prev[n]) {
    path.push_back(n);
    if (n == from) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

struct initiator_scan {
  std::vector<bool> has_incoming_push;
  std::vector<bool> has_outgoing_pull;
};

initiator_scan scan_initiators(const flow_graph& g) {
  initiator_scan s{std::vector<bool>(g.nodes.size(), false),
                   std::vector<bool>(g.nodes.size(), false)};
  for (const auto& [u, v] : g.push_edges) s.has_incoming_push[v] = true;
  for (const auto& [u, v] : g.pull_edges) s.has_outgoing_pull[u] = true;
  return s;
}

}  // namespace

void validate(const flow_graph& g) {
  const std::size_t n = g.nodes.size();
  auto check_edge = [&](const flow_graph::edge& e, const char* kind) {
    if (e.first >= n || e.second >= n)
      throw validation_error(std::string(kind) + " edge references an unknown node id");
    if (e.first == e.second)
      throw validation_error(std::string(kind) + " self-edge on node " + name_of(g, e.first));
  };
  for (const auto& e : g.push_edges) check_edge(e, "push");
  for (const auto& e : g.pull_edges) check_edge(e, "pull");
  for (const auto& e : g.blocking_edges) check_edge(e, "blocking");

  std::vector<bool> has_out_push(n, false), has_out_pull(n, false);
  for (const auto& [u, v] : g.push_edges) has_out_push[u] = true;
  for (const auto& [u, v] : g.pull_edges) has_out_pull[u] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (has_out_push[i] && has_out_pull[i])
      throw validation_error("node " + name_of(g, i) +
                             " has both an outgoing push edge and an outgoing pull edge");

  for (const auto& [in_sub, out_sub] : g.blocking_edges) {
    const auto& a = g.nodes[in_sub];
    const auto& b = g.nodes[out_sub];
    if (a.kind != node_kind::input_sub || b.kind != node_kind::output_sub ||
        a.partner != out_sub || b.partner != in_sub)
      throw validation_error("blocking edge " + name_of(g, in_sub) + " -> " + name_of(g, out_sub) +
                             " does not connect the two sub-nodes of one blocking component");
  }

  // Streaming edges must form a DAG or no call order exists at all.
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<flow_graph::edge> streaming = g.push_edges;
  streaming.insert(streaming.end(), g.pull_edges.begin(), g.pull_edges.end());
  if (!topological_order(all, streaming))
    throw validation_error("push/pull edges form a directed cycle");

  // Property 1: with blocking edges removed, the two halves of a blocking
  // component must fall into different connected components.
  union_find uf = phase_components(g);
  for (const auto& [in_sub, out_sub] : g.blocking_edges) {
    if (uf.find(in_sub) != uf.find(out_sub)) continue;
    auto path = undirected_path(g, in_sub, out_sub);
    std::ostringstream msg;
    msg << "blocking component " << name_of(g, in_sub) << " / " << name_of(g, out_sub)
        << " has both sub-nodes in one phase; they are connected via";
    for (std::size_t p : path) msg << " " << name_of(g, p);
    msg << ". Insert a delay (or another blocking component) on that path.";
    throw validation_error(msg.str());
  }

  // Property 2: contracting all push/pull edges must leave an acyclic graph.
  std::vector<std::size_t> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = uf.find(i);
  std::map<std::size_t, std::vector<std::size_t>> phase_out;
  std::map<std::size_t, std::size_t> indeg;
  for (std::size_t i = 0; i < n; ++i) indeg[root[i]] = 0;
  for (const auto& [u, v] : g.blocking_edges) {
    phase_out[root[u]].push_back(root[v]);
    ++indeg[root[v]];
  }
  std::deque<std::size_t> ready;
  for (const auto& [p, d] : indeg)
    if (d == 0) ready.push_back(p);
  std::size_t emitted = 0;
  auto live = indeg;
  while (!ready.empty()) {
    std::size_t p = ready.front();
    ready.pop_front();
    ++emitted;
    for (std::size_t q : phase_out[p])
      if (--live[q] == 0) ready.push_back(q);
  }
  if (emitted != indeg.size()) {
    std::ostringstream msg;
    msg << "phase dependencies are cyclic; phases involved:";
    for (const auto& [p, d] : live)
      if (d > 0) msg << " {component of " << name_of(g, p) << "}";
    throw validation_error(msg.str());
  }

  // Exactly one initiator per phase.
  initiator_scan s = scan_initiators(g);
  std::map<std::size_t, std::vector<std::size_t>> initiators;
  for (const auto& [p, d] : indeg) initiators[p];
  for (std::size_t i = 0; i < n; ++i)
    if (!s.has_incoming_push[i] && !s.has_outgoing_pull[i]) initiators[root[i]].push_back(i);
  for (const auto& [p, cands] : initiators) {
    if (cands.size() == 1) continue;
    std::ostringstream msg;
    msg << "phase {component of " << name_of(g, p) << "} has " << cands.size()
        << " initiator candidates (expected exactly 1):";
    for (std::size_t c : cands) msg << " " << name_of(g, c);
    throw validation_error(msg.str());
  }
}

std::vector<std::vector<std::size_t>> identify_phases(const flow_graph& g) {
  union_find uf = phase_components(g);
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) by_root[uf.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> phases;
  phases.reserve(by_root.size());
  for (auto& [root, members] : by_root) {
    std::sort(members.begin(), members.end());
    phases.push_back(std::move(members));
  }
  std::sort(phases.begin(), phases.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return phases;
}

std::vector<std::vector<std::size_t>> phase_order(const flow_graph& g,
                                                  std::vector<std::vector<std::size_t>> phases) {
  std::vector<std::size_t> phase_of(g.nodes.size());
  for (std::size_t p = 0; p < phases.size(); ++p)
    for (std::size_t id : phases[p]) phase_of[id] = p;

  std::vector<std::vector<std::size_t>> out(phases.size());
  std::vector<std::size_t> indeg(phases.size(), 0);
  for (const auto& [u, v] : g.blocking_edges) {
    out[phase_of[u]].push_back(phase_of[v]);
    ++indeg[phase_of[v]];
  }
  // Ready phases ordered by their smallest node id.
  auto key = [&](std::size_t p) { return phases[p].front(); };
  auto cmp = [&](std::size_t a, std::size_t b) { return key(a) > key(b); };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> ready(cmp);
  for (std::size_t p = 0; p < phases.size(); ++p)
    if (indeg[p] == 0) ready.push(p);
  std::vector<std::vector<std::size_t>> ordered;
  ordered.reserve(phases.size());
  while (!ready.empty()) {
    std::size_t p = ready.top();
    ready.pop();
    ordered.push_back(std::move(phases[p]));
    for (std::size_t q : out[p])
      if (--indeg[q] == 0) ready.push(q);
  }
  if (ordered.size() != phases.size())
    throw validation_error("phase dependencies are cyclic");  // validate() reports details
  return ordered;
}

node_orders compute_node_orders(const flow_graph& g, const std::vector<std::size_t>& phase_nodes) {
  std::vector<bool> in_phase(g.nodes.size(), false);
  for (std::size_t id : phase_nodes) in_phase[id] = true;

  std::vector<flow_graph::edge> forward, begin_edges;
  for (const auto& [u, v] : g.push_edges) {
    if (!in_phase[u] || !in_phase[v]) continue;
    forward.emplace_back(u, v);
    begin_edges.emplace_back(v, u);  // push edges reversed for the begin order
  }
  for (const auto& [u, v] : g.pull_edges) {
    if (!in_phase[u] || !in_phase[v]) continue;
    forward.emplace_back(u, v);
    begin_edges.emplace_back(u, v);  // pull edges keep their direction
  }

  node_orders orders;
  auto propagate = topological_order(phase_nodes, forward);
  auto begin = topological_order(phase_nodes, begin_edges);
  if (!propagate || !begin)
    throw validation_error("phase subgraph is cyclic; run validate() for details");
  orders.propagate_order = std::move(*propagate);
  orders.begin_order = std::move(*begin);
  orders.end_order.assign(orders.begin_order.rbegin(), orders.begin_order.rend());
  return orders;
}

phase_plan make_phase_plan(const flow_graph& g) {
  validate(g);
  auto ordered = phase_order(g, identify_phases(g));

  initiator_scan s = scan_initiators(g);
  phase_plan plan;
  plan.phases.reserve(ordered.size());
  for (auto& members : ordered) {
    phase ph;
    ph.nodes = std::move(members);
    for (std::size_t id : ph.nodes)
      if (!s.has_incoming_push[id] && !s.has_outgoing_pull[id]) ph.initiator = id;
    node_orders orders = compute_node_orders(g, ph.nodes);
    ph.propagate_order = std::move(orders.propagate_order);
    ph.begin_order = std::move(orders.begin_order);
    ph.end_order = std::move(orders.end_order);
    plan.phases.push_back(std::move(ph));
  }
  return plan;
}

std::string format_phase_plan(const flow_graph& g, const phase_plan& plan,
                              std::uint64_t memory_limit_bytes) {
  std::ostringstream out;
  out << "phases: " << plan.phases.size() << "\n";
  for (std::size_t p = 0; p < plan.phases.size(); ++p) {
    const phase& ph = plan.phases[p];
    out << "phase " << p << ": initiator " << name_of(g, ph.initiator) << "\n";
    auto emit_order = [&](const char* label, const std::vector<std::size_t>& ids) {
      out << "  " << label << ":";
      for (std::size_t id : ids) out << " " << name_of(g, id);
      out << "\n";
    };
    emit_order("propagate", ph.propagate_order);
    emit_order("begin    ", ph.begin_order);
    emit_order("end      ", ph.end_order);

    std::vector<memory_request> requests;
    requests.reserve(ph.nodes.size());
    for (std::size_t id : ph.nodes) requests.push_back(g.nodes[id].request);
    memory_assignment a = assign_memory(requests, memory_limit_bytes);
    out << "  memory (" << memory_limit_bytes << " bytes available):\n";
    for (std::size_t i = 0; i < ph.nodes.size(); ++i) {
      const auto& r = requests[i];
      out << "    " << name_of(g, ph.nodes[i]) << ": min " << r.minimum_bytes << ", max ";
      if (r.unbounded())
        out << "unbounded";
      else
        out << *r.maximum_bytes;
      out << ", priority " << r.priority << " -> " << a.grants[i] << "\n";
    }
    out << "    total " << a.total << "\n";
  }
  return out.str();
}

}  // namespace empipe
