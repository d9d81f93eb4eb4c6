#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "empipe/errors.hpp"
#include "empipe/memory.hpp"
#include "empipe/metadata.hpp"

namespace empipe {

class pipeline;
namespace detail {
struct run_context;
}

enum class node_kind { regular, input_sub, output_sub };

/// Lifecycle stages as driven by the executor, in order.
enum class node_stage { constructed, memory_assigned, propagating, propagated, streaming, finished };

constexpr std::size_t no_node = static_cast<std::size_t>(-1);

/// Base class for pipeline components. Subclasses override the lifecycle
/// methods they need; streaming methods (push / pull / can_pull) are
/// declared by subclasses with concrete item types so that per-item calls
/// dispatch statically.
///
/// Within one phase the executor calls propagate() on every node in
/// topological order, then begin() in reverse-push topological order, then
/// go() on the phase initiator, then end() in reverse begin order.
class node {
 public:
  virtual ~node() = default;
  node(const node&) = delete;
  node& operator=(const node&) = delete;

  /// Forward/fetch metadata and declare step counts here.
  virtual void propagate() {}
  /// Allocate buffers, open files; may already push/pull.
  virtual void begin() {}
  /// Drives the phase; called only on the initiator node.
  virtual void go();
  /// Drain buffers, close files; may still push/pull.
  virtual void end() {}

  std::size_t id() const { return id_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  node_kind kind() const { return kind_; }
  std::size_t partner() const { return partner_; }
  const memory_request& request() const { return request_; }
  node_stage stage() const { return stage_; }

  /// The byte grant this node received for the current phase. Valid from
  /// begin() onward.
  std::uint64_t get_available_memory() const;

  std::uint64_t declared_steps() const { return declared_steps_; }
  std::uint64_t completed_steps() const { return completed_steps_; }

 protected:
  node() = default;

  // Memory declarations; meant for constructors, before the graph is built.
  void set_minimum_memory(std::uint64_t bytes);
  void set_maximum_memory(std::uint64_t bytes);
  void set_unbounded_maximum_memory();
  void set_memory_priority(double priority);

  // Metadata; forward() only inside propagate().
  void forward(std::string key, metadata_value value);
  template <class T>
  T fetch(const std::string& key) const {
    return metadata_as<T>(*fetch_raw(key), key);
  }
  template <class T>
  std::optional<T> try_fetch(const std::string& key) const {
    const metadata_value* v = try_fetch_raw(key);
    if (v == nullptr) return std::nullopt;
    return metadata_as<T>(*v, key);
  }

  // Progress; set_steps() inside propagate(), step() while streaming.
  void set_steps(std::uint64_t n);
  void step(std::uint64_t k = 1);

  /// Throws unless this node is between its begin() and end(). Built-in
  /// nodes call this at the top of push()/pull().
  void require_streaming_window() const;

  // Edge declarations drained by pipeline::emplace once ids exist.
  void declare_push_destination(const node& dest);
  void declare_pull_source(const node& source);

 private:
  friend class pipeline;
  friend struct detail::run_context;

  const metadata_value* fetch_raw(const std::string& key) const;
  const metadata_value* try_fetch_raw(const std::string& key) const;
  detail::run_context& context_for(const char* what) const;

  pipeline* owner_ = nullptr;
  std::size_t id_ = no_node;
  std::string name_ = "node";
  node_kind kind_ = node_kind::regular;
  std::size_t partner_ = no_node;
  memory_request request_{};
  node_stage stage_ = node_stage::constructed;
  std::uint64_t grant_ = 0;
  bool grant_valid_ = false;
  std::uint64_t declared_steps_ = 0;
  std::uint64_t completed_steps_ = 0;
  bool steps_declared_ = false;
  std::vector<const node*> pending_push_dests_;
  std::vector<const node*> pending_pull_sources_;
};

}  // namespace empipe
