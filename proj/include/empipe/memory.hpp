#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "empipe/errors.hpp"

namespace empipe {

/// A node's memory declaration: at least `minimum_bytes`, at most
/// `maximum_bytes` (nullopt means "as much as possible"), weighted by
/// `priority` when the spare memory is divided up.
struct memory_request {
  std::uint64_t minimum_bytes = 0;
  std::optional<std::uint64_t> maximum_bytes = std::uint64_t{0};
  double priority = 1.0;

  bool unbounded() const { return !maximum_bytes.has_value(); }
  void check() const;
};

/// Result of distributing a budget over a set of requests. `grants[i]`
/// corresponds to `requests[i]` in the call; each grant satisfies
/// minimum <= grant <= maximum and the grants sum to `total` <= available.
struct memory_assignment {
  double lambda = 0.0;
  std::vector<std::uint64_t> grants;
  std::uint64_t total = 0;
};

/// Sum of max{a_u, min{b_u, lambda * c_u}} over the requests, evaluated in
/// real arithmetic (no rounding). Nondecreasing in lambda.
double total_assigned(std::span<const memory_request> requests, double lambda);

/// Grant each request max{a_u, min{b_u, lambda * c_u}} bytes for the largest
/// feasible lambda, found by bisection. Throws insufficient_memory when even
/// the minimums do not fit.
memory_assignment assign_memory(std::span<const memory_request> requests,
                                std::uint64_t available_bytes);

/// Application-wide allocation ledger. Stream block buffers register here
/// automatically; node-authored allocations may register voluntarily.
class memory_ledger {
 public:
  explicit memory_ledger(std::uint64_t limit_bytes = default_limit) : limit_(limit_bytes) {}

  void register_allocation(std::uint64_t bytes);
  void release_allocation(std::uint64_t bytes);

  std::uint64_t limit_bytes() const { return limit_.load(std::memory_order_relaxed); }
  std::uint64_t used_bytes() const { return used_.load(std::memory_order_relaxed); }
  std::uint64_t available_memory() const;

  /// Raising the limit is always fine; lowering it below current usage keeps
  /// existing registrations valid but rejects new ones until usage drops.
  void set_limit(std::uint64_t bytes) { limit_.store(bytes, std::memory_order_relaxed); }

  // Effectively "no limit" until an application configures one.
  static constexpr std::uint64_t default_limit = std::uint64_t{1} << 62;

 private:
  std::atomic<std::uint64_t> limit_;
  std::atomic<std::uint64_t> used_{0};
};

/// The process-global ledger used by stream_file buffers and the executor.
memory_ledger& global_memory();

}  // namespace empipe
