#include "empipe/memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace empipe {

namespace {

// Guards against a convergence residue of the bisection flipping a grant
// that lands exactly on an integer (e.g. lambda*c = 10 computed as
// 9.999999999). Small enough that a genuinely fractional grant is unaffected.
constexpr double kFloorSlack = 1e-7;

double clamped_grant(const memory_request& r, double lambda) {
  double g = lambda * r.priority;
  if (r.maximum_bytes) g = std::min(g, static_cast<double>(*r.maximum_bytes));
  return std::max(g, static_cast<double>(r.minimum_bytes));
}

std::uint64_t integral_grant(const memory_request& r, double lambda) {
  double g = std::floor(clamped_grant(r, lambda) + kFloorSlack);
  std::uint64_t whole = static_cast<std::uint64_t>(g);
  if (r.maximum_bytes && whole > *r.maximum_bytes) whole = *r.maximum_bytes;
  return std::max(whole, r.minimum_bytes);
}

}  // namespace

void memory_request::check() const {
  if (priority <= 0.0) throw contract_violation("memory_request: priority must be > 0");
  if (maximum_bytes && *maximum_bytes < minimum_bytes)
    throw contract_violation("memory_request: maximum_bytes < minimum_bytes");
}

double total_assigned(std::span<const memory_request> requests, double lambda) {
  double total = 0.0;
  for (const auto& r : requests) total += clamped_grant(r, lambda);
  return total;
}

memory_assignment assign_memory(std::span<const memory_request> requests,
                                std::uint64_t available_bytes) {
  std::uint64_t sum_min = 0;
  double min_priority = std::numeric_limits<double>::infinity();
  for (const auto& r : requests) {
    r.check();
    sum_min += r.minimum_bytes;
    min_priority = std::min(min_priority, r.priority);
  }
  if (sum_min > available_bytes)
    throw insufficient_memory("assign_memory: minimum requests need " + std::to_string(sum_min) +
                              " bytes but only " + std::to_string(available_bytes) +
                              " are available (short by " +
                              std::to_string(sum_min - available_bytes) + " bytes)");

  memory_assignment out;
  if (requests.empty()) return out;

  const double avail = static_cast<double>(available_bytes);
  double hi = (avail + static_cast<double>(sum_min) + 1.0) / min_priority;

  double lambda;
  if (total_assigned(requests, hi) <= avail) {
    // Every request saturates at a finite cap before hi; any larger lambda
    // assigns the same grants.
    lambda = hi;
  } else {
    double lo = 0.0;
    for (int i = 0; i < 64; ++i) {
      double mid = 0.5 * (lo + hi);
      if (total_assigned(requests, mid) <= avail)
        lo = mid;
      else
        hi = mid;
    }
    lambda = lo;
  }

  out.lambda = lambda;
  out.grants.reserve(requests.size());
  for (const auto& r : requests) {
    std::uint64_t g = integral_grant(r, lambda);
    out.grants.push_back(g);
    out.total += g;
  }
  return out;
}

void memory_ledger::register_allocation(std::uint64_t bytes) {
  std::uint64_t current = used_.load(std::memory_order_relaxed);
  for (;;) {
    std::uint64_t limit = limit_.load(std::memory_order_relaxed);
    if (current + bytes > limit)
      throw budget_exceeded("memory_ledger: registering " + std::to_string(bytes) +
                            " bytes exceeds the budget; " + std::to_string(limit - std::min(limit, current)) +
                            " bytes remain of " + std::to_string(limit));
    if (used_.compare_exchange_weak(current, current + bytes, std::memory_order_relaxed)) return;
  }
}

void memory_ledger::release_allocation(std::uint64_t bytes) {
  std::uint64_t current = used_.load(std::memory_order_relaxed);
  for (;;) {
    std::uint64_t next = bytes > current ? 0 : current - bytes;
    if (used_.compare_exchange_weak(current, next, std::memory_order_relaxed)) return;
  }
}

std::uint64_t memory_ledger::available_memory() const {
  std::uint64_t limit = limit_.load(std::memory_order_relaxed);
  std::uint64_t used = used_.load(std::memory_order_relaxed);
  return used > limit ? 0 : limit - used;
}

memory_ledger& global_memory() {
  static memory_ledger ledger;
  return ledger;
}

}  // namespace empipe
