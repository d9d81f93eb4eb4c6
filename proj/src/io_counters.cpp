#include "empipe/io_counters.hpp"

#include <atomic>

#include "empipe/errors.hpp"

namespace empipe {

namespace {
std::atomic<std::uint64_t> g_items_read{0};
std::atomic<std::uint64_t> g_items_written{0};
std::atomic<std::uint64_t> g_blocks_read{0};
std::atomic<std::uint64_t> g_blocks_written{0};
}  // namespace

io_counters snapshot_counters() {
  return {g_items_read.load(std::memory_order_relaxed),
          g_items_written.load(std::memory_order_relaxed),
          g_blocks_read.load(std::memory_order_relaxed),
          g_blocks_written.load(std::memory_order_relaxed)};
}

void reset_counters() {
  g_items_read.store(0, std::memory_order_relaxed);
  g_items_written.store(0, std::memory_order_relaxed);
  g_blocks_read.store(0, std::memory_order_relaxed);
  g_blocks_written.store(0, std::memory_order_relaxed);
}

std::uint64_t scan_io_bound(std::uint64_t n, std::uint64_t b) {
  if (b == 0) throw contract_violation("scan_io_bound: block size must be >= 1");
  return n / b + (n % b != 0 ? 1 : 0);
}

namespace detail {
void count_items_read(std::uint64_t n) { g_items_read.fetch_add(n, std::memory_order_relaxed); }
void count_items_written(std::uint64_t n) { g_items_written.fetch_add(n, std::memory_order_relaxed); }
void count_block_read() { g_blocks_read.fetch_add(1, std::memory_order_relaxed); }
void count_block_written() { g_blocks_written.fetch_add(1, std::memory_order_relaxed); }
}  // namespace detail

}  // namespace empipe
