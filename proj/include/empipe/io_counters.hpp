#pragma once

#include <cstdint>

namespace empipe {

/// Snapshot of the process-global stream I/O counters. Item counters tick
/// once per item moved through a stream_file; block counters tick once per
/// block-sized transfer against the underlying file.
struct io_counters {
  std::uint64_t items_read = 0;
  std::uint64_t items_written = 0;
  std::uint64_t blocks_read = 0;
  std::uint64_t blocks_written = 0;

  friend io_counters operator-(const io_counters& a, const io_counters& b) {
    return {a.items_read - b.items_read, a.items_written - b.items_written,
            a.blocks_read - b.blocks_read, a.blocks_written - b.blocks_written};
  }
  friend bool operator==(const io_counters&, const io_counters&) = default;
};

io_counters snapshot_counters();
void reset_counters();

/// Number of block transfers needed to scan n items with b items per block,
/// i.e. ceil(n / b).
std::uint64_t scan_io_bound(std::uint64_t n, std::uint64_t b);

namespace detail {
// Increment hooks used by stream_file.
void count_items_read(std::uint64_t n);
void count_items_written(std::uint64_t n);
void count_block_read();
void count_block_written();
}  // namespace detail

}  // namespace empipe
