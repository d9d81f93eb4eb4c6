#pragma once

#include <cstdint>

#include "empipe/errors.hpp"

namespace empipe {

/// Blocked-I/O parameters shared by every stream a pipeline opens: how many
/// items form one block, how large each item is, and the application-wide
/// memory budget the run operates under.
struct block_config {
  std::uint64_t block_size_items = 4096;
  std::uint64_t memory_limit_bytes = 2u << 20;
  std::uint64_t item_size_bytes = 0;

  std::uint64_t block_bytes() const { return block_size_items * item_size_bytes; }

  block_config with_item_size(std::uint64_t size) const {
    block_config c = *this;
    c.item_size_bytes = size;
    return c;
  }

  void validate() const {
    if (block_size_items < 1) throw validation_error("block_config: block_size_items must be >= 1");
    if (item_size_bytes < 1) throw validation_error("block_config: item_size_bytes must be >= 1");
    if (memory_limit_bytes < 2 * block_bytes())
      throw validation_error(
          "block_config: memory_limit_bytes must hold at least two blocks "
          "(one input and one output buffer)");
  }
};

}  // namespace empipe
