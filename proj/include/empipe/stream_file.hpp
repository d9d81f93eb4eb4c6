#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <type_traits>
#include <vector>

#include "empipe/block_config.hpp"
#include "empipe/errors.hpp"

namespace empipe {

/// A file-backed sequence of fixed-size items, moved to and from disk in
/// blocks of block_size_items. One block buffer is held in memory per open
/// stream and is registered with the global memory ledger.
///
/// On-disk layout: 8-byte magic "EMSTREAM", u32 LE item size, u32 LE
/// reserved (zero), u64 LE item count, then the items packed back to back.
/// The final block may be partial.
class stream_file {
 public:
  enum class mode { read, write, read_write };

  stream_file(std::filesystem::path path, mode m, block_config config);
  ~stream_file();

  stream_file(stream_file&& other) noexcept;
  stream_file& operator=(stream_file&& other) noexcept;
  stream_file(const stream_file&) = delete;
  stream_file& operator=(const stream_file&) = delete;

  /// Appends one item. `item.size()` must equal item_size_bytes.
  void write_item(std::span<const std::byte> item);

  /// Reads the item at the forward cursor and advances it.
  void read_item(std::span<std::byte> out);

  /// Reads items in reverse append order (independent backward cursor).
  void read_item_back(std::span<std::byte> out);

  bool can_read() const { return cursor_ < length_; }
  bool can_read_back() const { return back_cursor_ > 0; }

  std::uint64_t length_items() const { return length_; }
  std::uint64_t cursor() const { return cursor_; }
  std::uint64_t item_size_bytes() const { return config_.item_size_bytes; }
  const std::filesystem::path& path() const { return path_; }
  bool is_open() const { return fd_ >= 0; }

  /// Flushes any partial tail block, persists the item count in the header
  /// and releases the buffer registration. Safe to call twice.
  void close();

  /// Item count recorded in the header of an existing stream file, without
  /// opening it as a stream (no block buffer, no counter activity).
  static std::uint64_t peek_length(const std::filesystem::path& path);

  // Typed convenience layer for trivially copyable items.
  template <class T>
  void write(const T& value) {
    static_assert(std::is_trivially_copyable_v<T>);
    write_item(std::as_bytes(std::span{&value, 1}));
  }
  template <class T>
  T read() {
    static_assert(std::is_trivially_copyable_v<T>);
    T value;
    read_item(std::as_writable_bytes(std::span{&value, 1}));
    return value;
  }
  template <class T>
  T read_back() {
    static_assert(std::is_trivially_copyable_v<T>);
    T value;
    read_item_back(std::as_writable_bytes(std::span{&value, 1}));
    return value;
  }

 private:
  enum class buffer_role { none, read_cache, write_tail };

  void open_file();
  void load_block(std::uint64_t block);
  void prepare_tail_for_append();
  void flush_tail(bool full_block);
  void read_at(std::uint64_t item_index, std::span<std::byte> out);
  std::uint64_t block_items(std::uint64_t block) const;
  std::uint64_t data_offset(std::uint64_t item_index) const;
  void write_header(std::uint64_t length);

  std::filesystem::path path_;
  mode mode_ = mode::read;
  block_config config_{};
  int fd_ = -1;
  std::uint64_t length_ = 0;
  std::uint64_t cursor_ = 0;
  std::uint64_t back_cursor_ = 0;
  std::vector<std::byte> buffer_;
  std::uint64_t buffer_block_ = UINT64_MAX;
  buffer_role role_ = buffer_role::none;
  bool tail_dirty_ = false;
  std::uint64_t registered_bytes_ = 0;
};

}  // namespace empipe
