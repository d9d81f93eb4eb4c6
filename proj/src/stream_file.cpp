#include "empipe/stream_file.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <utility>

#include "empipe/io_counters.hpp"
#include "empipe/memory.hpp"

namespace empipe {

namespace {

constexpr char kMagic[8] = {'E', 'M', 'S', 'T', 'R', 'E', 'A', 'M'};
constexpr std::uint64_t kHeaderBytes = 24;  // magic + item size + reserved + length

void put_u32(std::byte* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::byte>((v >> (8 * i)) & 0xff);
}
void put_u64(std::byte* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::byte>((v >> (8 * i)) & 0xff);
}
std::uint32_t get_u32(const std::byte* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}
std::uint64_t get_u64(const std::byte* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void pread_exact(int fd, std::byte* buf, std::size_t n, std::uint64_t off, const std::filesystem::path& path) {
  std::size_t done = 0;
  while (done < n) {
    ssize_t got = ::pread(fd, buf + done, n - done, static_cast<off_t>(off + done));
    if (got < 0) {
      if (errno == EINTR) continue;
      throw io_error("read failed on " + path.string() + ": " + std::strerror(errno));
    }
    if (got == 0) throw format_error("unexpected end of file in " + path.string());
    done += static_cast<std::size_t>(got);
  }
}

void pwrite_exact(int fd, const std::byte* buf, std::size_t n, std::uint64_t off, const std::filesystem::path& path) {
  std::size_t done = 0;
  while (done < n) {
    ssize_t put = ::pwrite(fd, buf + done, n - done, static_cast<off_t>(off + done));
    if (put < 0) {
      if (errno == EINTR) continue;
      throw io_error("write failed on " + path.string() + ": " + std::strerror(errno));
    }
    done += static_cast<std::size_t>(put);
  }
}

struct parsed_header {
  std::uint32_t item_size;
  std::uint64_t length;
};

parsed_header read_header(int fd, const std::filesystem::path& path) {
  std::array<std::byte, kHeaderBytes> h;
  pread_exact(fd, h.data(), h.size(), 0, path);
  if (std::memcmp(h.data(), kMagic, sizeof kMagic) != 0)
    throw format_error("not a stream file (bad magic): " + path.string());
  parsed_header out;
  out.item_size = get_u32(h.data() + 8);
  out.length = get_u64(h.data() + 16);
  return out;
}

void check_item_span(std::size_t got, std::uint64_t expected, const std::filesystem::path& path) {
  if (got != expected)
    throw contract_violation("item buffer size " + std::to_string(got) +
                             " does not match stream item size " + std::to_string(expected) +
                             " for " + path.string());
}

}  // namespace

stream_file::stream_file(std::filesystem::path path, mode m, block_config config)
    : path_(std::move(path)), mode_(m), config_(config) {
  config_.validate();
  open_file();
  buffer_.resize(config_.block_bytes());
  global_memory().register_allocation(config_.block_bytes());
  registered_bytes_ = config_.block_bytes();
  back_cursor_ = length_;
}

stream_file::~stream_file() {
  try {
    close();
  } catch (...) {
    // Destructor must not throw; an explicit close() reports failures.
  }
}

stream_file::stream_file(stream_file&& other) noexcept { *this = std::move(other); }

stream_file& stream_file::operator=(stream_file&& other) noexcept {
  if (this != &other) {
    try {
      close();
    } catch (...) {
    }
    path_ = std::move(other.path_);
    mode_ = other.mode_;
    config_ = other.config_;
    fd_ = std::exchange(other.fd_, -1);
    length_ = other.length_;
    cursor_ = other.cursor_;
    back_cursor_ = other.back_cursor_;
    buffer_ = std::move(other.buffer_);
    buffer_block_ = other.buffer_block_;
    role_ = other.role_;
    tail_dirty_ = other.tail_dirty_;
    registered_bytes_ = std::exchange(other.registered_bytes_, 0);
  }
  return *this;
}

void stream_file::open_file() {
  int flags = 0;
  switch (mode_) {
    case mode::read: flags = O_RDONLY; break;
    case mode::write: flags = O_RDWR | O_CREAT | O_TRUNC; break;
    case mode::read_write: flags = O_RDWR | O_CREAT; break;
  }
  fd_ = ::open(path_.c_str(), flags, 0644);
  if (fd_ < 0) throw io_error("cannot open " + path_.string() + ": " + std::strerror(errno));

  struct stat st{};
  if (::fstat(fd_, &st) != 0) throw io_error("stat failed on " + path_.string());

  bool fresh = (mode_ == mode::write) || (mode_ == mode::read_write && st.st_size == 0);
  if (fresh) {
    write_header(0);
    length_ = 0;
    return;
  }

  parsed_header h = read_header(fd_, path_);
  if (h.item_size != config_.item_size_bytes)
    throw format_error("item size mismatch in " + path_.string() + ": file has " +
                       std::to_string(h.item_size) + " bytes per item, expected " +
                       std::to_string(config_.item_size_bytes));
  length_ = h.length;
  if (static_cast<std::uint64_t>(st.st_size) < kHeaderBytes + length_ * config_.item_size_bytes)
    throw format_error("stream file truncated: " + path_.string());
}

void stream_file::write_header(std::uint64_t length) {
  std::array<std::byte, kHeaderBytes> h{};
  std::memcpy(h.data(), kMagic, sizeof kMagic);
  put_u32(h.data() + 8, static_cast<std::uint32_t>(config_.item_size_bytes));
  put_u32(h.data() + 12, 0);
  put_u64(h.data() + 16, length);
  pwrite_exact(fd_, h.data(), h.size(), 0, path_);
}

std::uint64_t stream_file::block_items(std::uint64_t block) const {
  std::uint64_t first = block * config_.block_size_items;
  std::uint64_t count = length_ > first ? length_ - first : 0;
  return std::min<std::uint64_t>(count, config_.block_size_items);
}

std::uint64_t stream_file::data_offset(std::uint64_t item_index) const {
  return kHeaderBytes + item_index * config_.item_size_bytes;
}

void stream_file::load_block(std::uint64_t block) {
  if (role_ == buffer_role::write_tail && tail_dirty_) flush_tail(false);
  std::uint64_t items = block_items(block);
  pread_exact(fd_, buffer_.data(), items * config_.item_size_bytes,
              data_offset(block * config_.block_size_items), path_);
  detail::count_block_read();
  buffer_block_ = block;
  role_ = buffer_role::read_cache;
  tail_dirty_ = false;
}

void stream_file::prepare_tail_for_append() {
  std::uint64_t tail = length_ / config_.block_size_items;
  if (role_ == buffer_role::write_tail && buffer_block_ == tail) return;
  std::uint64_t in_tail = length_ % config_.block_size_items;
  if (in_tail > 0) {
    if (role_ == buffer_role::read_cache && buffer_block_ == tail) {
      // Already cached; reuse without a second fetch.
    } else {
      pread_exact(fd_, buffer_.data(), in_tail * config_.item_size_bytes,
                  data_offset(tail * config_.block_size_items), path_);
      detail::count_block_read();
    }
  }
  buffer_block_ = tail;
  role_ = buffer_role::write_tail;
  tail_dirty_ = false;
}

void stream_file::flush_tail(bool full_block) {
  std::uint64_t items = full_block ? config_.block_size_items : length_ % config_.block_size_items;
  if (items == 0) {
    tail_dirty_ = false;
    return;
  }
  pwrite_exact(fd_, buffer_.data(), items * config_.item_size_bytes,
               data_offset(buffer_block_ * config_.block_size_items), path_);
  detail::count_block_written();
  tail_dirty_ = false;
}

void stream_file::write_item(std::span<const std::byte> item) {
  if (fd_ < 0) throw contract_violation("write_item on a closed stream: " + path_.string());
  if (mode_ == mode::read) throw contract_violation("stream is read-only: " + path_.string());
  if (item.size() != config_.item_size_bytes)
    throw contract_violation("write_item: item size " + std::to_string(item.size()) +
                             " does not match stream item size " +
                             std::to_string(config_.item_size_bytes));
  prepare_tail_for_append();
  std::uint64_t slot = length_ % config_.block_size_items;
  std::memcpy(buffer_.data() + slot * config_.item_size_bytes, item.data(), item.size());
  ++length_;
  tail_dirty_ = true;
  detail::count_items_written(1);
  back_cursor_ = length_;  // backward reads start from the newest item
  if (length_ % config_.block_size_items == 0) {
    flush_tail(true);
    role_ = buffer_role::none;
    buffer_block_ = UINT64_MAX;
  }
}

void stream_file::read_at(std::uint64_t item_index, std::span<std::byte> out) {
  std::uint64_t block = item_index / config_.block_size_items;
  bool cached = buffer_block_ == block && role_ != buffer_role::none;
  if (!cached) load_block(block);
  std::uint64_t slot = item_index % config_.block_size_items;
  std::memcpy(out.data(), buffer_.data() + slot * config_.item_size_bytes, out.size());
  detail::count_items_read(1);
}

void stream_file::read_item(std::span<std::byte> out) {
  if (fd_ < 0) throw contract_violation("read_item on a closed stream: " + path_.string());
  if (mode_ == mode::write) throw contract_violation("stream is write-only: " + path_.string());
  check_item_span(out.size(), config_.item_size_bytes, path_);
  if (cursor_ >= length_)
    throw end_of_stream("read past end of stream " + path_.string() + " (length " +
                        std::to_string(length_) + ")");
  read_at(cursor_, out);
  ++cursor_;
}

void stream_file::read_item_back(std::span<std::byte> out) {
  if (fd_ < 0) throw contract_violation("read_item_back on a closed stream: " + path_.string());
  if (mode_ == mode::write) throw contract_violation("stream is write-only: " + path_.string());
  check_item_span(out.size(), config_.item_size_bytes, path_);
  if (back_cursor_ == 0)
    throw end_of_stream("read past beginning of stream " + path_.string());
  --back_cursor_;
  read_at(back_cursor_, out);
}

void stream_file::close() {
  if (fd_ < 0) return;
  if (mode_ != mode::read) {
    if (role_ == buffer_role::write_tail && tail_dirty_) flush_tail(false);
    write_header(length_);
  }
  ::close(fd_);
  fd_ = -1;
  if (registered_bytes_ > 0) {
    global_memory().release_allocation(registered_bytes_);
    registered_bytes_ = 0;
  }
  buffer_.clear();
  buffer_.shrink_to_fit();
  role_ = buffer_role::none;
}

std::uint64_t stream_file::peek_length(const std::filesystem::path& path) {
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) throw io_error("cannot open " + path.string() + ": " + std::strerror(errno));
  try {
    parsed_header h = read_header(fd, path);
    ::close(fd);
    return h.length;
  } catch (...) {
    ::close(fd);
    throw;
  }
}

}  // namespace empipe
