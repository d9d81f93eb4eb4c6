#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "empipe/errors.hpp"

namespace empipe {

/// The closed set of value types that may travel between nodes as metadata.
using metadata_value =
    std::variant<std::int64_t, double, std::string, std::pair<std::int64_t, std::int64_t>>;

/// Answers "is there a directed flow-graph path from `origin` to `at`?"
/// (reflexively true for origin == at).
using reachability_fn = std::function<bool(std::size_t origin, std::size_t at)>;

/// Key-value pairs forwarded by nodes (or the pipeline boundary) during the
/// propagate sweep. A value is visible at node v when its origin reaches v
/// in the flow graph; boundary values are visible everywhere. When several
/// visible origins forwarded the same key, the most recent forward wins.
class metadata_store {
 public:
  static constexpr std::size_t boundary_origin = static_cast<std::size_t>(-1);

  void put(std::size_t origin, std::string key, metadata_value value);

  const metadata_value* lookup(std::size_t at, const std::string& key,
                               const reachability_fn& reaches) const;

  void clear() { by_key_.clear(); }

 private:
  struct entry {
    std::size_t origin;
    metadata_value value;
    std::uint64_t seq;
  };
  std::unordered_map<std::string, std::vector<entry>> by_key_;
  std::uint64_t next_seq_ = 0;
};

namespace detail {
template <class T>
const char* metadata_type_name() {
  if constexpr (std::is_same_v<T, std::int64_t>) return "integer";
  else if constexpr (std::is_same_v<T, double>) return "rational";
  else if constexpr (std::is_same_v<T, std::string>) return "string";
  else return "integer pair";
}
}  // namespace detail

/// Type-checked extraction; throws metadata_type_error on a mismatch.
template <class T>
const T& metadata_as(const metadata_value& value, const std::string& key) {
  if (const T* p = std::get_if<T>(&value)) return *p;
  throw metadata_type_error("metadata key \"" + key + "\" does not hold a " +
                            detail::metadata_type_name<T>());
}

}  // namespace empipe
