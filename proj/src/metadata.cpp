#include "empipe/metadata.hpp"

#include <algorithm>

namespace empipe {

void metadata_store::put(std::size_t origin, std::string key, metadata_value value) {
  auto& entries = by_key_[std::move(key)];
  for (auto& e : entries) {
    if (e.origin == origin) {  // same-origin duplicate: last write wins
      e.value = std::move(value);
      e.seq = next_seq_++;
      return;
    }
  }
  entries.push_back({origin, std::move(value), next_seq_++});
}

const metadata_value* metadata_store::lookup(std::size_t at, const std::string& key,
                                             const reachability_fn& reaches) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return nullptr;
  const metadata_value* best = nullptr;
  std::uint64_t best_seq = 0;
  for (const auto& e : it->second) {
    bool visible = e.origin == boundary_origin || e.origin == at || reaches(e.origin, at);
    if (!visible) continue;
    if (best == nullptr || e.seq > best_seq) {
      best = &e.value;
      best_seq = e.seq;
    }
  }
  return best;
}

}  // namespace empipe
