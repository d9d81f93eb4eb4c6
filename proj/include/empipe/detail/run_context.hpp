#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "empipe/metadata.hpp"
#include "empipe/progress.hpp"

namespace empipe {

class node;
class pipeline;

namespace detail {

/// Per-run state shared between the executor and the node-facing API
/// (forward, fetch, set_steps, step). Owned by the executor for the
/// duration of one run; the pipeline holds a pointer while active.
struct run_context {
  explicit run_context(pipeline& pl) : owner(pl) {}

  pipeline& owner;
  metadata_store store;
  std::vector<std::vector<bool>> reachable;  // [origin][target], reflexive
  progress_indicator* indicator = nullptr;

  // Progress bookkeeping for the phase currently executing.
  double base_fraction = 0.0;
  double phase_weight = 0.0;
  std::uint64_t declared_total = 0;
  std::uint64_t completed_total = 0;
  double last_reported = -1.0;
  std::string phase_label;

  bool reaches(std::size_t origin, std::size_t target) const {
    return origin == target || reachable[origin][target];
  }

  void on_forward(const node& n, std::string key, metadata_value value);
  const metadata_value* on_fetch(const node& n, const std::string& key) const;
  void on_set_steps(node& n, std::uint64_t steps);
  void on_step(node& n, std::uint64_t k);

  void report(double fraction);
  double phase_fraction() const;
};

}  // namespace detail
}  // namespace empipe
