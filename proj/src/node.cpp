#include "empipe/node.hpp"

#include "empipe/detail/run_context.hpp"
#include "empipe/pipeline.hpp"

namespace empipe {

void node::go() {
  throw contract_violation("node \"" + name_ + "\" is a phase initiator but does not implement go()");
}

void node::set_minimum_memory(std::uint64_t bytes) {
  request_.minimum_bytes = bytes;
  if (request_.maximum_bytes && *request_.maximum_bytes < bytes) request_.maximum_bytes = bytes;
}

void node::set_maximum_memory(std::uint64_t bytes) { request_.maximum_bytes = bytes; }

void node::set_unbounded_maximum_memory() { request_.maximum_bytes.reset(); }

void node::set_memory_priority(double priority) {
  if (priority <= 0.0)
    throw contract_violation("node \"" + name_ + "\": memory priority must be > 0");
  request_.priority = priority;
}

std::uint64_t node::get_available_memory() const {
  if (!grant_valid_ || (stage_ != node_stage::streaming && stage_ != node_stage::finished))
    throw contract_violation("node \"" + name_ +
                             "\": get_available_memory() is only valid from begin() onward");
  return grant_;
}

detail::run_context& node::context_for(const char* what) const {
  if (owner_ == nullptr || owner_->active_run_ == nullptr)
    throw contract_violation("node \"" + name_ + "\": " + what +
                             " requires an executing pipeline");
  return *owner_->active_run_;
}

void node::forward(std::string key, metadata_value value) {
  context_for("forward()").on_forward(*this, std::move(key), std::move(value));
}

const metadata_value* node::fetch_raw(const std::string& key) const {
  const metadata_value* v = context_for("fetch()").on_fetch(*this, key);
  if (v == nullptr)
    throw missing_metadata("node \"" + name_ + "\": no reachable component forwarded key \"" +
                           key + "\"");
  return v;
}

const metadata_value* node::try_fetch_raw(const std::string& key) const {
  return context_for("fetch()").on_fetch(*this, key);
}

void node::set_steps(std::uint64_t n) { context_for("set_steps()").on_set_steps(*this, n); }

void node::step(std::uint64_t k) { context_for("step()").on_step(*this, k); }

void node::require_streaming_window() const {
  if (stage_ != node_stage::streaming)
    throw contract_violation("node \"" + name_ +
                             "\" received an item outside its begin()/end() window");
}

void node::declare_push_destination(const node& dest) { pending_push_dests_.push_back(&dest); }

void node::declare_pull_source(const node& source) { pending_pull_sources_.push_back(&source); }

}  // namespace empipe
