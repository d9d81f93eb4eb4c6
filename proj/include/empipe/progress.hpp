#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace empipe {

/// Receives overall progress in [0,1] plus a label for the running phase.
/// Fractions delivered over one run are nondecreasing. Callbacks arrive on
/// the strand executing the pipeline.
class progress_indicator {
 public:
  virtual ~progress_indicator() = default;
  virtual void update(double fraction, std::string_view phase_label) = 0;
};

class null_progress_indicator final : public progress_indicator {
 public:
  void update(double, std::string_view) override {}
};

/// Renders a single console progress bar, redrawn when progress advances
/// at least half a percent or the phase changes.
class console_progress_indicator final : public progress_indicator {
 public:
  void update(double fraction, std::string_view phase_label) override;
  ~console_progress_indicator() override;

 private:
  double last_drawn_ = -1.0;
  std::string last_label_;
  bool drew_anything_ = false;
};

/// Per-pipeline record of how long each phase took, kept for the largest
/// instance size seen. Drives the weighting of the overall progress bar.
class execution_time_db {
 public:
  struct record {
    std::uint64_t instance_size = 0;
    std::vector<std::uint64_t> phase_durations_ms;
  };

  /// Stores `rec` under `pipeline_id` iff its instance size is at least the
  /// stored one. Returns true when the record was kept.
  bool update(const std::string& pipeline_id, record rec);

  const record* find(const std::string& pipeline_id) const;
  std::size_t size() const { return records_.size(); }
  const std::map<std::string, record>& records() const { return records_; }

 private:
  std::map<std::string, record> records_;
};

/// Reads a time database. A missing file yields an empty db; a malformed
/// one raises format_error naming the offending line.
execution_time_db db_load(const std::filesystem::path& path);

/// Writes the database atomically (temp file + rename), records sorted by
/// pipeline id. First line is the format tag "EMTDB 1"; each record line is
/// id, instance size, phase count and the per-phase durations in
/// milliseconds, tab-separated.
void db_store(const std::filesystem::path& path, const execution_time_db& db);

/// Fraction of expected execution time per phase: the stored durations
/// normalized to sum 1 when a record with a matching phase count exists,
/// uniform 1/phase_count otherwise.
std::vector<double> phase_progress_weights(const execution_time_db& db,
                                           const std::string& pipeline_id,
                                           std::size_t phase_count);

}  // namespace empipe
