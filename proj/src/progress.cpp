#include "empipe/progress.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "empipe/errors.hpp"

namespace empipe {

void console_progress_indicator::update(double fraction, std::string_view phase_label) {
  if (fraction < last_drawn_ + 0.005 && phase_label == last_label_ && fraction < 1.0) return;
  last_drawn_ = fraction;
  last_label_.assign(phase_label);
  int percent = static_cast<int>(fraction * 100.0 + 0.5);
  int filled = percent / 2;
  std::string bar(static_cast<std::size_t>(filled), '#');
  bar.resize(50, ' ');
  std::fprintf(stderr, "\r[%s] %3d%% %s", bar.c_str(), percent,
               std::string(phase_label).c_str());
  std::fflush(stderr);
  drew_anything_ = true;
}

console_progress_indicator::~console_progress_indicator() {
  if (drew_anything_) std::fprintf(stderr, "\n");
}

bool execution_time_db::update(const std::string& pipeline_id, record rec) {
  auto it = records_.find(pipeline_id);
  if (it != records_.end() && rec.instance_size < it->second.instance_size) return false;
  records_[pipeline_id] = std::move(rec);
  return true;
}

const execution_time_db::record* execution_time_db::find(const std::string& pipeline_id) const {
  auto it = records_.find(pipeline_id);
  return it == records_.end() ? nullptr : &it->second;
}

namespace {
constexpr const char* kDbTag = "EMTDB 1";

std::uint64_t parse_u64(const std::string& field, std::size_t line_no) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw format_error("time database line " + std::to_string(line_no) +
                       ": expected an integer, got \"" + field + "\"");
  }
}
}  // namespace

execution_time_db db_load(const std::filesystem::path& path) {
  execution_time_db db;
  std::ifstream in(path);
  if (!in.is_open()) return db;  // a missing database is an empty database

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) return db;  // empty file
  ++line_no;
  if (line != kDbTag)
    throw format_error("time database line 1: expected header \"" + std::string(kDbTag) +
                       "\", got \"" + line + "\"");

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 3)
      throw format_error("time database line " + std::to_string(line_no) +
                         ": expected id, instance size and phase count");
    execution_time_db::record rec;
    rec.instance_size = parse_u64(fields[1], line_no);
    std::uint64_t phase_count = parse_u64(fields[2], line_no);
    if (fields.size() != 3 + phase_count)
      throw format_error("time database line " + std::to_string(line_no) + ": expected " +
                         std::to_string(phase_count) + " durations, got " +
                         std::to_string(fields.size() - 3));
    for (std::size_t i = 0; i < phase_count; ++i)
      rec.phase_durations_ms.push_back(parse_u64(fields[3 + i], line_no));
    db.update(fields[0], std::move(rec));
  }
  return db;
}

void db_store(const std::filesystem::path& path, const execution_time_db& db) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out.is_open()) throw io_error("cannot write time database: " + tmp.string());
    out << kDbTag << "\n";
    for (const auto& [id, rec] : db.records()) {
      if (id.find('\t') != std::string::npos || id.find('\n') != std::string::npos)
        throw contract_violation("pipeline id may not contain tabs or newlines: " + id);
      out << id << '\t' << rec.instance_size << '\t' << rec.phase_durations_ms.size();
      for (std::uint64_t d : rec.phase_durations_ms) out << '\t' << d;
      out << '\n';
    }
    if (!out.good()) throw io_error("write failed on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("cannot replace time database " + path.string() + ": " + ec.message());
}

std::vector<double> phase_progress_weights(const execution_time_db& db,
                                           const std::string& pipeline_id,
                                           std::size_t phase_count) {
  std::vector<double> uniform(phase_count, phase_count ? 1.0 / static_cast<double>(phase_count) : 0.0);
  const auto* rec = db.find(pipeline_id);
  if (rec == nullptr || rec->phase_durations_ms.size() != phase_count) return uniform;
  std::uint64_t total = 0;
  for (std::uint64_t d : rec->phase_durations_ms) total += d;
  if (total == 0) return uniform;
  std::vector<double> weights;
  weights.reserve(phase_count);
  for (std::uint64_t d : rec->phase_durations_ms)
    weights.push_back(static_cast<double>(d) / static_cast<double>(total));
  return weights;
}

}  // namespace empipe
