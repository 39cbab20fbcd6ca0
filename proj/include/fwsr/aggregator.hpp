#pragma once

// Frequency aggregation over log-type records: key extraction, exact and
// legacy substring counting, percentages, ranking, and summary totals.

#include <algorithm>
#include <array>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fwsr/log_model.hpp"

namespace fwsr {

enum class MatchMode { exact, legacy_substring };

enum class ReportKind { source, destination, service, interface };

inline constexpr std::array<ReportKind, 4> kAllReportKinds = {
    ReportKind::source, ReportKind::destination, ReportKind::service, ReportKind::interface};

inline std::string_view to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::source: return "source";
    case ReportKind::destination: return "destination";
    case ReportKind::service: return "service";
    case ReportKind::interface: return "interface";
  }
  return "unknown";
}

inline std::optional<ReportKind> report_kind_from_string(std::string_view name) {
  for (ReportKind k : kAllReportKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

inline std::string_view to_string(MatchMode mode) {
  return mode == MatchMode::exact ? "exact" : "legacy";
}

/// Distinct key -> count. `total_occurrences` is the percentage
/// denominator; empty keys are tallied separately and excluded from it.
struct FrequencyTable {
  std::map<std::string, std::uint64_t> entries;
  std::uint64_t total_occurrences = 0;
  std::uint64_t empty_keys = 0;

  bool operator==(const FrequencyTable&) const = default;
};

struct ReportEntry {
  std::string key;
  std::uint64_t count = 0;
  std::string percent;  // exactly two fractional digits, no '%'

  bool operator==(const ReportEntry&) const = default;
};

struct Report {
  std::vector<ReportEntry> entries;  // sorted, truncated to top_n
  std::size_t total_distinct = 0;
  std::uint64_t total_occurrences = 0;

  bool operator==(const Report&) const = default;
};

struct SummaryStats {
  std::uint64_t total_log_records = 0;
  std::uint64_t inbound = 0;
  std::uint64_t outbound = 0;
  std::optional<Timestamp> period_start;
  std::optional<Timestamp> period_end;

  bool operator==(const SummaryStats&) const = default;
};

class ZeroTotal : public std::domain_error {
 public:
  ZeroTotal() : std::domain_error("percentage requested with a zero total") {}
};

inline bool is_log_record(const LogRecord& r) { return trim(r.msg_type) == "log"; }

inline std::vector<LogRecord> filter_log_records(std::span<const LogRecord> records) {
  std::vector<LogRecord> out;
  for (const auto& r : records) {
    if (is_log_record(r)) out.push_back(r);
  }
  return out;
}

/// Writes the report key for `kind` into `out`, reusing its capacity. A
/// composite whose components are all empty yields the empty key.
inline void extract_key_into(const LogRecord& r, ReportKind kind, std::string& out) {
  out.clear();
  switch (kind) {
    case ReportKind::source:
      out = r.src;
      break;
    case ReportKind::destination:
      out = r.dst;
      break;
    case ReportKind::service:
      out = r.proto;
      if (!r.service.empty()) {
        out += "__";
        out += r.service;
      }
      break;
    case ReportKind::interface:
      if (r.orig.empty() && r.if_name.empty() && r.if_dir.empty()) break;
      out = r.orig;
      out += "__";
      out += r.if_name;
      out += '_';
      out += r.if_dir;
      break;
  }
}

inline std::string extract_key(const LogRecord& r, ReportKind kind) {
  std::string key;
  extract_key_into(r, kind, key);
  return key;
}

/// Exact-count tally that can be fed one key at a time. Memory grows with
/// the number of distinct keys only.
class KeyCounter {
 public:
  void add(const std::string& key) {
    if (key.empty()) {
      ++empty_;
      return;
    }
    ++total_;
    auto it = counts_.find(key);
    if (it == counts_.end()) {
      counts_.emplace(key, 1);
    } else {
      ++it->second;
    }
  }

  void merge(const KeyCounter& other) {
    for (const auto& [k, c] : other.counts_) counts_[k] += c;
    total_ += other.total_;
    empty_ += other.empty_;
  }

  std::size_t distinct() const noexcept { return counts_.size(); }

  FrequencyTable table(MatchMode mode) const;

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::uint64_t empty_ = 0;
};

namespace detail {

inline std::string lower_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ascii_lower(c);
  return out;
}

// Legacy count of k = number of occurrences o with k a case-insensitive
// substring of o. Grouping occurrences by distinct value gives the sum of
// exact counts over the distinct values that contain k.
inline void apply_legacy_substring(FrequencyTable& table) {
  std::vector<std::pair<std::string, std::uint64_t>> lowered;
  lowered.reserve(table.entries.size());
  for (const auto& [k, c] : table.entries) lowered.emplace_back(lower_copy(k), c);

  std::map<std::string, std::uint64_t> legacy;
  for (const auto& [key, exact] : table.entries) {
    const std::string needle = lower_copy(key);
    std::uint64_t n = 0;
    for (const auto& [hay, c] : lowered) {
      if (hay.find(needle) != std::string::npos) n += c;
    }
    legacy.emplace(key, n);
  }
  table.entries = std::move(legacy);
}

}  // namespace detail

inline FrequencyTable KeyCounter::table(MatchMode mode) const {
  FrequencyTable t;
  t.entries.insert(counts_.begin(), counts_.end());
  t.total_occurrences = total_;
  t.empty_keys = empty_;
  if (mode == MatchMode::legacy_substring) detail::apply_legacy_substring(t);
  return t;
}

/// Counting can be split across `partitions` worker tasks; the per-task
/// tallies are merged in order (or reverse order). The result does not
/// depend on either setting.
struct CountOptions {
  std::size_t partitions = 1;
  bool reverse_merge = false;
};

inline FrequencyTable count_frequencies(std::span<const std::string> keys, MatchMode mode,
                                        CountOptions opts = {}) {
  const std::size_t parts = std::max<std::size_t>(1, std::min(opts.partitions, keys.size()));
  if (parts == 1) {
    KeyCounter counter;
    for (const auto& k : keys) counter.add(k);
    return counter.table(mode);
  }

  std::vector<std::future<KeyCounter>> tasks;
  const std::size_t chunk = (keys.size() + parts - 1) / parts;
  for (std::size_t begin = 0; begin < keys.size(); begin += chunk) {
    auto slice = keys.subspan(begin, std::min(chunk, keys.size() - begin));
    tasks.push_back(std::async(std::launch::async, [slice] {
      KeyCounter c;
      for (const auto& k : slice) c.add(k);
      return c;
    }));
  }
  std::vector<KeyCounter> partials;
  for (auto& t : tasks) partials.push_back(t.get());
  if (opts.reverse_merge) std::reverse(partials.begin(), partials.end());

  KeyCounter merged;
  for (const auto& p : partials) merged.merge(p);
  return merged.table(mode);
}

/// count / total * 100 with two decimals, rounded half away from zero on
/// the exact rational value.
inline std::string format_percent(std::uint64_t count, std::uint64_t total) {
  if (total == 0) throw ZeroTotal();
  // Scaled to hundredths of a percent: count * 10000 / total.
  const unsigned __int128 num = static_cast<unsigned __int128>(count) * 10000u;
  unsigned __int128 q = num / total;
  const unsigned __int128 r = num % total;
  if (2 * r >= total) ++q;
  const auto hundredths = static_cast<std::uint64_t>(q);
  std::string frac = std::to_string(hundredths % 100);
  if (frac.size() < 2) frac.insert(frac.begin(), '0');
  return std::to_string(hundredths / 100) + "." + frac;
}

/// Orders by count descending then key ascending (bytewise) and keeps the
/// first `top_n`.
inline Report rank_entries(const FrequencyTable& table, std::size_t top_n) {
  Report report;
  report.total_distinct = table.entries.size();
  report.total_occurrences = table.total_occurrences;

  std::vector<std::pair<std::string_view, std::uint64_t>> rows(table.entries.begin(),
                                                               table.entries.end());
  auto by_rank = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  const std::size_t shown = std::min(top_n, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(shown), rows.end(),
                    by_rank);
  report.entries.reserve(shown);
  for (std::size_t i = 0; i < shown; ++i) {
    report.entries.push_back({std::string(rows[i].first), rows[i].second,
                              format_percent(rows[i].second, table.total_occurrences)});
  }
  return report;
}

/// `records` must already be filtered to log-type messages.
inline Report build_report(std::span<const LogRecord> records, ReportKind kind, MatchMode mode,
                           std::size_t top_n) {
  KeyCounter counter;
  std::string key;
  for (const auto& r : records) {
    extract_key_into(r, kind, key);
    counter.add(key);
  }
  return rank_entries(counter.table(mode), top_n);
}

inline bool is_direction(std::string_view if_dir, std::string_view want) {
  return detail::iequals(trim(if_dir), want);
}

class SummaryAccumulator {
 public:
  void add(const LogRecord& r) {
    ++stats_.total_log_records;
    if (is_direction(r.if_dir, "inbound")) {
      ++stats_.inbound;
    } else if (is_direction(r.if_dir, "outbound")) {
      ++stats_.outbound;
    }
    if (auto ts = try_parse_timestamp(r.date, r.time)) {
      if (!stats_.period_start || *ts < *stats_.period_start) stats_.period_start = *ts;
      if (!stats_.period_end || *ts > *stats_.period_end) stats_.period_end = *ts;
    }
  }

  const SummaryStats& stats() const noexcept { return stats_; }

 private:
  SummaryStats stats_;
};

/// `records` must already be filtered to log-type messages.
inline SummaryStats summary_stats(std::span<const LogRecord> records) {
  SummaryAccumulator acc;
  for (const auto& r : records) acc.add(r);
  return acc.stats();
}

/// Single-pass aggregation of every report kind plus summary totals.
/// Non-log records are ignored.
class ReportAccumulator {
 public:
  void add(const LogRecord& r) {
    if (!is_log_record(r)) return;
    summary_.add(r);
    for (std::size_t i = 0; i < kAllReportKinds.size(); ++i) {
      extract_key_into(r, kAllReportKinds[i], key_);
      counters_[i].add(key_);
    }
  }

  const SummaryStats& stats() const noexcept { return summary_.stats(); }

  FrequencyTable table(ReportKind kind, MatchMode mode) const {
    return counters_[static_cast<std::size_t>(kind)].table(mode);
  }

  Report report(ReportKind kind, MatchMode mode, std::size_t top_n) const {
    return rank_entries(table(kind, mode), top_n);
  }

 private:
  SummaryAccumulator summary_;
  std::array<KeyCounter, kAllReportKinds.size()> counters_;
  std::string key_;
};

}  // namespace fwsr
