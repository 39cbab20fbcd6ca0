#pragma once

// Text and JSON Lines rendering of the summary header and report sections.
//
// Text layout (LF line endings):
//
//   -------------------------------          31 dashes
//   | Firewall Log Summary Report |
//   -------------------------------
//   Report generated on:<generated_on>
//   Period for matched data: <D Mon YYYY HH:MM:SS> to <...>   (only if known)
//   Total entries processed: <n>
//   Inbound traffic: <n>
//   Outbound traffic: <n>
//   <blank>
//
// followed by one block per selected report, in source, destination,
// service, interface order:
//
//   ==========================               26 equals signs
//   <title>
//   ==========================
//     <key, first 16 chars>\t<count>\t<percent>%
//   <-----Top <rows> of <distinct> Entries----->
//   <blank>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fwsr/aggregator.hpp"
#include "fwsr/log_model.hpp"

namespace fwsr {

enum class OutputFormat { text, jsonl };

struct RenderOptions {
  std::optional<std::string> generated_on;  // overrides the wall clock
  std::size_t top_n = 10;
  OutputFormat format = OutputFormat::text;
};

struct Section {
  ReportKind kind = ReportKind::source;
  Report report;

  bool operator==(const Section&) const = default;
};

/// Everything a rendered document carries; the JSONL form decodes back
/// into this.
struct ReportDocument {
  std::string generated_on;
  SummaryStats stats;
  std::vector<Section> sections;

  bool operator==(const ReportDocument&) const = default;
};

inline constexpr std::size_t kDisplayKeyWidth = 16;
inline constexpr std::size_t kBannerRuleWidth = 31;
inline constexpr std::size_t kSectionRuleWidth = 26;

inline std::string_view section_title(ReportKind kind) {
  switch (kind) {
    case ReportKind::source: return "Users/Source Addressess :";
    case ReportKind::destination: return "Users/Destination Addressess :";
    case ReportKind::service: return "Service Usage :";
    case ReportKind::interface: return "Network Interface Usage :";
  }
  return "";
}

namespace detail {

// Byte length of the UTF-8 sequence starting at s[i]; malformed bytes
// count as one character each.
inline std::size_t utf8_char_len(std::string_view s, std::size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  std::size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3
                               : (c & 0xF8) == 0xF0   ? 4
                                                      : 1;
  if (i + len > s.size()) return 1;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 1;
  }
  return len;
}

}  // namespace detail

inline std::size_t char_count(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); i += detail::utf8_char_len(s, i)) ++n;
  return n;
}

/// First 16 characters of `key` (the whole key when shorter).
inline std::string truncate_key(std::string_view key) {
  std::size_t i = 0;
  for (std::size_t n = 0; n < kDisplayKeyWidth && i < key.size(); ++n) {
    i += detail::utf8_char_len(key, i);
  }
  return std::string(key.substr(0, i));
}

/// Wall-clock local time as "Www D Mon YYYY HH:MM:SS".
inline std::string current_time_string() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  Timestamp ts{tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec};
  return to_dated_report_string(ts);
}

inline std::string resolve_generated_on(const RenderOptions& opts) {
  return opts.generated_on ? *opts.generated_on : current_time_string();
}

namespace detail {

inline void render_header_into(std::string& out, const SummaryStats& stats,
                               std::string_view generated_on) {
  const std::string rule(kBannerRuleWidth, '-');
  out += rule + "\n| Firewall Log Summary Report |\n" + rule + "\n";
  out += "Report generated on:";
  out += generated_on;
  out += '\n';
  if (stats.period_start && stats.period_end) {
    out += "Period for matched data: " + to_report_string(*stats.period_start) + " to " +
           to_report_string(*stats.period_end) + "\n";
  }
  out += "Total entries processed: " + std::to_string(stats.total_log_records) + "\n";
  out += "Inbound traffic: " + std::to_string(stats.inbound) + "\n";
  out += "Outbound traffic: " + std::to_string(stats.outbound) + "\n";
  out += '\n';
}

inline std::vector<Section> in_kind_order(std::span<const Section> sections) {
  std::vector<Section> ordered(sections.begin(), sections.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Section& a, const Section& b) { return a.kind < b.kind; });
  return ordered;
}

}  // namespace detail

inline std::string render_header(const SummaryStats& stats, const RenderOptions& opts) {
  std::string out;
  detail::render_header_into(out, stats, resolve_generated_on(opts));
  return out;
}

inline std::string render_section(ReportKind kind, std::span<const ReportEntry> entries,
                                  std::size_t total_distinct) {
  const std::string rule(kSectionRuleWidth, '=');
  std::string out = rule + "\n" + std::string(section_title(kind)) + "\n" + rule + "\n";
  for (const auto& e : entries) {
    out += "  " + truncate_key(e.key) + "\t" + std::to_string(e.count) + "\t" + e.percent + "%\n";
  }
  out += "<-----Top " + std::to_string(entries.size()) + " of " + std::to_string(total_distinct) +
         " Entries----->\n\n";
  return out;
}

inline std::string render_section(const Section& s) {
  return render_section(s.kind, s.report.entries, s.report.total_distinct);
}

inline std::string render_document(const ReportDocument& doc) {
  std::string out;
  detail::render_header_into(out, doc.stats, doc.generated_on);
  for (const auto& s : detail::in_kind_order(doc.sections)) out += render_section(s);
  return out;
}

/// Header plus the given sections, reordered to source, destination,
/// service, interface.
inline std::string render_report(std::span<const Section> sections, const SummaryStats& stats,
                                 const RenderOptions& opts) {
  return render_document(
      {resolve_generated_on(opts), stats, std::vector<Section>(sections.begin(), sections.end())});
}

// JSON Lines form. One object per line, discriminated by "record":
//   summary  total, inbound, outbound, period_start, period_end (ISO-8601
//            or null), generated_on
//   section  kind, shown, total_distinct, total_occurrences
//   row      kind, rank (1-based), key (untruncated), count, percent,
//            total_distinct
// Rows follow their section record in text-report order.

namespace detail {

inline std::string dump_line(const nlohmann::ordered_json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

inline nlohmann::ordered_json optional_iso(const std::optional<Timestamp>& ts) {
  return ts ? nlohmann::ordered_json(to_iso8601(*ts)) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

inline std::string render_jsonl_document(const ReportDocument& doc) {
  using nlohmann::ordered_json;
  std::string out;
  ordered_json summary;
  summary["record"] = "summary";
  summary["total"] = doc.stats.total_log_records;
  summary["inbound"] = doc.stats.inbound;
  summary["outbound"] = doc.stats.outbound;
  summary["period_start"] = detail::optional_iso(doc.stats.period_start);
  summary["period_end"] = detail::optional_iso(doc.stats.period_end);
  summary["generated_on"] = doc.generated_on;
  out += detail::dump_line(summary);

  for (const auto& s : detail::in_kind_order(doc.sections)) {
    ordered_json head;
    head["record"] = "section";
    head["kind"] = to_string(s.kind);
    head["shown"] = s.report.entries.size();
    head["total_distinct"] = s.report.total_distinct;
    head["total_occurrences"] = s.report.total_occurrences;
    out += detail::dump_line(head);
    std::size_t rank = 0;
    for (const auto& e : s.report.entries) {
      ordered_json row;
      row["record"] = "row";
      row["kind"] = to_string(s.kind);
      row["rank"] = ++rank;
      row["key"] = e.key;
      row["count"] = e.count;
      row["percent"] = e.percent;
      row["total_distinct"] = s.report.total_distinct;
      out += detail::dump_line(row);
    }
  }
  return out;
}

inline std::string render_jsonl(std::span<const Section> sections, const SummaryStats& stats,
                                const RenderOptions& opts) {
  return render_jsonl_document(
      {resolve_generated_on(opts), stats, std::vector<Section>(sections.begin(), sections.end())});
}

class JsonlFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decodes render_jsonl output. Throws JsonlFormatError on structural
/// problems.
inline ReportDocument parse_jsonl(std::string_view text) {
  ReportDocument doc;
  bool have_summary = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw JsonlFormatError("line " + std::to_string(line_no) + ": " + msg);
  };
  auto optional_ts = [](const nlohmann::json& v) -> std::optional<Timestamp> {
    if (v.is_null()) return std::nullopt;
    return parse_iso8601(v.get<std::string>());
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto record = j.at("record").get<std::string>();
      if (record == "summary") {
        doc.stats.total_log_records = j.at("total").get<std::uint64_t>();
        doc.stats.inbound = j.at("inbound").get<std::uint64_t>();
        doc.stats.outbound = j.at("outbound").get<std::uint64_t>();
        doc.stats.period_start = optional_ts(j.at("period_start"));
        doc.stats.period_end = optional_ts(j.at("period_end"));
        doc.generated_on = j.at("generated_on").get<std::string>();
        have_summary = true;
      } else if (record == "section") {
        auto kind = report_kind_from_string(j.at("kind").get<std::string>());
        if (!kind) fail("unknown report kind");
        Section s;
        s.kind = *kind;
        s.report.total_distinct = j.at("total_distinct").get<std::size_t>();
        s.report.total_occurrences = j.at("total_occurrences").get<std::uint64_t>();
        doc.sections.push_back(std::move(s));
      } else if (record == "row") {
        auto kind = report_kind_from_string(j.at("kind").get<std::string>());
        if (doc.sections.empty() || !kind || doc.sections.back().kind != *kind) {
          fail("row outside its section");
        }
        doc.sections.back().report.entries.push_back({j.at("key").get<std::string>(),
                                                      j.at("count").get<std::uint64_t>(),
                                                      j.at("percent").get<std::string>()});
      } else {
        fail("unknown record type '" + record + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      fail(e.what());
    } catch (const MalformedTimestamp& e) {
      fail(e.what());
    }
  }
  if (!have_summary) throw JsonlFormatError("missing summary record");
  return doc;
}

}  // namespace fwsr
