#pragma once

// Line-oriented reader for semicolon-delimited firewall log exports.

#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fwsr/log_model.hpp"

namespace fwsr {

enum class Severity { info, warning, error };

inline std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
  }
  return "unknown";
}

struct ParseDiagnostic {
  std::uint64_t line_number = 0;  // physical, 1-based
  Severity severity = Severity::warning;
  std::string message;
  std::string raw_line;

  bool operator==(const ParseDiagnostic&) const = default;
};

struct ParseResult {
  std::vector<LogRecord> records;
  std::vector<ParseDiagnostic> diagnostics;
  std::uint64_t lines_read = 0;
};

/// Outcome of parsing one line. `record` is empty only when an error
/// diagnostic dropped the line.
struct ParsedLine {
  std::optional<LogRecord> record;
  std::vector<ParseDiagnostic> diagnostics;
};

class IoFailure : public std::runtime_error {
 public:
  explicit IoFailure(const std::string& what, std::vector<ParseDiagnostic> gathered = {})
      : std::runtime_error(what), diagnostics_(std::move(gathered)) {}

  const std::vector<ParseDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<ParseDiagnostic> diagnostics_;
};

/// Splits on every ';'. Adjacent and trailing separators yield empty
/// fields, so a line with k separators always yields k + 1 fields. Each
/// field is whitespace-trimmed.
inline std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  fields.reserve(kFieldCount);
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(';', start);
    if (pos == std::string_view::npos) {
      fields.emplace_back(trim(line.substr(start)));
      break;
    }
    fields.emplace_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

inline bool is_blank_line(std::string_view line) { return trim(line).empty(); }

inline bool is_header_line(std::string_view line) {
  std::size_t first = line.find(';');
  if (first == std::string_view::npos) return false;
  std::size_t second = line.find(';', first + 1);
  std::string_view f0 = trim(line.substr(0, first));
  std::string_view f1 = trim(line.substr(first + 1, second == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : second - first - 1));
  return f0 == "num" && f1 == "date";
}

/// True when `s` is well-formed UTF-8 (no overlongs, surrogates, or code
/// points past U+10FFFF).
inline bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

namespace detail {

// Bytes below 0x20 other than TAB fall outside the accepted 8-bit range.
inline bool has_control_bytes(std::string_view s) {
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (c < 0x20 && c != '\t') return true;
  }
  return false;
}

inline void assign_fields(LogRecord& r, std::span<std::string> f) {
  r.date = std::move(f[1]);
  r.time = std::move(f[2]);
  r.orig = std::move(f[3]);
  r.msg_type = std::move(f[4]);
  r.action = std::move(f[5]);
  r.alert = std::move(f[6]);
  r.if_name = std::move(f[7]);
  r.if_dir = std::move(f[8]);
  r.proto = std::move(f[9]);
  r.src = std::move(f[10]);
  r.dst = std::move(f[11]);
  r.service = std::move(f[12]);
  r.s_port = std::move(f[13]);
  r.len = std::move(f[14]);
  r.rule = std::move(f[15]);
  r.icmp_type = std::move(f[16]);
  r.icmp_code = std::move(f[17]);
  r.h_len = std::move(f[18]);
  r.ip_vers = std::move(f[19]);
  r.sys_msgs = std::move(f[20]);
}

}  // namespace detail

/// Assigns the fields of one data line positionally. Short lines are
/// padded with empty fields, long lines have everything from the 21st
/// field on folded back into sys_msgs. Both cases keep the record and
/// attach a warning.
inline ParsedLine parse_record(std::string_view line, std::uint64_t line_number) {
  ParsedLine out;
  auto diag = [&](Severity sev, std::string msg) {
    out.diagnostics.push_back({line_number, sev, std::move(msg), std::string(line)});
  };

  if (detail::has_control_bytes(line)) {
    diag(Severity::error, "line contains control bytes; record dropped");
    return out;
  }
  if (!is_valid_utf8(line)) {
    diag(Severity::warning, "line is not valid UTF-8; bytes kept verbatim");
  }

  std::vector<std::string> fields = split_record(line);
  const std::size_t found = fields.size();
  if (found < kFieldCount) {
    diag(Severity::warning, "expected " + std::to_string(kFieldCount) + " fields, found " +
                                std::to_string(found) + "; missing fields left empty");
    fields.resize(kFieldCount);
  } else if (found > kFieldCount) {
    diag(Severity::warning, "expected " + std::to_string(kFieldCount) + " fields, found " +
                                std::to_string(found) + "; extra fields folded into sys_msgs");
    std::string folded = std::move(fields[kFieldCount - 1]);
    for (std::size_t i = kFieldCount; i < found; ++i) {
      folded += ';';
      folded += fields[i];
    }
    fields.resize(kFieldCount);
    fields[kFieldCount - 1] = std::move(folded);
  }

  LogRecord rec;
  if (!fields[0].empty()) {
    std::uint64_t n = 0;
    const std::string& s = fields[0];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc{} && ptr == s.data() + s.size()) {
      rec.num = n;
    } else {
      diag(Severity::warning, "num field '" + s + "' is not a non-negative integer");
    }
  }
  detail::assign_fields(rec, fields);
  out.record = std::move(rec);
  return out;
}

/// Pull-style reader. Holds one line at a time; diagnostics are handed to
/// the sink as they occur.
class LogReader {
 public:
  using DiagnosticSink = std::function<void(const ParseDiagnostic&)>;

  struct Counts {
    std::uint64_t lines_read = 0;
    std::uint64_t records = 0;
    std::uint64_t blank = 0;
    std::uint64_t headers = 0;
    std::uint64_t errors = 0;
  };

  explicit LogReader(std::istream& in, DiagnosticSink sink = {})
      : in_(in), sink_(std::move(sink)) {}

  /// Next record, or nullopt at end of input. Throws IoFailure if the
  /// stream goes bad.
  std::optional<LogRecord> next() {
    while (read_line()) {
      const std::uint64_t n = counts_.lines_read;
      if (is_blank_line(line_)) {
        ++counts_.blank;
        continue;
      }
      if (is_header_line(line_)) {
        ++counts_.headers;
        emit({n, Severity::info, "schema header line skipped", line_});
        continue;
      }
      ParsedLine parsed = parse_record(line_, n);
      for (const auto& d : parsed.diagnostics) emit(d);
      if (!parsed.record) {
        ++counts_.errors;
        continue;
      }
      ++counts_.records;
      return std::move(parsed.record);
    }
    return std::nullopt;
  }

  const Counts& counts() const noexcept { return counts_; }

 private:
  bool read_line() {
    if (!std::getline(in_, line_)) {
      if (in_.bad()) throw IoFailure("input stream read failure");
      return false;
    }
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    ++counts_.lines_read;
    return true;
  }

  void emit(const ParseDiagnostic& d) {
    if (sink_) sink_(d);
  }

  std::istream& in_;
  DiagnosticSink sink_;
  std::string line_;
  Counts counts_;
};

/// Reads a whole stream into memory. Use LogReader directly when only
/// aggregates are needed.
inline ParseResult read_log(std::istream& in) {
  ParseResult result;
  LogReader reader(in, [&](const ParseDiagnostic& d) { result.diagnostics.push_back(d); });
  try {
    while (auto rec = reader.next()) result.records.push_back(std::move(*rec));
  } catch (const IoFailure& e) {
    throw IoFailure(e.what(), std::move(result.diagnostics));
  }
  result.lines_read = reader.counts().lines_read;
  return result;
}

}  // namespace fwsr
