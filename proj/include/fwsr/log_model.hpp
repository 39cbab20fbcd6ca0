#pragma once

// Record schema and timestamp handling for semicolon-delimited firewall
// log exports (num;date;time;orig;type;action;alert;if_name;if_dir;proto;
// src;dst;service;s_port;len;rule;icmp-type;icmp-code;h_len;ip_vers;sys_msgs).

#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>

namespace fwsr {

inline constexpr std::size_t kFieldCount = 21;

inline constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "num",  "date",     "time",      "orig",      "type",  "action",  "alert",
    "if_name", "if_dir", "proto",    "src",       "dst",   "service", "s_port",
    "len",  "rule",     "icmp-type", "icmp-code", "h_len", "ip_vers", "sys_msgs"};

struct LogRecord {
  std::optional<std::uint64_t> num;
  std::string date;
  std::string time;
  std::string orig;
  std::string msg_type;
  std::string action;
  std::string alert;
  std::string if_name;
  std::string if_dir;
  std::string proto;
  std::string src;
  std::string dst;
  std::string service;
  std::string s_port;
  std::string len;
  std::string rule;
  std::string icmp_type;
  std::string icmp_code;
  std::string h_len;
  std::string ip_vers;
  std::string sys_msgs;

  bool operator==(const LogRecord&) const = default;
};

/// Calendar date-time, ordered field by field from year down to second.
struct Timestamp {
  int year = 0;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;

  auto operator<=>(const Timestamp&) const = default;
};

class MalformedTimestamp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::string_view, 12> kMonthAbbrev = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

inline constexpr std::array<std::string_view, 7> kWeekdayAbbrev = {
    "Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};

namespace detail {

inline constexpr bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

inline constexpr bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline constexpr char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
  }
  return true;
}

// Parses a run of digits whose length lies in [min_len, max_len].
inline std::optional<int> parse_digits(std::string_view s, std::size_t min_len,
                                       std::size_t max_len) {
  if (s.size() < min_len || s.size() > max_len) return std::nullopt;
  for (char c : s) {
    if (!is_digit(c)) return std::nullopt;
  }
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Strips leading and trailing ASCII whitespace.
inline std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && detail::is_space(s[b])) ++b;
  while (e > b && detail::is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

/// Case-insensitive lookup of a three-letter English month abbreviation.
inline std::optional<int> month_from_abbrev(std::string_view token) {
  for (std::size_t i = 0; i < kMonthAbbrev.size(); ++i) {
    if (detail::iequals(token, kMonthAbbrev[i])) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

/// Parses the export's `date` ("17Nov2006") and `time` ("14:10:43",
/// " 8:42:14") fields. Throws MalformedTimestamp on anything else.
inline Timestamp parse_timestamp(std::string_view date, std::string_view time) {
  date = trim(date);
  time = trim(time);

  std::size_t day_len = 0;
  while (day_len < date.size() && detail::is_digit(date[day_len])) ++day_len;
  if (day_len == 0 || day_len > 2 || date.size() != day_len + 3 + 4) {
    throw MalformedTimestamp("malformed date '" + std::string(date) + "'");
  }
  auto day = detail::parse_digits(date.substr(0, day_len), 1, 2);
  auto month = month_from_abbrev(date.substr(day_len, 3));
  auto year = detail::parse_digits(date.substr(day_len + 3), 4, 4);
  if (!day || !month || !year) {
    throw MalformedTimestamp("malformed date '" + std::string(date) + "'");
  }

  auto c1 = time.find(':');
  auto c2 = c1 == std::string_view::npos ? c1 : time.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw MalformedTimestamp("malformed time '" + std::string(time) + "'");
  }
  auto hour = detail::parse_digits(time.substr(0, c1), 1, 2);
  auto minute = detail::parse_digits(time.substr(c1 + 1, c2 - c1 - 1), 2, 2);
  auto second = detail::parse_digits(time.substr(c2 + 1), 2, 2);
  if (!hour || !minute || !second) {
    throw MalformedTimestamp("malformed time '" + std::string(time) + "'");
  }

  Timestamp ts{*year, *month, *day, *hour, *minute, *second};
  if (ts.day < 1 || ts.day > 31 || ts.hour > 23 || ts.minute > 59 || ts.second > 59) {
    throw MalformedTimestamp("timestamp component out of range: '" + std::string(date) +
                             " " + std::string(time) + "'");
  }
  return ts;
}

/// Non-throwing variant used where an unparseable timestamp simply means
/// "no timestamp".
inline std::optional<Timestamp> try_parse_timestamp(std::string_view date,
                                                    std::string_view time) noexcept {
  try {
    return parse_timestamp(date, time);
  } catch (...) {
    return std::nullopt;
  }
}

inline std::strong_ordering compare_timestamps(const Timestamp& a, const Timestamp& b) {
  return a <=> b;
}

/// Day of week for a proleptic Gregorian date, 0 = Sunday.
inline int weekday(int year, int month, int day) {
  static constexpr int offsets[] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
  if (month < 3) year -= 1;
  return (year + year / 4 - year / 100 + year / 400 + offsets[month - 1] + day) % 7;
}

namespace detail {

inline std::string two_digits(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

inline std::string clock_part(const Timestamp& ts) {
  return two_digits(ts.hour) + ":" + two_digits(ts.minute) + ":" + two_digits(ts.second);
}

}  // namespace detail

/// Export-field form: ("17Nov2006", "14:10:43").
inline std::pair<std::string, std::string> to_export_fields(const Timestamp& ts) {
  return {detail::two_digits(ts.day) + std::string(kMonthAbbrev[ts.month - 1]) +
              std::to_string(ts.year),
          detail::clock_part(ts)};
}

/// Report form: "17 Feb 2006 07:13:02".
inline std::string to_report_string(const Timestamp& ts) {
  return std::to_string(ts.day) + " " + std::string(kMonthAbbrev[ts.month - 1]) + " " +
         std::to_string(ts.year) + " " + detail::clock_part(ts);
}

/// Report form with weekday: "Fri 17 Feb 2006 07:13:02".
inline std::string to_dated_report_string(const Timestamp& ts) {
  return std::string(kWeekdayAbbrev[weekday(ts.year, ts.month, ts.day)]) + " " +
         to_report_string(ts);
}

inline std::string to_iso8601(const Timestamp& ts) {
  std::string year = std::to_string(ts.year);
  while (year.size() < 4) year.insert(year.begin(), '0');
  return year + "-" + detail::two_digits(ts.month) + "-" + detail::two_digits(ts.day) + "T" +
         detail::clock_part(ts);
}

/// Inverse of to_iso8601 ("YYYY-MM-DDTHH:MM:SS").
inline Timestamp parse_iso8601(std::string_view s) {
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':') {
    throw MalformedTimestamp("malformed ISO-8601 timestamp '" + std::string(s) + "'");
  }
  auto y = detail::parse_digits(s.substr(0, 4), 4, 4);
  auto mo = detail::parse_digits(s.substr(5, 2), 2, 2);
  auto d = detail::parse_digits(s.substr(8, 2), 2, 2);
  auto h = detail::parse_digits(s.substr(11, 2), 2, 2);
  auto mi = detail::parse_digits(s.substr(14, 2), 2, 2);
  auto se = detail::parse_digits(s.substr(17, 2), 2, 2);
  if (!y || !mo || !d || !h || !mi || !se || *mo < 1 || *mo > 12 || *d < 1 || *d > 31 ||
      *h > 23 || *mi > 59 || *se > 59) {
    throw MalformedTimestamp("malformed ISO-8601 timestamp '" + std::string(s) + "'");
  }
  return Timestamp{*y, *mo, *d, *h, *mi, *se};
}

}  // namespace fwsr
