#pragma once

// Command-line front end: `fwsr <s|d|u|i|a|h> [flags]`.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fwsr/aggregator.hpp"
#include "fwsr/parser.hpp"
#include "fwsr/report_renderer.hpp"

namespace fwsr::cli {

enum class Selector { source, destination, service, interface, all, help };

struct Command {
  Selector selector = Selector::help;
  std::optional<std::string> input_path;   // stdin when absent
  std::optional<std::string> output_path;  // stdout when absent
  std::size_t top_n = 10;
  MatchMode match_mode = MatchMode::exact;
  OutputFormat format = OutputFormat::text;
  std::optional<std::string> generated_on;

  bool operator==(const Command&) const = default;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitIoFailure = 1;
inline constexpr int kExitUsage = 2;

inline std::string help_text() {
  return "You need to pass command line argument: Following options are available\n"
         "\n"
         "s - Create the Source Addresses report\n"
         "d - Create the Destination Address report\n"
         "u - Create the Service Usage report\n"
         "i - Create the Network Interface report\n"
         "a - Create all reports\n"
         "h - Display the help screen\n"
         "\n"
         "Usage: fwsr <selector> [--input PATH] [--output PATH] [--top N]\n"
         "            [--match-mode exact|legacy] [--format text|jsonl]\n"
         "            [--generated-on STRING]\n"
         "\n"
         "  --input PATH          log export to read (default: standard input)\n"
         "  --output PATH         report destination (default: standard output)\n"
         "  --top N               rows per report, N >= 1 (default: 10)\n"
         "  --match-mode MODE     exact (default) counts identical keys only;\n"
         "                        legacy counts every occurrence containing the key\n"
         "                        as a case-insensitive substring\n"
         "  --format FORMAT       text (default) or jsonl\n"
         "  --generated-on STRING fixed 'Report generated on:' value\n";
}

inline std::optional<Selector> selector_from_string(std::string_view s) {
  if (s == "s") return Selector::source;
  if (s == "d") return Selector::destination;
  if (s == "u") return Selector::service;
  if (s == "i") return Selector::interface;
  if (s == "a") return Selector::all;
  if (s == "h") return Selector::help;
  return std::nullopt;
}

/// A missing or unknown selector selects help. Malformed or unknown flags
/// throw UsageError.
inline Command parse_args(std::span<const std::string> args) {
  CLI::App app{"Firewall log status reporter", "fwsr"};
  app.set_help_flag();
  app.allow_windows_style_options(false);

  std::string selector;
  std::string input, output, generated_on;
  std::size_t top_n = 10;
  std::string mode = "exact";
  std::string format = "text";

  app.add_option("selector", selector);
  auto* in_opt = app.add_option("--input", input);
  auto* out_opt = app.add_option("--output", output);
  app.add_option("--top", top_n)->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  app.add_option("--match-mode", mode)->check(CLI::IsMember({"exact", "legacy"}));
  app.add_option("--format", format)->check(CLI::IsMember({"text", "jsonl"}));
  auto* gen_opt = app.add_option("--generated-on", generated_on);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  Command cmd;
  cmd.selector = selector_from_string(selector).value_or(Selector::help);
  if (*in_opt) cmd.input_path = input;
  if (*out_opt) cmd.output_path = output;
  cmd.top_n = top_n;
  cmd.match_mode = mode == "legacy" ? MatchMode::legacy_substring : MatchMode::exact;
  cmd.format = format == "jsonl" ? OutputFormat::jsonl : OutputFormat::text;
  if (*gen_opt) cmd.generated_on = generated_on;
  return cmd;
}

inline std::vector<ReportKind> selected_kinds(Selector s) {
  switch (s) {
    case Selector::source: return {ReportKind::source};
    case Selector::destination: return {ReportKind::destination};
    case Selector::service: return {ReportKind::service};
    case Selector::interface: return {ReportKind::interface};
    case Selector::all: return {kAllReportKinds.begin(), kAllReportKinds.end()};
    case Selector::help: return {};
  }
  return {};
}

inline std::string format_diagnostic(std::string_view source, const ParseDiagnostic& d) {
  return std::string(source) + ":" + std::to_string(d.line_number) + ": " +
         std::string(to_string(d.severity)) + ": " + d.message + "\n";
}

/// Executes a parsed command. `in`/`out` stand in for the standard
/// streams when no path is given; diagnostics go to `err`.
inline int run(const Command& cmd, std::istream& in, std::ostream& out, std::ostream& err) {
  if (cmd.selector == Selector::help) {
    out << help_text();
    return out ? kExitOk : kExitIoFailure;
  }

  std::ifstream file;
  std::istream* source = &in;
  const std::string source_name = cmd.input_path.value_or("<stdin>");
  if (cmd.input_path) {
    file.open(*cmd.input_path, std::ios::binary);
    if (!file) {
      err << "fwsr: cannot open input '" << *cmd.input_path << "'\n";
      return kExitIoFailure;
    }
    source = &file;
  }

  ReportAccumulator acc;
  try {
    LogReader reader(*source,
                     [&](const ParseDiagnostic& d) { err << format_diagnostic(source_name, d); });
    while (auto rec = reader.next()) acc.add(*rec);
  } catch (const IoFailure& e) {
    err << "fwsr: failed reading '" << source_name << "': " << e.what() << "\n";
    return kExitIoFailure;
  }

  std::vector<Section> sections;
  for (ReportKind kind : selected_kinds(cmd.selector)) {
    FrequencyTable table = acc.table(kind, cmd.match_mode);
    if (table.empty_keys > 0) {
      err << "fwsr: " << table.empty_keys << " log record(s) with an empty " << to_string(kind)
          << " key excluded\n";
    }
    sections.push_back({kind, rank_entries(table, cmd.top_n)});
  }

  RenderOptions opts{cmd.generated_on, cmd.top_n, cmd.format};
  const std::string document = cmd.format == OutputFormat::jsonl
                                   ? render_jsonl(sections, acc.stats(), opts)
                                   : render_report(sections, acc.stats(), opts);

  if (cmd.output_path) {
    std::ofstream dest(*cmd.output_path, std::ios::binary | std::ios::trunc);
    if (!dest || !dest.write(document.data(), static_cast<std::streamsize>(document.size())) ||
        !dest.flush()) {
      err << "fwsr: cannot write output '" << *cmd.output_path << "'\n";
      return kExitIoFailure;
    }
  } else {
    out.write(document.data(), static_cast<std::streamsize>(document.size()));
    out.flush();
    if (!out) {
      err << "fwsr: cannot write to standard output\n";
      return kExitIoFailure;
    }
  }
  return kExitOk;
}

/// parse_args + run with the exit-code policy: usage errors print the
/// message and help text on `err` and return 2.
inline int main(std::span<const std::string> args, std::istream& in, std::ostream& out,
                std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(args);
  } catch (const UsageError& e) {
    err << "fwsr: " << e.what() << "\n\n" << help_text();
    return kExitUsage;
  }
  return run(cmd, in, out, err);
}

}  // namespace fwsr::cli
