#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <sstream>

#include "fwsr/report_renderer.hpp"

namespace fwsr {
namespace {

const RenderOptions kPinned{"Fri 17 Nov 2006 15:00:00", 10, OutputFormat::text};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

bool has_line(const std::string& text, const std::string& line) {
  auto ls = lines_of(text);
  return std::find(ls.begin(), ls.end(), line) != ls.end();
}

SummaryStats paper_stats() {
  return {2735, 2734, 1, Timestamp{2006, 2, 17, 7, 13, 2}, Timestamp{2006, 2, 26, 23, 59, 1}};
}

TEST(TruncateKey, Examples) {
  EXPECT_EQ(truncate_key("corelinkmain01.foo.com"), "corelinkmain01.f");
  EXPECT_EQ(truncate_key("udp"), "udp");
  EXPECT_EQ(truncate_key("dhcp-100-101-167-22.example"), "dhcp-100-101-167");
  EXPECT_EQ(truncate_key(""), "");
  EXPECT_EQ(truncate_key("0123456789abcdef"), "0123456789abcdef");
}

TEST(TruncateKey, CountsCodePointsNotBytes) {
  // 17 two-byte characters.
  std::string key;
  for (int i = 0; i < 17; ++i) key += "\xC3\xA9";
  const std::string t = truncate_key(key);
  EXPECT_EQ(t.size(), 32u);
  EXPECT_EQ(char_count(t), 16u);
}

TEST(RenderHeader, PaperTotals) {
  const std::string h = render_header(paper_stats(), kPinned);
  EXPECT_TRUE(has_line(h, "Total entries processed: 2735"));
  EXPECT_TRUE(has_line(h, "Inbound traffic: 2734"));
  EXPECT_TRUE(has_line(h, "Outbound traffic: 1"));
  EXPECT_TRUE(has_line(h, "Period for matched data: 17 Feb 2006 07:13:02 to 26 Feb 2006 23:59:01"));
  EXPECT_TRUE(has_line(h, "Report generated on:Fri 17 Nov 2006 15:00:00"));
}

TEST(RenderHeader, ExactLayout) {
  SummaryStats s{2, 2, 0, Timestamp{2006, 11, 17, 14, 10, 43}, Timestamp{2006, 11, 17, 14, 10, 58}};
  EXPECT_EQ(render_header(s, kPinned),
            "-------------------------------\n"
            "| Firewall Log Summary Report |\n"
            "-------------------------------\n"
            "Report generated on:Fri 17 Nov 2006 15:00:00\n"
            "Period for matched data: 17 Nov 2006 14:10:43 to 17 Nov 2006 14:10:58\n"
            "Total entries processed: 2\n"
            "Inbound traffic: 2\n"
            "Outbound traffic: 0\n"
            "\n");
}

TEST(RenderHeader, NoPeriodWhenEmpty) {
  const std::string h = render_header(SummaryStats{}, kPinned);
  EXPECT_EQ(h.find("Period for matched data"), std::string::npos);
  EXPECT_TRUE(has_line(h, "Total entries processed: 0"));
  EXPECT_TRUE(has_line(h, "Inbound traffic: 0"));
  EXPECT_TRUE(has_line(h, "Outbound traffic: 0"));
}

TEST(RenderHeader, WallClockFormat) {
  const std::string h = render_header(SummaryStats{}, RenderOptions{});
  const std::regex pattern(
      "Report generated on:(Sun|Mon|Tue|Wed|Thu|Fri|Sat) [0-9]{1,2} "
      "(Jan|Feb|Mar|Apr|May|Jun|Jul|Aug|Sep|Oct|Nov|Dec) [0-9]{4} [0-9]{2}:[0-9]{2}:[0-9]{2}");
  EXPECT_TRUE(std::regex_search(h, pattern)) << h;
}

TEST(RenderSection, RowAndFooter) {
  std::vector<ReportEntry> entries{{"udp__ntp-udp", 2669, "97.59"}};
  const std::string s = render_section(ReportKind::service, entries, 16);
  EXPECT_EQ(s,
            "==========================\n"
            "Service Usage :\n"
            "==========================\n"
            "  udp__ntp-udp\t2669\t97.59%\n"
            "<-----Top 1 of 16 Entries----->\n"
            "\n");
}

TEST(RenderSection, Empty) {
  const std::string s = render_section(ReportKind::source, {}, 0);
  EXPECT_TRUE(has_line(s, "Users/Source Addressess :"));
  EXPECT_TRUE(has_line(s, "<-----Top 0 of 0 Entries----->"));
}

TEST(RenderSection, TenOfEighteen) {
  std::vector<ReportEntry> entries(10, ReportEntry{"fwrtrmain01.foo.com", 1337, "48.88"});
  const std::string s = render_section(ReportKind::source, entries, 18);
  EXPECT_TRUE(has_line(s, "<-----Top 10 of 18 Entries----->"));
  EXPECT_TRUE(has_line(s, "  fwrtrmain01.foo.\t1337\t48.88%"));
}

TEST(SectionTitles, Literal) {
  EXPECT_EQ(section_title(ReportKind::source), "Users/Source Addressess :");
  EXPECT_EQ(section_title(ReportKind::destination), "Users/Destination Addressess :");
  EXPECT_EQ(section_title(ReportKind::service), "Service Usage :");
  EXPECT_EQ(section_title(ReportKind::interface), "Network Interface Usage :");
}

std::vector<Section> sample_sections() {
  return {
      {ReportKind::interface, {{{"fwfoomain01.foo.com__hme1_inbound", 2, "100.00"}}, 1, 2}},
      {ReportKind::source, {{{"a", 1, "50.00"}, {"b", 1, "50.00"}}, 2, 2}},
      {ReportKind::service, {{}, 0, 0}},
      {ReportKind::destination, {{{"ns4.foo.co", 2, "100.00"}}, 1, 2}},
  };
}

TEST(RenderReport, FixedSectionOrder) {
  const std::string doc = render_report(sample_sections(), paper_stats(), kPinned);
  auto pos = [&](std::string_view title) { return doc.find(std::string(title)); };
  EXPECT_LT(pos("Users/Source"), pos("Users/Destination"));
  EXPECT_LT(pos("Users/Destination"), pos("Service Usage"));
  EXPECT_LT(pos("Service Usage"), pos("Network Interface Usage"));
  EXPECT_EQ(doc.back(), '\n');
}

TEST(RenderReport, SingleSectionAndHeaderOnly) {
  auto sections = sample_sections();
  std::vector<Section> only_source{sections[1]};
  const std::string doc = render_report(only_source, paper_stats(), kPinned);
  EXPECT_EQ(doc, render_header(paper_stats(), kPinned) + render_section(sections[1]));
  EXPECT_EQ(render_report({}, paper_stats(), kPinned), render_header(paper_stats(), kPinned));
}

TEST(RenderReport, PureWhenPinned) {
  auto sections = sample_sections();
  EXPECT_EQ(render_report(sections, paper_stats(), kPinned),
            render_report(sections, paper_stats(), kPinned));
  EXPECT_EQ(render_jsonl(sections, paper_stats(), kPinned),
            render_jsonl(sections, paper_stats(), kPinned));
}

TEST(RenderJsonl, SummaryLine) {
  const std::string out = render_jsonl({}, paper_stats(), kPinned);
  auto ls = lines_of(out);
  ASSERT_EQ(ls.size(), 1u);
  auto j = nlohmann::json::parse(ls[0]);
  EXPECT_EQ(j["record"], "summary");
  EXPECT_EQ(j["total"], 2735);
  EXPECT_EQ(j["inbound"], 2734);
  EXPECT_EQ(j["outbound"], 1);
  EXPECT_EQ(j["period_start"], "2006-02-17T07:13:02");
  EXPECT_EQ(j["period_end"], "2006-02-26T23:59:01");
  EXPECT_EQ(j["generated_on"], "Fri 17 Nov 2006 15:00:00");
}

TEST(RenderJsonl, ZeroRecords) {
  auto ls = lines_of(render_jsonl({}, SummaryStats{}, kPinned));
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_TRUE(nlohmann::json::parse(ls[0])["period_start"].is_null());
}

TEST(RenderJsonl, RowsAgreeWithText) {
  auto sections = sample_sections();
  const std::string jsonl = render_jsonl(sections, paper_stats(), kPinned);
  const std::string text = render_report(sections, paper_stats(), kPinned);

  std::vector<std::string> from_json;
  for (const auto& l : lines_of(jsonl)) {
    auto j = nlohmann::json::parse(l);
    if (j["record"] != "row") continue;
    from_json.push_back("  " + truncate_key(j["key"].get<std::string>()) + "\t" +
                        std::to_string(j["count"].get<std::uint64_t>()) + "\t" +
                        j["percent"].get<std::string>() + "%");
  }
  std::vector<std::string> from_text;
  for (const auto& l : lines_of(text)) {
    if (l.rfind("  ", 0) == 0) from_text.push_back(l);
  }
  EXPECT_EQ(from_json, from_text);
}

TEST(ParseJsonl, RejectsMalformed) {
  EXPECT_THROW(parse_jsonl(""), JsonlFormatError);
  EXPECT_THROW(parse_jsonl("{\"record\":\"row\",\"kind\":\"source\"}\n"), JsonlFormatError);
  EXPECT_THROW(parse_jsonl("not json\n"), JsonlFormatError);
  EXPECT_THROW(parse_jsonl("{\"record\":\"mystery\"}\n"), JsonlFormatError);
}

// Random documents: rendering through JSONL and back reproduces the text
// report byte for byte, and every text report satisfies the format rules.
ReportDocument random_document(std::mt19937_64& rng) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  static const std::string alphabet = "abcdefghij.-_0123456789";
  ReportDocument doc;
  doc.generated_on = "Mon 1 Jan 2024 00:00:00";
  doc.stats.total_log_records = pick(0, 100000);
  doc.stats.inbound = pick(0, doc.stats.total_log_records);
  doc.stats.outbound = pick(0, doc.stats.total_log_records - doc.stats.inbound);
  if (pick(0, 3)) {
    Timestamp a{static_cast<int>(pick(2000, 2010)), static_cast<int>(pick(1, 12)),
                static_cast<int>(pick(1, 28)), static_cast<int>(pick(0, 23)),
                static_cast<int>(pick(0, 59)), static_cast<int>(pick(0, 59))};
    Timestamp b = a;
    b.year += static_cast<int>(pick(0, 2));
    doc.stats.period_start = a;
    doc.stats.period_end = b;
  }
  for (ReportKind kind : kAllReportKinds) {
    if (pick(0, 4) == 0) continue;
    Section s;
    s.kind = kind;
    s.report.total_distinct = pick(0, 40);
    s.report.total_occurrences = pick(s.report.total_distinct, 5000) + 1;
    const std::size_t shown = std::min<std::size_t>(s.report.total_distinct, pick(1, 15));
    for (std::size_t i = 0; i < shown; ++i) {
      std::string key(pick(1, 40), 'x');
      for (char& c : key) c = alphabet[pick(0, alphabet.size() - 1)];
      std::uint64_t count = pick(1, s.report.total_occurrences);
      s.report.entries.push_back({key, count, format_percent(count, s.report.total_occurrences)});
    }
    doc.sections.push_back(std::move(s));
  }
  return doc;
}

TEST(ReportDocument, JsonlRoundTripReproducesText) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 500; ++i) {
    const ReportDocument doc = random_document(rng);
    const ReportDocument back = parse_jsonl(render_jsonl_document(doc));
    EXPECT_EQ(render_document(back), render_document(doc));
    EXPECT_EQ(back, doc);
  }
}

TEST(ReportDocument, FormatInvariants) {
  std::mt19937_64 rng(47);
  const std::regex footer(R"(<-----Top (\d+) of (\d+) Entries----->)");
  for (int i = 0; i < 500; ++i) {
    const ReportDocument doc = random_document(rng);
    const auto ls = lines_of(render_document(doc));
    std::size_t rows = 0, section = 0;
    std::vector<std::string> titles;
    for (const auto& l : ls) {
      std::smatch m;
      if (l.rfind("  ", 0) == 0) {
        ++rows;
        EXPECT_LE(char_count(l.substr(2, l.find('\t') - 2)), kDisplayKeyWidth);
      } else if (std::regex_match(l, m, footer)) {
        ASSERT_LT(section, doc.sections.size());
        EXPECT_EQ(std::stoul(m[1]), rows);
        EXPECT_EQ(std::stoul(m[2]), doc.sections[section].report.total_distinct);
        EXPECT_LE(rows, std::stoul(m[2]));
        rows = 0;
        ++section;
      } else if (l.find(" :") != std::string::npos) {
        titles.push_back(l);
      }
    }
    EXPECT_EQ(section, doc.sections.size());
    ASSERT_EQ(titles.size(), doc.sections.size());
    for (std::size_t k = 0; k < titles.size(); ++k) {
      EXPECT_EQ(titles[k], section_title(doc.sections[k].kind));
    }
  }
}

}  // namespace
}  // namespace fwsr
