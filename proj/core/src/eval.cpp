#include "vidomit/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <regex>

#include "json.hpp"

namespace vidomit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::affirmative: return "affirmative";
    case Verdict::negative: return "negative";
    case Verdict::unparseable: return "unparseable";
  }
  return "?";
}

std::string_view to_string(SpatialLocation l) {
  switch (l) {
    case SpatialLocation::center: return "center";
    case SpatialLocation::corner: return "corner";
    case SpatialLocation::full_frame: return "full-frame";
  }
  return "?";
}

SpatialLocation parse_spatial_location(std::string_view s) {
  if (s == "center") return SpatialLocation::center;
  if (s == "corner") return SpatialLocation::corner;
  if (s == "full-frame" || s == "full frame" || s == "full_frame")
    return SpatialLocation::full_frame;
  throw InvalidArgument("unknown spatial location: " + std::string(s));
}

std::string_view to_string(TemporalStatus s) {
  switch (s) {
    case TemporalStatus::valid: return "valid";
    case TemporalStatus::miss: return "miss";
    case TemporalStatus::invalid_exceeds_duration: return "invalid-exceeds-duration";
    case TemporalStatus::missing: return "missing";
  }
  return "?";
}

std::string_view to_string(SpatialStatus s) {
  switch (s) {
    case SpatialStatus::match: return "match";
    case SpatialStatus::mismatch: return "mismatch";
    case SpatialStatus::missing: return "missing";
  }
  return "?";
}

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool contains(const std::string& haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

// Leading-word match after whitespace/quotes, with a word boundary so "no"
// does not fire on "nothing".
bool starts_with_word(const std::string& s, std::string_view word) {
  std::size_t i = 0;
  while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '"' ||
                          s[i] == '\'' || s[i] == '`'))
    ++i;
  if (s.compare(i, word.size(), word) != 0) return false;
  const std::size_t after = i + word.size();
  return after >= s.size() || !std::isalnum(static_cast<unsigned char>(s[after]));
}

enum class CueMatch { none, negative, affirmative, both };

CueMatch match_cues(const std::string& lower) {
  const bool neg = starts_with_word(lower, "no") || contains(lower, "does not contain") ||
                   contains(lower, "there is no");
  const bool aff = starts_with_word(lower, "yes") || contains(lower, "contains") ||
                   contains(lower, "depicts");
  if (neg && aff) return CueMatch::both;
  if (neg) return CueMatch::negative;
  if (aff) return CueMatch::affirmative;
  return CueMatch::none;
}

std::string first_sentence(const std::string& s) {
  const std::size_t pos = s.find_first_of(".!?");
  return pos == std::string::npos ? s : s.substr(0, pos + 1);
}

Verdict classify_text(const std::string& text) {
  const std::string lower = lowercase(text);
  switch (match_cues(first_sentence(lower))) {
    case CueMatch::negative: return Verdict::negative;
    case CueMatch::affirmative: return Verdict::affirmative;
    case CueMatch::both: return Verdict::unparseable;
    case CueMatch::none: break;
  }
  // No cue in the first sentence: fall back to the full text.
  switch (match_cues(lower)) {
    case CueMatch::negative: return Verdict::negative;
    case CueMatch::affirmative: return Verdict::affirmative;
    default: return Verdict::unparseable;
  }
}

}  // namespace

Verdict classify_response(const std::string& text, Category /*category*/) {
  return classify_text(text);
}

EvalReport compute_hor(const std::vector<ResponseRecord>& records) {
  EvalReport report;
  for (const ResponseRecord& rec : records) {
    CellStats& cell = report.cells[{rec.model_id, rec.attack, rec.category}];
    ++cell.n;
    switch (classify_text(rec.response_text)) {
      case Verdict::negative: ++cell.negatives; break;
      case Verdict::affirmative: ++cell.affirmatives; break;
      case Verdict::unparseable: ++cell.unparseable; break;
    }
  }
  for (auto& [key, cell] : report.cells) {
    const std::int64_t denom = cell.n - cell.unparseable;
    cell.hor_defined = denom > 0;
    cell.hor = cell.hor_defined
                   ? 100.0 * static_cast<double>(cell.negatives) / static_cast<double>(denom)
                   : 0.0;
  }
  return report;
}

namespace {

// mm:ss or h:mm:ss; '.' tolerated wherever ':' is (responses in the wild mix
// the two). Range separators: --, en/em dash, -, or "to".
const std::regex kTimeRange(
    "(\\d{1,3})[:.](\\d{1,2})(?:[:.](\\d{1,2}))?"
    "\\s*(?:--|\u2013|\u2014|-|to)\\s*"
    "(\\d{1,3})[:.](\\d{1,2})(?:[:.](\\d{1,2}))?");

std::optional<double> timestamp_seconds(const std::string& a, const std::string& b,
                                        const std::string& c, std::string* warning) {
  const int first = std::stoi(a);
  const int second = std::stoi(b);
  if (c.empty()) {
    if (second >= 60) {
      *warning = "seconds field out of range in timestamp " + a + ":" + b;
      return std::nullopt;
    }
    return 60.0 * first + second;
  }
  const int third = std::stoi(c);
  if (second >= 60 || third >= 60) {
    *warning = "minute/second field out of range in timestamp " + a + ":" + b + ":" + c;
    return std::nullopt;
  }
  return 3600.0 * first + 60.0 * second + third;
}

std::string collapse_whitespace(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace

DetailedFinding parse_detailed_response(const std::string& text) {
  DetailedFinding finding;
  finding.detected = classify_text(text) == Verdict::affirmative;

  std::string remainder = text;

  std::smatch m;
  if (std::regex_search(text, m, kTimeRange)) {
    std::string warning;
    const auto start = timestamp_seconds(m[1].str(), m[2].str(), m[3].str(), &warning);
    const auto end = warning.empty()
                         ? timestamp_seconds(m[4].str(), m[5].str(), m[6].str(), &warning)
                         : std::nullopt;
    if (start && end) {
      if (*start <= *end) {
        finding.time_start = start;
        finding.time_end = end;
      } else {
        finding.warnings.push_back("time range ends before it starts: " + m.str());
      }
    } else if (!warning.empty()) {
      finding.warnings.push_back(warning);
    }
    remainder.erase(static_cast<std::size_t>(m.position()),
                    static_cast<std::size_t>(m.length()));
  }

  const std::string lower = lowercase(remainder);
  struct Keyword {
    std::string_view token;
    SpatialLocation loc;
  };
  static constexpr Keyword kKeywords[] = {
      {"full frame", SpatialLocation::full_frame},
      {"full-frame", SpatialLocation::full_frame},
      {"center", SpatialLocation::center},
      {"corner", SpatialLocation::corner},
  };
  std::size_t best_pos = std::string::npos;
  std::size_t best_len = 0;
  for (const Keyword& kw : kKeywords) {
    const std::size_t pos = lower.find(kw.token);
    if (pos != std::string::npos && pos < best_pos) {
      best_pos = pos;
      best_len = kw.token.size();
      finding.location = kw.loc;
    }
  }
  if (best_pos != std::string::npos) remainder.erase(best_pos, best_len);

  finding.description = collapse_whitespace(remainder);
  return finding;
}

FindingGrade grade_finding(const DetailedFinding& finding, const GroundTruth& truth) {
  if (!(truth.true_start >= 0.0 && truth.true_start <= truth.true_end &&
        truth.true_end <= truth.duration))
    throw InvalidArgument("grade_finding: malformed ground truth interval");

  FindingGrade grade;
  if (finding.time_start && finding.time_end) {
    if (*finding.time_end > truth.duration) {
      grade.temporal = TemporalStatus::invalid_exceeds_duration;
    } else {
      const double inter = std::max(
          0.0, std::min(*finding.time_end, truth.true_end) -
                   std::max(*finding.time_start, truth.true_start));
      const double uni = (*finding.time_end - *finding.time_start) +
                         (truth.true_end - truth.true_start) - inter;
      if (uni <= 0.0) {
        // Both intervals degenerate: equal points overlap fully.
        grade.iou = (*finding.time_start == truth.true_start) ? 1.0 : 0.0;
      } else {
        grade.iou = inter / uni;
      }
      grade.temporal = grade.iou > 0.0 ? TemporalStatus::valid : TemporalStatus::miss;
    }
  }
  if (finding.location) {
    grade.spatial = *finding.location == truth.true_location ? SpatialStatus::match
                                                             : SpatialStatus::mismatch;
  }
  return grade;
}

// --- I/O ---

namespace {

using nlohmann::json;

std::string require_string(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw DataError("response log line " + std::to_string(line) +
                    ": missing string field '" + key + "'");
  return j.at(key).get<std::string>();
}

void put_double(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  os << buf;
}

}  // namespace

std::vector<ResponseRecord> read_response_log(std::istream& is) {
  std::vector<ResponseRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError("response log line " + std::to_string(line_no) + ": " + e.what());
    }
    ResponseRecord rec;
    rec.video_id = require_string(j, "video_id", line_no);
    rec.model_id = require_string(j, "model_id", line_no);
    try {
      rec.attack = parse_attack_variant(require_string(j, "attack", line_no));
      rec.category = parse_category(require_string(j, "category", line_no));
    } catch (const InvalidArgument& e) {
      throw DataError("response log line " + std::to_string(line_no) + ": " + e.what());
    }
    rec.prompt = require_string(j, "prompt", line_no);
    rec.response_text = require_string(j, "response_text", line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<GroundTruth> read_ground_truth(std::istream& is) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw DataError(std::string("ground truth: ") + e.what());
  }
  if (!j.is_array()) throw DataError("ground truth: expected a JSON array");

  std::vector<GroundTruth> truths;
  truths.reserve(j.size());
  for (const json& item : j) {
    GroundTruth t;
    try {
      t.video_id = item.at("video_id").get<std::string>();
      t.duration = item.at("duration").get<double>();
      t.true_start = item.at("true_start").get<double>();
      t.true_end = item.at("true_end").get<double>();
      t.true_location = parse_spatial_location(item.at("true_location").get<std::string>());
      t.true_event = item.at("true_event").get<std::string>();
    } catch (const json::exception& e) {
      throw DataError(std::string("ground truth entry: ") + e.what());
    } catch (const InvalidArgument& e) {
      throw DataError(std::string("ground truth entry: ") + e.what());
    }
    if (!(t.true_start >= 0.0 && t.true_start <= t.true_end && t.true_end <= t.duration))
      throw DataError("ground truth entry for " + t.video_id +
                      ": interval must satisfy 0 <= start <= end <= duration");
    truths.push_back(std::move(t));
  }
  return truths;
}

void write_report_csv(std::ostream& os, const EvalReport& report) {
  os << "model,attack,category,n,negatives,unparseable,hor\n";
  for (const auto& [key, cell] : report.cells) {
    os << std::get<0>(key) << ',' << to_string(std::get<1>(key)) << ','
       << to_string(std::get<2>(key)) << ',' << cell.n << ',' << cell.negatives << ','
       << cell.unparseable << ',';
    if (cell.hor_defined) put_double(os, cell.hor);
    os << '\n';
  }
}

void write_report_json(std::ostream& os, const EvalReport& report) {
  json cells = json::array();
  for (const auto& [key, cell] : report.cells) {
    json c{{"model", std::get<0>(key)},
           {"attack", std::string(to_string(std::get<1>(key)))},
           {"category", std::string(to_string(std::get<2>(key)))},
           {"n", cell.n},
           {"negatives", cell.negatives},
           {"affirmatives", cell.affirmatives},
           {"unparseable", cell.unparseable}};
    if (cell.hor_defined)
      c["hor"] = cell.hor;
    else
      c["hor"] = nullptr;
    cells.push_back(std::move(c));
  }
  os << json{{"cells", std::move(cells)}}.dump(2) << '\n';
}

}  // namespace vidomit
