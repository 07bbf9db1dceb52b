#include "revconf/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "revconf/errors.hpp"
#include "revconf/util.hpp"

namespace revconf {

using nlohmann::json;

namespace {

bool is_space_c(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit_c(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha_c(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

Review parse_record(const json& j, long line_no) {
  auto fail = [line_no](const std::string& what) -> IngestError {
    return IngestError("corpus line " + std::to_string(line_no) + ": " + what);
  };
  if (!j.is_object()) throw fail("record is not a JSON object");

  Review r;
  auto need_string = [&](const char* field) {
    if (!j.contains(field) || !j[field].is_string())
      throw fail(std::string("missing or non-string field \"") + field + "\"");
    return j[field].get<std::string>();
  };
  r.review_id = need_string("review_id");
  r.paper_id = need_string("paper_id");
  r.venue = need_string("venue");
  r.text = need_string("text");
  if (r.review_id.empty()) throw fail("empty field \"review_id\"");
  if (trim(r.text).empty()) throw fail("empty field \"text\"");

  if (!j.contains("confidence") || !j["confidence"].is_number_integer())
    throw fail("missing or non-integer field \"confidence\"");
  r.confidence = j["confidence"].get<int>();
  if (r.confidence < 1 || r.confidence > 5)
    throw fail("field \"confidence\" out of range 1..5: " +
               std::to_string(r.confidence));

  if (j.contains("decision") && !j["decision"].is_null()) {
    if (!j["decision"].is_number_integer())
      throw fail("field \"decision\" must be 0, 1 or absent");
    int d = j["decision"].get<int>();
    if (d != 0 && d != 1)
      throw fail("field \"decision\" must be 0, 1 or absent, got " +
                 std::to_string(d));
    r.decision = d;
  }
  return r;
}

}  // namespace

std::vector<Review> parse_corpus(std::string_view content,
                                 const std::string& origin) {
  std::vector<Review> reviews;
  std::set<std::pair<std::string, std::string>> seen_keys;
  std::vector<std::string> problems;

  long line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    std::string_view line = content.substr(
        pos, nl == std::string_view::npos ? content.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? content.size() + 1 : nl + 1;
    ++line_no;
    std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;

    try {
      json j = json::parse(trimmed, nullptr, true);
      Review r = parse_record(j, line_no);
      auto key = std::make_pair(r.review_id, r.venue);
      if (!seen_keys.insert(key).second)
        throw IngestError("corpus line " + std::to_string(line_no) +
                          ": duplicate (review_id, venue) = (" + r.review_id +
                          ", " + r.venue + ")");
      reviews.push_back(std::move(r));
    } catch (const json::parse_error& e) {
      problems.push_back("corpus line " + std::to_string(line_no) +
                         ": invalid JSON (" + std::string(e.what()) + ")");
    } catch (const IngestError& e) {
      problems.push_back(e.what());
    }
  }

  if (!problems.empty()) {
    std::string msg = origin + ": " + std::to_string(problems.size()) +
                      " invalid record(s)";
    for (const auto& p : problems) msg += "\n  " + p;
    throw IngestError(msg);
  }
  if (reviews.empty()) throw IngestError(origin + ": corpus is empty");
  return reviews;
}

std::vector<Review> load_corpus(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const std::exception& e) {
    throw IngestError(e.what());
  }
  return parse_corpus(content, path);
}

std::string serialize_corpus(const std::vector<Review>& reviews) {
  std::string out;
  for (const auto& r : reviews) {
    json j;
    j["review_id"] = r.review_id;
    j["paper_id"] = r.paper_id;
    j["venue"] = r.venue;
    j["confidence"] = r.confidence;
    if (r.decision) j["decision"] = *r.decision;
    j["text"] = r.text;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const std::string& path, const std::vector<Review>& reviews) {
  write_file(path, serialize_corpus(reviews));
}

// --------------------------------------------------------------------------
// Markup stripping
// --------------------------------------------------------------------------

std::string strip_markup(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  bool first_line = true;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    // heading hashes
    if (i < line.size() && line[i] == '#') {
      std::size_t h = i;
      while (h < line.size() && line[h] == '#') ++h;
      if (h < line.size() && line[h] == ' ') i = h + 1;
    }
    // bullet markers
    if (i < line.size() &&
        (line[i] == '-' || line[i] == '*' || line[i] == '+')) {
      std::size_t b = i;
      while (b < line.size() &&
             (line[b] == '-' || line[b] == '*' || line[b] == '+'))
        ++b;
      if (b == line.size() || line[b] == ' ') i = std::min(b + 1, line.size());
    }
    // numbered list "3." / "3)" prefix
    if (i < line.size() && is_digit_c(line[i])) {
      std::size_t d = i;
      while (d < line.size() && is_digit_c(line[d])) ++d;
      if (d < line.size() && (line[d] == '.' || line[d] == ')') &&
          d + 1 < line.size() && line[d + 1] == ' ')
        i = d + 2;
    }

    std::string cleaned;
    cleaned.reserve(line.size() - i);
    for (std::size_t k = i; k < line.size(); ++k) {
      char c = line[k];
      if (c == '*' || c == '`') continue;  // emphasis / code markers
      cleaned += c;
    }

    if (!first_line) out += '\n';
    out += cleaned;
    first_line = false;
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

// --------------------------------------------------------------------------
// Sentence segmentation
// --------------------------------------------------------------------------

namespace {

const std::set<std::string>& default_abbreviations() {
  static const std::set<std::string> abbrevs = {
      "fig",  "figs", "eq",   "eqs",  "sec",  "secs", "tab",  "tabs",
      "no",   "nos",  "al",   "e.g",  "i.e",  "cf",   "vs",   "resp",
      "dr",   "prof", "mr",   "mrs",  "ms",   "ref",  "refs", "app",
      "chap", "ch",   "col",  "eg",   "ie",   "approx"};
  return abbrevs;
}

}  // namespace

SentenceSplitter::SentenceSplitter() : abbrevs_(default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::set<std::string> abbreviations)
    : abbrevs_(std::move(abbreviations)) {}

bool SentenceSplitter::is_abbreviation(std::string_view word) const {
  if (word.empty()) return false;
  return abbrevs_.count(to_lower(word)) > 0;
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  std::vector<std::string> sentences;
  std::string current;
  auto flush = [&]() {
    std::string s = trim(current);
    if (!s.empty()) sentences.push_back(std::move(s));
    current.clear();
  };

  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    char c = text[i];
    if (c == '\n') {
      flush();
      continue;
    }
    current += c;
    if (c != '.' && c != '!' && c != '?') continue;

    if (c == '.') {
      // decimal number: digit on both sides
      if (i > 0 && i + 1 < n && is_digit_c(text[i - 1]) &&
          is_digit_c(text[i + 1]))
        continue;
      // abbreviation: word of letters/dots directly before this dot
      std::size_t w = i;
      while (w > 0 && (is_alpha_c(text[w - 1]) || text[w - 1] == '.')) --w;
      if (is_abbreviation(text.substr(w, i - w))) continue;
    }

    // consume the rest of the terminator run plus closing quotes/brackets
    std::size_t j = i + 1;
    while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?')) {
      current += text[j];
      ++j;
    }
    while (j < n &&
           (text[j] == '"' || text[j] == '\'' || text[j] == ')' ||
            text[j] == ']')) {
      current += text[j];
      ++j;
    }
    // a terminator only closes the sentence before whitespace or end
    if (j >= n || is_space_c(text[j])) {
      flush();
    }
    i = j - 1;
  }
  flush();
  return sentences;
}

std::vector<std::string> split_sentences(std::string_view text) {
  static const SentenceSplitter splitter;
  return splitter.split(text);
}

// --------------------------------------------------------------------------
// Word tokenization
// --------------------------------------------------------------------------

std::vector<std::string> tokenize_words(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::string current;
  auto is_letter = [](unsigned char c) {
    return std::isalpha(c) != 0 || c >= 0x80;  // keep UTF-8 continuation bytes
  };
  const std::size_t n = sentence.size();
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char c = static_cast<unsigned char>(sentence[i]);
    if (is_letter(c)) {
      current += static_cast<char>(std::tolower(c));
      continue;
    }
    if (c == '\'' && !current.empty() && i + 1 < n &&
        is_letter(static_cast<unsigned char>(sentence[i + 1]))) {
      current += '\'';  // internal apostrophe: can't, author's
      continue;
    }
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// --------------------------------------------------------------------------
// Descriptive statistics
// --------------------------------------------------------------------------

namespace {

CorpusStats stats_for(const std::vector<const AnalyzedReview*>& reviews) {
  CorpusStats st;
  st.review_count = static_cast<long>(reviews.size());
  if (reviews.empty()) return st;

  double words = 0, sents = 0, conf = 0;
  // paper-level decisions are deduplicated by paper_id
  std::map<std::string, int> paper_decision;
  for (const auto* ar : reviews) {
    words += static_cast<double>(ar->word_count());
    sents += static_cast<double>(ar->sentences.size());
    conf += ar->review.confidence;
    if (ar->review.decision)
      paper_decision[ar->review.paper_id] = *ar->review.decision;
  }
  st.avg_words = words / static_cast<double>(reviews.size());
  st.avg_sentences = sents / static_cast<double>(reviews.size());
  st.avg_confidence = conf / static_cast<double>(reviews.size());
  for (const auto& [paper, decision] : paper_decision) {
    if (decision == 1)
      ++st.accepted;
    else
      ++st.rejected;
  }
  return st;
}

}  // namespace

CorpusStatsReport corpus_stats(const std::vector<AnalyzedReview>& reviews) {
  if (reviews.empty()) throw AnalyticsError("corpus_stats: empty corpus");
  CorpusStatsReport report;
  std::map<std::string, std::vector<const AnalyzedReview*>> by_venue;
  std::vector<const AnalyzedReview*> all;
  all.reserve(reviews.size());
  for (const auto& ar : reviews) {
    by_venue[ar.review.venue].push_back(&ar);
    all.push_back(&ar);
  }
  for (const auto& [venue, group] : by_venue)
    report.by_venue[venue] = stats_for(group);
  report.overall = stats_for(all);
  return report;
}

}  // namespace revconf
