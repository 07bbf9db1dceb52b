#ifndef REVCONF_CORPUS_HPP
#define REVCONF_CORPUS_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revconf/types.hpp"

namespace revconf {

// ---------------------------------------------------------------------------
// Corpus file IO. Line-delimited JSON, one review per line; field names are
// fixed in docs/corpus_schema.md.
// ---------------------------------------------------------------------------

std::vector<Review> load_corpus(const std::string& path);
std::vector<Review> parse_corpus(std::string_view content,
                                 const std::string& origin);
void save_corpus(const std::string& path, const std::vector<Review>& reviews);
std::string serialize_corpus(const std::vector<Review>& reviews);

// ---------------------------------------------------------------------------
// Segmentation. Deterministic rule-based splitter: terminators {. ! ?} end a
// sentence unless the dot closes a known abbreviation or sits inside a
// decimal number; a line break is always a boundary, so headers such as
// "Strengths:" become standalone sentences.
// ---------------------------------------------------------------------------

class SentenceSplitter {
 public:
  SentenceSplitter();  // default abbreviation set
  explicit SentenceSplitter(std::set<std::string> abbreviations);

  std::vector<std::string> split(std::string_view text) const;
  const std::set<std::string>& abbreviations() const { return abbrevs_; }

 private:
  bool is_abbreviation(std::string_view word) const;
  std::set<std::string> abbrevs_;  // lowercase, no trailing dot
};

std::vector<std::string> split_sentences(std::string_view text);

// Removes markdown artifacts the corpus exports carry: bullet markers,
// numbered-list prefixes, heading hashes and emphasis asterisks.
std::string strip_markup(std::string_view text);

// Lowercased alphabetic runs; hyphens and other punctuation split tokens,
// apostrophes between letters are kept ("can't"), digits are dropped.
std::vector<std::string> tokenize_words(std::string_view sentence);

// ---------------------------------------------------------------------------
// Descriptive statistics per venue and overall.
// ---------------------------------------------------------------------------

struct CorpusStats {
  long review_count = 0;
  double avg_words = 0.0;
  double avg_sentences = 0.0;
  long accepted = 0;   // distinct papers with an accept decision
  long rejected = 0;   // distinct papers with a reject decision
  double avg_confidence = 0.0;
};

struct CorpusStatsReport {
  std::map<std::string, CorpusStats> by_venue;
  CorpusStats overall;
};

CorpusStatsReport corpus_stats(const std::vector<AnalyzedReview>& reviews);

}  // namespace revconf

#endif  // REVCONF_CORPUS_HPP
