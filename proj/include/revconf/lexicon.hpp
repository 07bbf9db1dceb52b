#ifndef REVCONF_LEXICON_HPP
#define REVCONF_LEXICON_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "revconf/types.hpp"

namespace revconf {

// Multi-word hedge vocabulary. Entries are stored as tokenized phrases,
// lowercased and deduplicated; matching is token-based so "cannot" never
// matches "can".
class HedgeLexicon {
 public:
  static HedgeLexicon builtin();
  static HedgeLexicon from_file(const std::string& path);
  // one cue per line, '#' comments ignored
  static HedgeLexicon parse(std::string_view content, const std::string& origin);
  static HedgeLexicon from_entries(std::span<const std::string> entries);

  // Normalized entries, each as tokens joined by single spaces, sorted.
  const std::vector<std::string>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(std::string_view normalized_cue) const;
  std::size_t max_tokens() const { return max_tokens_; }

  // Digest over the sorted entry list; models record it so a model trained
  // against one vocabulary refuses to score with another.
  std::uint64_t fingerprint() const;

  // Longest entry starting with tokens[pos]; 0 when none matches.
  std::size_t longest_match_at(std::span<const std::string> tokens,
                               std::size_t pos) const;

 private:
  std::vector<std::string> entries_;
  // first token -> phrases sharing it, longest first
  std::map<std::string, std::vector<std::vector<std::string>>> by_first_;
  std::size_t max_tokens_ = 0;
};

// Greedy longest-match scan, left to right; matched tokens are consumed so
// matches never overlap.
std::vector<CueMatch> match_cues(std::span<const std::string> tokens,
                                 const HedgeLexicon& lexicon);

// confidence score -> cue -> number of matches
using CueFrequency = std::map<int, std::map<std::string, long>>;

// Counts cue matches over already cue-matched sentences, grouped by the
// review's confidence score.
CueFrequency cue_frequency(std::span<const AnalyzedReview> reviews);

// Same, from raw reviews: segments, tokenizes and matches first.
CueFrequency cue_frequency(std::span<const Review> reviews,
                           const HedgeLexicon& lexicon);

}  // namespace revconf

#endif  // REVCONF_LEXICON_HPP
