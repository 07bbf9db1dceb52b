#include "revconf/lexicon.hpp"

#include <algorithm>

#include "revconf/builtin_data.hpp"
#include "revconf/corpus.hpp"
#include "revconf/errors.hpp"
#include "revconf/util.hpp"

namespace revconf {

HedgeLexicon HedgeLexicon::from_entries(std::span<const std::string> raw) {
  HedgeLexicon lex;
  std::vector<std::vector<std::string>> phrases;
  for (const auto& entry : raw) {
    std::vector<std::string> tokens = tokenize_words(entry);
    if (tokens.empty()) continue;
    phrases.push_back(std::move(tokens));
  }
  std::vector<std::string> normalized;
  normalized.reserve(phrases.size());
  for (const auto& p : phrases) normalized.push_back(join(p, " "));
  std::sort(normalized.begin(), normalized.end());
  normalized.erase(std::unique(normalized.begin(), normalized.end()),
                   normalized.end());

  lex.entries_ = std::move(normalized);
  for (const auto& e : lex.entries_) {
    std::vector<std::string> tokens = split_on(e, ' ');
    lex.max_tokens_ = std::max(lex.max_tokens_, tokens.size());
    lex.by_first_[tokens.front()].push_back(std::move(tokens));
  }
  for (auto& [first, list] : lex.by_first_) {
    std::sort(list.begin(), list.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
  }
  return lex;
}

HedgeLexicon HedgeLexicon::parse(std::string_view content,
                                 const std::string& origin) {
  std::vector<std::string> raw;
  for (const auto& line : split_on(content, '\n')) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    raw.push_back(t);
  }
  HedgeLexicon lex = from_entries(raw);
  if (lex.size() == 0)
    throw IngestError(origin + ": lexicon file contains no cues");
  return lex;
}

HedgeLexicon HedgeLexicon::from_file(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const std::exception& e) {
    throw IngestError(e.what());
  }
  return parse(content, path);
}

HedgeLexicon HedgeLexicon::builtin() {
  return parse(builtin::hedge_lexicon_text(), "builtin hedge lexicon");
}

bool HedgeLexicon::contains(std::string_view normalized_cue) const {
  return std::binary_search(entries_.begin(), entries_.end(), normalized_cue);
}

std::uint64_t HedgeLexicon::fingerprint() const {
  std::string all;
  for (const auto& e : entries_) {
    all += e;
    all += '\n';
  }
  return fnv1a64(all);
}

std::size_t HedgeLexicon::longest_match_at(std::span<const std::string> tokens,
                                           std::size_t pos) const {
  if (pos >= tokens.size()) return 0;
  auto it = by_first_.find(tokens[pos]);
  if (it == by_first_.end()) return 0;
  for (const auto& phrase : it->second) {  // longest first
    if (pos + phrase.size() > tokens.size()) continue;
    bool ok = true;
    for (std::size_t k = 1; k < phrase.size(); ++k) {
      if (tokens[pos + k] != phrase[k]) {
        ok = false;
        break;
      }
    }
    if (ok) return phrase.size();
  }
  return 0;
}

std::vector<CueMatch> match_cues(std::span<const std::string> tokens,
                                 const HedgeLexicon& lexicon) {
  std::vector<CueMatch> matches;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t len = lexicon.longest_match_at(tokens, i);
    if (len == 0) {
      ++i;
      continue;
    }
    CueMatch m;
    m.begin = i;
    m.end = i + len;
    std::vector<std::string> span(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                  tokens.begin() + static_cast<std::ptrdiff_t>(i + len));
    m.cue = join(span, " ");
    matches.push_back(std::move(m));
    i += len;
  }
  return matches;
}

CueFrequency cue_frequency(std::span<const AnalyzedReview> reviews) {
  CueFrequency freq;
  for (const auto& ar : reviews) {
    auto& per_cue = freq[ar.review.confidence];
    for (const auto& sentence : ar.sentences)
      for (const auto& match : sentence.cue_matches) ++per_cue[match.cue];
  }
  return freq;
}

CueFrequency cue_frequency(std::span<const Review> reviews,
                           const HedgeLexicon& lexicon) {
  CueFrequency freq;
  for (const auto& review : reviews) {
    auto& per_cue = freq[review.confidence];
    for (const auto& sentence : split_sentences(strip_markup(review.text))) {
      std::vector<std::string> tokens = tokenize_words(sentence);
      for (const auto& match : match_cues(tokens, lexicon)) ++per_cue[match.cue];
    }
  }
  return freq;
}

}  // namespace revconf
