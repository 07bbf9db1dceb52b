#include "revconf/aspects.hpp"

#include <algorithm>
#include <set>

#include "revconf/builtin_data.hpp"
#include "revconf/corpus.hpp"
#include "revconf/errors.hpp"
#include "revconf/util.hpp"

namespace revconf {

namespace {

constexpr std::string_view kAspectNames[] = {
    "summary",       "motivation",    "originality",
    "soundness",     "substance",     "replicability",
    "meaningful_comparison", "clarity"};

// Small opinion lexicon for rules whose polarity is context-derived.
const std::map<std::string, Polarity>& opinion_words() {
  static const std::map<std::string, Polarity> words = [] {
    std::map<std::string, Polarity> m;
    for (const char* w :
         {"good",       "great",     "excellent",  "strong",    "stronger",
          "interesting", "impressive", "solid",     "convincing", "clear",
          "clean",      "thorough",  "useful",     "important", "effective",
          "elegant",    "sound",     "correct",    "novel",     "nice",
          "easy",       "significant", "valuable", "promising", "compelling",
          "robust",     "helpful",   "help",       "helps",     "reasonable",
          "fair",       "detailed",  "careful",    "appreciated"})
      m[w] = Polarity::Positive;
    for (const char* w :
         {"bad",        "poor",       "weak",       "weaker",     "unclear",
          "confusing",  "flawed",     "incorrect",  "wrong",      "limited",
          "insufficient", "missing",  "trivial",    "incremental", "hard",
          "difficult",  "questionable", "unconvincing", "vague",  "superficial",
          "marginal",   "noisy",      "unfair",     "misleading", "broken",
          "needed",     "lacking",    "overstated", "unjustified", "problematic",
          "doubtful",   "inadequate", "unreliable"})
      m[w] = Polarity::Negative;
    return m;
  }();
  return words;
}

// Negation in the 3 tokens before `pos` flips the polarity once.
bool negated_at(std::span<const std::string> tokens, std::size_t pos) {
  const auto& negs = negation_tokens();
  std::size_t start = pos >= 3 ? pos - 3 : 0;
  for (std::size_t i = start; i < pos; ++i)
    if (negs.count(tokens[i])) return true;
  return false;
}

}  // namespace

const std::set<std::string>& negation_tokens() {
  static const std::set<std::string> tokens = {
      "not",     "no",      "never",   "neither",  "nor",      "without",
      "hardly",  "barely",  "cannot",  "cant",     "can't",    "dont",
      "don't",   "doesnt",  "doesn't", "didnt",    "didn't",   "isnt",
      "isn't",   "arent",   "aren't",  "wasnt",    "wasn't",   "werent",
      "weren't", "wont",    "won't",   "wouldnt",  "wouldn't", "couldnt",
      "couldn't", "shouldnt", "shouldn't", "lacks", "lack",     "lacking"};
  return tokens;
}

std::string_view aspect_name(Aspect a) {
  return kAspectNames[static_cast<std::size_t>(a)];
}

std::optional<Aspect> aspect_from_name(std::string_view name) {
  for (std::size_t i = 0; i < 8; ++i)
    if (kAspectNames[i] == name) return static_cast<Aspect>(i);
  return std::nullopt;
}

std::string_view polarity_name(Polarity p) {
  return p == Polarity::Positive ? "positive" : "negative";
}

std::optional<Polarity> polarity_from_name(std::string_view name) {
  if (name == "positive") return Polarity::Positive;
  if (name == "negative") return Polarity::Negative;
  return std::nullopt;
}

// --------------------------------------------------------------------------
// Rule table
// --------------------------------------------------------------------------

AspectRuleTable AspectRuleTable::parse(std::string_view content,
                                       const std::string& origin) {
  AspectRuleTable table;
  std::set<std::string> seen_patterns;
  long line_no = 0;
  for (const auto& line : split_on(content, '\n')) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fail = [&](const std::string& what) -> IngestError {
      return IngestError(origin + " line " + std::to_string(line_no) + ": " +
                         what);
    };
    std::vector<std::string> cols = split_on(t, '\t');
    if (cols.size() != 3)
      throw fail("expected 3 tab-separated columns (aspect, pattern, polarity)");

    auto aspect = aspect_from_name(trim(cols[0]));
    if (!aspect)
      throw fail("unknown aspect \"" + trim(cols[0]) +
                 "\"; valid: summary, motivation, originality, soundness, "
                 "substance, replicability, meaningful_comparison, clarity");

    AspectRule rule;
    rule.aspect = *aspect;
    rule.pattern = tokenize_words(cols[1]);
    if (rule.pattern.empty()) throw fail("pattern has no word tokens");

    std::string pol = to_lower(trim(cols[2]));
    if (pol == "positive")
      rule.polarity = RulePolarity::Positive;
    else if (pol == "negative")
      rule.polarity = RulePolarity::Negative;
    else if (pol == "opinion")
      rule.polarity = RulePolarity::Opinion;
    else
      throw fail("polarity must be positive, negative or opinion, got \"" +
                 pol + "\"");

    std::string key = join(rule.pattern, " ");
    if (!seen_patterns.insert(key).second)
      throw fail("duplicate pattern \"" + key + "\"");
    table.rules_.push_back(std::move(rule));
  }
  if (table.rules_.empty())
    throw IngestError(origin + ": rule table contains no rules");

  for (std::size_t i = 0; i < table.rules_.size(); ++i)
    table.by_first_[table.rules_[i].pattern.front()].push_back(i);
  for (auto& [first, idxs] : table.by_first_) {
    std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
      return table.rules_[a].pattern.size() > table.rules_[b].pattern.size();
    });
  }
  return table;
}

AspectRuleTable AspectRuleTable::from_file(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const std::exception& e) {
    throw IngestError(e.what());
  }
  return parse(content, path);
}

AspectRuleTable AspectRuleTable::builtin() {
  return parse(builtin::aspect_rules_text(), "builtin aspect rules");
}

const AspectRule* AspectRuleTable::longest_match_at(
    std::span<const std::string> tokens, std::size_t pos) const {
  if (pos >= tokens.size()) return nullptr;
  auto it = by_first_.find(tokens[pos]);
  if (it == by_first_.end()) return nullptr;
  for (std::size_t idx : it->second) {
    const AspectRule& rule = rules_[idx];
    if (pos + rule.pattern.size() > tokens.size()) continue;
    bool ok = true;
    for (std::size_t k = 1; k < rule.pattern.size(); ++k) {
      if (tokens[pos + k] != rule.pattern[k]) {
        ok = false;
        break;
      }
    }
    if (ok) return &rule;
  }
  return nullptr;
}

// --------------------------------------------------------------------------
// Tagging
// --------------------------------------------------------------------------

std::vector<AspectAnnotation> tag_aspects(std::span<const std::string> tokens,
                                          const AspectRuleTable& rules) {
  struct Hit {
    const AspectRule* rule;
    std::size_t begin, end;
  };
  std::vector<Hit> hits;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const AspectRule* rule = rules.longest_match_at(tokens, i);
    if (!rule) {
      ++i;
      continue;
    }
    hits.push_back({rule, i, i + rule->pattern.size()});
    i += rule->pattern.size();
  }

  std::vector<AspectAnnotation> annotations;
  for (const Hit& hit : hits) {
    Polarity polarity;
    if (hit.rule->polarity == RulePolarity::Positive ||
        hit.rule->polarity == RulePolarity::Negative) {
      polarity = hit.rule->polarity == RulePolarity::Positive
                     ? Polarity::Positive
                     : Polarity::Negative;
      if (negated_at(tokens, hit.begin)) polarity = flip(polarity);
    } else {
      // nearest opinion word outside the pattern span; ties go left
      const auto& opinions = opinion_words();
      std::size_t best = tokens.size();
      std::size_t best_dist = tokens.size() + 1;
      for (std::size_t k = 0; k < tokens.size(); ++k) {
        if (k >= hit.begin && k < hit.end) continue;
        if (!opinions.count(tokens[k])) continue;
        std::size_t dist = k < hit.begin ? hit.begin - k : k - hit.end + 1;
        if (dist < best_dist) {
          best_dist = dist;
          best = k;
        }
      }
      if (best == tokens.size()) continue;  // no opinion word: rule is silent
      polarity = opinions.at(tokens[best]);
      if (negated_at(tokens, best)) polarity = flip(polarity);
    }
    annotations.push_back({hit.rule->aspect, polarity});
  }

  std::sort(annotations.begin(), annotations.end());
  annotations.erase(std::unique(annotations.begin(), annotations.end()),
                    annotations.end());
  return annotations;
}

SentimentMajority sentiment_majority(
    std::span<const AspectAnnotation> annotations) {
  if (annotations.empty())
    throw AnalyticsError("sentiment_majority: empty annotation list");
  long pos = 0, neg = 0;
  for (const auto& a : annotations)
    (a.polarity == Polarity::Positive ? pos : neg) += 1;
  return pos > neg ? SentimentMajority::PosGreater
                   : SentimentMajority::NegGEQPos;
}

// --------------------------------------------------------------------------
// External annotation import/export
// --------------------------------------------------------------------------

AnnotationMap parse_annotations(std::string_view content,
                                const std::string& origin) {
  AnnotationMap result;
  long line_no = 0;
  for (const auto& line : split_on(content, '\n')) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fail = [&](const std::string& what) -> IngestError {
      return IngestError(origin + " line " + std::to_string(line_no) + ": " +
                         what);
    };
    std::vector<std::string> cols = split_on(t, '\t');
    if (cols.size() != 4)
      throw fail(
          "expected 4 tab-separated columns (review_id, sentence_index, "
          "aspect, polarity)");
    SentenceKey key;
    key.review_id = trim(cols[0]);
    if (key.review_id.empty()) throw fail("empty review_id");
    try {
      std::size_t consumed = 0;
      long idx = std::stol(trim(cols[1]), &consumed);
      if (consumed != trim(cols[1]).size() || idx < 0)
        throw std::invalid_argument("negative");
      key.index = static_cast<std::size_t>(idx);
    } catch (const std::exception&) {
      throw fail("sentence_index must be a non-negative integer, got \"" +
                 trim(cols[1]) + "\"");
    }
    auto aspect = aspect_from_name(trim(cols[2]));
    if (!aspect)
      throw fail("unknown aspect \"" + trim(cols[2]) +
                 "\"; valid: summary, motivation, originality, soundness, "
                 "substance, replicability, meaningful_comparison, clarity");
    auto polarity = polarity_from_name(trim(cols[3]));
    if (!polarity)
      throw fail("polarity must be positive or negative, got \"" +
                 trim(cols[3]) + "\"");
    result[key].push_back({*aspect, *polarity});
  }
  for (auto& [key, annotations] : result) {
    std::sort(annotations.begin(), annotations.end());
    annotations.erase(std::unique(annotations.begin(), annotations.end()),
                      annotations.end());
  }
  return result;
}

AnnotationMap import_annotations(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const std::exception& e) {
    throw IngestError(e.what());
  }
  return parse_annotations(content, path);
}

std::string serialize_annotations(const AnnotationMap& annotations) {
  std::string out;
  for (const auto& [key, list] : annotations) {
    for (const auto& a : list) {
      out += key.review_id;
      out += '\t';
      out += std::to_string(key.index);
      out += '\t';
      out += aspect_name(a.aspect);
      out += '\t';
      out += polarity_name(a.polarity);
      out += '\n';
    }
  }
  return out;
}

}  // namespace revconf
