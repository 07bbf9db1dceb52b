#ifndef REVCONF_ASPECTS_HPP
#define REVCONF_ASPECTS_HPP

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revconf/types.hpp"

namespace revconf {

// Tokens that flip polarity when they appear in the 3-token window before a
// polarity carrier; also used as a classifier feature.
const std::set<std::string>& negation_tokens();

std::string_view aspect_name(Aspect a);
std::optional<Aspect> aspect_from_name(std::string_view name);
std::string_view polarity_name(Polarity p);
std::optional<Polarity> polarity_from_name(std::string_view name);

constexpr Polarity flip(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

// How a rule decides polarity: carried by the pattern itself, or taken from
// the nearest opinion word in the sentence.
enum class RulePolarity { Positive, Negative, Opinion };

struct AspectRule {
  Aspect aspect;
  std::vector<std::string> pattern;  // tokenized, lowercase
  RulePolarity polarity;
};

class AspectRuleTable {
 public:
  static AspectRuleTable builtin();
  static AspectRuleTable from_file(const std::string& path);
  static AspectRuleTable parse(std::string_view content,
                               const std::string& origin);

  std::span<const AspectRule> rules() const { return rules_; }

  // Longest rule pattern starting at tokens[pos]; nullptr when none.
  const AspectRule* longest_match_at(std::span<const std::string> tokens,
                                     std::size_t pos) const;

 private:
  std::vector<AspectRule> rules_;
  std::map<std::string, std::vector<std::size_t>> by_first_;  // longest first
};

// Rule-based tagging over a tokenized sentence. Duplicate (aspect, polarity)
// pairs are collapsed; the result is sorted.
std::vector<AspectAnnotation> tag_aspects(std::span<const std::string> tokens,
                                          const AspectRuleTable& rules);

// Tri-state sentiment-majority category used in diagnostics output.
enum class SentimentMajority { PosGreater, NegGEQPos };
SentimentMajority sentiment_majority(std::span<const AspectAnnotation> annotations);

// ---------------------------------------------------------------------------
// External annotation import: TSV rows review_id, sentence_index, aspect,
// polarity. Imported annotations override heuristic output per sentence.
// ---------------------------------------------------------------------------

struct SentenceKey {
  std::string review_id;
  std::size_t index = 0;
  auto operator<=>(const SentenceKey&) const = default;
};

using AnnotationMap = std::map<SentenceKey, std::vector<AspectAnnotation>>;

AnnotationMap import_annotations(const std::string& path);
AnnotationMap parse_annotations(std::string_view content,
                                const std::string& origin);
std::string serialize_annotations(const AnnotationMap& annotations);

}  // namespace revconf

#endif  // REVCONF_ASPECTS_HPP
