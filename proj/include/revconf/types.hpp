#ifndef REVCONF_TYPES_HPP
#define REVCONF_TYPES_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace revconf {

// One review report: the unit the corpus file stores per line.
struct Review {
  std::string review_id;
  std::string paper_id;
  std::string venue;
  int confidence = 0;                // 1..5
  std::optional<int> decision;       // 1 accept, 0 reject, absent if unknown
  std::string text;
};

// Review-evaluation dimensions. Summary is carried through tagging but
// excluded from every aggregate table.
enum class Aspect {
  Summary,
  Motivation,
  Originality,
  Soundness,
  Substance,
  Replicability,
  MeaningfulComparison,
  Clarity,
};

inline constexpr std::array<Aspect, 8> kAllAspects = {
    Aspect::Summary,        Aspect::Motivation,    Aspect::Originality,
    Aspect::Soundness,      Aspect::Substance,     Aspect::Replicability,
    Aspect::MeaningfulComparison, Aspect::Clarity,
};

// The seven aspects that enter distributions, correlations and regression.
inline constexpr std::array<Aspect, 7> kAnalyzedAspects = {
    Aspect::Motivation,    Aspect::Originality,          Aspect::Soundness,
    Aspect::Substance,     Aspect::Replicability,        Aspect::MeaningfulComparison,
    Aspect::Clarity,
};

enum class Polarity { Positive, Negative };

struct AspectAnnotation {
  Aspect aspect;
  Polarity polarity;
  auto operator<=>(const AspectAnnotation&) const = default;
};

// A located hedge-cue occurrence: token indices [begin, end) in a sentence.
struct CueMatch {
  std::string cue;
  std::size_t begin = 0;
  std::size_t end = 0;
  auto operator<=>(const CueMatch&) const = default;
};

enum class HedgeVerdict { Unclassified, Hedge, NonHedge };

enum class AnnotationSource { None, Heuristic, Imported };

// A segmented sentence with everything the pipeline attaches to it.
struct SentenceRecord {
  std::string review_id;
  std::size_t index = 0;             // 0-based position within the review
  std::string text;
  std::vector<std::string> tokens;
  std::vector<CueMatch> cue_matches;
  HedgeVerdict is_hedge = HedgeVerdict::Unclassified;
  std::vector<AspectAnnotation> aspects;
  AnnotationSource aspect_source = AnnotationSource::None;
};

// A review plus its processed sentences; what analytics consumes.
struct AnalyzedReview {
  Review review;
  std::vector<SentenceRecord> sentences;

  std::size_t word_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
  }
  std::size_t hedge_sentence_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences)
      if (s.is_hedge == HedgeVerdict::Hedge) ++n;
    return n;
  }
};

}  // namespace revconf

#endif  // REVCONF_TYPES_HPP
