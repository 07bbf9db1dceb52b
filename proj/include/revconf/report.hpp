#ifndef REVCONF_REPORT_HPP
#define REVCONF_REPORT_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revconf/analytics.hpp"
#include "revconf/corpus.hpp"

namespace revconf {

inline constexpr std::string_view kToolVersion = "revconf/0.1.0";

// Everything cmd_analyze computes; report writers render it.
struct AnalysisResult {
  CorpusStatsReport corpus;
  std::vector<LengthStatsRow> lengths;
  std::vector<CueDistributionRow> cues;
  std::vector<AspectDistributionRow> aspects;
  CorrelationMatrix correlation;
  std::vector<BatteryRow> battery;
  std::optional<stats::LogisticFit> regression;
  std::string regression_note;  // set when the regression could not run
  std::vector<ReviewFeatureRow> feature_rows;
  int dichotomy_threshold = 3;
};

// ---------------------------------------------------------------------------
// Published baseline values from the original large-scale review-corpus
// study. Reports carry them as ref_* columns for side-by-side comparison;
// they are display strings, never inputs to any computation.
// ---------------------------------------------------------------------------

namespace reference {

struct LengthRow {
  int confidence;
  const char* avg_words;
  const char* avg_sentences;
};
std::span<const LengthRow> length_stats();

struct CueCell {
  const char* cue;
  const char* ratio;
};
// Top-10 cues at a confidence score, strongest first; empty when the score
// is outside 1..5.
std::span<const CueCell> cue_top10(int confidence);

struct AspectRow {
  int confidence;
  const char* clarity;
  const char* soundness;
  const char* motivation;
  const char* originality;
  const char* substance;
  const char* replicability;
  const char* meaningful_comparison;
  const char* avg_hedge_sentences;
  const char* positive;
  const char* negative;
};
std::span<const AspectRow> aspect_distribution();

struct CorrelationCell {
  const char* var_a;
  const char* var_b;
  const char* rho;
  const char* p;
};
std::span<const CorrelationCell> correlation();
// nullptr fields when the pair is not in the published matrix
const CorrelationCell* correlation_for(std::string_view var_a,
                                       std::string_view var_b);

struct RegressionRow {
  const char* variable;
  const char* coef;
  const char* std_err;
  const char* z;
  const char* p;
  const char* ci_low;
  const char* ci_high;
};
std::span<const RegressionRow> regression();
const RegressionRow* regression_for(std::string_view variable);

struct VenueRow {
  const char* venue;
  const char* reviews;
  const char* avg_words;
  const char* avg_sentences;
  const char* accepted;
  const char* rejected;
  const char* avg_confidence;
};
std::span<const VenueRow> corpus_stats();

}  // namespace reference

// ---------------------------------------------------------------------------
// CSV renderers (byte-deterministic; schema in docs/report_schema.md)
// ---------------------------------------------------------------------------

std::string lengths_csv(std::span<const LengthStatsRow> rows);
std::string cue_distribution_csv(std::span<const CueDistributionRow> rows);
std::string aspect_distribution_csv(std::span<const AspectDistributionRow> rows);
std::string correlation_csv(const CorrelationMatrix& matrix);
std::string regression_csv(const stats::LogisticFit* fit,
                           const std::string& note);

// Combined structured report.
std::string report_json(const AnalysisResult& result);

// Methodology notes embedded in every report.
std::vector<std::string> report_notes();

// ---------------------------------------------------------------------------
// Plot-ready reshape: one (group, variable, value) row per metric cell.
// ---------------------------------------------------------------------------

struct LongRow {
  std::string group;
  std::string variable;
  std::string value;
};

std::string to_long_csv(std::span<const LongRow> rows);
// Reshapes one of the five wide CSV tables by name ("lengths", ...).
std::vector<LongRow> reshape_table(const std::string& table_name,
                                   const std::string& csv_content);

}  // namespace revconf

#endif  // REVCONF_REPORT_HPP
