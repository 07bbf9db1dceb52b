#ifndef REVCONF_ANALYTICS_HPP
#define REVCONF_ANALYTICS_HPP

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revconf/lexicon.hpp"
#include "revconf/stats.hpp"
#include "revconf/types.hpp"

namespace revconf {

// ---------------------------------------------------------------------------
// Length statistics per confidence score
// ---------------------------------------------------------------------------

struct LengthStatsRow {
  int confidence = 0;
  double avg_words = 0.0;
  double avg_sentences = 0.0;
  long review_count = 0;
};

// Rows only for scores present in the corpus, ascending.
std::vector<LengthStatsRow> length_stats(std::span<const AnalyzedReview> reviews);

// ---------------------------------------------------------------------------
// Aspect and sentiment distribution over confirmed hedge sentences
// ---------------------------------------------------------------------------

struct AspectDistributionRow {
  int confidence = 0;
  long review_count = 0;
  long annotation_count = 0;  // annotations on hedge sentences, summary excluded
  // ratio per analyzed aspect; only aspects with annotations appear
  std::map<Aspect, double> aspect_ratios;
  double avg_hedge_sentences = 0.0;
  // NaN when the row has no annotations (reported as absent, never divided)
  double positive_ratio = 0.0;
  double negative_ratio = 0.0;
};

std::vector<AspectDistributionRow> aspect_distribution(
    std::span<const AnalyzedReview> reviews);

// ---------------------------------------------------------------------------
// Per-review feature rows: the regression/correlation unit of analysis
// ---------------------------------------------------------------------------

struct ReviewFeatureRow {
  std::string review_id;
  int confidence = 0;
  // counts of hedge-sentence annotations, indexed like kAnalyzedAspects
  std::array<long, 7> aspect_counts{};
  std::optional<int> decision;
};

std::vector<ReviewFeatureRow> build_feature_rows(
    std::span<const AnalyzedReview> reviews);

long aspect_count(const ReviewFeatureRow& row, Aspect aspect);

// ---------------------------------------------------------------------------
// Correlation matrix: confidence + the seven aspect counts
// ---------------------------------------------------------------------------

// Variable order used by correlation and regression reports.
inline constexpr std::array<Aspect, 7> kReportAspectOrder = {
    Aspect::Soundness,     Aspect::Clarity,
    Aspect::Substance,     Aspect::Originality,
    Aspect::MeaningfulComparison, Aspect::Motivation,
    Aspect::Replicability,
};

struct CorrelationMatrix {
  std::vector<std::string> variables;  // "confidence" + aspect names
  std::vector<std::vector<stats::SpearmanResult>> cells;  // square, symmetric
};

CorrelationMatrix correlation_matrix(std::span<const ReviewFeatureRow> rows);

// ---------------------------------------------------------------------------
// Significance battery: per aspect, Spearman against confidence plus a
// Mann-Whitney U test across the confidence dichotomy (<= threshold vs >).
// ---------------------------------------------------------------------------

struct BatteryRow {
  std::string variable;
  stats::SpearmanResult spearman;
  stats::MannWhitneyResult u_test;
  long n_low = 0, n_high = 0;
  bool degenerate = false;
  std::string note;  // reason when degenerate
};

std::vector<BatteryRow> significance_battery(
    std::span<const ReviewFeatureRow> rows, int dichotomy_threshold = 3);

// ---------------------------------------------------------------------------
// Logistic regression of the paper decision
// ---------------------------------------------------------------------------

// decision ~ intercept + confidence + seven aspect counts, reviews without a
// decision excluded. Throws AnalyticsError when fewer than two outcome
// classes remain.
stats::LogisticFit regression_fit(std::span<const ReviewFeatureRow> rows);

// ---------------------------------------------------------------------------
// Cue usage distribution
// ---------------------------------------------------------------------------

struct CueDistributionCell {
  std::string cue;
  long count = 0;
  double ratio = 0.0;  // count / total matches at this confidence
};

struct CueDistributionRow {
  int confidence = 0;
  long total_matches = 0;
  std::vector<CueDistributionCell> top;  // by count desc, cue asc
};

std::vector<CueDistributionRow> cue_distribution(const CueFrequency& freq,
                                                 std::size_t top_k = 10);

}  // namespace revconf

#endif  // REVCONF_ANALYTICS_HPP
