#include "revconf/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "revconf/aspects.hpp"
#include "revconf/errors.hpp"

namespace revconf {

namespace {

std::size_t analyzed_aspect_index(Aspect aspect) {
  for (std::size_t i = 0; i < kAnalyzedAspects.size(); ++i)
    if (kAnalyzedAspects[i] == aspect) return i;
  return kAnalyzedAspects.size();  // summary
}

}  // namespace

std::vector<LengthStatsRow> length_stats(std::span<const AnalyzedReview> reviews) {
  if (reviews.empty()) throw AnalyticsError("length_stats: empty corpus");
  std::map<int, LengthStatsRow> rows;
  for (const auto& ar : reviews) {
    auto& row = rows[ar.review.confidence];
    row.confidence = ar.review.confidence;
    row.avg_words += static_cast<double>(ar.word_count());
    row.avg_sentences += static_cast<double>(ar.sentences.size());
    ++row.review_count;
  }
  std::vector<LengthStatsRow> out;
  out.reserve(rows.size());
  for (auto& [conf, row] : rows) {
    row.avg_words /= static_cast<double>(row.review_count);
    row.avg_sentences /= static_cast<double>(row.review_count);
    out.push_back(row);
  }
  return out;
}

std::vector<AspectDistributionRow> aspect_distribution(
    std::span<const AnalyzedReview> reviews) {
  std::map<int, AspectDistributionRow> rows;
  std::map<int, std::map<Aspect, long>> counts;
  std::map<int, long> positives, negatives, hedge_sentences;

  for (const auto& ar : reviews) {
    const int conf = ar.review.confidence;
    auto& row = rows[conf];
    row.confidence = conf;
    ++row.review_count;
    hedge_sentences[conf] += static_cast<long>(ar.hedge_sentence_count());
    for (const auto& s : ar.sentences) {
      if (s.is_hedge != HedgeVerdict::Hedge) continue;
      for (const auto& a : s.aspects) {
        if (a.aspect == Aspect::Summary) continue;  // never aggregated
        ++counts[conf][a.aspect];
        ++row.annotation_count;
        if (a.polarity == Polarity::Positive)
          ++positives[conf];
        else
          ++negatives[conf];
      }
    }
  }

  std::vector<AspectDistributionRow> out;
  for (auto& [conf, row] : rows) {
    row.avg_hedge_sentences = static_cast<double>(hedge_sentences[conf]) /
                              static_cast<double>(row.review_count);
    if (row.annotation_count > 0) {
      const double total = static_cast<double>(row.annotation_count);
      for (const auto& [aspect, count] : counts[conf])
        row.aspect_ratios[aspect] = static_cast<double>(count) / total;
      row.positive_ratio = static_cast<double>(positives[conf]) / total;
      row.negative_ratio = static_cast<double>(negatives[conf]) / total;
    } else {
      row.positive_ratio = std::numeric_limits<double>::quiet_NaN();
      row.negative_ratio = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ReviewFeatureRow> build_feature_rows(
    std::span<const AnalyzedReview> reviews) {
  std::vector<ReviewFeatureRow> rows;
  rows.reserve(reviews.size());
  for (const auto& ar : reviews) {
    ReviewFeatureRow row;
    row.review_id = ar.review.review_id;
    row.confidence = ar.review.confidence;
    row.decision = ar.review.decision;
    for (const auto& s : ar.sentences) {
      if (s.is_hedge != HedgeVerdict::Hedge) continue;
      for (const auto& a : s.aspects) {
        const std::size_t idx = analyzed_aspect_index(a.aspect);
        if (idx < row.aspect_counts.size()) ++row.aspect_counts[idx];
      }
    }
    rows.push_back(std::move(row));
  }
  // deterministic merge order regardless of input order
  std::sort(rows.begin(), rows.end(),
            [](const ReviewFeatureRow& a, const ReviewFeatureRow& b) {
              return a.review_id < b.review_id;
            });
  return rows;
}

long aspect_count(const ReviewFeatureRow& row, Aspect aspect) {
  const std::size_t idx = analyzed_aspect_index(aspect);
  return idx < row.aspect_counts.size() ? row.aspect_counts[idx] : 0;
}

CorrelationMatrix correlation_matrix(std::span<const ReviewFeatureRow> rows) {
  if (rows.size() < 3)
    throw AnalyticsError(
        "correlation_matrix: need at least 3 reviews, got " +
        std::to_string(rows.size()));

  CorrelationMatrix matrix;
  std::vector<std::vector<double>> columns;
  matrix.variables.emplace_back("confidence");
  {
    std::vector<double> conf;
    conf.reserve(rows.size());
    for (const auto& r : rows) conf.push_back(static_cast<double>(r.confidence));
    columns.push_back(std::move(conf));
  }
  for (Aspect aspect : kReportAspectOrder) {
    matrix.variables.emplace_back(aspect_name(aspect));
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& r : rows)
      col.push_back(static_cast<double>(aspect_count(r, aspect)));
    columns.push_back(std::move(col));
  }

  const std::size_t k = columns.size();
  matrix.cells.assign(k, std::vector<stats::SpearmanResult>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (i == j) {
        stats::SpearmanResult self;
        self.defined = true;
        self.rho = 1.0;
        self.p_value = 0.0;
        self.n = rows.size();
        matrix.cells[i][j] = self;
        continue;
      }
      const stats::SpearmanResult r = stats::spearman(columns[i], columns[j]);
      matrix.cells[i][j] = r;
      matrix.cells[j][i] = r;
    }
  }
  return matrix;
}

std::vector<BatteryRow> significance_battery(
    std::span<const ReviewFeatureRow> rows, int dichotomy_threshold) {
  if (rows.size() < 3)
    throw AnalyticsError("significance_battery: need at least 3 reviews");

  std::vector<double> conf;
  conf.reserve(rows.size());
  for (const auto& r : rows) conf.push_back(static_cast<double>(r.confidence));

  std::vector<BatteryRow> out;
  for (Aspect aspect : kReportAspectOrder) {
    BatteryRow row;
    row.variable = aspect_name(aspect);
    std::vector<double> counts, low, high;
    counts.reserve(rows.size());
    for (const auto& r : rows) {
      const double c = static_cast<double>(aspect_count(r, aspect));
      counts.push_back(c);
      if (r.confidence <= dichotomy_threshold)
        low.push_back(c);
      else
        high.push_back(c);
    }
    row.n_low = static_cast<long>(low.size());
    row.n_high = static_cast<long>(high.size());

    const bool constant =
        std::all_of(counts.begin(), counts.end(),
                    [&](double v) { return v == counts.front(); });
    if (constant) {
      row.degenerate = true;
      row.note = "aspect count identical across all reviews";
      out.push_back(std::move(row));
      continue;
    }
    if (low.empty() || high.empty()) {
      row.degenerate = true;
      row.note = "confidence dichotomy leaves one side empty (threshold " +
                 std::to_string(dichotomy_threshold) + ")";
      row.spearman = stats::spearman(conf, counts);
      out.push_back(std::move(row));
      continue;
    }
    row.spearman = stats::spearman(conf, counts);
    row.u_test = stats::mann_whitney_u(low, high);
    out.push_back(std::move(row));
  }
  return out;
}

stats::LogisticFit regression_fit(std::span<const ReviewFeatureRow> rows) {
  stats::LogisticData data;
  data.names = {"intercept", "confidence"};
  for (Aspect aspect : kReportAspectOrder)
    data.names.emplace_back(aspect_name(aspect));

  for (const auto& r : rows) {
    if (!r.decision) continue;  // no decision: excluded from regression
    std::vector<double> x;
    x.reserve(data.names.size());
    x.push_back(1.0);
    x.push_back(static_cast<double>(r.confidence));
    for (Aspect aspect : kReportAspectOrder)
      x.push_back(static_cast<double>(aspect_count(r, aspect)));
    data.x.push_back(std::move(x));
    data.y.push_back(*r.decision);
  }
  if (data.x.empty())
    throw AnalyticsError("regression_fit: no reviews carry a paper decision");
  return stats::logistic_fit(data);
}

std::vector<CueDistributionRow> cue_distribution(const CueFrequency& freq,
                                                 std::size_t top_k) {
  std::vector<CueDistributionRow> out;
  for (const auto& [conf, cue_counts] : freq) {
    CueDistributionRow row;
    row.confidence = conf;
    for (const auto& [cue, count] : cue_counts) row.total_matches += count;

    std::vector<CueDistributionCell> cells;
    cells.reserve(cue_counts.size());
    for (const auto& [cue, count] : cue_counts)
      cells.push_back(
          {cue, count,
           static_cast<double>(count) / static_cast<double>(row.total_matches)});
    std::sort(cells.begin(), cells.end(),
              [](const CueDistributionCell& a, const CueDistributionCell& b) {
                if (a.count != b.count) return a.count > b.count;
                return a.cue < b.cue;
              });
    if (cells.size() > top_k) cells.resize(top_k);
    row.top = std::move(cells);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace revconf
