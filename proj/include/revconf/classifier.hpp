#ifndef REVCONF_CLASSIFIER_HPP
#define REVCONF_CLASSIFIER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revconf/lexicon.hpp"
#include "revconf/types.hpp"

namespace revconf {

struct LabeledSentence {
  std::string text;
  int label = 0;  // 1 hedge, 0 non-hedge
};

std::vector<LabeledSentence> load_labeled(const std::string& path);
std::vector<LabeledSentence> parse_labeled(std::string_view content,
                                           const std::string& origin);

// ---------------------------------------------------------------------------
// Dataset split
// ---------------------------------------------------------------------------

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct DataSplit {
  std::vector<LabeledSentence> train;
  std::vector<LabeledSentence> validation;
  std::vector<LabeledSentence> test;
};

// Disjoint cover of the input; the shuffle is a pure function of the seed.
// Sizes are floor(n*train), floor(n*validation), remainder.
DataSplit split_dataset(std::vector<LabeledSentence> data, SplitRatios ratios,
                        std::uint32_t seed);

// ---------------------------------------------------------------------------
// Feature extraction
// ---------------------------------------------------------------------------

// Versioned description of the extractor; serialized with every model so a
// model refuses to score against features it was not trained on.
struct FeatureSpec {
  std::string version = "revconf-features/1";
  int df_floor = 5;              // unigram document-frequency floor
  std::size_t short_limit = 8;   // tokens; < short_limit is "short"
  std::size_t long_limit = 20;   // >= long_limit is "long"
  std::vector<std::string> vocab;  // sorted unigrams kept by the floor
  std::string lexicon_fingerprint;

  bool operator==(const FeatureSpec&) const = default;
};

// Sparse vector sorted by feature id; ids index the dense weight vector.
using FeatureVector = std::vector<std::pair<std::uint32_t, double>>;

class FeatureExtractor {
 public:
  FeatureExtractor(const HedgeLexicon& lexicon, FeatureSpec spec);

  // Vocabulary = training unigrams that occur in at least df_floor sentences.
  static FeatureSpec build_spec(const HedgeLexicon& lexicon,
                                std::span<const LabeledSentence> train,
                                int df_floor);

  FeatureVector extract(std::span<const std::string> tokens) const;
  FeatureVector extract_text(std::string_view sentence) const;

  std::size_t dimension() const { return dimension_; }
  const FeatureSpec& spec() const { return spec_; }
  std::string feature_name(std::uint32_t id) const;

 private:
  HedgeLexicon lexicon_;
  FeatureSpec spec_;
  std::size_t dimension_ = 0;
  // layout: [0]=cue_total, [1..3]=length bucket one-hot, [4]=has_negation,
  // [5]=has_modal, then per-cue (indicator, count) pairs, then vocab unigrams
  std::size_t cue_base_ = 6;
  std::size_t vocab_base_ = 0;
};

// ---------------------------------------------------------------------------
// Model, training, prediction
// ---------------------------------------------------------------------------

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double validation_accuracy = 0.0;
};

struct TrainSummary {
  int epochs = 0;
  double final_loss = 0.0;
  double grad_max_norm = 0.0;
  bool converged = false;
  std::vector<EpochLog> history;
};

struct ClassifierModel {
  FeatureSpec spec;
  std::vector<double> weights;  // dense, FeatureExtractor layout
  double bias = 0.0;
  std::uint32_t seed = 0;
  TrainSummary summary;
};

struct TrainOptions {
  double l2 = 1e-3;              // L2 strength; the bias is not regularized
  double tolerance = 1e-6;        // stop when loss improves less than this
  double grad_tolerance = 1e-6;   // or when the gradient max-norm is below
  int max_epochs = 500;
  bool class_weights = false;     // inverse-frequency sample weights
  int df_floor = 5;
  std::uint32_t seed = 42;
};

// Regularized log-loss minimized by L-BFGS with backtracking line search;
// one epoch = one full-batch update. Throws ModelError when the training set
// has a single class. Non-convergence within max_epochs is reported via
// summary.converged with the best (last) model returned.
ClassifierModel train(const std::vector<LabeledSentence>& train_set,
                      const std::vector<LabeledSentence>& validation_set,
                      const HedgeLexicon& lexicon,
                      const TrainOptions& options = {});

// Extractor matching a stored model; throws ModelError when the lexicon does
// not match the fingerprint the model was trained with.
FeatureExtractor make_extractor(const ClassifierModel& model,
                                const HedgeLexicon& lexicon);

double predict_features(const ClassifierModel& model, const FeatureVector& fv);
// Throws ModelError when the extractor's spec differs from the model's.
double predict(const ClassifierModel& model, const FeatureExtractor& extractor,
               std::string_view sentence);

// Final verdict: classifier-positive AND at least one lexicon cue.
bool confirm_hedge(double probability, std::span<const CueMatch> cue_matches);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct EvalReport {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;

  static EvalReport from_counts(long tp, long fp, long tn, long fn);
  long total() const { return tp + fp + tn + fn; }
};

// Raw metrics: verdict = probability >= 0.5.
EvalReport evaluate(const ClassifierModel& model, const HedgeLexicon& lexicon,
                    std::span<const LabeledSentence> test_set);
// Confirmed metrics: verdict additionally requires a cue match.
EvalReport evaluate_confirmed(const ClassifierModel& model,
                              const HedgeLexicon& lexicon,
                              std::span<const LabeledSentence> test_set);

// ---------------------------------------------------------------------------
// Serialization (versioned JSON; round-trips losslessly)
// ---------------------------------------------------------------------------

std::string serialize_model(const ClassifierModel& model);
ClassifierModel parse_model(std::string_view json_text,
                            const std::string& origin);
void save_model(const std::string& path, const ClassifierModel& model);
ClassifierModel load_model(const std::string& path);

}  // namespace revconf

#endif  // REVCONF_CLASSIFIER_HPP
