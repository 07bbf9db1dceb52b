#ifndef REVCONF_PIPELINE_HPP
#define REVCONF_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "revconf/aspects.hpp"
#include "revconf/classifier.hpp"
#include "revconf/report.hpp"

namespace revconf {

struct PipelineConfig {
  std::string corpus_path;
  std::string lexicon_path;           // empty: bundled lexicon
  std::string model_path = "train";   // model file, or "train" to bootstrap
  std::string aspect_rules_path;      // empty: bundled rule table
  std::string aspect_import_path;     // empty: heuristic tagging only
  std::string output_dir = ".";
  std::uint32_t seed = 42;
  bool tag_all_sentences = false;
  bool class_weights = false;
  int dichotomy_threshold = 3;
};

struct StageRecord {
  std::string name;
  long rows = 0;
  double wall_ms = 0.0;
};

struct RunManifest {
  std::string tool;
  PipelineConfig config;
  std::map<std::string, std::string> input_digests;  // source -> fnv1a64 hex
  std::vector<StageRecord> stages;
  std::vector<std::string> warnings;

  long stage_rows(const std::string& name) const;
};

std::string manifest_json(const RunManifest& manifest);
// Re-hashes every real input file recorded in a manifest; returns mismatch
// descriptions, empty when everything matches.
std::vector<std::string> verify_manifest_digests(const std::string& manifest_path);

// ---------------------------------------------------------------------------
// Pipeline stages, reusable outside the CLI
// ---------------------------------------------------------------------------

// strip markup, segment, tokenize, match cues
AnalyzedReview prepare_review(const Review& review, const HedgeLexicon& lexicon);
std::vector<AnalyzedReview> prepare_corpus(const std::vector<Review>& reviews,
                                           const HedgeLexicon& lexicon);

// Weak-label bootstrap used when no trained model is supplied: cue presence
// labels the corpus sentences and a model is trained on them.
ClassifierModel bootstrap_model(const std::vector<AnalyzedReview>& corpus,
                                const HedgeLexicon& lexicon,
                                const TrainOptions& options);

// classifier probability + lexicon confirmation -> final verdicts
void classify_and_confirm(std::vector<AnalyzedReview>& corpus,
                          const ClassifierModel& model,
                          const HedgeLexicon& lexicon);

// heuristic aspects on confirmed hedge sentences (all sentences with tag_all)
void tag_sentences(std::vector<AnalyzedReview>& corpus,
                   const AspectRuleTable& rules, bool tag_all);

// imported annotations override heuristic output; throws IngestError when a
// key does not exist in the corpus
void apply_imported_annotations(std::vector<AnalyzedReview>& corpus,
                                const AnnotationMap& imports);

AnalysisResult analyze_corpus(const std::vector<AnalyzedReview>& corpus,
                              int dichotomy_threshold);

// Per-sentence diagnostics TSV (verdicts, cues, aspects, provenance).
std::string sentences_tsv(const std::vector<AnalyzedReview>& corpus);

// ---------------------------------------------------------------------------
// Commands. They throw (IngestError/ModelError/AnalyticsError/UsageError);
// the CLI maps exception types to exit codes.
// ---------------------------------------------------------------------------

struct AnalyzeOutput {
  AnalysisResult result;
  RunManifest manifest;
  std::vector<AnalyzedReview> corpus;
};

// Runs the full pipeline and writes the report bundle: five CSVs,
// report.json, sentences.tsv, plus manifest.json. Nothing is written until
// every stage has succeeded.
AnalyzeOutput cmd_analyze(const PipelineConfig& config);

struct TrainOutput {
  ClassifierModel model;
  EvalReport train_metrics;      // raw, on the training split
  EvalReport validation_metrics; // raw, on the validation split
  EvalReport test_metrics;       // raw, on the held-out split
  EvalReport test_confirmed;     // confirmed, on the held-out split
  std::size_t n_train = 0, n_validation = 0, n_test = 0;
};

// 8:1:1 split of the labeled file, training on the first part.
TrainOutput cmd_train(const std::string& labeled_path,
                      const std::string& model_out_path,
                      const std::string& lexicon_path,
                      const TrainOptions& options);

struct EvaluateOutput {
  EvalReport raw;
  EvalReport confirmed;
  std::size_t n = 0;
};

EvaluateOutput cmd_evaluate(const std::string& labeled_path,
                            const std::string& model_path,
                            const std::string& lexicon_path);

// Reshapes an existing report bundle into long-format CSVs
// (<table>_long.csv) for external plotting tools.
void cmd_plotdata(const std::string& bundle_dir, const std::string& out_dir);

// Loads the lexicon from a path, or the bundled one when empty.
HedgeLexicon load_lexicon_or_builtin(const std::string& path);
AspectRuleTable load_rules_or_builtin(const std::string& path);

}  // namespace revconf

#endif  // REVCONF_PIPELINE_HPP
