#include "revconf/pipeline.hpp"

#include <chrono>
#include <filesystem>

#include "json.hpp"
#include "revconf/builtin_data.hpp"
#include "revconf/errors.hpp"
#include "revconf/util.hpp"

namespace revconf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

long RunManifest::stage_rows(const std::string& name) const {
  for (const auto& stage : stages)
    if (stage.name == name) return stage.rows;
  return -1;
}

std::string manifest_json(const RunManifest& manifest) {
  json j;
  j["tool"] = manifest.tool;
  j["config"] = {
      {"corpus", manifest.config.corpus_path},
      {"lexicon", manifest.config.lexicon_path.empty()
                      ? "builtin"
                      : manifest.config.lexicon_path},
      {"model", manifest.config.model_path},
      {"aspect_rules", manifest.config.aspect_rules_path.empty()
                           ? "builtin"
                           : manifest.config.aspect_rules_path},
      {"aspect_import", manifest.config.aspect_import_path},
      {"output_dir", manifest.config.output_dir},
      {"seed", manifest.config.seed},
      {"tag_all_sentences", manifest.config.tag_all_sentences},
      {"class_weights", manifest.config.class_weights},
      {"dichotomy_threshold", manifest.config.dichotomy_threshold},
  };
  j["inputs"] = manifest.input_digests;
  json stages = json::array();
  for (const auto& stage : manifest.stages)
    stages.push_back({{"name", stage.name},
                      {"rows", stage.rows},
                      {"wall_ms", stage.wall_ms}});
  j["stages"] = stages;
  j["warnings"] = manifest.warnings;
  return j.dump(2) + "\n";
}

std::vector<std::string> verify_manifest_digests(
    const std::string& manifest_path) {
  std::vector<std::string> mismatches;
  json j;
  try {
    j = json::parse(read_file(manifest_path));
  } catch (const std::exception& e) {
    return {std::string("cannot read manifest: ") + e.what()};
  }
  if (!j.contains("inputs") || !j["inputs"].is_object())
    return {"manifest has no inputs object"};
  for (const auto& [source, digest] : j["inputs"].items()) {
    if (source.rfind("builtin:", 0) == 0) continue;
    std::string current;
    try {
      current = fnv1a64_file_hex(source);
    } catch (const std::exception& e) {
      mismatches.push_back(source + ": " + e.what());
      continue;
    }
    if (current != digest.get<std::string>())
      mismatches.push_back(source + ": digest changed (" +
                           digest.get<std::string>() + " -> " + current + ")");
  }
  return mismatches;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

HedgeLexicon load_lexicon_or_builtin(const std::string& path) {
  if (path.empty()) return HedgeLexicon::builtin();
  return HedgeLexicon::from_file(path);
}

AspectRuleTable load_rules_or_builtin(const std::string& path) {
  if (path.empty()) return AspectRuleTable::builtin();
  return AspectRuleTable::from_file(path);
}

AnalyzedReview prepare_review(const Review& review, const HedgeLexicon& lexicon) {
  AnalyzedReview ar;
  ar.review = review;
  const std::vector<std::string> sentences =
      split_sentences(strip_markup(review.text));
  ar.sentences.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    SentenceRecord record;
    record.review_id = review.review_id;
    record.index = i;
    record.text = sentences[i];
    record.tokens = tokenize_words(sentences[i]);
    record.cue_matches = match_cues(record.tokens, lexicon);
    ar.sentences.push_back(std::move(record));
  }
  return ar;
}

std::vector<AnalyzedReview> prepare_corpus(const std::vector<Review>& reviews,
                                           const HedgeLexicon& lexicon) {
  std::vector<AnalyzedReview> out;
  out.reserve(reviews.size());
  for (const auto& review : reviews) out.push_back(prepare_review(review, lexicon));
  return out;
}

ClassifierModel bootstrap_model(const std::vector<AnalyzedReview>& corpus,
                                const HedgeLexicon& lexicon,
                                const TrainOptions& options) {
  std::vector<LabeledSentence> labeled;
  for (const auto& ar : corpus)
    for (const auto& s : ar.sentences)
      labeled.push_back({s.text, s.cue_matches.empty() ? 0 : 1});
  return train(labeled, {}, lexicon, options);
}

void classify_and_confirm(std::vector<AnalyzedReview>& corpus,
                          const ClassifierModel& model,
                          const HedgeLexicon& lexicon) {
  const FeatureExtractor extractor = make_extractor(model, lexicon);
  for (auto& ar : corpus) {
    for (auto& s : ar.sentences) {
      const double prob = predict_features(model, extractor.extract(s.tokens));
      s.is_hedge = confirm_hedge(prob, s.cue_matches) ? HedgeVerdict::Hedge
                                                      : HedgeVerdict::NonHedge;
    }
  }
}

void tag_sentences(std::vector<AnalyzedReview>& corpus,
                   const AspectRuleTable& rules, bool tag_all) {
  for (auto& ar : corpus) {
    for (auto& s : ar.sentences) {
      if (!tag_all && s.is_hedge != HedgeVerdict::Hedge) continue;
      s.aspects = tag_aspects(s.tokens, rules);
      s.aspect_source = AnnotationSource::Heuristic;
    }
  }
}

void apply_imported_annotations(std::vector<AnalyzedReview>& corpus,
                                const AnnotationMap& imports) {
  std::map<SentenceKey, SentenceRecord*> index;
  for (auto& ar : corpus)
    for (auto& s : ar.sentences) index[{s.review_id, s.index}] = &s;

  for (const auto& [key, annotations] : imports) {
    auto it = index.find(key);
    if (it == index.end())
      throw IngestError("aspect import: sentence (" + key.review_id + ", " +
                        std::to_string(key.index) + ") does not exist in the corpus");
    it->second->aspects = annotations;
    it->second->aspect_source = AnnotationSource::Imported;
  }
}

AnalysisResult analyze_corpus(const std::vector<AnalyzedReview>& corpus,
                              int dichotomy_threshold) {
  AnalysisResult result;
  result.dichotomy_threshold = dichotomy_threshold;
  result.corpus = corpus_stats(corpus);
  result.lengths = length_stats(corpus);
  result.cues = cue_distribution(cue_frequency(corpus));
  result.aspects = aspect_distribution(corpus);
  result.feature_rows = build_feature_rows(corpus);
  result.correlation = correlation_matrix(result.feature_rows);
  result.battery = significance_battery(result.feature_rows, dichotomy_threshold);
  try {
    result.regression = regression_fit(result.feature_rows);
  } catch (const AnalyticsError& e) {
    result.regression_note = e.what();
  }
  return result;
}

std::string sentences_tsv(const std::vector<AnalyzedReview>& corpus) {
  std::string out =
      "review_id\tsentence_index\tis_hedge\tcues\taspects\tsentiment_majority"
      "\tsource\n";
  for (const auto& ar : corpus) {
    for (const auto& s : ar.sentences) {
      out += s.review_id;
      out += '\t' + std::to_string(s.index);
      out += '\t';
      switch (s.is_hedge) {
        case HedgeVerdict::Hedge: out += "hedge"; break;
        case HedgeVerdict::NonHedge: out += "non-hedge"; break;
        case HedgeVerdict::Unclassified: out += "unclassified"; break;
      }
      out += '\t';
      for (std::size_t i = 0; i < s.cue_matches.size(); ++i) {
        if (i) out += ';';
        out += s.cue_matches[i].cue;
      }
      out += '\t';
      for (std::size_t i = 0; i < s.aspects.size(); ++i) {
        if (i) out += ';';
        out += std::string(aspect_name(s.aspects[i].aspect)) + "_" +
               std::string(polarity_name(s.aspects[i].polarity));
      }
      out += '\t';
      if (!s.aspects.empty())
        out += sentiment_majority(s.aspects) == SentimentMajority::PosGreater
                   ? "pos_greater"
                   : "neg_geq_pos";
      out += '\t';
      switch (s.aspect_source) {
        case AnnotationSource::Imported: out += "import"; break;
        case AnnotationSource::Heuristic: out += "heuristic"; break;
        case AnnotationSource::None: out += "none"; break;
      }
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// cmd_analyze
// ---------------------------------------------------------------------------

AnalyzeOutput cmd_analyze(const PipelineConfig& config) {
  if (config.corpus_path.empty())
    throw UsageError("analyze: --corpus is required");
  if (config.dichotomy_threshold < 1 || config.dichotomy_threshold > 4)
    throw UsageError("analyze: --dichotomy must be in 1..4");

  AnalyzeOutput output;
  RunManifest& manifest = output.manifest;
  manifest.tool = std::string(kToolVersion);
  manifest.config = config;

  auto record_stage = [&](const std::string& name, long rows,
                          std::chrono::steady_clock::time_point start) {
    manifest.stages.push_back({name, rows, elapsed_ms(start)});
  };

  // -- ingest ---------------------------------------------------------------
  auto t0 = std::chrono::steady_clock::now();
  const HedgeLexicon lexicon = load_lexicon_or_builtin(config.lexicon_path);
  if (config.lexicon_path.empty())
    manifest.input_digests["builtin:hedge_lexicon"] =
        fnv1a64_hex(builtin::hedge_lexicon_text());
  else
    manifest.input_digests[config.lexicon_path] =
        fnv1a64_file_hex(config.lexicon_path);

  const AspectRuleTable rules = load_rules_or_builtin(config.aspect_rules_path);
  if (config.aspect_rules_path.empty())
    manifest.input_digests["builtin:aspect_rules"] =
        fnv1a64_hex(builtin::aspect_rules_text());
  else
    manifest.input_digests[config.aspect_rules_path] =
        fnv1a64_file_hex(config.aspect_rules_path);

  const std::vector<Review> reviews = load_corpus(config.corpus_path);
  manifest.input_digests[config.corpus_path] =
      fnv1a64_file_hex(config.corpus_path);
  record_stage("load", static_cast<long>(reviews.size()), t0);

  // -- segment + match ------------------------------------------------------
  t0 = std::chrono::steady_clock::now();
  output.corpus = prepare_corpus(reviews, lexicon);
  long sentence_count = 0;
  for (const auto& ar : output.corpus)
    sentence_count += static_cast<long>(ar.sentences.size());
  record_stage("segment", sentence_count, t0);

  // -- classify + confirm ---------------------------------------------------
  t0 = std::chrono::steady_clock::now();
  ClassifierModel model;
  if (config.model_path == "train") {
    bool has_cue = false, has_plain = false;
    for (const auto& ar : output.corpus)
      for (const auto& s : ar.sentences)
        (s.cue_matches.empty() ? has_plain : has_cue) = true;
    if (has_cue && has_plain) {
      TrainOptions options;
      options.seed = config.seed;
      options.class_weights = config.class_weights;
      model = bootstrap_model(output.corpus, lexicon, options);
    } else {
      // degenerate corpus: fall back to the confirmation filter alone
      manifest.warnings.push_back(
          "bootstrap training skipped: corpus sentences are single-class "
          "under cue-presence labels; verdicts fall back to cue presence");
      for (auto& ar : output.corpus)
        for (auto& s : ar.sentences)
          s.is_hedge = s.cue_matches.empty() ? HedgeVerdict::NonHedge
                                             : HedgeVerdict::Hedge;
    }
  } else {
    model = load_model(config.model_path);
    manifest.input_digests[config.model_path] =
        fnv1a64_file_hex(config.model_path);
  }
  if (!model.weights.empty())
    classify_and_confirm(output.corpus, model, lexicon);
  record_stage("classify", sentence_count, t0);

  // -- tag ------------------------------------------------------------------
  t0 = std::chrono::steady_clock::now();
  tag_sentences(output.corpus, rules, config.tag_all_sentences);
  long tagged = 0;
  for (const auto& ar : output.corpus)
    for (const auto& s : ar.sentences)
      if (s.aspect_source != AnnotationSource::None) ++tagged;
  record_stage("tag", tagged, t0);

  if (!config.aspect_import_path.empty()) {
    t0 = std::chrono::steady_clock::now();
    const AnnotationMap imports = import_annotations(config.aspect_import_path);
    manifest.input_digests[config.aspect_import_path] =
        fnv1a64_file_hex(config.aspect_import_path);
    apply_imported_annotations(output.corpus, imports);
    record_stage("import_annotations", static_cast<long>(imports.size()), t0);
  }

  // -- analytics ------------------------------------------------------------
  t0 = std::chrono::steady_clock::now();
  output.result = analyze_corpus(output.corpus, config.dichotomy_threshold);
  record_stage("analytics", static_cast<long>(output.result.feature_rows.size()), t0);

  long regression_rows = 0;
  for (const auto& row : output.result.feature_rows)
    if (row.decision) ++regression_rows;
  manifest.stages.push_back({"regression_rows", regression_rows, 0.0});
  if (!output.result.regression_note.empty())
    manifest.warnings.push_back(output.result.regression_note);

  // -- write bundle (only after every stage succeeded) -----------------------
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec)
    throw IngestError("cannot create output directory " + config.output_dir +
                      ": " + ec.message());
  const fs::path out_dir(config.output_dir);
  write_file((out_dir / "lengths.csv").string(),
             lengths_csv(output.result.lengths));
  write_file((out_dir / "cue_distribution.csv").string(),
             cue_distribution_csv(output.result.cues));
  write_file((out_dir / "aspect_distribution.csv").string(),
             aspect_distribution_csv(output.result.aspects));
  write_file((out_dir / "correlation.csv").string(),
             correlation_csv(output.result.correlation));
  write_file((out_dir / "regression.csv").string(),
             regression_csv(output.result.regression ? &*output.result.regression
                                                     : nullptr,
                            output.result.regression_note));
  write_file((out_dir / "report.json").string(), report_json(output.result));
  write_file((out_dir / "sentences.tsv").string(), sentences_tsv(output.corpus));
  write_file((out_dir / "manifest.json").string(), manifest_json(manifest));
  return output;
}

// ---------------------------------------------------------------------------
// cmd_train / cmd_evaluate / cmd_plotdata
// ---------------------------------------------------------------------------

TrainOutput cmd_train(const std::string& labeled_path,
                      const std::string& model_out_path,
                      const std::string& lexicon_path,
                      const TrainOptions& options) {
  if (labeled_path.empty()) throw UsageError("train: --labeled is required");
  if (model_out_path.empty()) throw UsageError("train: --model is required");

  const HedgeLexicon lexicon = load_lexicon_or_builtin(lexicon_path);
  const std::vector<LabeledSentence> labeled = load_labeled(labeled_path);
  DataSplit split = split_dataset(labeled, SplitRatios{}, options.seed);

  TrainOutput out;
  out.n_train = split.train.size();
  out.n_validation = split.validation.size();
  out.n_test = split.test.size();
  out.model = train(split.train, split.validation, lexicon, options);
  out.train_metrics = evaluate(out.model, lexicon, split.train);
  if (!split.validation.empty())
    out.validation_metrics = evaluate(out.model, lexicon, split.validation);
  if (!split.test.empty()) {
    out.test_metrics = evaluate(out.model, lexicon, split.test);
    out.test_confirmed = evaluate_confirmed(out.model, lexicon, split.test);
  }
  save_model(model_out_path, out.model);
  return out;
}

EvaluateOutput cmd_evaluate(const std::string& labeled_path,
                            const std::string& model_path,
                            const std::string& lexicon_path) {
  if (labeled_path.empty()) throw UsageError("evaluate: --labeled is required");
  if (model_path.empty() || model_path == "train")
    throw UsageError("evaluate: --model must name a saved model file");

  const HedgeLexicon lexicon = load_lexicon_or_builtin(lexicon_path);
  const ClassifierModel model = load_model(model_path);
  const std::vector<LabeledSentence> labeled = load_labeled(labeled_path);
  EvaluateOutput out;
  out.n = labeled.size();
  out.raw = evaluate(model, lexicon, labeled);
  out.confirmed = evaluate_confirmed(model, lexicon, labeled);
  return out;
}

void cmd_plotdata(const std::string& bundle_dir, const std::string& out_dir) {
  const fs::path in(bundle_dir);
  if (!fs::exists(in / "lengths.csv"))
    throw IngestError("plotdata: " + bundle_dir +
                      " does not look like a report bundle (lengths.csv missing)");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IngestError("cannot create output directory " + out_dir + ": " +
                      ec.message());
  for (const char* table :
       {"lengths", "cue_distribution", "aspect_distribution", "correlation",
        "regression"}) {
    const fs::path src = in / (std::string(table) + ".csv");
    std::string content;
    try {
      content = read_file(src.string());
    } catch (const std::exception& e) {
      throw IngestError(std::string("plotdata: ") + e.what());
    }
    const std::vector<LongRow> rows = reshape_table(table, content);
    write_file((fs::path(out_dir) / (std::string(table) + "_long.csv")).string(),
               to_long_csv(rows));
  }
}

}  // namespace revconf
