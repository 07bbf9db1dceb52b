#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "revconf/errors.hpp"
#include "revconf/pipeline.hpp"
#include "revconf/util.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIngestion = 3;
constexpr int kExitModel = 4;
constexpr int kExitAnalytics = 5;

void print_eval(const char* label, const revconf::EvalReport& report) {
  std::printf("%-22s acc=%.4f precision=%.4f recall=%.4f f1=%.4f "
              "(tp=%ld fp=%ld tn=%ld fn=%ld)\n",
              label, report.accuracy, report.precision, report.recall,
              report.f1, report.tp, report.fp, report.tn, report.fn);
}

int run(int argc, char** argv) {
  CLI::App app{"peer-review confidence consistency toolkit"};
  app.require_subcommand(1);

  revconf::PipelineConfig config;
  std::string labeled_path, model_path, lexicon_path, input_path;
  std::string bundle_dir, out_dir;
  revconf::TrainOptions train_options;

  auto* analyze = app.add_subcommand(
      "analyze", "run the full pipeline and write the report bundle");
  analyze->add_option("--corpus", config.corpus_path,
                      "corpus file (JSON lines)")->required();
  analyze->add_option("--lexicon", config.lexicon_path,
                      "hedge lexicon file (default: bundled)");
  analyze->add_option("--model", config.model_path,
                      "model file, or \"train\" to bootstrap from the corpus");
  analyze->add_option("--aspect-rules", config.aspect_rules_path,
                      "aspect rule table (default: bundled)");
  analyze->add_option("--aspect-import", config.aspect_import_path,
                      "external aspect annotations (TSV)");
  analyze->add_option("--out", config.output_dir, "output directory");
  analyze->add_option("--seed", config.seed, "random seed");
  analyze->add_flag("--tag-all", config.tag_all_sentences,
                    "tag aspects on every sentence, not only hedge sentences");
  analyze->add_flag("--class-weights", config.class_weights,
                    "inverse-frequency class weights for bootstrap training");
  analyze->add_option("--dichotomy", config.dichotomy_threshold,
                      "confidence split for the U-test battery (low <= N)");

  auto* train_cmd = app.add_subcommand("train", "train a hedge classifier");
  train_cmd->add_option("--labeled", labeled_path,
                        "labeled sentences (JSON lines {text, label})")
      ->required();
  train_cmd->add_option("--model", model_path, "model output path")->required();
  train_cmd->add_option("--lexicon", lexicon_path,
                        "hedge lexicon file (default: bundled)");
  train_cmd->add_option("--seed", train_options.seed, "split/shuffle seed");
  train_cmd->add_flag("--class-weights", train_options.class_weights,
                      "inverse-frequency class weights");
  train_cmd->add_option("--l2", train_options.l2, "L2 regularization strength");
  train_cmd->add_option("--max-epochs", train_options.max_epochs,
                        "maximum training epochs");
  train_cmd->add_option("--df-floor", train_options.df_floor,
                        "unigram document-frequency floor");

  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a saved model");
  eval_cmd->add_option("--labeled", labeled_path, "labeled test sentences")
      ->required();
  eval_cmd->add_option("--model", model_path, "model file")->required();
  eval_cmd->add_option("--lexicon", lexicon_path,
                       "hedge lexicon file (default: bundled)");

  auto* predict_cmd =
      app.add_subcommand("predict", "score sentences with a saved model");
  predict_cmd->add_option("--model", model_path, "model file")->required();
  predict_cmd->add_option("--lexicon", lexicon_path,
                          "hedge lexicon file (default: bundled)");
  predict_cmd->add_option("--input", input_path,
                          "sentence file, one per line (default: stdin)");

  auto* plot_cmd = app.add_subcommand(
      "plotdata", "reshape a report bundle into long-format CSVs");
  plot_cmd->add_option("--bundle", bundle_dir, "report bundle directory")
      ->required();
  plot_cmd->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analyze) {
      const revconf::AnalyzeOutput output = revconf::cmd_analyze(config);
      std::printf("analyzed %zu reviews (%ld sentences) -> %s\n",
                  output.corpus.size(), output.manifest.stage_rows("segment"),
                  config.output_dir.c_str());
      for (const auto& warning : output.manifest.warnings)
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
      return kExitOk;
    }
    if (*train_cmd) {
      const revconf::TrainOutput out =
          revconf::cmd_train(labeled_path, model_path, lexicon_path, train_options);
      std::printf("split: %zu train / %zu validation / %zu test\n",
                  out.n_train, out.n_validation, out.n_test);
      std::printf("epochs=%d final_loss=%.6f grad_max=%.2e converged=%s\n",
                  out.model.summary.epochs, out.model.summary.final_loss,
                  out.model.summary.grad_max_norm,
                  out.model.summary.converged ? "yes" : "no");
      print_eval("train (raw):", out.train_metrics);
      if (out.n_validation > 0) print_eval("validation (raw):", out.validation_metrics);
      if (out.n_test > 0) {
        print_eval("test (raw):", out.test_metrics);
        print_eval("test (confirmed):", out.test_confirmed);
      }
      std::printf("model written to %s\n", model_path.c_str());
      return kExitOk;
    }
    if (*eval_cmd) {
      const revconf::EvaluateOutput out =
          revconf::cmd_evaluate(labeled_path, model_path, lexicon_path);
      std::printf("evaluated %zu sentences\n", out.n);
      print_eval("raw:", out.raw);
      print_eval("confirmed:", out.confirmed);
      return kExitOk;
    }
    if (*predict_cmd) {
      const revconf::HedgeLexicon lexicon =
          revconf::load_lexicon_or_builtin(lexicon_path);
      const revconf::ClassifierModel model = revconf::load_model(model_path);
      const revconf::FeatureExtractor extractor =
          revconf::make_extractor(model, lexicon);
      std::istream* in = &std::cin;
      std::ifstream file;
      if (!input_path.empty()) {
        file.open(input_path);
        if (!file)
          throw revconf::IngestError("cannot open input file: " + input_path);
        in = &file;
      }
      std::string line;
      std::printf("probability\traw\tconfirmed\tsentence\n");
      while (std::getline(*in, line)) {
        if (revconf::trim(line).empty()) continue;
        const auto tokens = revconf::tokenize_words(line);
        const double prob =
            revconf::predict_features(model, extractor.extract(tokens));
        const auto cues = revconf::match_cues(tokens, lexicon);
        const bool raw = prob >= 0.5;
        const bool confirmed = revconf::confirm_hedge(prob, cues);
        std::printf("%.4f\t%s\t%s\t%s\n", prob, raw ? "hedge" : "non-hedge",
                    confirmed ? "hedge" : "non-hedge", line.c_str());
      }
      return kExitOk;
    }
    if (*plot_cmd) {
      revconf::cmd_plotdata(bundle_dir, out_dir);
      std::printf("long-format tables written to %s\n", out_dir.c_str());
      return kExitOk;
    }
  } catch (const revconf::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const revconf::IngestError& e) {
    std::fprintf(stderr, "ingestion error: %s\n", e.what());
    return kExitIngestion;
  } catch (const revconf::ModelError& e) {
    std::fprintf(stderr, "model error: %s\n", e.what());
    return kExitModel;
  } catch (const revconf::AnalyticsError& e) {
    std::fprintf(stderr, "analytics error: %s\n", e.what());
    return kExitAnalytics;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitAnalytics;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
