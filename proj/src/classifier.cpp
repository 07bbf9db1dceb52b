#include "revconf/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "json.hpp"
#include "revconf/aspects.hpp"
#include "revconf/corpus.hpp"
#include "revconf/errors.hpp"
#include "revconf/util.hpp"

namespace revconf {

using nlohmann::json;

namespace {

const std::set<std::string>& modal_tokens() {
  static const std::set<std::string> tokens = {
      "can",  "could", "may",   "might", "must",
      "ought", "shall", "should", "will",  "would"};
  return tokens;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log1pexp(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

std::string lexicon_fingerprint_hex(const HedgeLexicon& lexicon) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(lexicon.fingerprint()));
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Labeled data
// ---------------------------------------------------------------------------

std::vector<LabeledSentence> parse_labeled(std::string_view content,
                                           const std::string& origin) {
  std::vector<LabeledSentence> out;
  long line_no = 0;
  for (const auto& line : split_on(content, '\n')) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fail = [&](const std::string& what) -> IngestError {
      return IngestError(origin + " line " + std::to_string(line_no) + ": " +
                         what);
    };
    json j;
    try {
      j = json::parse(t);
    } catch (const json::parse_error& e) {
      throw fail(std::string("invalid JSON (") + e.what() + ")");
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string())
      throw fail("missing or non-string field \"text\"");
    if (!j.contains("label") || !j["label"].is_number_integer())
      throw fail("missing or non-integer field \"label\"");
    const int label = j["label"].get<int>();
    if (label != 0 && label != 1)
      throw fail("field \"label\" must be 0 or 1, got " + std::to_string(label));
    out.push_back({j["text"].get<std::string>(), label});
  }
  if (out.empty()) throw IngestError(origin + ": no labeled sentences");
  return out;
}

std::vector<LabeledSentence> load_labeled(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const std::exception& e) {
    throw IngestError(e.what());
  }
  return parse_labeled(content, path);
}

// ---------------------------------------------------------------------------
// Split
// ---------------------------------------------------------------------------

DataSplit split_dataset(std::vector<LabeledSentence> data, SplitRatios ratios,
                        std::uint32_t seed) {
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (std::fabs(sum - 1.0) > 1e-9 || ratios.train < 0 ||
      ratios.validation < 0 || ratios.test < 0)
    throw ModelError("split_dataset: ratios must be non-negative and sum to 1");
  if (data.empty()) throw ModelError("split_dataset: empty dataset");

  std::mt19937 rng(seed);
  deterministic_shuffle(data, rng);

  const std::size_t n = data.size();
  const auto n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * ratios.train));
  const auto n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * ratios.validation));

  DataSplit split;
  split.train.assign(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.validation.assign(
      data.begin() + static_cast<std::ptrdiff_t>(n_train),
      data.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(data.begin() + static_cast<std::ptrdiff_t>(n_train + n_val),
                    data.end());
  return split;
}

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

FeatureExtractor::FeatureExtractor(const HedgeLexicon& lexicon, FeatureSpec spec)
    : lexicon_(lexicon), spec_(std::move(spec)) {
  vocab_base_ = cue_base_ + 2 * lexicon_.size();
  dimension_ = vocab_base_ + spec_.vocab.size();
}

FeatureSpec FeatureExtractor::build_spec(const HedgeLexicon& lexicon,
                                         std::span<const LabeledSentence> train,
                                         int df_floor) {
  std::map<std::string, int> doc_freq;
  for (const auto& item : train) {
    std::set<std::string> seen;
    for (const auto& token : tokenize_words(item.text)) seen.insert(token);
    for (const auto& token : seen) ++doc_freq[token];
  }
  FeatureSpec spec;
  spec.df_floor = df_floor;
  for (const auto& [token, freq] : doc_freq)
    if (freq >= df_floor) spec.vocab.push_back(token);  // map order = sorted
  spec.lexicon_fingerprint = lexicon_fingerprint_hex(lexicon);
  return spec;
}

FeatureVector FeatureExtractor::extract(std::span<const std::string> tokens) const {
  FeatureVector fv;
  const std::vector<CueMatch> matches = match_cues(tokens, lexicon_);

  double cue_total = 0;
  std::map<std::size_t, double> cue_counts;  // entry index -> count
  const auto& entries = lexicon_.entries();
  for (const auto& m : matches) {
    const auto it = std::lower_bound(entries.begin(), entries.end(), m.cue);
    const auto idx = static_cast<std::size_t>(it - entries.begin());
    ++cue_counts[idx];
    ++cue_total;
  }

  if (cue_total > 0) fv.emplace_back(0u, cue_total);

  std::size_t bucket;  // 1 short, 2 medium, 3 long
  if (tokens.size() < spec_.short_limit)
    bucket = 1;
  else if (tokens.size() < spec_.long_limit)
    bucket = 2;
  else
    bucket = 3;
  fv.emplace_back(static_cast<std::uint32_t>(bucket), 1.0);

  const auto& negs = negation_tokens();
  const auto& modals = modal_tokens();
  bool has_neg = false, has_modal = false;
  for (const auto& t : tokens) {
    if (negs.count(t)) has_neg = true;
    if (modals.count(t)) has_modal = true;
  }
  if (has_neg) fv.emplace_back(4u, 1.0);
  if (has_modal) fv.emplace_back(5u, 1.0);

  for (const auto& [idx, count] : cue_counts) {
    fv.emplace_back(static_cast<std::uint32_t>(cue_base_ + 2 * idx), 1.0);
    fv.emplace_back(static_cast<std::uint32_t>(cue_base_ + 2 * idx + 1), count);
  }

  std::set<std::string> seen;
  for (const auto& t : tokens) seen.insert(t);
  for (const auto& t : seen) {
    const auto it = std::lower_bound(spec_.vocab.begin(), spec_.vocab.end(), t);
    if (it != spec_.vocab.end() && *it == t)
      fv.emplace_back(
          static_cast<std::uint32_t>(vocab_base_ + (it - spec_.vocab.begin())),
          1.0);
  }

  std::sort(fv.begin(), fv.end());
  return fv;
}

FeatureVector FeatureExtractor::extract_text(std::string_view sentence) const {
  return extract(tokenize_words(sentence));
}

std::string FeatureExtractor::feature_name(std::uint32_t id) const {
  if (id == 0) return "cue_total";
  if (id == 1) return "len_short";
  if (id == 2) return "len_medium";
  if (id == 3) return "len_long";
  if (id == 4) return "has_negation";
  if (id == 5) return "has_modal";
  if (id < vocab_base_) {
    const std::size_t entry = (id - cue_base_) / 2;
    const bool count = (id - cue_base_) % 2 == 1;
    return std::string(count ? "cuecnt:" : "cue:") + lexicon_.entries()[entry];
  }
  return "w:" + spec_.vocab[id - vocab_base_];
}

// ---------------------------------------------------------------------------
// Training: L-BFGS over the regularized log-loss
// ---------------------------------------------------------------------------

namespace {

struct Problem {
  const std::vector<FeatureVector>* features;
  const std::vector<int>* labels;
  const std::vector<double>* sample_weights;
  double weight_sum;
  double l2;
  std::size_t dim;  // weights; parameter vector has dim+1 with bias last

  // loss and gradient at theta
  double eval(const std::vector<double>& theta, std::vector<double>& grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    const double bias = theta[dim];
    double loss = 0.0;
    for (std::size_t i = 0; i < features->size(); ++i) {
      double eta = bias;
      for (const auto& [id, value] : (*features)[i]) eta += theta[id] * value;
      const int y = (*labels)[i];
      const double w = (*sample_weights)[i];
      loss += w * (log1pexp(eta) - y * eta);
      const double r = w * (sigmoid(eta) - y);
      for (const auto& [id, value] : (*features)[i]) grad[id] += r * value;
      grad[dim] += r;
    }
    loss /= weight_sum;
    for (double& g : grad) g /= weight_sum;
    double penalty = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {  // bias not regularized
      penalty += theta[j] * theta[j];
      grad[j] += l2 * theta[j];
    }
    loss += 0.5 * l2 * penalty;
    return loss;
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

ClassifierModel train(const std::vector<LabeledSentence>& train_set,
                      const std::vector<LabeledSentence>& validation_set,
                      const HedgeLexicon& lexicon, const TrainOptions& options) {
  if (train_set.empty()) throw ModelError("train: empty training set");
  long positives = 0;
  for (const auto& s : train_set) positives += s.label;
  if (positives == 0 || positives == static_cast<long>(train_set.size()))
    throw ModelError(
        "train: training data contains a single class; both hedge and "
        "non-hedge sentences are required");

  FeatureSpec spec =
      FeatureExtractor::build_spec(lexicon, train_set, options.df_floor);
  FeatureExtractor extractor(lexicon, spec);

  std::vector<FeatureVector> features;
  std::vector<int> labels;
  features.reserve(train_set.size());
  for (const auto& s : train_set) {
    features.push_back(extractor.extract_text(s.text));
    labels.push_back(s.label);
  }
  std::vector<FeatureVector> val_features;
  std::vector<int> val_labels;
  for (const auto& s : validation_set) {
    val_features.push_back(extractor.extract_text(s.text));
    val_labels.push_back(s.label);
  }

  std::vector<double> sample_weights(train_set.size(), 1.0);
  if (options.class_weights) {
    const double n = static_cast<double>(train_set.size());
    const double w_pos = n / (2.0 * static_cast<double>(positives));
    const double w_neg =
        n / (2.0 * static_cast<double>(train_set.size() - positives));
    for (std::size_t i = 0; i < train_set.size(); ++i)
      sample_weights[i] = labels[i] == 1 ? w_pos : w_neg;
  }
  double weight_sum = 0;
  for (double w : sample_weights) weight_sum += w;

  const std::size_t dim = extractor.dimension();
  Problem problem{&features, &labels, &sample_weights, weight_sum, options.l2,
                  dim};

  std::vector<double> theta(dim + 1, 0.0);
  std::vector<double> grad(dim + 1, 0.0);
  double loss = problem.eval(theta, grad);

  ClassifierModel model;
  model.spec = spec;
  model.seed = options.seed;

  auto val_accuracy = [&](const std::vector<double>& th) {
    if (val_features.empty()) return 0.0;
    long correct = 0;
    for (std::size_t i = 0; i < val_features.size(); ++i) {
      double eta = th[dim];
      for (const auto& [id, value] : val_features[i]) eta += th[id] * value;
      const int verdict = eta >= 0.0 ? 1 : 0;
      if (verdict == val_labels[i]) ++correct;
    }
    return static_cast<double>(correct) /
           static_cast<double>(val_features.size());
  };

  // L-BFGS two-loop recursion, memory 8, Armijo backtracking
  constexpr std::size_t kMemory = 8;
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  bool converged = false;
  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    if (max_abs(grad) < options.grad_tolerance) {
      converged = true;
      break;
    }

    // search direction
    std::vector<double> q = grad;
    std::vector<double> alphas(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alphas[k] = rho_hist[k] * dot(s_hist[k], q);
      for (std::size_t j = 0; j < q.size(); ++j)
        q[j] -= alphas[k] * y_hist[k][j];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) /
                           dot(y_hist.back(), y_hist.back());
      for (double& v : q) v *= gamma;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], q);
      for (std::size_t j = 0; j < q.size(); ++j)
        q[j] += s_hist[k][j] * (alphas[k] - beta);
    }
    for (double& v : q) v = -v;  // descent direction

    double dir_dot_grad = dot(q, grad);
    if (dir_dot_grad >= 0) {  // fall back to steepest descent
      for (std::size_t j = 0; j < q.size(); ++j) q[j] = -grad[j];
      dir_dot_grad = -dot(grad, grad);
    }

    double step = 1.0;
    std::vector<double> theta_new(theta.size());
    std::vector<double> grad_new(theta.size());
    double loss_new = loss;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      for (std::size_t j = 0; j < theta.size(); ++j)
        theta_new[j] = theta[j] + step * q[j];
      loss_new = problem.eval(theta_new, grad_new);
      if (loss_new <= loss + 1e-4 * step * dir_dot_grad) {
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    if (!accepted) break;  // no further progress possible

    // memory update
    std::vector<double> s_vec(theta.size()), y_vec(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
      s_vec[j] = theta_new[j] - theta[j];
      y_vec[j] = grad_new[j] - grad[j];
    }
    const double sy = dot(s_vec, y_vec);
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s_vec));
      y_hist.push_back(std::move(y_vec));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    const double improvement = loss - loss_new;
    theta = theta_new;
    grad = grad_new;
    loss = loss_new;

    model.summary.history.push_back({epoch, loss, val_accuracy(theta)});

    if (max_abs(grad) < options.grad_tolerance || improvement < options.tolerance) {
      converged = true;
      break;
    }
  }

  model.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(dim));
  model.bias = theta[dim];
  model.summary.epochs = static_cast<int>(model.summary.history.size());
  model.summary.final_loss = loss;
  model.summary.grad_max_norm = max_abs(grad);
  model.summary.converged =
      converged || max_abs(grad) < options.grad_tolerance;
  return model;
}

// ---------------------------------------------------------------------------
// Prediction
// ---------------------------------------------------------------------------

FeatureExtractor make_extractor(const ClassifierModel& model,
                                const HedgeLexicon& lexicon) {
  const std::string fp = lexicon_fingerprint_hex(lexicon);
  if (fp != model.spec.lexicon_fingerprint)
    throw ModelError(
        "model/lexicon mismatch: the model was trained against a different "
        "hedge lexicon (fingerprint " + model.spec.lexicon_fingerprint +
        ", current " + fp + ")");
  return FeatureExtractor(lexicon, model.spec);
}

double predict_features(const ClassifierModel& model, const FeatureVector& fv) {
  double eta = model.bias;
  for (const auto& [id, value] : fv) {
    if (id >= model.weights.size())
      throw ModelError("feature id out of range for model: " +
                       std::to_string(id));
    eta += model.weights[id] * value;
  }
  return sigmoid(eta);
}

double predict(const ClassifierModel& model, const FeatureExtractor& extractor,
               std::string_view sentence) {
  if (!(extractor.spec() == model.spec))
    throw ModelError(
        "feature_spec mismatch between extractor and model; rebuild the "
        "extractor with make_extractor()");
  return predict_features(model, extractor.extract_text(sentence));
}

bool confirm_hedge(double probability, std::span<const CueMatch> cue_matches) {
  return probability >= 0.5 && !cue_matches.empty();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

EvalReport EvalReport::from_counts(long tp, long fp, long tn, long fn) {
  EvalReport r;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  const long total = tp + fp + tn + fn;
  r.accuracy = total > 0 ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  r.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = (r.precision + r.recall) > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

namespace {

EvalReport evaluate_impl(const ClassifierModel& model,
                         const HedgeLexicon& lexicon,
                         std::span<const LabeledSentence> test_set,
                         bool confirmed) {
  if (test_set.empty()) throw ModelError("evaluate: empty test set");
  const FeatureExtractor extractor = make_extractor(model, lexicon);
  long tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& item : test_set) {
    const std::vector<std::string> tokens = tokenize_words(item.text);
    const double prob = predict_features(model, extractor.extract(tokens));
    bool verdict = prob >= 0.5;
    if (confirmed && verdict)
      verdict = !match_cues(tokens, lexicon).empty();
    if (verdict && item.label == 1)
      ++tp;
    else if (verdict && item.label == 0)
      ++fp;
    else if (!verdict && item.label == 0)
      ++tn;
    else
      ++fn;
  }
  return EvalReport::from_counts(tp, fp, tn, fn);
}

}  // namespace

EvalReport evaluate(const ClassifierModel& model, const HedgeLexicon& lexicon,
                    std::span<const LabeledSentence> test_set) {
  return evaluate_impl(model, lexicon, test_set, false);
}

EvalReport evaluate_confirmed(const ClassifierModel& model,
                              const HedgeLexicon& lexicon,
                              std::span<const LabeledSentence> test_set) {
  return evaluate_impl(model, lexicon, test_set, true);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string serialize_model(const ClassifierModel& model) {
  json j;
  j["format"] = "revconf-model/1";
  j["feature_spec"] = {
      {"version", model.spec.version},
      {"df_floor", model.spec.df_floor},
      {"short_limit", model.spec.short_limit},
      {"long_limit", model.spec.long_limit},
      {"vocab", model.spec.vocab},
      {"lexicon_fingerprint", model.spec.lexicon_fingerprint},
  };
  j["bias"] = model.bias;
  j["weights"] = model.weights;
  j["training"] = {
      {"seed", model.seed},
      {"epochs", model.summary.epochs},
      {"final_loss", model.summary.final_loss},
      {"grad_max_norm", model.summary.grad_max_norm},
      {"converged", model.summary.converged},
  };
  return j.dump(2) + "\n";
}

ClassifierModel parse_model(std::string_view json_text,
                            const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(origin + ": invalid model JSON (" + e.what() + ")");
  }
  try {
    if (j.at("format").get<std::string>() != "revconf-model/1")
      throw ModelError(origin + ": unsupported model format \"" +
                       j.at("format").get<std::string>() + "\"");
    ClassifierModel model;
    const json& spec = j.at("feature_spec");
    model.spec.version = spec.at("version").get<std::string>();
    model.spec.df_floor = spec.at("df_floor").get<int>();
    model.spec.short_limit = spec.at("short_limit").get<std::size_t>();
    model.spec.long_limit = spec.at("long_limit").get<std::size_t>();
    model.spec.vocab = spec.at("vocab").get<std::vector<std::string>>();
    model.spec.lexicon_fingerprint =
        spec.at("lexicon_fingerprint").get<std::string>();
    model.bias = j.at("bias").get<double>();
    model.weights = j.at("weights").get<std::vector<double>>();
    const json& training = j.at("training");
    model.seed = training.at("seed").get<std::uint32_t>();
    model.summary.epochs = training.at("epochs").get<int>();
    model.summary.final_loss = training.at("final_loss").get<double>();
    model.summary.grad_max_norm = training.at("grad_max_norm").get<double>();
    model.summary.converged = training.at("converged").get<bool>();
    for (double w : model.weights)
      if (!std::isfinite(w))
        throw ModelError(origin + ": non-finite weight in model");
    if (!std::isfinite(model.bias))
      throw ModelError(origin + ": non-finite bias in model");
    return model;
  } catch (const json::exception& e) {
    throw ModelError(origin + ": malformed model file (" + e.what() + ")");
  }
}

void save_model(const std::string& path, const ClassifierModel& model) {
  write_file(path, serialize_model(model));
}

ClassifierModel load_model(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const std::exception& e) {
    throw ModelError(e.what());
  }
  return parse_model(content, path);
}

}  // namespace revconf
