#include "revconf/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "json.hpp"
#include "revconf/aspects.hpp"
#include "revconf/errors.hpp"
#include "revconf/util.hpp"

namespace revconf {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Published baselines (verbatim display strings from the original study)
// ---------------------------------------------------------------------------

namespace reference {

std::span<const LengthRow> length_stats() {
  static const LengthRow rows[] = {
      {1, "239", "12"}, {2, "354", "18"}, {3, "435", "22"},
      {4, "492", "25"}, {5, "511", "27"},
  };
  return rows;
}

std::span<const CueCell> cue_top10(int confidence) {
  static const CueCell conf1[] = {
      {"would", "0.16"}, {"can", "0.14"},        {"some", "0.13"},
      {"seems", "0.11"}, {"if", "0.10"},         {"could", "0.09"},
      {"understand", "0.08"}, {"clear", "0.07"}, {"about", "0.06"},
      {"should", "0.06"},
  };
  static const CueCell conf2[] = {
      {"can", "0.16"},   {"would", "0.15"}, {"some", "0.12"},
      {"if", "0.11"},    {"seems", "0.09"}, {"could", "0.08"},
      {"should", "0.08"}, {"clear", "0.07"}, {"think", "0.07"},
      {"about", "0.06"},
  };
  static const CueCell conf3[] = {
      {"can", "0.18"},   {"would", "0.15"}, {"some", "0.14"},
      {"if", "0.11"},    {"should", "0.08"}, {"seems", "0.07"},
      {"could", "0.07"}, {"clear", "0.07"},  {"like", "0.06"},
      {"think", "0.06"},
  };
  static const CueCell conf4[] = {
      {"can", "0.16"},   {"would", "0.15"}, {"some", "0.13"},
      {"if", "0.12"},    {"should", "0.10"}, {"seems", "0.08"},
      {"could", "0.07"}, {"like", "0.06"},   {"see", "0.06"},
      {"think", "0.06"},
  };
  static const CueCell conf5[] = {
      {"can", "0.17"},   {"would", "0.15"}, {"some", "0.12"},
      {"if", "0.11"},    {"could", "0.07"}, {"clear", "0.07"},
      {"like", "0.07"},  {"see", "0.07"},   {"seems", "0.06"},
      {"about", "0.06"},
  };
  switch (confidence) {
    case 1: return conf1;
    case 2: return conf2;
    case 3: return conf3;
    case 4: return conf4;
    case 5: return conf5;
    default: return {};
  }
}

std::span<const AspectRow> aspect_distribution() {
  static const AspectRow rows[] = {
      {1, "0.27", "0.22", "0.18", "0.15", "0.08", "0.06", "0.03", "2", "0.39", "0.61"},
      {2, "0.26", "0.25", "0.14", "0.15", "0.09", "0.05", "0.06", "3", "0.36", "0.64"},
      {3, "0.20", "0.30", "0.14", "0.16", "0.10", "0.05", "0.06", "3", "0.35", "0.65"},
      {4, "0.20", "0.27", "0.13", "0.14", "0.11", "0.06", "0.08", "4", "0.33", "0.67"},
      {5, "0.18", "0.27", "0.13", "0.15", "0.12", "0.06", "0.08", "5", "0.29", "0.71"},
  };
  return rows;
}

std::span<const CorrelationCell> correlation() {
  static const CorrelationCell cells[] = {
      {"soundness", "confidence", "0.058", "<0.001"},
      {"clarity", "confidence", "-0.057", "<0.001"},
      {"clarity", "soundness", "0.160", "<0.001"},
      {"substance", "confidence", "0.093", "<0.001"},
      {"substance", "soundness", "0.180", "<0.001"},
      {"substance", "clarity", "0.050", "<0.001"},
      {"originality", "confidence", "0.062", "<0.001"},
      {"originality", "soundness", "0.095", "<0.001"},
      {"originality", "clarity", "0.098", "<0.001"},
      {"originality", "substance", "0.069", "<0.001"},
      {"meaningful_comparison", "confidence", "0.130", "<0.001"},
      {"meaningful_comparison", "soundness", "0.049", "<0.001"},
      {"meaningful_comparison", "clarity", "0.009", "<0.001"},
      {"meaningful_comparison", "substance", "0.140", "<0.001"},
      {"meaningful_comparison", "originality", "0.065", "<0.001"},
      {"motivation", "confidence", "0.034", "<0.001"},
      {"motivation", "soundness", "0.170", "<0.001"},
      {"motivation", "clarity", "0.130", "<0.001"},
      {"motivation", "substance", "0.110", "<0.001"},
      {"motivation", "originality", "0.050", "<0.001"},
      {"motivation", "meaningful_comparison", "0.038", "<0.001"},
      {"replicability", "confidence", "0.045", "<0.001"},
      {"replicability", "soundness", "0.086", "<0.001"},
      {"replicability", "clarity", "0.160", "<0.001"},
      {"replicability", "substance", "0.120", "<0.001"},
      {"replicability", "originality", "0.016", "0.004"},
      {"replicability", "meaningful_comparison", "0.072", "<0.001"},
      {"replicability", "motivation", "0.053", "<0.001"},
  };
  return cells;
}

const CorrelationCell* correlation_for(std::string_view var_a,
                                       std::string_view var_b) {
  for (const auto& cell : correlation()) {
    if ((cell.var_a == var_a && cell.var_b == var_b) ||
        (cell.var_a == var_b && cell.var_b == var_a))
      return &cell;
  }
  return nullptr;
}

std::span<const RegressionRow> regression() {
  static const RegressionRow rows[] = {
      {"confidence", "-0.1171", "0.015", "-7.731", "0.000", "-0.147", "-0.087"},
      {"soundness", "-0.0297", "0.009", "-3.242", "0.001", "-0.048", "-0.012"},
      {"clarity", "-0.0193", "0.009", "-2.160", "0.031", "-0.037", "-0.002"},
      {"substance", "0.0190", "0.011", "1.715", "0.086", "-0.003", "0.041"},
      {"originality", "-0.1186", "0.012", "-10.061", "0.000", "-0.142", "-0.096"},
      {"meaningful_comparison", "-0.1455", "0.015", "-10.013", "0.000", "-0.174", "-0.117"},
      {"motivation", "0.1049", "0.013", "7.788", "0.000", "0.079", "0.131"},
      {"replicability", "-0.0526", "0.021", "-2.554", "0.011", "-0.093", "-0.012"},
  };
  return rows;
}

const RegressionRow* regression_for(std::string_view variable) {
  for (const auto& row : regression())
    if (row.variable == variable) return &row;
  return nullptr;
}

std::span<const VenueRow> corpus_stats() {
  static const VenueRow rows[] = {
      {"ARR-22", "684", "412.86", "16.16", "476", "0", "3.60"},
      {"COLING-20", "112", "455.50", "16.44", "85", "4", "3.64"},
      {"ACL-17", "272", "435.85", "13.77", "91", "45", "3.86"},
      {"CoNLL-16", "39", "431.71", "14.28", "11", "11", "3.77"},
      {"ICLR 2017", "1498", "312.33", "11.13", "199", "291", "3.83"},
      {"ICLR 2018", "2748", "392.36", "14.02", "336", "574", "3.80"},
      {"ICLR 2019", "4764", "427.05", "15.59", "502", "1063", "3.77"},
      {"ICLR 2021", "11058", "483.96", "15.48", "860", "2119", "3.73"},
      {"ICLR 2022", "12777", "511.36", "16.48", "733", "2592", "3.67"},
      {"Overall", "33952", "429.22", "14.82", "3292", "6700", "3.74"},
  };
  return rows;
}

}  // namespace reference

// ---------------------------------------------------------------------------
// CSV rendering
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<Aspect, 7> kAspectCsvOrder = {
    Aspect::Clarity,       Aspect::Soundness,     Aspect::Motivation,
    Aspect::Originality,   Aspect::Substance,     Aspect::Replicability,
    Aspect::MeaningfulComparison,
};

std::string ratio_or_empty(const std::map<Aspect, double>& ratios,
                           Aspect aspect, long annotation_count) {
  if (annotation_count == 0) return "";
  auto it = ratios.find(aspect);
  return format_fixed(it == ratios.end() ? 0.0 : it->second);
}

}  // namespace

std::string lengths_csv(std::span<const LengthStatsRow> rows) {
  std::string out =
      "confidence,review_count,avg_words,avg_sentences,ref_avg_words,"
      "ref_avg_sentences\n";
  for (const auto& row : rows) {
    const reference::LengthRow* ref = nullptr;
    for (const auto& r : reference::length_stats())
      if (r.confidence == row.confidence) ref = &r;
    out += std::to_string(row.confidence);
    out += ',' + std::to_string(row.review_count);
    out += ',' + format_fixed(row.avg_words);
    out += ',' + format_fixed(row.avg_sentences);
    out += ',';
    out += ref ? ref->avg_words : "";
    out += ',';
    out += ref ? ref->avg_sentences : "";
    out += '\n';
  }
  return out;
}

std::string cue_distribution_csv(std::span<const CueDistributionRow> rows) {
  std::string out =
      "confidence,rank,cue,count,ratio,ref_cue,ref_ratio\n";
  for (const auto& row : rows) {
    const auto ref = reference::cue_top10(row.confidence);
    const std::size_t n_rows = std::max(row.top.size(), ref.size());
    for (std::size_t r = 0; r < n_rows; ++r) {
      out += std::to_string(row.confidence);
      out += ',' + std::to_string(r + 1);
      if (r < row.top.size()) {
        out += ',' + row.top[r].cue;
        out += ',' + std::to_string(row.top[r].count);
        out += ',' + format_fixed(row.top[r].ratio);
      } else {
        out += ",,,";
      }
      if (r < ref.size()) {
        out += ',';
        out += ref[r].cue;
        out += ',';
        out += ref[r].ratio;
      } else {
        out += ",,";
      }
      out += '\n';
    }
  }
  return out;
}

std::string aspect_distribution_csv(std::span<const AspectDistributionRow> rows) {
  std::string out =
      "confidence,review_count,annotation_count,clarity,soundness,motivation,"
      "originality,substance,replicability,meaningful_comparison,"
      "avg_hedge_sentences,positive,negative,ref_clarity,ref_soundness,"
      "ref_motivation,ref_originality,ref_substance,ref_replicability,"
      "ref_meaningful_comparison,ref_avg_hedge_sentences,ref_positive,"
      "ref_negative\n";
  for (const auto& row : rows) {
    const reference::AspectRow* ref = nullptr;
    for (const auto& r : reference::aspect_distribution())
      if (r.confidence == row.confidence) ref = &r;
    out += std::to_string(row.confidence);
    out += ',' + std::to_string(row.review_count);
    out += ',' + std::to_string(row.annotation_count);
    for (Aspect aspect : kAspectCsvOrder)
      out += ',' + ratio_or_empty(row.aspect_ratios, aspect, row.annotation_count);
    out += ',' + format_fixed(row.avg_hedge_sentences);
    out += ',' + format_fixed(row.positive_ratio);
    out += ',' + format_fixed(row.negative_ratio);
    const char* ref_cells[10] = {"", "", "", "", "", "", "", "", "", ""};
    if (ref) {
      ref_cells[0] = ref->clarity;
      ref_cells[1] = ref->soundness;
      ref_cells[2] = ref->motivation;
      ref_cells[3] = ref->originality;
      ref_cells[4] = ref->substance;
      ref_cells[5] = ref->replicability;
      ref_cells[6] = ref->meaningful_comparison;
      ref_cells[7] = ref->avg_hedge_sentences;
      ref_cells[8] = ref->positive;
      ref_cells[9] = ref->negative;
    }
    for (const char* cell : ref_cells) {
      out += ',';
      out += cell;
    }
    out += '\n';
  }
  return out;
}

std::string correlation_csv(const CorrelationMatrix& matrix) {
  std::string out = "var_a,var_b,n,rho,p_value,ref_rho,ref_p\n";
  for (std::size_t i = 1; i < matrix.variables.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto& cell = matrix.cells[i][j];
      out += matrix.variables[i];
      out += ',' + matrix.variables[j];
      out += ',' + std::to_string(cell.n);
      if (cell.defined) {
        out += ',' + format_fixed(cell.rho);
        out += ',' + format_pvalue(cell.p_value);
      } else {
        out += ",degenerate,";
      }
      const auto* ref =
          reference::correlation_for(matrix.variables[i], matrix.variables[j]);
      out += ',';
      out += ref ? ref->rho : "";
      out += ',';
      out += ref ? ref->p : "";
      out += '\n';
    }
  }
  return out;
}

std::string regression_csv(const stats::LogisticFit* fit,
                           const std::string& note) {
  std::string out =
      "variable,coef,std_err,z,p_value,ci_low,ci_high,ref_coef,ref_std_err,"
      "ref_z,ref_p,ref_ci_low,ref_ci_high\n";
  if (!fit) {
    out += "unavailable,,,,,,";
    out += ",,,,,,\n";
    (void)note;
    return out;
  }
  for (std::size_t i = 0; i < fit->names.size(); ++i) {
    out += fit->names[i];
    out += ',' + format_fixed(fit->coef[i]);
    out += ',' + format_fixed(fit->std_err[i]);
    out += ',' + format_fixed(fit->z_value[i]);
    out += ',' + format_pvalue(fit->p_value[i]);
    out += ',' + format_fixed(fit->ci_low[i]);
    out += ',' + format_fixed(fit->ci_high[i]);
    const auto* ref = reference::regression_for(fit->names[i]);
    const char* cells[6] = {"", "", "", "", "", ""};
    if (ref) {
      cells[0] = ref->coef;
      cells[1] = ref->std_err;
      cells[2] = ref->z;
      cells[3] = ref->p;
      cells[4] = ref->ci_low;
      cells[5] = ref->ci_high;
    }
    for (const char* cell : cells) {
      out += ',';
      out += cell;
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON report
// ---------------------------------------------------------------------------

std::vector<std::string> report_notes() {
  return {
      "Unit of analysis for correlation and regression is the individual "
      "review: confidence score plus per-review counts of hedge-sentence "
      "aspect annotations.",
      "Cue ratios are count(cue at confidence c) / total cue matches at "
      "confidence c, shown for the top-10 cues.",
      "No grammatical filtering is applied to the hedge vocabulary; generic "
      "entries such as \"can\", \"some\", \"about\", \"like\" and \"see\" "
      "are counted as published.",
      "Aspect distributions count one unit per (aspect, polarity) annotation "
      "on confirmed hedge sentences; the summary aspect is excluded.",
      "Average hedge-sentence counts are reported unrounded.",
      "ref_* columns carry the published baselines of the original "
      "large-scale review-corpus study for side-by-side comparison; they are "
      "not computed from the analyzed corpus.",
  };
}

namespace {

json stats_to_json(const CorpusStats& st) {
  return json{{"review_count", st.review_count},
              {"avg_words", st.avg_words},
              {"avg_sentences", st.avg_sentences},
              {"accepted", st.accepted},
              {"rejected", st.rejected},
              {"avg_confidence", st.avg_confidence}};
}

json spearman_to_json(const stats::SpearmanResult& r) {
  json j;
  j["defined"] = r.defined;
  j["n"] = r.n;
  if (r.defined) {
    j["rho"] = r.rho;
    j["p_value"] = r.p_value;
    j["exact"] = r.exact;
  }
  return j;
}

}  // namespace

std::string report_json(const AnalysisResult& result) {
  json j;
  j["tool"] = std::string(kToolVersion);
  j["notes"] = report_notes();
  j["dichotomy_threshold"] = result.dichotomy_threshold;

  {
    json corpus;
    corpus["overall"] = stats_to_json(result.corpus.overall);
    json venues = json::object();
    for (const auto& [venue, st] : result.corpus.by_venue)
      venues[venue] = stats_to_json(st);
    corpus["venues"] = venues;
    json refs = json::array();
    for (const auto& row : reference::corpus_stats())
      refs.push_back({{"venue", row.venue},
                      {"reviews", row.reviews},
                      {"avg_words", row.avg_words},
                      {"avg_sentences", row.avg_sentences},
                      {"accepted", row.accepted},
                      {"rejected", row.rejected},
                      {"avg_confidence", row.avg_confidence}});
    corpus["reference"] = refs;
    j["corpus"] = corpus;
  }

  {
    json rows = json::array();
    for (const auto& row : result.lengths) {
      json r{{"confidence", row.confidence},
             {"review_count", row.review_count},
             {"avg_words", row.avg_words},
             {"avg_sentences", row.avg_sentences}};
      for (const auto& ref : reference::length_stats())
        if (ref.confidence == row.confidence)
          r["reference"] = {{"avg_words", ref.avg_words},
                            {"avg_sentences", ref.avg_sentences}};
      rows.push_back(r);
    }
    j["lengths"] = rows;
  }

  {
    json rows = json::array();
    for (const auto& row : result.cues) {
      json top = json::array();
      for (const auto& cell : row.top)
        top.push_back({{"cue", cell.cue},
                       {"count", cell.count},
                       {"ratio", cell.ratio}});
      json ref_top = json::array();
      for (const auto& cell : reference::cue_top10(row.confidence))
        ref_top.push_back({{"cue", cell.cue}, {"ratio", cell.ratio}});
      rows.push_back({{"confidence", row.confidence},
                      {"total_matches", row.total_matches},
                      {"top", top},
                      {"reference_top", ref_top}});
    }
    j["cue_distribution"] = rows;
  }

  {
    json rows = json::array();
    for (const auto& row : result.aspects) {
      json ratios = json::object();
      for (const auto& [aspect, ratio] : row.aspect_ratios)
        ratios[std::string(aspect_name(aspect))] = ratio;
      json r{{"confidence", row.confidence},
             {"review_count", row.review_count},
             {"annotation_count", row.annotation_count},
             {"aspect_ratios", ratios},
             {"avg_hedge_sentences", row.avg_hedge_sentences}};
      if (row.annotation_count > 0) {
        r["positive_ratio"] = row.positive_ratio;
        r["negative_ratio"] = row.negative_ratio;
      }
      rows.push_back(r);
    }
    j["aspect_distribution"] = rows;
  }

  {
    json pairs = json::array();
    for (std::size_t i = 1; i < result.correlation.variables.size(); ++i) {
      for (std::size_t jx = 0; jx < i; ++jx) {
        json p{{"var_a", result.correlation.variables[i]},
               {"var_b", result.correlation.variables[jx]}};
        p["spearman"] = spearman_to_json(result.correlation.cells[i][jx]);
        const auto* ref = reference::correlation_for(
            result.correlation.variables[i], result.correlation.variables[jx]);
        if (ref) p["reference"] = {{"rho", ref->rho}, {"p", ref->p}};
        pairs.push_back(p);
      }
    }
    j["correlation"] = {{"variables", result.correlation.variables},
                        {"pairs", pairs}};
  }

  {
    json rows = json::array();
    for (const auto& row : result.battery) {
      json r{{"variable", row.variable},
             {"degenerate", row.degenerate},
             {"n_low", row.n_low},
             {"n_high", row.n_high}};
      if (!row.note.empty()) r["note"] = row.note;
      r["spearman"] = spearman_to_json(row.spearman);
      if (!row.degenerate)
        r["u_test"] = {{"u", row.u_test.u},
                       {"p_value", row.u_test.p_value},
                       {"exact", row.u_test.exact}};
      rows.push_back(r);
    }
    j["significance_battery"] = rows;
  }

  {
    json reg;
    if (result.regression) {
      const auto& fit = *result.regression;
      json rows = json::array();
      for (std::size_t i = 0; i < fit.names.size(); ++i) {
        json r{{"variable", fit.names[i]},
               {"coef", fit.coef[i]},
               {"std_err", fit.std_err[i]},
               {"z", fit.z_value[i]},
               {"p_value", fit.p_value[i]},
               {"ci_low", fit.ci_low[i]},
               {"ci_high", fit.ci_high[i]}};
        const auto* ref = reference::regression_for(fit.names[i]);
        if (ref)
          r["reference"] = {{"coef", ref->coef},   {"std_err", ref->std_err},
                            {"z", ref->z},         {"p", ref->p},
                            {"ci_low", ref->ci_low}, {"ci_high", ref->ci_high}};
        rows.push_back(r);
      }
      reg["rows"] = rows;
      reg["log_likelihood"] = fit.log_likelihood;
      reg["iterations"] = fit.iterations;
      reg["converged"] = fit.converged;
      reg["separation"] = fit.separation;
      reg["grad_max_norm"] = fit.grad_max_norm;
      reg["dropped"] = fit.dropped;
      reg["observations"] = result.feature_rows.size();
    }
    if (!result.regression_note.empty()) reg["note"] = result.regression_note;
    j["regression"] = reg;
  }

  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Plot-ready long format
// ---------------------------------------------------------------------------

std::string to_long_csv(std::span<const LongRow> rows) {
  std::string out = "group,variable,value\n";
  for (const auto& row : rows) {
    out += row.group;
    out += ',' + row.variable;
    out += ',' + row.value;
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& line : split_on(content, '\n')) {
    if (line.empty()) continue;
    rows.push_back(split_on(line, ','));
  }
  return rows;
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw AnalyticsError("plotdata: missing column \"" + name + "\"");
}

}  // namespace

std::vector<LongRow> reshape_table(const std::string& table_name,
                                   const std::string& csv_content) {
  const auto rows = parse_csv(csv_content);
  if (rows.size() < 1)
    throw AnalyticsError("plotdata: table " + table_name + " is empty");
  const auto& header = rows.front();
  std::vector<LongRow> out;

  auto emit = [&](const std::string& group, const std::string& variable,
                  const std::string& value) {
    if (!value.empty()) out.push_back({group, variable, value});
  };

  if (table_name == "lengths") {
    const auto c_conf = column_index(header, "confidence");
    for (const char* metric : {"avg_words", "avg_sentences"}) {
      const auto c = column_index(header, metric);
      for (std::size_t r = 1; r < rows.size(); ++r)
        emit(rows[r][c_conf], metric, rows[r][c]);
    }
  } else if (table_name == "cue_distribution") {
    const auto c_conf = column_index(header, "confidence");
    const auto c_cue = column_index(header, "cue");
    const auto c_ratio = column_index(header, "ratio");
    for (std::size_t r = 1; r < rows.size(); ++r)
      if (!rows[r][c_cue].empty())
        emit(rows[r][c_conf], rows[r][c_cue], rows[r][c_ratio]);
  } else if (table_name == "aspect_distribution") {
    const auto c_conf = column_index(header, "confidence");
    for (const char* metric :
         {"clarity", "soundness", "motivation", "originality", "substance",
          "replicability", "meaningful_comparison", "avg_hedge_sentences",
          "positive", "negative"}) {
      const auto c = column_index(header, metric);
      for (std::size_t r = 1; r < rows.size(); ++r)
        emit(rows[r][c_conf], metric, rows[r][c]);
    }
  } else if (table_name == "correlation") {
    const auto c_a = column_index(header, "var_a");
    const auto c_b = column_index(header, "var_b");
    for (const char* metric : {"rho", "p_value"}) {
      const auto c = column_index(header, metric);
      for (std::size_t r = 1; r < rows.size(); ++r)
        emit(rows[r][c_a] + "|" + rows[r][c_b], metric, rows[r][c]);
    }
  } else if (table_name == "regression") {
    const auto c_var = column_index(header, "variable");
    for (const char* metric :
         {"coef", "std_err", "z", "p_value", "ci_low", "ci_high"}) {
      const auto c = column_index(header, metric);
      for (std::size_t r = 1; r < rows.size(); ++r)
        emit(rows[r][c_var], metric, rows[r][c]);
    }
  } else {
    throw AnalyticsError("plotdata: unknown table \"" + table_name + "\"");
  }
  return out;
}

}  // namespace revconf
