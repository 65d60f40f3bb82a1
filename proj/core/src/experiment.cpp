#include <cmath>
#include <cstdio>

#include "rulegate/errors.hpp"
#include "rulegate/evaluation.hpp"

namespace rulegate {

namespace {

void tally(confusion_matrix& cm, const std::string& predicted,
           const std::string& truth, const std::string& positive) {
  bool pred_pos = predicted == positive;
  bool true_pos = truth == positive;
  if (pred_pos && true_pos) ++cm.tp;
  else if (pred_pos) ++cm.fp;
  else if (true_pos) ++cm.fn;
  else ++cm.tn;
}

aggregate aggregate_of(const std::vector<double>& xs) {
  aggregate a;
  for (double x : xs) a.mean += x;
  a.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return a;
}

system_aggregate aggregate_system(
    const std::vector<run_result>& runs,
    const system_result run_result::* member) {
  auto collect = [&](double metric_set::* field) {
    std::vector<double> xs;
    xs.reserve(runs.size());
    for (const auto& r : runs) xs.push_back((r.*member).m.*field);
    return aggregate_of(xs);
  };
  system_aggregate agg;
  agg.accuracy = collect(&metric_set::accuracy);
  agg.precision = collect(&metric_set::precision);
  agg.recall = collect(&metric_set::recall);
  agg.f1 = collect(&metric_set::f1);
  return agg;
}

std::vector<double> accuracies(const std::vector<run_result>& runs,
                               const system_result run_result::* member) {
  std::vector<double> xs;
  for (const auto& r : runs) xs.push_back((r.*member).m.accuracy);
  return xs;
}

std::vector<double> f1s(const std::vector<run_result>& runs,
                        const system_result run_result::* member) {
  std::vector<double> xs;
  for (const auto& r : runs) xs.push_back((r.*member).m.f1);
  return xs;
}

}  // namespace

experiment_report run_experiments(const dataset& ds,
                                  const experiment_config& cfg) {
  if (cfg.n_runs < 2) throw contract_error("need at least 2 runs");
  experiment_report report;
  report.cfg = cfg;
  report.scale_digits_used =
      cfg.scale_digits > 0 ? cfg.scale_digits : ds.scale_digits(1);

  for (int run = 0; run < cfg.n_runs; ++run) {
    std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(run);
    auto [train, test] = stratified_split(ds, cfg.test_fraction, seed);

    auto model = fit(cfg.clf, train, seed);
    ruleset rs = learn(train, ds.positive_class(), cfg.lp);
    translation tr = translate(rs, report.scale_digits_used);

    run_result rr;
    rr.seed = seed;
    rr.program_text = print_program(tr.program);
    for (std::size_t i = 0; i < tr.class_rule_count; ++i)
      rr.rule_texts.push_back(print_rule(tr.program.rules[i]));

    std::vector<prediction> preds;
    std::vector<std::string> truths;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const instance& x = test.row(i);
      prediction p = hybrid_predict(*model, tr, x, cfg.hc);
      const std::string& truth = test.label(i);
      std::string asp_predicted =
          p.asp_label ? *p.asp_label : tr.negative_class;
      tally(rr.ml.cm, p.ml_label, truth, ds.positive_class());
      tally(rr.asp.cm, asp_predicted, truth, ds.positive_class());
      tally(rr.hybrid.cm, p.label, truth, ds.positive_class());
      preds.push_back(std::move(p));
      truths.push_back(truth);
    }
    rr.ml.m = metrics(rr.ml.cm);
    rr.asp.m = metrics(rr.asp.cm);
    rr.hybrid.m = metrics(rr.hybrid.cm);
    rr.importance = rule_importance(preds, truths);
    report.runs.push_back(std::move(rr));
  }

  report.ml = aggregate_system(report.runs, &run_result::ml);
  report.asp = aggregate_system(report.runs, &run_result::asp);
  report.hybrid = aggregate_system(report.runs, &run_result::hybrid);
  report.ttest_accuracy =
      paired_t_test(accuracies(report.runs, &run_result::ml),
                    accuracies(report.runs, &run_result::hybrid));
  report.ttest_f1 = paired_t_test(f1s(report.runs, &run_result::ml),
                                  f1s(report.runs, &run_result::hybrid));
  report.significant =
      report.ttest_accuracy.applicable && report.ttest_accuracy.p < 0.05;
  return report;
}

// ---- report JSON -----------------------------------------------------------

namespace {

// Hand-rolled writer: the report contract pins key order and 6-decimal
// numbers, which generic serializers do not guarantee.
class json_writer {
 public:
  std::string out;

  void raw(const std::string& s) { out += s; }

  void str(const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
      }
    }
    out += '"';
  }

  void num(double v) {
    if (std::isinf(v)) {
      str(v > 0 ? "inf" : "-inf");
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out += buf;
  }

  void integer(long long v) { out += std::to_string(v); }
};

void write_metric_block(json_writer& w, const system_result& s) {
  w.raw("{\"tp\": ");
  w.integer(s.cm.tp);
  w.raw(", \"fp\": ");
  w.integer(s.cm.fp);
  w.raw(", \"fn\": ");
  w.integer(s.cm.fn);
  w.raw(", \"tn\": ");
  w.integer(s.cm.tn);
  w.raw(", \"accuracy\": ");
  w.num(s.m.accuracy);
  w.raw(", \"precision\": ");
  w.num(s.m.precision);
  w.raw(", \"recall\": ");
  w.num(s.m.recall);
  w.raw(", \"f1\": ");
  w.num(s.m.f1);
  w.raw("}");
}

void write_aggregate(json_writer& w, const system_aggregate& a) {
  auto one = [&](const char* name, const aggregate& g, bool last) {
    w.raw(std::string("\"") + name + "\": {\"mean\": ");
    w.num(g.mean);
    w.raw(", \"sd\": ");
    w.num(g.sd);
    w.raw(last ? "}" : "}, ");
  };
  w.raw("{");
  one("accuracy", a.accuracy, false);
  one("precision", a.precision, false);
  one("recall", a.recall, false);
  one("f1", a.f1, true);
  w.raw("}");
}

void write_ttest(json_writer& w, const t_test_result& t) {
  if (!t.applicable) {
    w.str("n/a");
    return;
  }
  w.raw("{\"t\": ");
  w.num(t.t);
  w.raw(", \"p\": ");
  w.num(t.p);
  w.raw(", \"significant\": ");
  w.raw(t.p < 0.05 ? "true" : "false");
  w.raw("}");
}

}  // namespace

std::string report_json(const experiment_report& report) {
  json_writer w;
  w.raw("{\n  \"dataset\": ");
  w.str(report.cfg.dataset_id);
  w.raw(",\n  \"classifier\": ");
  w.str(report.cfg.clf.name());
  w.raw(",\n  \"params\": {\"tau\": ");
  w.num(report.cfg.hc.tau);
  w.raw(", \"runs\": ");
  w.integer(report.cfg.n_runs);
  w.raw(", \"base_seed\": ");
  w.integer(static_cast<long long>(report.cfg.base_seed));
  w.raw(", \"test_fraction\": ");
  w.num(report.cfg.test_fraction);
  w.raw(", \"scale_digits\": ");
  w.integer(report.scale_digits_used);
  w.raw(", \"ratio\": ");
  w.num(report.cfg.lp.ratio);
  w.raw("},\n  \"runs\": [\n");
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const run_result& r = report.runs[i];
    w.raw("    {\"seed\": ");
    w.integer(static_cast<long long>(r.seed));
    w.raw(", \"ml\": ");
    write_metric_block(w, r.ml);
    w.raw(", \"asp\": ");
    write_metric_block(w, r.asp);
    w.raw(", \"hybrid\": ");
    write_metric_block(w, r.hybrid);
    w.raw(", \"rule_importance\": [");
    for (std::size_t j = 0; j < r.importance.size(); ++j) {
      if (j) w.raw(", ");
      w.raw("{\"rule\": ");
      w.str("r" + std::to_string(r.importance[j].first + 1));
      w.raw(", \"corrections\": ");
      w.integer(r.importance[j].second);
      w.raw(", \"text\": ");
      w.str(static_cast<std::size_t>(r.importance[j].first) <
                    r.rule_texts.size()
                ? r.rule_texts[r.importance[j].first]
                : "");
      w.raw("}");
    }
    w.raw("]}");
    w.raw(i + 1 < report.runs.size() ? ",\n" : "\n");
  }
  w.raw("  ],\n  \"aggregates\": {\"ml\": ");
  write_aggregate(w, report.ml);
  w.raw(", \"asp\": ");
  write_aggregate(w, report.asp);
  w.raw(", \"hybrid\": ");
  write_aggregate(w, report.hybrid);
  w.raw("},\n  \"ttest\": ");
  write_ttest(w, report.ttest_accuracy);
  w.raw(",\n  \"ttest_f1\": ");
  write_ttest(w, report.ttest_f1);
  if (report.significant) {
    w.raw(",\n  \"programs\": {");
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
      if (i) w.raw(", ");
      w.str(std::to_string(report.runs[i].seed));
      w.raw(": ");
      w.str(report.runs[i].program_text);
    }
    w.raw("}");
  }
  w.raw("\n}\n");
  return w.out;
}

}  // namespace rulegate
