#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rulegate/classifiers.hpp"
#include "rulegate/hybrid.hpp"
#include "rulegate/induction.hpp"

namespace rulegate {

struct confusion_matrix {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  long total() const { return tp + fp + fn + tn; }
};

struct metric_set {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// accuracy=(tp+tn)/total, precision=tp/(tp+fp), recall=tp/(tp+fn),
// f1=2PR/(P+R); the 0/0 cases resolve to 0.
metric_set metrics(const confusion_matrix& cm);

struct t_test_result {
  bool applicable = true;
  double t = 0.0;
  double p = 1.0;
};

// Paired two-tailed Student t-test on differences b - a. All-zero
// differences are not applicable; zero variance with nonzero mean yields
// t = +/-infinity with p = 0.
t_test_result paired_t_test(std::span<const double> a,
                            std::span<const double> b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, int df);

struct system_result {
  confusion_matrix cm;
  metric_set m;
};

struct run_result {
  std::uint64_t seed = 0;
  system_result ml, asp, hybrid;
  std::vector<std::pair<int, int>> importance;  // (class rule idx, corrections)
  std::string program_text;
  std::vector<std::string> rule_texts;  // printed class rules, by index
};

struct aggregate {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};

struct system_aggregate {
  aggregate accuracy, precision, recall, f1;
};

struct experiment_config {
  std::string dataset_id;
  classifier_kind clf;
  learner_params lp;
  hybrid_config hc;
  int n_runs = 10;
  std::uint64_t base_seed = 42;
  int scale_digits = 0;  // 0 = derive from the data, floor 1
  double test_fraction = 0.2;
};

struct experiment_report {
  experiment_config cfg;
  int scale_digits_used = 1;
  std::vector<run_result> runs;
  system_aggregate ml, asp, hybrid;
  t_test_result ttest_accuracy;  // ml vs hybrid
  t_test_result ttest_f1;        // supplementary
  bool significant = false;      // accuracy t-test, p < 0.05
};

// Repeated stratified splits with seeds base..base+n-1; each run fits the
// classifier, learns and translates a ruleset, and scores ml / rules-alone /
// hybrid on the held-out fifth.
experiment_report run_experiments(const dataset& ds,
                                  const experiment_config& cfg);

// Stable key order, 6-decimal numbers; byte-identical for identical inputs.
std::string report_json(const experiment_report& report);

}  // namespace rulegate
