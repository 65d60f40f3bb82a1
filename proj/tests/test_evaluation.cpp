#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "json.hpp"
#include "rulegate/errors.hpp"
#include "rulegate/evaluation.hpp"
#include "rulegate/rng.hpp"

using namespace rulegate;

TEST_CASE("metric arithmetic") {
  metric_set m = metrics({2, 1, 1, 6});
  CHECK(m.accuracy == doctest::Approx(0.8));
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));

  metric_set perfect = metrics({5, 0, 0, 5});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  metric_set zero = metrics({0, 0, 3, 4});
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);

  CHECK_THROWS_AS(metrics({0, 0, 0, 0}), contract_error);
}

TEST_CASE("metric identities on random matrices, rational oracle") {
  rng gen(77);
  for (int trial = 0; trial < 1000; ++trial) {
    confusion_matrix cm{static_cast<long>(gen.below(50)),
                        static_cast<long>(gen.below(50)),
                        static_cast<long>(gen.below(50)),
                        static_cast<long>(gen.below(50))};
    if (cm.total() == 0) continue;
    metric_set m = metrics(cm);
    // single divisions round once, so they equal the rational value exactly
    CHECK(m.accuracy == static_cast<double>(cm.tp + cm.tn) /
                            static_cast<double>(cm.total()));
    if (cm.tp + cm.fp > 0)
      CHECK(m.precision == static_cast<double>(cm.tp) /
                               static_cast<double>(cm.tp + cm.fp));
    if (cm.tp + cm.fn > 0)
      CHECK(m.recall == static_cast<double>(cm.tp) /
                            static_cast<double>(cm.tp + cm.fn));
    // f1 == 2tp / (2tp + fp + fn) algebraically
    if (cm.tp + cm.fp > 0 || cm.tp + cm.fn > 0) {
      double direct = 2.0 * static_cast<double>(cm.tp) /
                      static_cast<double>(2 * cm.tp + cm.fp + cm.fn);
      CHECK(std::fabs(m.f1 - direct) <= 1e-12);
    }
  }
}

TEST_CASE("incomplete beta against reference values") {
  CHECK(std::fabs(reg_incomplete_beta(1.0, 0.5, 0.5) -
                  0.29289321881345248) <= 1e-9);
  CHECK(std::fabs(reg_incomplete_beta(2.5, 3.5, 0.2) -
                  0.1328173097780492) <= 1e-9);
  CHECK(std::fabs(reg_incomplete_beta(0.5, 0.5, 0.99) -
                  0.93623143914148033) <= 1e-9);
  CHECK(std::fabs(reg_incomplete_beta(5.0, 1.0, 0.7) - 0.16807) <= 1e-9);
}

TEST_CASE("paired t-test on fixed vectors") {
  struct fixture {
    std::vector<double> a, b;
    double t, p;
  };
  // expected values from the direct formula plus a reference
  // t-distribution computation
  std::vector<fixture> cases = {
      {{.60, .62, .61}, {.70, .71, .69}, 15.588457268119875,
       0.0040899966895213838},
      {{0.80, 0.82, 0.79, 0.81, 0.85},
       {0.82, 0.83, 0.80, 0.84, 0.86},
       4.0000000000000142,
       0.016130089900092338},
      {{0.5, 0.6, 0.7, 0.8},
       {0.45, 0.62, 0.66, 0.85},
       -0.20851441405707458,
       0.848181883652809},
      {{0.90, 0.93, 0.91, 0.96, 0.92, 0.95},
       {0.88, 0.94, 0.90, 0.97, 0.89, 0.96},
       -0.6956083436402557,
       0.51767192762459247},
      {{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
       {0.15, 0.22, 0.28, 0.45, 0.52, 0.63, 0.68, 0.85, 0.95, 1.01},
       2.7529888064467452,
       0.02236718968057191},
  };
  for (const auto& c : cases) {
    t_test_result r = paired_t_test(c.a, c.b);
    CHECK(r.applicable);
    CHECK(std::fabs(r.t - c.t) <= 1e-6);
    CHECK(std::fabs(r.p - c.p) <= 1e-6);
  }
}

TEST_CASE("identical vectors are not applicable") {
  std::vector<double> a = {0.5, 0.6, 0.7};
  t_test_result r = paired_t_test(a, a);
  CHECK_FALSE(r.applicable);
}

TEST_CASE("constant nonzero differences give the infinite sentinel") {
  std::vector<double> a = {1, 2, 3, 4};
  std::vector<double> b = {2, 3, 4, 5};
  t_test_result r = paired_t_test(a, b);
  CHECK(r.applicable);
  CHECK(std::isinf(r.t));
  CHECK(r.t > 0);
  CHECK(r.p == 0.0);
}

TEST_CASE("t-test antisymmetry") {
  rng gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 3 + gen.below(8);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = gen.unit();
      b[i] = gen.unit();
    }
    t_test_result ab = paired_t_test(a, b);
    t_test_result ba = paired_t_test(b, a);
    if (!ab.applicable) continue;
    CHECK(ab.t == doctest::Approx(-ba.t));
    CHECK(ab.p == doctest::Approx(ba.p));
  }
}

TEST_CASE("t-test preconditions") {
  std::vector<double> a = {1, 2};
  std::vector<double> b = {1};
  CHECK_THROWS_AS(paired_t_test(a, b), contract_error);
  std::vector<double> one = {1};
  CHECK_THROWS_AS(paired_t_test(one, one), contract_error);
}

namespace {

dataset toy_dataset() {
  std::string csv = "x,c,label\n";
  rng gen(4242);
  for (int i = 0; i < 60; ++i) {
    int x = static_cast<int>(gen.below(100));
    const char* c = gen.below(2) ? "u" : "v";
    bool pos = x < 50;
    if (gen.below(12) == 0) pos = !pos;
    csv += std::to_string(x) + "," + c + "," + (pos ? "yes" : "no") + "\n";
  }
  return load_csv_text(
      csv, schema_spec::parse("x,numeric\nc,categorical\nlabel,categorical\n"
                              "label=label,positive=yes\n"));
}

}  // namespace

TEST_CASE("experiment report aggregates and determinism") {
  dataset ds = toy_dataset();
  experiment_config cfg;
  cfg.dataset_id = "toy";
  cfg.clf = classifier_kind::knn(3);
  cfg.n_runs = 2;
  cfg.base_seed = 7;
  experiment_report rep = run_experiments(ds, cfg);

  REQUIRE(rep.runs.size() == 2);
  CHECK(rep.runs[0].seed == 7);
  CHECK(rep.runs[1].seed == 8);
  // two runs: the mean is the midpoint
  CHECK(rep.hybrid.accuracy.mean ==
        doctest::Approx((rep.runs[0].hybrid.m.accuracy +
                         rep.runs[1].hybrid.m.accuracy) /
                        2.0)
            .epsilon(1e-12));
  // aggregates recomputable from runs
  for (auto member : {&run_result::ml, &run_result::asp,
                      &run_result::hybrid}) {
    double mean = ((rep.runs[0].*member).m.f1 +
                   (rep.runs[1].*member).m.f1) /
                  2.0;
    const system_aggregate& agg = member == &run_result::ml  ? rep.ml
                                  : member == &run_result::asp ? rep.asp
                                                               : rep.hybrid;
    CHECK(std::fabs(agg.f1.mean - mean) <= 1e-12);
  }

  std::string json_a = report_json(rep);
  std::string json_b = report_json(run_experiments(ds, cfg));
  CHECK(json_a == json_b);  // byte-identical

  // report is valid JSON and re-readable
  auto parsed = nlohmann::json::parse(json_a);
  CHECK(parsed["dataset"] == "toy");
  CHECK(parsed["classifier"] == "knn");
  CHECK(parsed["runs"].size() == 2);
  CHECK(parsed["aggregates"]["hybrid"].contains("accuracy"));
}

TEST_CASE("n_runs below two is rejected") {
  dataset ds = toy_dataset();
  experiment_config cfg;
  cfg.clf = classifier_kind::knn(3);
  cfg.n_runs = 1;
  CHECK_THROWS_AS(run_experiments(ds, cfg), contract_error);
}
