#include <benchmark/benchmark.h>

#include "rulegate/evaluation.hpp"

using namespace rulegate;

namespace {

// A mid-sized synthetic table with enough structure for rules to form.
dataset make_table(std::size_t n) {
  std::string csv = "a,b,c,shape,label\n";
  rng gen(99);
  for (std::size_t i = 0; i < n; ++i) {
    int a = static_cast<int>(gen.below(100));
    int b = static_cast<int>(gen.below(50));
    double c = static_cast<double>(gen.below(1000)) / 10.0;
    const char* shape = gen.below(3) == 0 ? "round" : "square";
    bool pos = (a > 40 && b < 30) || (shape[0] == 'r' && c > 55.0);
    if (gen.below(10) == 0) pos = !pos;
    char row[128];
    std::snprintf(row, sizeof(row), "%d,%d,%.1f,%s,%s\n", a, b, c, shape,
                  pos ? "yes" : "no");
    csv += row;
  }
  schema_spec spec = schema_spec::parse(
      "a,numeric\nb,numeric\nc,numeric\nshape,categorical\n"
      "label,categorical\nlabel=label,positive=yes\n");
  return preprocess(load_csv_text(csv, spec));
}

void bm_learn(benchmark::State& state) {
  dataset ds = make_table(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    ruleset rs = learn(ds, "yes");
    benchmark::DoNotOptimize(rs.rule_count());
  }
}
BENCHMARK(bm_learn)->Arg(200)->Arg(500);

void bm_evaluate(benchmark::State& state) {
  dataset ds = make_table(400);
  ruleset rs = learn(ds, "yes");
  translation tr = translate(rs, ds.scale_digits());
  fact_set facts = instance_to_facts(tr, ds.row(0), ds.row(0).id);
  for (auto _ : state) {
    model m = evaluate(tr.program, facts);
    benchmark::DoNotOptimize(m.atoms.size());
  }
}
BENCHMARK(bm_evaluate);

void bm_parse_print_roundtrip(benchmark::State& state) {
  dataset ds = make_table(400);
  ruleset rs = learn(ds, "yes");
  std::string text = print_program(translate(rs, ds.scale_digits()).program);
  for (auto _ : state) {
    asp_program p = parse_program(text);
    benchmark::DoNotOptimize(p.rules.size());
  }
}
BENCHMARK(bm_parse_print_roundtrip);

void bm_knn_predict(benchmark::State& state) {
  dataset ds = make_table(500);
  auto model = fit(classifier_kind::knn(5), ds, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    proba p = model->predict_proba(ds.row(i++ % ds.size()));
    benchmark::DoNotOptimize(p.positive);
  }
}
BENCHMARK(bm_knn_predict);

void bm_paired_t_test(benchmark::State& state) {
  std::vector<double> a(10), b(10);
  rng gen(5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = gen.unit();
    b[i] = a[i] + 0.01 * gen.unit();
  }
  for (auto _ : state) {
    t_test_result r = paired_t_test(a, b);
    benchmark::DoNotOptimize(r.p);
  }
}
BENCHMARK(bm_paired_t_test);

}  // namespace

BENCHMARK_MAIN();
