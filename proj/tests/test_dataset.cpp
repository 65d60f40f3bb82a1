#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "rulegate/dataset.hpp"
#include "rulegate/errors.hpp"
#include "rulegate/rng.hpp"

using namespace rulegate;

namespace {

const char* kSchemaText =
    "age,numeric\n"
    "thal,categorical\n"
    "diagnosis,categorical\n"
    "label=diagnosis,positive=present\n"
    "id_prefix=patient\n";

schema_spec heartish_schema() { return schema_spec::parse(kSchemaText); }

}  // namespace

TEST_CASE("csv loads typed values and missing tokens") {
  dataset ds = load_csv_text(
      "age,thal,diagnosis\n"
      "60.0,3,present\n"
      "45,?,absent\n"
      "oops,7,present\n",
      heartish_schema());
  REQUIRE(ds.size() == 3);
  CHECK(ds.row(0).id == "patient0");
  CHECK(ds.row(0).values[0].num_val() == decimal::parse("60.0"));
  CHECK(ds.row(1).values[1].is_missing());       // '?' token
  CHECK(ds.row(2).values[0].is_missing());       // numeric parse failure
  CHECK(ds.label(0) == "present");
  CHECK(ds.positive_class() == "present");
  CHECK(ds.negative_class() == "absent");
}

TEST_CASE("header-only csv yields an empty dataset") {
  dataset ds = load_csv_text("age,thal,diagnosis\n", heartish_schema());
  CHECK(ds.size() == 0);
}

TEST_CASE("csv shape errors") {
  CHECK_THROWS_AS(
      load_csv_text("age,thal,diagnosis\n60.0,3\n", heartish_schema()),
      parse_error);
  CHECK_THROWS_AS(
      load_csv_text("age,wrong,diagnosis\n60.0,3,present\n",
                    heartish_schema()),
      schema_error);
  // three distinct labels
  CHECK_THROWS_AS(load_csv_text("age,thal,diagnosis\n"
                                "1,3,present\n2,3,absent\n3,3,maybe\n",
                                heartish_schema()),
                  arity_error);
  // one label value only
  CHECK_THROWS_AS(load_csv_text("age,thal,diagnosis\n"
                                "1,3,present\n2,3,present\n",
                                heartish_schema()),
                  arity_error);
}

TEST_CASE("median imputation uses the lower median") {
  // column [1, 2, Missing, 4] -> median of {1,2,4} is 2
  dataset ds = load_csv_text(
      "age,thal,diagnosis\n"
      "1,3,present\n2,3,absent\n?,3,present\n4,3,absent\n",
      heartish_schema());
  dataset prepared = preprocess(ds);
  CHECK(prepared.row(2).values[0].num_val() == decimal::from_int(2));

  // even count: lower of the two middle values
  dataset ds2 = load_csv_text(
      "age,thal,diagnosis\n"
      "1,3,present\n2,3,absent\n3,3,present\n4,3,absent\n?,3,present\n",
      heartish_schema());
  CHECK(preprocess(ds2).row(4).values[0].num_val() == decimal::from_int(2));
}

TEST_CASE("mode imputation breaks ties lexicographically") {
  dataset ds = load_csv_text(
      "age,thal,diagnosis\n"
      "1,7,present\n2,3,absent\n3,?,present\n4,3,absent\n5,7,present\n",
      heartish_schema());
  CHECK(preprocess(ds).row(2).values[1].cat_val() == "3");
}

TEST_CASE("preprocess identity and idempotence") {
  dataset ds = load_csv_text(
      "age,thal,diagnosis\n1,3,present\n2,7,absent\n",
      heartish_schema());
  dataset once = preprocess(ds);
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(once.row(i).values == ds.row(i).values);
  dataset twice = preprocess(once);
  for (std::size_t i = 0; i < once.size(); ++i)
    CHECK(twice.row(i).values == once.row(i).values);
}

TEST_CASE("drop-rows policy removes incomplete rows") {
  dataset ds = load_csv_text(
      "age,thal,diagnosis\n1,3,present\n?,3,absent\n3,3,absent\n",
      heartish_schema());
  dataset kept = preprocess(ds, impute_policy::drop_rows);
  CHECK(kept.size() == 2);
  CHECK(kept.row(0).id == "patient0");
  CHECK(kept.row(1).id == "patient2");
}

TEST_CASE("entirely missing column is unusable") {
  dataset ds = load_csv_text(
      "age,thal,diagnosis\n?,3,present\n?,7,absent\n",
      heartish_schema());
  CHECK_THROWS_AS(preprocess(ds), unusable_column_error);
}

namespace {

dataset synthetic(std::size_t n_pos, std::size_t n_neg) {
  std::string csv = "age,thal,diagnosis\n";
  for (std::size_t i = 0; i < n_pos; ++i)
    csv += std::to_string(i) + ",3,present\n";
  for (std::size_t i = 0; i < n_neg; ++i)
    csv += std::to_string(100 + i) + ",7,absent\n";
  return load_csv_text(csv, heartish_schema());
}

}  // namespace

TEST_CASE("stratified split counts") {
  dataset ds = synthetic(60, 40);
  auto [train, test] = stratified_split(ds, 0.2, 1);
  CHECK(train.size() + test.size() == 100);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < test.size(); ++i)
    if (test.is_positive(i)) ++pos;
  CHECK(test.size() == 20);
  CHECK(pos == 12);
  CHECK(test.size() - pos == 8);
}

TEST_CASE("identical seed gives identical split") {
  dataset ds = synthetic(30, 25);
  auto [a_train, a_test] = stratified_split(ds, 0.2, 9);
  auto [b_train, b_test] = stratified_split(ds, 0.2, 9);
  REQUIRE(a_test.size() == b_test.size());
  for (std::size_t i = 0; i < a_test.size(); ++i)
    CHECK(a_test.row(i).id == b_test.row(i).id);
  auto [c_train, c_test] = stratified_split(ds, 0.2, 10);
  bool same = c_test.size() == a_test.size();
  if (same)
    for (std::size_t i = 0; i < a_test.size(); ++i)
      if (c_test.row(i).id != a_test.row(i).id) same = false;
  CHECK_FALSE(same);  // different seed should move the split
}

TEST_CASE("split partition and stratification bound properties") {
  rng gen(123);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n_pos = 2 + gen.below(120);
    std::size_t n_neg = 2 + gen.below(120);
    double frac = 0.1 + 0.8 * gen.unit();
    dataset ds = synthetic(n_pos, n_neg);
    auto [train, test] = stratified_split(ds, frac, gen.next());

    CHECK(train.size() + test.size() == ds.size());
    std::set<std::string> ids;
    for (std::size_t i = 0; i < train.size(); ++i)
      ids.insert(train.row(i).id);
    for (std::size_t i = 0; i < test.size(); ++i) {
      CHECK_FALSE(ids.count(test.row(i).id));
      ids.insert(test.row(i).id);
    }
    CHECK(ids.size() == ds.size());

    if (test.size() > 0) {
      std::size_t tp = 0;
      for (std::size_t i = 0; i < test.size(); ++i)
        if (test.is_positive(i)) ++tp;
      double test_prop = static_cast<double>(tp) / test.size();
      double ds_prop = static_cast<double>(n_pos) / ds.size();
      CHECK(std::fabs(test_prop - ds_prop) <=
            1.0 / static_cast<double>(test.size()) + 1e-12);
    }
  }
}

TEST_CASE("split preconditions") {
  dataset ds = synthetic(1, 30);
  CHECK_THROWS_AS(stratified_split(ds, 0.2, 1), stratification_error);
  dataset ok = synthetic(5, 5);
  CHECK_THROWS_AS(stratified_split(ok, 0.0, 1), contract_error);
  CHECK_THROWS_AS(stratified_split(ok, 1.0, 1), contract_error);
}

TEST_CASE("scale digits derive from numeric precision") {
  dataset ds = load_csv_text(
      "age,thal,diagnosis\n60.25,3,present\n45,7,absent\n",
      heartish_schema());
  CHECK(ds.scale_digits() == 2);
  dataset ints = load_csv_text(
      "age,thal,diagnosis\n60,3,present\n45,7,absent\n",
      heartish_schema());
  CHECK(ints.scale_digits() == 1);  // floor
}
