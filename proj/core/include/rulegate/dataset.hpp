#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rulegate/value.hpp"

namespace rulegate {

enum class attr_kind { numeric, categorical };

struct attribute {
  std::string name;
  attr_kind kind;
  bool operator==(const attribute&) const = default;
};

// Sidecar description of a CSV: one `name,kind` line per column plus
// `label=<column>,positive=<class>` and optional `missing=` / `id_prefix=`.
struct schema_spec {
  std::vector<attribute> columns;  // includes the label column
  std::string label_column;
  std::string positive_class;
  std::vector<std::string> missing_tokens{"", "?"};
  std::string id_prefix{"instance"};

  static schema_spec load(const std::string& path);
  static schema_spec parse(const std::string& text);
};

struct instance {
  std::string id;
  std::vector<value> values;  // aligned with dataset feature attributes
};

enum class impute_policy { median_mode, drop_rows };

// Immutable after load/preprocess; label column is kept separate from the
// feature attributes so every consumer sees the same feature layout.
class dataset {
 public:
  dataset() = default;
  dataset(std::vector<attribute> features, std::vector<instance> rows,
          std::vector<std::string> labels, std::string label_column,
          std::string positive_class, std::string negative_class,
          std::string id_prefix);

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  const std::vector<attribute>& features() const { return features_; }
  int feature_index(const std::string& name) const;  // -1 when absent

  const instance& row(std::size_t i) const { return rows_[i]; }
  const std::vector<instance>& rows() const { return rows_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  bool is_positive(std::size_t i) const {
    return labels_[i] == positive_class_;
  }

  const std::string& label_column() const { return label_column_; }
  const std::string& positive_class() const { return positive_class_; }
  const std::string& negative_class() const { return negative_class_; }
  const std::string& id_prefix() const { return id_prefix_; }

  dataset subset(const std::vector<std::size_t>& indices) const;

  // Smallest scale making every numeric value exact, floored at `floor`.
  int scale_digits(int floor = 1) const;

 private:
  std::vector<attribute> features_;
  std::vector<instance> rows_;
  std::vector<std::string> labels_;
  std::string label_column_;
  std::string positive_class_;
  std::string negative_class_;
  std::string id_prefix_;
};

dataset load_csv(const std::string& path, const schema_spec& spec);
dataset load_csv_text(const std::string& text, const schema_spec& spec);

dataset preprocess(const dataset& ds,
                   impute_policy policy = impute_policy::median_mode);

std::pair<dataset, dataset> stratified_split(const dataset& ds,
                                             double test_fraction,
                                             std::uint64_t seed);

}  // namespace rulegate
