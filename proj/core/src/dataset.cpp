#include "rulegate/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rulegate/errors.hpp"
#include "rulegate/rng.hpp"

namespace rulegate {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0])))
    return false;
  for (char c : s)
    if (!std::islower(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
      return false;
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line, int row) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty())
        throw parse_error("unexpected quote", row, static_cast<int>(i) + 1);
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted)
    throw parse_error("unterminated quote", row,
                      static_cast<int>(line.size()));
  out.push_back(cur);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

schema_spec schema_spec::parse(const std::string& text) {
  schema_spec spec;
  bool saw_label = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("label=", 0) == 0) {
      // label=<column>,positive=<class>
      std::size_t comma = line.find(',');
      if (comma == std::string::npos || line.find("positive=") == std::string::npos)
        throw parse_error("expected 'label=<col>,positive=<class>'", lineno, 1);
      spec.label_column = trim(line.substr(6, comma - 6));
      spec.positive_class =
          trim(line.substr(line.find("positive=") + 9));
      saw_label = true;
      continue;
    }
    if (line.rfind("missing=", 0) == 0) {
      spec.missing_tokens.clear();
      std::string rest = line.substr(8);
      std::size_t start = 0;
      while (true) {
        std::size_t comma = rest.find(',', start);
        spec.missing_tokens.push_back(rest.substr(
            start, comma == std::string::npos ? std::string::npos
                                              : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      continue;
    }
    if (line.rfind("id_prefix=", 0) == 0) {
      spec.id_prefix = trim(line.substr(10));
      continue;
    }
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw parse_error("expected '<name>,<kind>'", lineno, 1);
    std::string name = trim(line.substr(0, comma));
    std::string kind = trim(line.substr(comma + 1));
    if (!valid_identifier(name))
      throw schema_error("attribute name '" + name +
                         "' is not a valid identifier");
    attr_kind k;
    if (kind == "numeric")
      k = attr_kind::numeric;
    else if (kind == "categorical")
      k = attr_kind::categorical;
    else
      throw parse_error("unknown column kind '" + kind + "'", lineno, 1);
    spec.columns.push_back({name, k});
  }
  if (!saw_label) throw schema_error("schema declares no label column");
  std::set<std::string> seen;
  for (const auto& c : spec.columns)
    if (!seen.insert(c.name).second)
      throw schema_error("duplicate attribute name '" + c.name + "'");
  bool label_found = false;
  for (const auto& c : spec.columns)
    if (c.name == spec.label_column) {
      if (c.kind != attr_kind::categorical)
        throw schema_error("label column must be categorical");
      label_found = true;
    }
  if (!label_found)
    throw schema_error("label column '" + spec.label_column +
                       "' not among declared columns");
  return spec;
}

schema_spec schema_spec::load(const std::string& path) {
  return parse(read_file(path));
}

dataset::dataset(std::vector<attribute> features, std::vector<instance> rows,
                 std::vector<std::string> labels, std::string label_column,
                 std::string positive_class, std::string negative_class,
                 std::string id_prefix)
    : features_(std::move(features)),
      rows_(std::move(rows)),
      labels_(std::move(labels)),
      label_column_(std::move(label_column)),
      positive_class_(std::move(positive_class)),
      negative_class_(std::move(negative_class)),
      id_prefix_(std::move(id_prefix)) {}

int dataset::feature_index(const std::string& name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name == name) return static_cast<int>(i);
  return -1;
}

dataset dataset::subset(const std::vector<std::size_t>& indices) const {
  std::vector<instance> rows;
  std::vector<std::string> labels;
  rows.reserve(indices.size());
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    rows.push_back(rows_[i]);
    labels.push_back(labels_[i]);
  }
  return dataset(features_, std::move(rows), std::move(labels), label_column_,
                 positive_class_, negative_class_, id_prefix_);
}

int dataset::scale_digits(int floor) const {
  int d = floor;
  for (const auto& row : rows_)
    for (const auto& v : row.values)
      if (v.is_num()) d = std::max(d, v.num_val().min_digits());
  return d;
}

dataset load_csv_text(const std::string& text, const schema_spec& spec) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw parse_error("empty CSV: no header", 1, 1);
  std::vector<std::string> header = split_csv_line(line, 1);
  for (auto& h : header) h = trim(h);

  std::map<std::string, std::size_t> declared;
  for (std::size_t i = 0; i < spec.columns.size(); ++i)
    declared[spec.columns[i].name] = i;
  for (const auto& h : header)
    if (!declared.count(h))
      throw schema_error("CSV column '" + h + "' not declared in schema");
  if (header.size() != spec.columns.size())
    throw schema_error("CSV header has " + std::to_string(header.size()) +
                       " columns, schema declares " +
                       std::to_string(spec.columns.size()));

  // Column order follows the schema; the header may permute it.
  std::vector<std::size_t> csv_to_schema(header.size());
  for (std::size_t i = 0; i < header.size(); ++i)
    csv_to_schema[i] = declared[header[i]];

  std::vector<attribute> features;
  std::vector<int> schema_to_feature(spec.columns.size(), -1);
  int label_schema_idx = -1;
  for (std::size_t i = 0; i < spec.columns.size(); ++i) {
    if (spec.columns[i].name == spec.label_column) {
      label_schema_idx = static_cast<int>(i);
    } else {
      schema_to_feature[i] = static_cast<int>(features.size());
      features.push_back(spec.columns[i]);
    }
  }

  auto is_missing_token = [&](const std::string& s) {
    return std::find(spec.missing_tokens.begin(), spec.missing_tokens.end(),
                     s) != spec.missing_tokens.end();
  };

  std::vector<instance> rows;
  std::vector<std::string> labels;
  int lineno = 1;
  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv_line(line, lineno);
    if (fields.size() != header.size())
      throw parse_error("row has " + std::to_string(fields.size()) +
                            " fields, expected " +
                            std::to_string(header.size()),
                        lineno, 1);
    instance row;
    row.id = spec.id_prefix + std::to_string(row_index);
    row.values.resize(features.size());
    std::string label;
    bool label_set = false;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::size_t si = csv_to_schema[c];
      std::string field = trim(fields[c]);
      if (static_cast<int>(si) == label_schema_idx) {
        if (is_missing_token(field))
          throw parse_error("missing label value", lineno,
                            static_cast<int>(c) + 1);
        label = field;
        label_set = true;
        continue;
      }
      value v;
      if (is_missing_token(field)) {
        v = value::missing();
      } else if (spec.columns[si].kind == attr_kind::numeric) {
        decimal d;
        v = decimal::try_parse(field, d) ? value::num(d) : value::missing();
      } else {
        v = value::cat(field);
      }
      row.values[schema_to_feature[si]] = v;
    }
    if (!label_set) throw parse_error("row lacks label column", lineno, 1);
    rows.push_back(std::move(row));
    labels.push_back(std::move(label));
    ++row_index;
  }

  std::string negative;
  if (!rows.empty()) {
    std::set<std::string> distinct(labels.begin(), labels.end());
    if (distinct.size() != 2)
      throw arity_error("label column has " +
                        std::to_string(distinct.size()) +
                        " distinct values, expected 2");
    if (!distinct.count(spec.positive_class))
      throw arity_error("positive class '" + spec.positive_class +
                        "' not observed in label column");
    for (const auto& v : distinct)
      if (v != spec.positive_class) negative = v;
  }
  return dataset(std::move(features), std::move(rows), std::move(labels),
                 spec.label_column, spec.positive_class, negative,
                 spec.id_prefix);
}

dataset load_csv(const std::string& path, const schema_spec& spec) {
  return load_csv_text(read_file(path), spec);
}

namespace {

// Lower of the two middle values for even counts.
decimal lower_median(std::vector<decimal> vals) {
  std::sort(vals.begin(), vals.end());
  return vals[(vals.size() - 1) / 2];
}

// Lexicographically smallest among the most frequent.
std::string smallest_mode(const std::vector<std::string>& vals) {
  std::map<std::string, std::size_t> counts;
  for (const auto& v : vals) ++counts[v];
  std::size_t best = 0;
  std::string mode;
  for (const auto& [v, n] : counts)
    if (n > best) {
      best = n;
      mode = v;
    }
  return mode;
}

}  // namespace

dataset preprocess(const dataset& ds, impute_policy policy) {
  const auto& feats = ds.features();
  if (policy == impute_policy::drop_rows) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      bool complete = true;
      for (const auto& v : ds.row(i).values)
        if (v.is_missing()) complete = false;
      if (complete) keep.push_back(i);
    }
    return ds.subset(keep);
  }

  std::vector<value> fill(feats.size());
  for (std::size_t f = 0; f < feats.size(); ++f) {
    bool any_missing = false;
    std::vector<decimal> nums;
    std::vector<std::string> cats;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const value& v = ds.row(i).values[f];
      if (v.is_missing())
        any_missing = true;
      else if (v.is_num())
        nums.push_back(v.num_val());
      else
        cats.push_back(v.cat_val());
    }
    if (!any_missing) continue;
    if (feats[f].kind == attr_kind::numeric) {
      if (nums.empty())
        throw unusable_column_error("column '" + feats[f].name +
                                    "' is entirely missing");
      fill[f] = value::num(lower_median(std::move(nums)));
    } else {
      if (cats.empty())
        throw unusable_column_error("column '" + feats[f].name +
                                    "' is entirely missing");
      fill[f] = value::cat(smallest_mode(cats));
    }
  }

  std::vector<instance> rows;
  std::vector<std::string> labels;
  rows.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    instance row = ds.row(i);
    for (std::size_t f = 0; f < feats.size(); ++f)
      if (row.values[f].is_missing()) row.values[f] = fill[f];
    rows.push_back(std::move(row));
    labels.push_back(ds.label(i));
  }
  return dataset(feats, std::move(rows), std::move(labels), ds.label_column(),
                 ds.positive_class(), ds.negative_class(), ds.id_prefix());
}

std::pair<dataset, dataset> stratified_split(const dataset& ds,
                                             double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw contract_error("test_fraction must lie in (0,1)");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < ds.size(); ++i)
    (ds.is_positive(i) ? pos : neg).push_back(i);
  if (pos.size() < 2 || neg.size() < 2)
    throw stratification_error("each class needs at least 2 instances");

  auto round_half_up = [](double x) {
    return static_cast<long>(std::floor(x + 0.5));
  };
  long target = round_half_up(static_cast<double>(ds.size()) * test_fraction);
  long n_pos = round_half_up(static_cast<double>(pos.size()) * test_fraction);
  long n_neg = round_half_up(static_cast<double>(neg.size()) * test_fraction);
  // Rounding surplus or deficit lands on the larger class.
  long diff = n_pos + n_neg - target;
  if (diff != 0) {
    bool adjust_pos = pos.size() > neg.size() ||
                      (pos.size() == neg.size());
    if (adjust_pos)
      n_pos -= diff;
    else
      n_neg -= diff;
  }
  n_pos = std::clamp<long>(n_pos, 0, static_cast<long>(pos.size()));
  n_neg = std::clamp<long>(n_neg, 0, static_cast<long>(neg.size()));

  rng gen(seed);
  gen.shuffle(pos);
  gen.shuffle(neg);
  std::vector<std::size_t> test_idx(pos.begin(), pos.begin() + n_pos);
  test_idx.insert(test_idx.end(), neg.begin(), neg.begin() + n_neg);
  std::sort(test_idx.begin(), test_idx.end());
  std::vector<std::size_t> train_idx;
  std::set<std::size_t> in_test(test_idx.begin(), test_idx.end());
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (!in_test.count(i)) train_idx.push_back(i);
  return {ds.subset(train_idx), ds.subset(test_idx)};
}

}  // namespace rulegate
