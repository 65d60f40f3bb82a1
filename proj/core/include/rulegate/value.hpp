#pragma once

#include <string>

#include "rulegate/decimal.hpp"
#include "rulegate/errors.hpp"

namespace rulegate {

enum class value_kind { num, cat, missing };

// A cell of a tabular dataset: exact decimal, category string, or missing.
class value {
 public:
  value() : kind_(value_kind::missing) {}

  static value num(decimal d) {
    value v;
    v.kind_ = value_kind::num;
    v.num_ = d;
    return v;
  }
  static value cat(std::string s) {
    value v;
    v.kind_ = value_kind::cat;
    v.cat_ = std::move(s);
    return v;
  }
  static value missing() { return value(); }

  value_kind kind() const { return kind_; }
  bool is_missing() const { return kind_ == value_kind::missing; }
  bool is_num() const { return kind_ == value_kind::num; }
  bool is_cat() const { return kind_ == value_kind::cat; }

  const decimal& num_val() const {
    if (!is_num()) throw contract_error("value: not numeric");
    return num_;
  }
  const std::string& cat_val() const {
    if (!is_cat()) throw contract_error("value: not categorical");
    return cat_;
  }

  // Exact equality; kinds never compare equal across each other.
  bool operator==(const value& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
      case value_kind::num: return num_ == o.num_;
      case value_kind::cat: return cat_ == o.cat_;
      case value_kind::missing: return true;
    }
    return false;
  }
  bool operator!=(const value& o) const { return !(*this == o); }

  std::string display() const {
    switch (kind_) {
      case value_kind::num: return num_.str();
      case value_kind::cat: return cat_;
      case value_kind::missing: return "?";
    }
    return "?";
  }

 private:
  value_kind kind_;
  decimal num_;
  std::string cat_;
};

}  // namespace rulegate
