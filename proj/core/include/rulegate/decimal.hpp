#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace rulegate {

// Exact base-10 number: mantissa * 10^-frac_digits, frac_digits >= 0.
// The written form is preserved ("60.0" keeps one fractional digit), so
// printing round-trips and conversion to scaled integers is lossless.
class decimal {
 public:
  decimal() = default;
  decimal(std::int64_t mantissa, int frac_digits);

  static decimal from_int(std::int64_t v) { return decimal(v, 0); }
  static bool try_parse(std::string_view text, decimal& out);
  static decimal parse(std::string_view text);  // throws parse_error

  std::int64_t mantissa() const { return mant_; }
  int frac_digits() const { return frac_; }

  // Smallest digit count that still represents the value exactly.
  int min_digits() const;

  // value * 10^d as an integer; throws scale_error when inexact or too large.
  std::int64_t scaled(int d) const;

  double to_double() const;
  std::string str() const;

  int compare(const decimal& o) const;
  bool operator==(const decimal& o) const { return compare(o) == 0; }
  bool operator!=(const decimal& o) const { return compare(o) != 0; }
  bool operator<(const decimal& o) const { return compare(o) < 0; }
  bool operator<=(const decimal& o) const { return compare(o) <= 0; }
  bool operator>(const decimal& o) const { return compare(o) > 0; }
  bool operator>=(const decimal& o) const { return compare(o) >= 0; }

 private:
  std::int64_t mant_ = 0;
  int frac_ = 0;
};

}  // namespace rulegate
