#include "rulegate/decimal.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "rulegate/errors.hpp"

namespace rulegate {

namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

// 10^e, or 0 if it would overflow int64.
std::int64_t pow10_or_zero(int e) {
  std::int64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > kInt64Max / 10) return 0;
    v *= 10;
  }
  return v;
}

}  // namespace

decimal::decimal(std::int64_t mantissa, int frac_digits)
    : mant_(mantissa), frac_(frac_digits) {
  if (frac_digits < 0) throw contract_error("decimal: negative digit count");
}

bool decimal::try_parse(std::string_view text, decimal& out) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  std::int64_t mant = 0;
  int frac = 0;
  bool any_digit = false;
  bool seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) return false;
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    if (mant > (kInt64Max - 9) / 10) return false;
    mant = mant * 10 + (c - '0');
    if (seen_dot) ++frac;
    any_digit = true;
  }
  if (!any_digit) return false;
  out = decimal(neg ? -mant : mant, frac);
  return true;
}

decimal decimal::parse(std::string_view text) {
  decimal d;
  if (!try_parse(text, d))
    throw parse_error("not a decimal number: '" + std::string(text) + "'");
  return d;
}

int decimal::min_digits() const {
  std::int64_t m = mant_;
  int f = frac_;
  while (f > 0 && m % 10 == 0) {
    m /= 10;
    --f;
  }
  return f;
}

std::int64_t decimal::scaled(int d) const {
  if (d < 0) throw contract_error("decimal: negative scale");
  if (d >= frac_) {
    std::int64_t p = pow10_or_zero(d - frac_);
    if (p == 0 || (mant_ != 0 && std::abs(mant_) > kInt64Max / p))
      throw scale_error("value " + str() + " overflows at scale " +
                        std::to_string(d));
    return mant_ * p;
  }
  std::int64_t p = pow10_or_zero(frac_ - d);
  if (p == 0 || mant_ % p != 0)
    throw scale_error("value " + str() + " is not exact at scale " +
                      std::to_string(d));
  return mant_ / p;
}

double decimal::to_double() const {
  return static_cast<double>(mant_) / std::pow(10.0, frac_);
}

std::string decimal::str() const {
  std::string digits = std::to_string(mant_ < 0 ? -mant_ : mant_);
  if (static_cast<int>(digits.size()) <= frac_)
    digits.insert(0, frac_ + 1 - digits.size(), '0');
  std::string out;
  if (mant_ < 0) out += '-';
  out += digits.substr(0, digits.size() - frac_);
  if (frac_ > 0) {
    out += '.';
    out += digits.substr(digits.size() - frac_);
  }
  return out;
}

int decimal::compare(const decimal& o) const {
  // Align both mantissas to the larger digit count; 128-bit holds any
  // int64 mantissa shifted by <= 18 further digits.
  int f = frac_ > o.frac_ ? frac_ : o.frac_;
  __int128 a = mant_;
  for (int i = frac_; i < f; ++i) a *= 10;
  __int128 b = o.mant_;
  for (int i = o.frac_; i < f; ++i) b *= 10;
  if (a < b) return -1;
  if (a > b) return 1;
  return 0;
}

}  // namespace rulegate
