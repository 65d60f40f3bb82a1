#include <cmath>
#include <limits>

#include "rulegate/errors.hpp"
#include "rulegate/evaluation.hpp"

namespace rulegate {

metric_set metrics(const confusion_matrix& cm) {
  if (cm.total() <= 0) throw contract_error("empty confusion matrix");
  if (cm.tp < 0 || cm.fp < 0 || cm.fn < 0 || cm.tn < 0)
    throw contract_error("negative confusion matrix count");
  metric_set m;
  m.accuracy = static_cast<double>(cm.tp + cm.tn) /
               static_cast<double>(cm.total());
  m.precision = cm.tp + cm.fp > 0 ? static_cast<double>(cm.tp) /
                                        static_cast<double>(cm.tp + cm.fp)
                                  : 0.0;
  m.recall = cm.tp + cm.fn > 0 ? static_cast<double>(cm.tp) /
                                     static_cast<double>(cm.tp + cm.fn)
                               : 0.0;
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln_front);
  // symmetry keeps the continued fraction well conditioned
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int df) {
  if (df < 1) throw contract_error("degrees of freedom must be >= 1");
  if (std::isinf(t)) return 0.0;
  double x = static_cast<double>(df) / (static_cast<double>(df) + t * t);
  return reg_incomplete_beta(static_cast<double>(df) / 2.0, 0.5, x);
}

t_test_result paired_t_test(std::span<const double> a,
                            std::span<const double> b) {
  if (a.size() != b.size())
    throw contract_error("paired t-test needs equal-length samples");
  if (a.size() < 2)
    throw contract_error("paired t-test needs at least 2 pairs");
  std::size_t n = a.size();
  std::vector<double> d(n);
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = b[i] - a[i];
    if (d[i] != 0.0) all_zero = false;
  }
  if (all_zero) return {false, 0.0, 1.0};

  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    double inf = std::numeric_limits<double>::infinity();
    return {true, mean > 0.0 ? inf : -inf, 0.0};
  }
  double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  return {true, t, student_t_two_sided_p(t, static_cast<int>(n) - 1)};
}

}  // namespace rulegate
