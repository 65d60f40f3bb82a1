#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rulegate {

// mt19937_64 with hand-rolled draw helpers. The standard distributions are
// implementation-defined, so everything that must reproduce bit-for-bit
// across toolchains goes through these.
class rng {
 public:
  explicit rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  // [0, 1) with 53 random bits.
  double unit() { return (eng_() >> 11) * 0x1.0p-53; }

  double normal(double mu, double sigma) {
    double u1 = unit();
    double u2 = unit();
    while (u1 <= 0.0) u1 = unit();
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    return mu + sigma * z;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rulegate
