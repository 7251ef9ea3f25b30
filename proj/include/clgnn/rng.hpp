#ifndef CLGNN_RNG_HPP_
#define CLGNN_RNG_HPP_

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace clgnn {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-stream derivation: one master seed fans out to
// independent streams keyed by small integers (trial index, purpose tag, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(master ^ (a * 0x9e3779b97f4a7c15ULL)) + b);
}

// mt19937_64 output is pinned by the standard; the <random> distributions are
// not, so every distribution here is hand-rolled for bit-stable results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n) by masked rejection (unbiased).
  int index(int n) {
    assert(n > 0);
    if (n == 1) return 0;
    const std::uint64_t limit = static_cast<std::uint64_t>(n);
    std::uint64_t mask = limit - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t r = engine_() & mask;
      if (r < limit) return static_cast<int>(r);
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; the spare is cached, so draws come in deterministic pairs.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // CDF inversion over a probability row; consumes exactly one uniform.
  int categorical(const double* probs, int count) {
    assert(count > 0);
    const double u = uniform();
    double acc = 0.0;
    for (int c = 0; c < count; ++c) {
      acc += probs[c];
      if (u < acc) return c;
    }
    return count - 1;  // guards against accumulated rounding
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
      std::swap(values[i], values[static_cast<size_t>(index(i + 1))]);
    }
  }

  // First k elements become a uniform sample without replacement.
  template <typename T>
  void partial_shuffle(std::vector<T>& values, int k) {
    const int n = static_cast<int>(values.size());
    assert(k <= n);
    for (int i = 0; i < k; ++i) {
      const int j = i + index(n - i);
      std::swap(values[static_cast<size_t>(i)], values[static_cast<size_t>(j)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace clgnn

#endif  // CLGNN_RNG_HPP_
