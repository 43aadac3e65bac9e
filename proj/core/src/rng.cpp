#include "facetlab/rng.hpp"

#include <cmath>
#include <cstdio>

#include "facetlab/util.hpp"

namespace facetlab {

uint64_t uniform_index(RngStream& rng, uint64_t n) {
  if (n == 0) throw Error("uniform_index: n must be positive");
  // Lemire 2019: multiply a 64-bit draw by n, keep the high word, reject the
  // small biased region. Expected iterations ~1 for any realistic n.
  for (;;) {
    uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    uint64_t lo = static_cast<uint64_t>(m);
    if (lo >= n) return static_cast<uint64_t>(m >> 64);
    uint64_t threshold = (0 - n) % n;
    if (lo >= threshold) return static_cast<uint64_t>(m >> 64);
  }
}

uint64_t splitmix64(uint64_t x) {
  uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

static uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t derive_seed(uint64_t master_seed, std::string_view experiment,
                     std::string_view unit, uint64_t trial, double alpha) {
  // alpha enters as an exact integer number of thousandths so that textually
  // equal grid values always map to the same seed.
  long long milli = std::llround(alpha * 1000.0);
  char buf[256];
  int n = std::snprintf(buf, sizeof(buf), "m=%llu|e=%.*s|u=%.*s|t=%llu|a=%lld",
                        static_cast<unsigned long long>(master_seed),
                        static_cast<int>(experiment.size()), experiment.data(),
                        static_cast<int>(unit.size()), unit.data(),
                        static_cast<unsigned long long>(trial), milli);
  if (n < 0 || n >= static_cast<int>(sizeof(buf)))
    throw Error("derive_seed: key too long");
  return splitmix64(fnv1a64(std::string_view(buf, static_cast<size_t>(n))));
}

AliasTable::AliasTable(const std::vector<double>& weights) {
  size_t n = weights.size();
  if (n == 0) throw Error("AliasTable: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error("AliasTable: weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0.0) throw Error("AliasTable: total weight must be positive");

  norm_.resize(n);
  for (size_t i = 0; i < n; ++i) norm_[i] = weights[i] / total;

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    scaled[i] = norm_[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    uint32_t s = small.back(), l = large.back();
    small.pop_back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (uint32_t i : large) prob_[i] = 1.0;
  for (uint32_t i : small) prob_[i] = 1.0;  // numerical leftovers
}

uint32_t AliasTable::sample(RngStream& rng) const {
  uint64_t i = uniform_index(rng, prob_.size());
  double u = uniform_double(rng);
  return u < prob_[i] ? static_cast<uint32_t>(i) : alias_[i];
}

}  // namespace facetlab
