#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace facetlab {

// One RNG engine everywhere. Draws go through the helpers below instead of
// std::uniform_*_distribution, whose algorithms differ between standard
// library implementations; this keeps corpora and models bit-reproducible.
using RngStream = std::mt19937_64;

// Uniform in [0, 1): top 53 bits of the engine output.
inline double uniform_double(RngStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform index in [0, n) (Lemire's multiply-shift with rejection).
uint64_t uniform_index(RngStream& rng, uint64_t n);

uint64_t splitmix64(uint64_t x);

// Stable seed for one unit of work. The canonical string form and hash are
// frozen by a golden test; changing either invalidates recorded runs.
uint64_t derive_seed(uint64_t master_seed, std::string_view experiment,
                     std::string_view unit, uint64_t trial, double alpha);

// Walker/Vose alias method for O(1) draws from a fixed discrete distribution.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights);

  uint32_t sample(RngStream& rng) const;
  size_t size() const { return prob_.size(); }
  // Normalized probability of index i (for diagnostics/tests).
  const std::vector<double>& probabilities() const { return norm_; }

 private:
  std::vector<double> prob_;     // acceptance threshold per bucket
  std::vector<uint32_t> alias_;  // fallback index per bucket
  std::vector<double> norm_;
};

}  // namespace facetlab
