#pragma once

#include <cstdint>
#include <vector>

#include "facetlab/corpus.hpp"
#include "facetlab/embedding.hpp"

namespace facetlab {

// Position-sensitive co-occurrence counts for relative offsets -1 and +1.
// N_r(w, v) = number of positions where v sits at offset r from focus w.
class CoocTable {
 public:
  static CoocTable count(const Corpus& corpus);

  int32_t vocab_size() const { return vocab_; }
  // r must be -1 or +1
  int64_t at(int32_t w, int r, int32_t v) const;
  int64_t focus_marginal(int32_t w, int r) const;     // N_r(w, .)
  int64_t neighbor_marginal(int r, int32_t v) const;  // N_r(., v)
  int64_t total(int r) const;                         // N_r

 private:
  int32_t vocab_ = 0;
  std::vector<int64_t> left_;   // [w*V + v] = N_{-1}(w, v)
  std::vector<int64_t> right_;  // [w*V + v] = N_{+1}(w, v)
  std::vector<int64_t> left_focus_, right_focus_;
  std::vector<int64_t> left_neighbor_, right_neighbor_;
  int64_t left_total_ = 0, right_total_ = 0;
};

// Positional PPMI vectors of width 2V: columns [0, V) are offset -1, columns
// [V, 2V) are offset +1. Each half is L2-normalized separately; an all-zero
// half stays zero. `raw` keeps the unnormalized PPMI values for inspection.
struct PpmiVectors {
  int32_t vocab = 0;
  std::vector<double> raw;
  std::vector<double> normalized;

  size_t dim() const { return 2 * static_cast<size_t>(vocab); }
  const double* row(int32_t w) const { return normalized.data() + w * dim(); }
  const double* raw_row(int32_t w) const { return raw.data() + w * dim(); }
};

PpmiVectors ppmi_transform(const CoocTable& counts);

// Count + transform + package rows as an EmbeddingSet (kind "ppmi",
// space "explicit").
EmbeddingSet train_ppmi(const Corpus& corpus);

}  // namespace facetlab
