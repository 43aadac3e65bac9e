#pragma once

#include <cstddef>
#include <vector>

#include "facetlab/embedding.hpp"

namespace facetlab {

struct EvalResult {
  size_t correct = 0;
  size_t total = 0;    // evaluated queries (skipped not included)
  size_t skipped = 0;  // zero-norm queries
  double accuracy() const {
    return total ? static_cast<double>(correct) / static_cast<double>(total)
                 : 0.0;
  }
};

// 1-nearest-neighbor label agreement: rank `candidates` by cosine to each
// query (the query itself excluded), correct when the top candidate carries
// the query's label. label_of_row is indexed by embedding row. Zero-norm
// candidates are ignored; zero-norm queries are skipped. Cosine ties break
// toward the lower row index.
EvalResult nn_label_eval(const EmbeddingSet& e,
                         const std::vector<size_t>& queries,
                         const std::vector<size_t>& candidates,
                         const std::vector<int>& label_of_row);

// a - b + c should land near a word of class `target_class`.
struct AnalogyTriple {
  size_t a = 0, b = 0, c = 0;
  int target_class = 0;
};

// Offset-vector analogy: rank candidates (minus the three operands) by
// cosine to row(a) - row(b) + row(c); correct when the top candidate's class
// equals target_class.
EvalResult analogy_eval(const EmbeddingSet& e,
                        const std::vector<AnalogyTriple>& triples,
                        const std::vector<size_t>& candidates,
                        const std::vector<int>& class_of_row);

}  // namespace facetlab
