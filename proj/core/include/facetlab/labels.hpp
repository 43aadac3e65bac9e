#pragma once

#include <string_view>
#include <vector>

#include "facetlab/corpus.hpp"
#include "facetlab/eval.hpp"
#include "facetlab/probe.hpp"

namespace facetlab {

enum class Criterion { kNonconflation, kSparseness, kAmbiguity, kMultifacet };

Criterion parse_criterion(std::string_view name);
std::string_view to_string(Criterion c);

// Fixed probe split for a criterion. Positive class = words licensed by the
// distinguished frame; the test set holds the words whose treatment the
// criterion is about. Throws if the vocabulary lacks a required word.
LabeledSplit label_words(Criterion c, const Vocabulary& vocab);

// Word sets for the multifacet similarity/analogy baselines, resolved
// against an embedding's rows.
struct MultifacetWords {
  std::vector<size_t> content;        // all 20 content words
  std::vector<size_t> adjectives;     // the 10 x_af_* / x_am_* rows
  std::vector<int> gender_of_row;     // +1 F / -1 M, content rows only
  std::vector<int> category_of_row;   // 0 nf, 1 af, 2 nm, 3 am
  std::vector<AnalogyTriple> triples; // all 500 offset analogies
};
MultifacetWords multifacet_words(const EmbeddingSet& e);

}  // namespace facetlab
