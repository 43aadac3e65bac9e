#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "facetlab/grammar.hpp"
#include "facetlab/rng.hpp"

namespace facetlab {

// Token ids are assigned in first-occurrence order over the corpus, so a
// corpus built twice from the same sentence stream gets identical ids.
class Vocabulary {
 public:
  int32_t intern(std::string_view token);
  std::optional<int32_t> find(std::string_view token) const;
  int32_t require(std::string_view token) const;  // throws if absent
  const std::string& token(int32_t id) const { return tokens_.at(id); }
  int64_t count(int32_t id) const { return counts_.at(id); }
  void add_count(int32_t id, int64_t n) { counts_.at(id) += n; }
  int32_t size() const { return static_cast<int32_t>(tokens_.size()); }
  int64_t total_tokens() const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<int64_t> counts_;
  std::unordered_map<std::string, int32_t> index_;
};

struct Corpus {
  Vocabulary vocab;
  std::vector<std::vector<int32_t>> sentences;

  int64_t token_count() const;
  std::vector<std::string> sentence_tokens(size_t i) const;
};

// Draw n sentences from the grammar (one RNG stream, leftmost expansion).
Corpus generate_corpus(const Pcfg& g, size_t n, RngStream& rng);

Corpus corpus_from_tokens(const std::vector<std::vector<std::string>>& sents);

// Append `extra` sentences to a copy of `base`, then Fisher-Yates shuffle the
// whole sentence list. Vocabulary ids are rebuilt in first-occurrence order
// over the shuffled corpus.
Corpus merge_and_shuffle(const Corpus& base,
                         const std::vector<std::vector<std::string>>& extra,
                         RngStream& rng);

// One sentence per line, tokens separated by single spaces.
void save_corpus(const Corpus& corpus, const std::string& path);
// Blank lines are skipped with a warning (collected into *warnings when
// given); a line with consecutive/leading/trailing spaces is an error.
Corpus load_corpus(const std::string& path,
                   std::vector<std::string>* warnings = nullptr);

}  // namespace facetlab
