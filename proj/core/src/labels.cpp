#include "facetlab/labels.hpp"

#include "facetlab/util.hpp"

namespace facetlab {

Criterion parse_criterion(std::string_view name) {
  if (name == "nonconflation") return Criterion::kNonconflation;
  if (name == "sparseness") return Criterion::kSparseness;
  if (name == "ambiguity") return Criterion::kAmbiguity;
  if (name == "multifacet") return Criterion::kMultifacet;
  throw Error("unknown criterion: '" + std::string(name) +
              "' (expected nonconflation|sparseness|ambiguity|multifacet)");
}

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::kNonconflation: return "nonconflation";
    case Criterion::kSparseness: return "sparseness";
    case Criterion::kAmbiguity: return "ambiguity";
    case Criterion::kMultifacet: return "multifacet";
  }
  return "?";
}

namespace {

std::string idx(const char* stem, int i) {
  return std::string(stem) + std::to_string(i);
}

void push(const Vocabulary& vocab,
          std::vector<std::pair<std::string, int>>& out,
          const std::string& token, int label) {
  vocab.require(token);  // fail fast on vocabulary mismatch
  out.emplace_back(token, label);
}

}  // namespace

LabeledSplit label_words(Criterion c, const Vocabulary& vocab) {
  LabeledSplit s;
  switch (c) {
    case Criterion::kNonconflation:
      // w-words occur in all four a/b frames (+1); v-words and the frame
      // markers do not (-1). Held out: two of each middle-word class.
      for (int i = 0; i < 3; ++i) push(vocab, s.train, idx("w", i), 1);
      for (int i = 0; i < 3; ++i) push(vocab, s.train, idx("v", i), -1);
      push(vocab, s.train, "a", -1);
      push(vocab, s.train, "b", -1);
      for (int i = 3; i < 5; ++i) push(vocab, s.test, idx("w", i), 1);
      for (int i = 3; i < 5; ++i) push(vocab, s.test, idx("v", i), -1);
      break;
    case Criterion::kSparseness:
      // +1 = licensed in c_d frames (w fully, x through the rare sentences);
      // u appears only in a_b frames (-1). Test: every u (negative) and
      // every x (positive); the frequent words train the probe.
      for (int i = 0; i < 10; ++i) push(vocab, s.train, idx("w", i), 1);
      for (int i = 0; i < 10; ++i) push(vocab, s.train, idx("v", i), -1);
      for (const char* stem : {"a", "b", "c", "d"})
        for (int i = 0; i < 10; ++i) push(vocab, s.train, idx(stem, i), -1);
      for (int i = 0; i < 10; ++i) push(vocab, s.test, idx("x", i), 1);
      for (int i = 0; i < 10; ++i) push(vocab, s.test, idx("u", i), -1);
      break;
    case Criterion::kAmbiguity:
      // +1 = w-words (licensed in c_d frames). The five ambiguous words
      // w0..w4 are held out; everything else trains the probe.
      for (int i = 5; i < 50; ++i) push(vocab, s.train, idx("w", i), 1);
      for (int i = 0; i < 50; ++i) push(vocab, s.train, idx("v", i), -1);
      for (const char* stem : {"a", "b", "c", "d"})
        for (int i = 0; i < 10; ++i) push(vocab, s.train, idx(stem, i), -1);
      for (int i = 0; i < 5; ++i) push(vocab, s.test, idx("w", i), 1);
      break;
    case Criterion::kMultifacet:
      // Gender probe: train on nouns, test on adjectives. +1 = feminine.
      for (int i = 0; i < 5; ++i)
        push(vocab, s.train, "x_nf_" + std::to_string(i), 1);
      for (int i = 0; i < 5; ++i)
        push(vocab, s.train, "x_nm_" + std::to_string(i), -1);
      for (int i = 0; i < 5; ++i)
        push(vocab, s.test, "x_af_" + std::to_string(i), 1);
      for (int i = 0; i < 5; ++i)
        push(vocab, s.test, "x_am_" + std::to_string(i), -1);
      break;
  }
  return s;
}

MultifacetWords multifacet_words(const EmbeddingSet& e) {
  MultifacetWords w;
  w.gender_of_row.assign(e.tokens.size(), 0);
  w.category_of_row.assign(e.tokens.size(), -1);
  // category order mirrors the grammar: 0 nf, 1 af, 2 nm, 3 am
  const char* cats[4] = {"nf", "af", "nm", "am"};
  const int genders[4] = {1, 1, -1, -1};
  size_t rows[4][5];
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 5; ++i) {
      std::string token =
          std::string("x_") + cats[c] + "_" + std::to_string(i);
      auto row = e.find(token);
      if (!row)
        throw Error("multifacet_words: embedding lacks '" + token +
                    "' (vocabulary mismatch with criterion)");
      rows[c][i] = *row;
      w.content.push_back(*row);
      w.gender_of_row[*row] = genders[c];
      w.category_of_row[*row] = c;
      if (c == 1 || c == 3) w.adjectives.push_back(*row);
    }
  }
  // Four analogy directions: adjective gender swap through nouns and noun
  // gender swap through adjectives, e.g. af - nf + nm ~ am.
  struct Dir {
    int a, b, c, target;
  };
  const Dir dirs[4] = {{1, 0, 2, 3}, {3, 2, 0, 1}, {0, 1, 3, 2}, {2, 3, 1, 0}};
  for (const Dir& d : dirs)
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k)
          w.triples.push_back(
              {rows[d.a][i], rows[d.b][j], rows[d.c][k], d.target});
  return w;
}

}  // namespace facetlab
