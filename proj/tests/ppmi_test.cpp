#include "facetlab/ppmi.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "facetlab/corpus.hpp"
#include "facetlab/grammar.hpp"
#include "facetlab/rng.hpp"
#include "facetlab/util.hpp"
#include "oracles.hpp"

using namespace facetlab;

TEST_CASE("cooccurrence counts on a tiny corpus") {
  // sentences: "x y x", "y x"
  Corpus c = corpus_from_tokens({{"x", "y", "x"}, {"y", "x"}});
  int32_t x = c.vocab.require("x"), y = c.vocab.require("y");
  CoocTable t = CoocTable::count(c);
  CHECK(t.vocab_size() == 2);
  // left neighbors: (y|x? ...) enumerate: "x y x": pairs (y,-1,x),(x,-1,y);
  // "y x": (x,-1,y)
  CHECK(t.at(y, -1, x) == 1);
  CHECK(t.at(x, -1, y) == 2);
  CHECK(t.at(x, -1, x) == 0);
  // right neighbors mirror the left table
  CHECK(t.at(x, +1, y) == 1);
  CHECK(t.at(y, +1, x) == 2);
  CHECK(t.total(-1) == 3);
  CHECK(t.total(+1) == 3);
  CHECK(t.focus_marginal(x, -1) == 2);
  CHECK(t.neighbor_marginal(-1, y) == 2);
  CHECK(t.focus_marginal(y, +1) == 2);
  CHECK_THROWS_AS(t.at(x, 0, y), Error);
}

TEST_CASE("ppmi zeros, formula, and per-half normalization") {
  Corpus c = corpus_from_tokens({{"a", "b"}, {"a", "b"}, {"a", "c"}});
  int32_t a = c.vocab.require("a"), b = c.vocab.require("b"),
          cc = c.vocab.require("c");
  CoocTable t = CoocTable::count(c);
  PpmiVectors p = ppmi_transform(t);
  const int32_t V = 3;
  REQUIRE(p.vocab == V);
  REQUIRE(p.normalized.size() == static_cast<size_t>(V) * 2 * V);

  // right half of "a": N_{+1}(a,b)=2, N_{+1}(a,c)=1, totals N_{+1}=3,
  // focus(a)=3, neighbor(b)=2 -> pmi(a,b)=log(2*3/(3*2))=0 -> clipped to 0.
  CHECK(p.raw_row(a)[V + b] == 0.0);
  // pmi(a,c)=log(1*3/(3*1))=0 as well: every right event has focus a.
  CHECK(p.raw_row(a)[V + cc] == 0.0);
  // left half of "b": N_{-1}(b,a)=2, focus(b)=2, neighbor(a)=3, total=3
  // pmi = log(2*3/(2*3)) = 0
  CHECK(p.raw_row(b)[a] == 0.0);

  // "a" never has a left neighbor: its left half is all zero and must stay so
  for (int32_t v = 0; v < V; ++v) CHECK(p.row(a)[v] == 0.0);
}

TEST_CASE("ppmi matches the brute-force oracle on sampled corpora") {
  // 100 corpora across all four grammars; tolerance 1e-12 per entry
  int corpus_id = 0;
  for (int rep = 0; rep < 25; ++rep) {
    for (int which = 0; which < 4; ++which) {
      RngStream rng(40000 + corpus_id);
      Pcfg g;
      switch (which) {
        case 0: g = build_conflation_grammar(); break;
        case 1: g = build_sparseness_grammar().pcfg; break;
        case 2:
          g = build_ambiguity_grammar(
              AmbiguityParams::from_alpha(1.0 + 0.1 * (corpus_id % 11)));
          break;
        default: g = build_multifacet_grammar(sample_mu(rng)); break;
      }
      Corpus c = generate_corpus(g, 400, rng);
      PpmiVectors p = ppmi_transform(CoocTable::count(c));
      std::vector<double> want = oracles::brute_ppmi(c);
      REQUIRE(p.normalized.size() == want.size());
      double worst = 0.0;
      for (size_t i = 0; i < want.size(); ++i)
        worst = std::max(worst, std::fabs(p.normalized[i] - want[i]));
      INFO("corpus ", corpus_id, " worst |delta| = ", worst);
      CHECK(worst <= 1e-12);
      ++corpus_id;
    }
  }
}

TEST_CASE("ppmi rows are unit length per half (or zero)") {
  RngStream rng(77);
  Corpus c = generate_corpus(build_conflation_grammar(), 3000, rng);
  PpmiVectors p = ppmi_transform(CoocTable::count(c));
  const int32_t V = p.vocab;
  for (int32_t w = 0; w < V; ++w) {
    for (int half = 0; half < 2; ++half) {
      double ss = 0.0;
      for (int32_t v = 0; v < V; ++v) {
        double x = p.row(w)[half * V + v];
        CHECK(x >= 0.0);
        ss += x * x;
      }
      if (ss > 0.0) CHECK(ss == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("train_ppmi packages rows as an embedding set") {
  RngStream rng(78);
  Corpus c = generate_corpus(build_conflation_grammar(), 2000, rng);
  EmbeddingSet e = train_ppmi(c);
  CHECK(e.kind == "ppmi");
  CHECK(e.space == "explicit");
  CHECK(e.dim == 2 * c.vocab.size());
  CHECK(e.tokens == c.vocab.tokens());
  PpmiVectors p = ppmi_transform(CoocTable::count(c));
  for (int32_t w = 0; w < c.vocab.size(); ++w)
    for (size_t j = 0; j < e.dim; ++j)
      CHECK(e.row(w)[j] == p.row(w)[j]);
}
