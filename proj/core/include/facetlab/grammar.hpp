#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facetlab/rng.hpp"

namespace facetlab {

// Rule probability. Keeps the source spelling ("1/4", "0.05", ...) so a
// grammar can be serialized back without losing the exact text, while the
// numeric value is what sampling and validation use.
struct Prob {
  double value = 0.0;
  std::string repr;

  static Prob rational(int64_t num, int64_t den);
  static Prob decimal(double v);
  static Prob parse(std::string_view text);

  friend bool operator==(const Prob& a, const Prob& b) {
    return a.value == b.value;
  }
};

struct Rule {
  int32_t lhs = -1;
  std::vector<int32_t> rhs;  // non-empty; epsilon productions are rejected
  Prob prob;
};

// A probabilistic context-free grammar over an interned symbol table.
// Symbols that appear on some left-hand side are nonterminals; the rest are
// terminals. Mutation happens through add_rule/set_start; finalize() freezes
// the grammar and builds the per-nonterminal sampling tables.
class Pcfg {
 public:
  int32_t intern(std::string_view name);
  std::optional<int32_t> find(std::string_view name) const;
  void add_rule(std::string_view lhs, const std::vector<std::string>& rhs,
                Prob prob);
  void set_start(std::string_view name);
  void finalize();

  bool finalized() const { return finalized_; }
  int32_t start() const { return start_; }
  size_t num_symbols() const { return names_.size(); }
  const std::string& name(int32_t id) const { return names_.at(id); }
  bool is_terminal(int32_t id) const { return !is_lhs_.at(id); }
  const std::vector<Rule>& rules() const { return rules_; }
  // Indices into rules() for one nonterminal, in insertion order.
  const std::vector<int32_t>& rules_for(int32_t lhs) const;
  std::vector<int32_t> terminals() const;

  friend bool operator==(const Pcfg& a, const Pcfg& b);

 private:
  std::vector<std::string> names_;
  std::vector<char> is_lhs_;
  std::vector<std::vector<int32_t>> rule_index_;  // per-symbol rule list
  std::vector<Rule> rules_;
  int32_t start_ = -1;
  bool finalized_ = false;
  // cumulative probability per nonterminal's rule list, for sampling
  std::vector<std::vector<double>> cumulative_;

  friend std::vector<int32_t> sample_sentence(const Pcfg&, RngStream&);
};

// Structural checks: rule probabilities per nonterminal sum to 1 (1e-9),
// probabilities lie in (0, 1], no recursion, every symbol reachable from the
// start, start is a nonterminal. Returns human-readable violations; empty
// means valid.
std::vector<std::string> validate(const Pcfg& g);

// Text format, one rule per line:   LHS -> SYM SYM ... : PROB
// PROB is "p/q" or a decimal; '#' starts a comment; blank lines are skipped.
// The start symbol is the LHS of the first rule. Throws Error with all
// validation violations if the parsed grammar is invalid.
Pcfg parse_grammar(std::string_view text);
std::string serialize_grammar(const Pcfg& g);

// Ancestral sampling, expanding the leftmost nonterminal first; one RNG draw
// per expansion. Requires a finalized, valid grammar.
std::vector<int32_t> sample_sentence(const Pcfg& g, RngStream& rng);
std::vector<std::string> to_tokens(const Pcfg& g,
                                   const std::vector<int32_t>& ids);

// ---- Built-in criterion grammars ---------------------------------------

// Nonconflation: a/b contexts around v-words (one context pattern) and
// w-words (all four patterns); v and w distributions share context marginals.
Pcfg build_conflation_grammar();

// Sparseness: a_i V b_i and c_i W d_i frames, plus one hand-written rare
// sentence per index: "a_i u_i b_i" and "c_i x_i d_i". The rare sentences are
// merged into sampled corpora once each, not drawn from the grammar.
struct SparsenessGrammar {
  Pcfg pcfg;
  std::vector<std::vector<std::string>> rare_sentences;
};
SparsenessGrammar build_sparseness_grammar();

// Ambiguity: w0..w4 appear mostly in a_b frames and with small probability
// beta = 2^-alpha in c_d frames; the probe asks whether a model still ranks
// them with the c_d class. alpha = 0 means beta = 1.
struct AmbiguityParams {
  double alpha = 1.0;
  double beta = 0.5;
  static AmbiguityParams from_alpha(double alpha);
};
Pcfg build_ambiguity_grammar(const AmbiguityParams& params);

// Multifacetedness: noun/adjective stems carry a paradigm marker u_k drawn by
// mu and a gender marker f/m; each content word surfaces with its paradigm
// marker half the time and the gender marker the other half.
struct MuMapping {
  // paradigm[c*5+i] in [0,5): u-index for category c in {nf,af,nm,am} and
  // stem i in [0,5). Collisions across entries are allowed.
  std::array<int, 20> paradigm{};

  static constexpr std::array<const char*, 4> kCategories = {"nf", "af", "nm",
                                                             "am"};
  int at(int category, int stem) const { return paradigm[category * 5 + stem]; }
};
MuMapping sample_mu(RngStream& rng);
Pcfg build_multifacet_grammar(const MuMapping& mu);

}  // namespace facetlab
