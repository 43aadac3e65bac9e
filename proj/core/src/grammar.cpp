#include "facetlab/grammar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "facetlab/util.hpp"

namespace facetlab {

Prob Prob::rational(int64_t num, int64_t den) {
  if (den <= 0) throw Error("Prob: denominator must be positive");
  Prob p;
  p.value = static_cast<double>(num) / static_cast<double>(den);
  p.repr = std::to_string(num) + "/" + std::to_string(den);
  return p;
}

Prob Prob::decimal(double v) {
  Prob p;
  p.value = v;
  p.repr = format_double(v);
  return p;
}

Prob Prob::parse(std::string_view text) {
  size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    int64_t num = parse_int(text.substr(0, slash), "probability numerator");
    int64_t den = parse_int(text.substr(slash + 1), "probability denominator");
    return rational(num, den);
  }
  Prob p;
  p.value = parse_double(text, "probability");
  p.repr = std::string(text);
  return p;
}

int32_t Pcfg::intern(std::string_view name) {
  if (name.empty()) throw Error("Pcfg: empty symbol name");
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int32_t>(i);
  names_.emplace_back(name);
  is_lhs_.push_back(0);
  rule_index_.emplace_back();
  return static_cast<int32_t>(names_.size() - 1);
}

std::optional<int32_t> Pcfg::find(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int32_t>(i);
  return std::nullopt;
}

void Pcfg::add_rule(std::string_view lhs, const std::vector<std::string>& rhs,
                    Prob prob) {
  if (finalized_) throw Error("Pcfg: cannot add rules after finalize()");
  if (rhs.empty()) throw Error("Pcfg: empty right-hand side for " +
                               std::string(lhs));
  Rule r;
  r.lhs = intern(lhs);
  for (const auto& s : rhs) r.rhs.push_back(intern(s));
  r.prob = std::move(prob);
  is_lhs_[r.lhs] = 1;
  rule_index_[r.lhs].push_back(static_cast<int32_t>(rules_.size()));
  rules_.push_back(std::move(r));
  if (start_ < 0) start_ = rules_.front().lhs;
}

void Pcfg::set_start(std::string_view name) { start_ = intern(name); }

void Pcfg::finalize() {
  cumulative_.assign(names_.size(), {});
  for (size_t s = 0; s < names_.size(); ++s) {
    double acc = 0.0;
    cumulative_[s].reserve(rule_index_[s].size());
    for (int32_t ri : rule_index_[s]) {
      acc += rules_[ri].prob.value;
      cumulative_[s].push_back(acc);
    }
  }
  finalized_ = true;
}

const std::vector<int32_t>& Pcfg::rules_for(int32_t lhs) const {
  return rule_index_.at(lhs);
}

std::vector<int32_t> Pcfg::terminals() const {
  std::vector<int32_t> out;
  for (size_t i = 0; i < names_.size(); ++i)
    if (!is_lhs_[i]) out.push_back(static_cast<int32_t>(i));
  return out;
}

bool operator==(const Pcfg& a, const Pcfg& b) {
  if (a.names_ != b.names_ || a.start_ != b.start_) return false;
  if (a.rules_.size() != b.rules_.size()) return false;
  for (size_t i = 0; i < a.rules_.size(); ++i) {
    const Rule& x = a.rules_[i];
    const Rule& y = b.rules_[i];
    if (x.lhs != y.lhs || x.rhs != y.rhs || !(x.prob == y.prob)) return false;
  }
  return true;
}

static std::string rule_text(const Pcfg& g, const Rule& r) {
  std::string s = g.name(r.lhs) + " ->";
  for (int32_t id : r.rhs) s += " " + g.name(id);
  return s;
}

std::vector<std::string> validate(const Pcfg& g) {
  std::vector<std::string> out;
  if (g.rules().empty()) {
    out.push_back("no rules");
    return out;
  }
  if (g.start() < 0) out.push_back("no start symbol");

  for (const Rule& r : g.rules()) {
    if (!(r.prob.value > 0.0) || r.prob.value > 1.0 + 1e-12 ||
        !std::isfinite(r.prob.value))
      out.push_back("rule '" + rule_text(g, r) +
                    "' has probability outside (0,1]: " +
                    format_double(r.prob.value));
  }

  int32_t n = static_cast<int32_t>(g.num_symbols());
  for (int32_t s = 0; s < n; ++s) {
    if (g.is_terminal(s)) continue;
    double sum = 0.0;
    for (int32_t ri : g.rules_for(s)) sum += g.rules()[ri].prob.value;
    if (std::fabs(sum - 1.0) > 1e-9)
      out.push_back(g.name(s) + " sums to " + format_double(sum));
  }

  if (g.start() >= 0 && g.is_terminal(g.start()))
    out.push_back("start symbol " + g.name(g.start()) + " is a terminal");

  // Cycle detection over the nonterminal expansion graph (DFS, three colors).
  std::vector<int> color(n, 0);
  std::vector<std::pair<int32_t, size_t>> stack;
  for (int32_t root = 0; root < n; ++root) {
    if (g.is_terminal(root) || color[root] != 0) continue;
    stack.clear();
    color[root] = 1;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [sym, edge] = stack.back();
      // flatten: edges are all nonterminal occurrences in all rhs of sym
      std::vector<int32_t> succ;
      for (int32_t ri : g.rules_for(sym))
        for (int32_t t : g.rules()[ri].rhs)
          if (!g.is_terminal(t)) succ.push_back(t);
      if (edge >= succ.size()) {
        color[sym] = 2;
        stack.pop_back();
        continue;
      }
      int32_t next = succ[edge++];
      if (color[next] == 1) {
        out.push_back("recursive: " + g.name(next));
        color[next] = 2;  // report each cycle head once
      } else if (color[next] == 0) {
        color[next] = 1;
        stack.push_back({next, 0});
      }
    }
  }

  if (g.start() >= 0) {
    std::vector<char> seen(n, 0);
    std::vector<int32_t> queue = {g.start()};
    seen[g.start()] = 1;
    while (!queue.empty()) {
      int32_t sym = queue.back();
      queue.pop_back();
      if (g.is_terminal(sym)) continue;
      for (int32_t ri : g.rules_for(sym))
        for (int32_t t : g.rules()[ri].rhs)
          if (!seen[t]) {
            seen[t] = 1;
            queue.push_back(t);
          }
    }
    for (int32_t s = 0; s < n; ++s)
      if (!seen[s]) out.push_back("unreachable: " + g.name(s));
  }
  return out;
}

Pcfg parse_grammar(std::string_view text) {
  Pcfg g;
  size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++lineno;

    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto toks = split_ws(line);
    auto fail = [&](const std::string& msg) {
      throw Error("grammar line " + std::to_string(lineno) + ": " + msg);
    };
    if (toks.size() < 5) fail("expected 'LHS -> SYM ... : PROB'");
    if (toks[1] != "->") fail("expected '->' after left-hand side");
    if (toks[toks.size() - 2] != ":") fail("expected ':' before probability");
    std::vector<std::string> rhs;
    for (size_t i = 2; i + 2 < toks.size(); ++i) rhs.emplace_back(toks[i]);
    if (rhs.empty()) fail("empty right-hand side");
    Prob p;
    try {
      p = Prob::parse(toks.back());
    } catch (const Error& e) {
      fail(e.what());
    }
    g.add_rule(toks[0], rhs, std::move(p));
  }
  if (g.rules().empty()) throw Error("grammar has no rules");
  g.finalize();
  auto violations = validate(g);
  if (!violations.empty()) {
    std::string msg = "invalid grammar:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw Error(msg);
  }
  return g;
}

std::string serialize_grammar(const Pcfg& g) {
  std::string out;
  for (const Rule& r : g.rules()) {
    out += g.name(r.lhs) + " ->";
    for (int32_t id : r.rhs) out += " " + g.name(id);
    out += " : " + r.prob.repr + "\n";
  }
  return out;
}

std::vector<int32_t> sample_sentence(const Pcfg& g, RngStream& rng) {
  if (!g.finalized_) throw Error("sample_sentence: grammar not finalized");
  std::vector<int32_t> out;
  std::vector<int32_t> stack;
  stack.push_back(g.start_);
  while (!stack.empty()) {
    int32_t sym = stack.back();
    stack.pop_back();
    if (g.is_terminal(sym)) {
      out.push_back(sym);
      continue;
    }
    const auto& cum = g.cumulative_[sym];
    const auto& idx = g.rule_index_[sym];
    if (idx.empty()) throw Error("sample_sentence: nonterminal without rules");
    double u = uniform_double(rng);
    size_t k = std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
    if (k >= idx.size()) k = idx.size() - 1;  // guard against rounding
    const Rule& r = g.rules_[idx[k]];
    for (auto it = r.rhs.rbegin(); it != r.rhs.rend(); ++it)
      stack.push_back(*it);
  }
  return out;
}

std::vector<std::string> to_tokens(const Pcfg& g,
                                   const std::vector<int32_t>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int32_t id : ids) out.push_back(g.name(id));
  return out;
}

// ---- built-ins ----------------------------------------------------------

static std::string idx_name(const char* stem, int i) {
  return std::string(stem) + std::to_string(i);
}

Pcfg build_conflation_grammar() {
  Pcfg g;
  g.add_rule("S", {"a", "V", "b"}, Prob::rational(1, 4));
  g.add_rule("S", {"b", "V", "a"}, Prob::rational(1, 4));
  g.add_rule("S", {"a", "W", "a"}, Prob::rational(1, 8));
  g.add_rule("S", {"a", "W", "b"}, Prob::rational(1, 8));
  g.add_rule("S", {"b", "W", "a"}, Prob::rational(1, 8));
  g.add_rule("S", {"b", "W", "b"}, Prob::rational(1, 8));
  for (int i = 0; i < 5; ++i)
    g.add_rule("V", {idx_name("v", i)}, Prob::rational(1, 5));
  for (int i = 0; i < 5; ++i)
    g.add_rule("W", {idx_name("w", i)}, Prob::rational(1, 5));
  g.set_start("S");
  g.finalize();
  return g;
}

SparsenessGrammar build_sparseness_grammar() {
  SparsenessGrammar out;
  Pcfg& g = out.pcfg;
  g.add_rule("S", {"A", "V", "B"}, Prob::rational(1, 2));
  g.add_rule("S", {"C", "W", "D"}, Prob::rational(1, 2));
  const char* nts[] = {"A", "V", "B", "C", "W", "D"};
  const char* stems[] = {"a", "v", "b", "c", "w", "d"};
  for (int s = 0; s < 6; ++s)
    for (int i = 0; i < 10; ++i)
      g.add_rule(nts[s], {idx_name(stems[s], i)}, Prob::rational(1, 10));
  g.set_start("S");
  g.finalize();
  for (int i = 0; i < 10; ++i)
    out.rare_sentences.push_back(
        {idx_name("a", i), idx_name("u", i), idx_name("b", i)});
  for (int i = 0; i < 10; ++i)
    out.rare_sentences.push_back(
        {idx_name("c", i), idx_name("x", i), idx_name("d", i)});
  return out;
}

AmbiguityParams AmbiguityParams::from_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw Error("ambiguity alpha must be finite and >= 0");
  AmbiguityParams p;
  p.alpha = alpha;
  p.beta = std::exp2(-alpha);
  return p;
}

Pcfg build_ambiguity_grammar(const AmbiguityParams& params) {
  double beta = params.beta;
  if (!(beta > 0.0) || beta > 1.0)
    throw Error("ambiguity beta must be in (0,1]");
  Pcfg g;
  g.add_rule("S", {"A", "V1", "B"}, Prob::rational(10, 20));
  g.add_rule("S", {"C", "W1", "D"}, Prob::rational(9, 20));
  g.add_rule("S", {"C", "W2", "D"}, Prob::decimal(beta / 20.0));
  // At beta = 1 the ambiguous words never take a_b contexts; drop the rule
  // rather than keep it with probability zero.
  if (beta < 1.0)
    g.add_rule("S", {"A", "W2", "B"}, Prob::decimal((1.0 - beta) / 20.0));
  const char* nts[] = {"A", "B", "C", "D"};
  const char* stems[] = {"a", "b", "c", "d"};
  for (int s = 0; s < 4; ++s)
    for (int i = 0; i < 10; ++i)
      g.add_rule(nts[s], {idx_name(stems[s], i)}, Prob::rational(1, 10));
  for (int i = 0; i < 50; ++i)
    g.add_rule("V1", {idx_name("v", i)}, Prob::rational(1, 50));
  for (int i = 5; i < 50; ++i)
    g.add_rule("W1", {idx_name("w", i)}, Prob::rational(1, 45));
  for (int i = 0; i < 5; ++i)
    g.add_rule("W2", {idx_name("w", i)}, Prob::rational(1, 5));
  g.set_start("S");
  g.finalize();
  return g;
}

MuMapping sample_mu(RngStream& rng) {
  MuMapping mu;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 5; ++i)
      mu.paradigm[c * 5 + i] = static_cast<int>(uniform_index(rng, 5));
  return mu;
}

Pcfg build_multifacet_grammar(const MuMapping& mu) {
  for (int v : mu.paradigm)
    if (v < 0 || v >= 5) throw Error("mu mapping entry out of range [0,5)");
  Pcfg g;
  g.add_rule("S", {"N", "F_n"}, Prob::rational(1, 4));
  g.add_rule("S", {"A", "F_a"}, Prob::rational(1, 4));
  g.add_rule("S", {"N", "M_n"}, Prob::rational(1, 4));
  g.add_rule("S", {"A", "M_a"}, Prob::rational(1, 4));
  for (int i = 0; i < 5; ++i)
    g.add_rule("N", {idx_name("n", i)}, Prob::rational(1, 5));
  for (int i = 0; i < 5; ++i)
    g.add_rule("A", {idx_name("a", i)}, Prob::rational(1, 5));
  // category c: 0=nf (noun,F), 1=af (adj,F), 2=nm (noun,M), 3=am (adj,M)
  const char* frame[] = {"F_n", "F_a", "M_n", "M_a"};
  const char* marker[] = {"f", "f", "m", "m"};
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 5; ++i) {
      std::string cat = MuMapping::kCategories[c];
      std::string word = "x_" + cat + "_" + std::to_string(i);
      std::string u_nt = "U_" + cat + "_" + std::to_string(i);
      g.add_rule(frame[c], {word, u_nt}, Prob::rational(1, 5));
    }
  }
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 5; ++i) {
      std::string cat = MuMapping::kCategories[c];
      std::string u_nt = "U_" + cat + "_" + std::to_string(i);
      g.add_rule(u_nt, {marker[c]}, Prob::rational(1, 2));
      g.add_rule(u_nt, {idx_name("u", mu.at(c, i))}, Prob::rational(1, 2));
    }
  }
  g.set_start("S");
  g.finalize();
  return g;
}

}  // namespace facetlab
