#include "facetlab/corpus.hpp"

#include <numeric>

#include "facetlab/util.hpp"

namespace facetlab {

int32_t Vocabulary::intern(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  int32_t id = static_cast<int32_t>(tokens_.size());
  tokens_.emplace_back(token);
  counts_.push_back(0);
  index_.emplace(tokens_.back(), id);
  return id;
}

std::optional<int32_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int32_t Vocabulary::require(std::string_view token) const {
  auto id = find(token);
  if (!id) throw Error("vocabulary is missing token '" + std::string(token) +
                       "' (vocabulary mismatch with criterion)");
  return *id;
}

int64_t Vocabulary::total_tokens() const {
  return std::accumulate(counts_.begin(), counts_.end(), int64_t{0});
}

int64_t Corpus::token_count() const {
  int64_t n = 0;
  for (const auto& s : sentences) n += static_cast<int64_t>(s.size());
  return n;
}

std::vector<std::string> Corpus::sentence_tokens(size_t i) const {
  std::vector<std::string> out;
  for (int32_t id : sentences.at(i)) out.push_back(vocab.token(id));
  return out;
}

Corpus generate_corpus(const Pcfg& g, size_t n, RngStream& rng) {
  Corpus c;
  // grammar terminal id -> vocab id, filled lazily so vocab ids still follow
  // first occurrence in the sampled stream
  std::vector<int32_t> remap(g.num_symbols(), -1);
  c.sentences.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::vector<int32_t> sent = sample_sentence(g, rng);
    for (int32_t& t : sent) {
      int32_t& v = remap[t];
      if (v < 0) v = c.vocab.intern(g.name(t));
      c.vocab.add_count(v, 1);
      t = v;
    }
    c.sentences.push_back(std::move(sent));
  }
  return c;
}

Corpus corpus_from_tokens(const std::vector<std::vector<std::string>>& sents) {
  Corpus c;
  for (const auto& toks : sents) {
    if (toks.empty()) throw Error("corpus_from_tokens: empty sentence");
    std::vector<int32_t> ids;
    ids.reserve(toks.size());
    for (const auto& t : toks) {
      int32_t id = c.vocab.intern(t);
      c.vocab.add_count(id, 1);
      ids.push_back(id);
    }
    c.sentences.push_back(std::move(ids));
  }
  return c;
}

Corpus merge_and_shuffle(const Corpus& base,
                         const std::vector<std::vector<std::string>>& extra,
                         RngStream& rng) {
  std::vector<std::vector<std::string>> all;
  all.reserve(base.sentences.size() + extra.size());
  for (size_t i = 0; i < base.sentences.size(); ++i)
    all.push_back(base.sentence_tokens(i));
  for (const auto& s : extra) all.push_back(s);
  // Fisher-Yates, descending, one uniform_index draw per step
  for (size_t i = all.size(); i > 1; --i) {
    size_t j = uniform_index(rng, i);
    std::swap(all[i - 1], all[j]);
  }
  return corpus_from_tokens(all);
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::string out;
  for (const auto& sent : corpus.sentences) {
    for (size_t i = 0; i < sent.size(); ++i) {
      if (i) out += ' ';
      out += corpus.vocab.token(sent[i]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

Corpus load_corpus(const std::string& path,
                   std::vector<std::string>* warnings) {
  std::string text = read_text_file(path);
  Corpus c;
  size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos, (eol == std::string::npos
                                                  ? text.size()
                                                  : eol) - pos);
    pos = (eol == std::string::npos) ? text.size() : eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (warnings)
        warnings->push_back("line " + std::to_string(lineno) +
                            ": blank line skipped");
      continue;
    }
    std::vector<int32_t> ids;
    size_t i = 0;
    while (i <= line.size()) {
      size_t j = line.find(' ', i);
      if (j == std::string_view::npos) j = line.size();
      if (j == i)
        throw Error(path + " line " + std::to_string(lineno) +
                    ": malformed token separation (empty token)");
      int32_t id = c.vocab.intern(line.substr(i, j - i));
      c.vocab.add_count(id, 1);
      ids.push_back(id);
      i = j + 1;
    }
    c.sentences.push_back(std::move(ids));
  }
  return c;
}

}  // namespace facetlab
