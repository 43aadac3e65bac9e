#include "facetlab/embedding.hpp"

#include <cmath>

#include "facetlab/util.hpp"

namespace facetlab {

std::optional<size_t> EmbeddingSet::find(std::string_view token) const {
  for (size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i] == token) return i;
  return std::nullopt;
}

void save_embeddings(const EmbeddingSet& e, const std::string& path) {
  std::string out = std::to_string(e.tokens.size()) + " " +
                    std::to_string(e.dim) + "\n";
  for (size_t i = 0; i < e.tokens.size(); ++i) {
    out += e.tokens[i];
    const double* r = e.row(i);
    for (size_t j = 0; j < e.dim; ++j) {
      out += ' ';
      out += format_double(r[j]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

EmbeddingSet load_embeddings(const std::string& path) {
  std::string text = read_text_file(path);
  EmbeddingSet e;
  size_t pos = 0;
  int lineno = 0;
  bool have_header = false;
  size_t expect_rows = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (eol == std::string::npos ? text.size() : eol) - pos);
    pos = (eol == std::string::npos) ? text.size() : eol + 1;
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    auto toks = split_ws(line);
    if (!have_header) {
      if (toks.size() != 2)
        throw Error(path + ": expected 'V D' header");
      expect_rows = static_cast<size_t>(parse_int(toks[0], "vector count"));
      e.dim = static_cast<size_t>(parse_int(toks[1], "dimension"));
      have_header = true;
      e.data.reserve(expect_rows * e.dim);
      continue;
    }
    if (toks.size() != e.dim + 1)
      throw Error(path + " line " + std::to_string(lineno) +
                  ": expected token plus " + std::to_string(e.dim) +
                  " values, got " + std::to_string(toks.size() - 1));
    e.tokens.emplace_back(toks[0]);
    for (size_t j = 1; j < toks.size(); ++j)
      e.data.push_back(parse_double(toks[j], "embedding value"));
  }
  if (!have_header) throw Error(path + ": empty embedding file");
  if (e.tokens.size() != expect_rows)
    throw Error(path + ": header promises " + std::to_string(expect_rows) +
                " rows, file has " + std::to_string(e.tokens.size()));
  return e;
}

double dot(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(const double* a, size_t n) {
  return std::sqrt(dot(a, a, n));
}

double cosine(const double* a, const double* b, size_t n) {
  double na = l2_norm(a, n), nb = l2_norm(b, n);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b, n) / (na * nb);
}

}  // namespace facetlab
