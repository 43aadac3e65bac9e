#include "facetlab/eval.hpp"

#include <cmath>

#include "facetlab/util.hpp"

namespace facetlab {

namespace {

void check_rows(const EmbeddingSet& e, const std::vector<size_t>& rows,
                const std::vector<int>& labels, const char* what) {
  if (labels.size() != e.tokens.size())
    throw Error(std::string(what) + ": label array must cover every row");
  for (size_t r : rows)
    if (r >= e.tokens.size())
      throw Error(std::string(what) + ": row index out of range");
}

}  // namespace

EvalResult nn_label_eval(const EmbeddingSet& e,
                         const std::vector<size_t>& queries,
                         const std::vector<size_t>& candidates,
                         const std::vector<int>& label_of_row) {
  check_rows(e, queries, label_of_row, "nn_label_eval");
  check_rows(e, candidates, label_of_row, "nn_label_eval");
  EvalResult res;
  for (size_t q : queries) {
    const double* qv = e.row(q);
    if (l2_norm(qv, e.dim) == 0.0) {
      ++res.skipped;
      continue;
    }
    double best = -2.0;
    size_t best_row = e.tokens.size();
    for (size_t c : candidates) {
      if (c == q) continue;
      const double* cv = e.row(c);
      if (l2_norm(cv, e.dim) == 0.0) continue;
      double cos = cosine(qv, cv, e.dim);
      if (cos > best || (cos == best && c < best_row)) {
        best = cos;
        best_row = c;
      }
    }
    if (best_row == e.tokens.size()) {
      ++res.skipped;  // no usable candidate
      continue;
    }
    ++res.total;
    if (label_of_row[best_row] == label_of_row[q]) ++res.correct;
  }
  return res;
}

EvalResult analogy_eval(const EmbeddingSet& e,
                        const std::vector<AnalogyTriple>& triples,
                        const std::vector<size_t>& candidates,
                        const std::vector<int>& class_of_row) {
  check_rows(e, candidates, class_of_row, "analogy_eval");
  EvalResult res;
  std::vector<double> probe(e.dim);
  for (const auto& tr : triples) {
    if (tr.a >= e.tokens.size() || tr.b >= e.tokens.size() ||
        tr.c >= e.tokens.size())
      throw Error("analogy_eval: row index out of range");
    const double *av = e.row(tr.a), *bv = e.row(tr.b), *cv = e.row(tr.c);
    for (size_t i = 0; i < e.dim; ++i) probe[i] = av[i] - bv[i] + cv[i];
    if (l2_norm(probe.data(), e.dim) == 0.0) {
      ++res.skipped;
      continue;
    }
    double best = -2.0;
    size_t best_row = e.tokens.size();
    for (size_t c : candidates) {
      if (c == tr.a || c == tr.b || c == tr.c) continue;
      const double* xv = e.row(c);
      if (l2_norm(xv, e.dim) == 0.0) continue;
      double cos = cosine(probe.data(), xv, e.dim);
      if (cos > best || (cos == best && c < best_row)) {
        best = cos;
        best_row = c;
      }
    }
    if (best_row == e.tokens.size()) {
      ++res.skipped;
      continue;
    }
    ++res.total;
    if (class_of_row[best_row] == tr.target_class) ++res.correct;
  }
  return res;
}

}  // namespace facetlab
