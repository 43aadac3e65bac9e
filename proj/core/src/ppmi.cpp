#include "facetlab/ppmi.hpp"

#include <cmath>

#include "facetlab/util.hpp"

namespace facetlab {

CoocTable CoocTable::count(const Corpus& corpus) {
  CoocTable t;
  t.vocab_ = corpus.vocab.size();
  size_t v = static_cast<size_t>(t.vocab_);
  t.left_.assign(v * v, 0);
  t.right_.assign(v * v, 0);
  for (const auto& sent : corpus.sentences) {
    for (size_t p = 0; p < sent.size(); ++p) {
      size_t w = static_cast<size_t>(sent[p]);
      if (p > 0) ++t.left_[w * v + static_cast<size_t>(sent[p - 1])];
      if (p + 1 < sent.size())
        ++t.right_[w * v + static_cast<size_t>(sent[p + 1])];
    }
  }
  t.left_focus_.assign(v, 0);
  t.right_focus_.assign(v, 0);
  t.left_neighbor_.assign(v, 0);
  t.right_neighbor_.assign(v, 0);
  for (size_t w = 0; w < v; ++w) {
    for (size_t c = 0; c < v; ++c) {
      int64_t l = t.left_[w * v + c], r = t.right_[w * v + c];
      t.left_focus_[w] += l;
      t.left_neighbor_[c] += l;
      t.right_focus_[w] += r;
      t.right_neighbor_[c] += r;
      t.left_total_ += l;
      t.right_total_ += r;
    }
  }
  return t;
}

static void check_offset(int r) {
  if (r != -1 && r != 1) throw Error("CoocTable: offset must be -1 or +1");
}

int64_t CoocTable::at(int32_t w, int r, int32_t v) const {
  check_offset(r);
  size_t n = static_cast<size_t>(vocab_);
  const auto& m = (r == -1) ? left_ : right_;
  return m.at(static_cast<size_t>(w) * n + static_cast<size_t>(v));
}

int64_t CoocTable::focus_marginal(int32_t w, int r) const {
  check_offset(r);
  return ((r == -1) ? left_focus_ : right_focus_).at(w);
}

int64_t CoocTable::neighbor_marginal(int r, int32_t v) const {
  check_offset(r);
  return ((r == -1) ? left_neighbor_ : right_neighbor_).at(v);
}

int64_t CoocTable::total(int r) const {
  check_offset(r);
  return (r == -1) ? left_total_ : right_total_;
}

PpmiVectors ppmi_transform(const CoocTable& counts) {
  PpmiVectors out;
  out.vocab = counts.vocab_size();
  size_t v = static_cast<size_t>(out.vocab);
  size_t dim = 2 * v;
  out.raw.assign(v * dim, 0.0);
  out.normalized.assign(v * dim, 0.0);

  const int offsets[2] = {-1, 1};
  for (size_t w = 0; w < v; ++w) {
    for (int half = 0; half < 2; ++half) {
      int r = offsets[half];
      int64_t focus = counts.focus_marginal(static_cast<int32_t>(w), r);
      int64_t total = counts.total(r);
      double* row = out.raw.data() + w * dim + half * v;
      if (focus == 0 || total == 0) continue;
      for (size_t c = 0; c < v; ++c) {
        int64_t joint =
            counts.at(static_cast<int32_t>(w), r, static_cast<int32_t>(c));
        if (joint == 0) continue;
        int64_t neigh = counts.neighbor_marginal(r, static_cast<int32_t>(c));
        double pmi = std::log(static_cast<double>(joint) *
                              static_cast<double>(total) /
                              (static_cast<double>(focus) *
                               static_cast<double>(neigh)));
        if (pmi > 0.0) row[c] = pmi;
      }
    }
  }

  for (size_t w = 0; w < v; ++w) {
    for (int half = 0; half < 2; ++half) {
      const double* src = out.raw.data() + w * dim + half * v;
      double* dst = out.normalized.data() + w * dim + half * v;
      double ss = 0.0;
      for (size_t c = 0; c < v; ++c) ss += src[c] * src[c];
      if (ss == 0.0) continue;  // all-zero half stays zero
      double inv = 1.0 / std::sqrt(ss);
      for (size_t c = 0; c < v; ++c) dst[c] = src[c] * inv;
    }
  }
  return out;
}

EmbeddingSet train_ppmi(const Corpus& corpus) {
  CoocTable counts = CoocTable::count(corpus);
  PpmiVectors vecs = ppmi_transform(counts);
  EmbeddingSet e;
  e.kind = "ppmi";
  e.space = "explicit";
  e.tokens = corpus.vocab.tokens();
  e.dim = vecs.dim();
  e.data = std::move(vecs.normalized);
  return e;
}

}  // namespace facetlab
