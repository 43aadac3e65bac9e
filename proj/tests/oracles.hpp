// Independent reference implementations used only by the test binaries.
// Everything here is brute force on purpose: correctness over speed, no
// shared code paths with the library.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "facetlab/corpus.hpp"
#include "facetlab/grammar.hpp"

namespace oracles {

// --- full language of a finite PCFG -------------------------------------

namespace detail {
inline void expand(const facetlab::Pcfg& g, std::vector<int32_t> form,
                   size_t pos, double prob,
                   std::map<std::string, double>& out) {
  while (pos < form.size() && g.is_terminal(form[pos])) ++pos;
  if (pos == form.size()) {
    std::string s;
    for (size_t i = 0; i < form.size(); ++i) {
      if (i) s += ' ';
      s += g.name(form[i]);
    }
    out[s] += prob;
    return;
  }
  for (int32_t ri : g.rules_for(form[pos])) {
    const facetlab::Rule& r = g.rules()[ri];
    std::vector<int32_t> next;
    next.reserve(form.size() + r.rhs.size() - 1);
    next.insert(next.end(), form.begin(), form.begin() + pos);
    next.insert(next.end(), r.rhs.begin(), r.rhs.end());
    next.insert(next.end(), form.begin() + pos + 1, form.end());
    expand(g, std::move(next), pos, prob * r.prob.value, out);
  }
}
}  // namespace detail

// sentence string (space-joined) -> total probability
inline std::map<std::string, double> enumerate_language(
    const facetlab::Pcfg& g) {
  std::map<std::string, double> out;
  detail::expand(g, {g.start()}, 0, 1.0, out);
  return out;
}

// --- multinomial sampling check ------------------------------------------

// Largest |observed - n*p| / sqrt(n*p*(1-p)) over every sentence type in the
// language. Returns +inf if the sample contains a sentence outside it.
inline double max_sigma_deviation(const std::map<std::string, double>& lang,
                                  const std::map<std::string, int64_t>& counts,
                                  int64_t n) {
  for (const auto& [sent, c] : counts)
    if (!lang.count(sent)) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& [sent, p] : lang) {
    auto it = counts.find(sent);
    double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    double sigma = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    if (sigma == 0.0) continue;
    worst = std::max(worst, std::fabs(c - static_cast<double>(n) * p) / sigma);
  }
  return worst;
}

// --- brute-force positional PPMI -----------------------------------------

// Normalized 2V-wide PPMI rows computed from scratch with naive loops:
// columns [0,V) = left neighbor (offset -1), [V,2V) = right neighbor (+1).
inline std::vector<double> brute_ppmi(const facetlab::Corpus& corpus) {
  const int64_t v = corpus.vocab.size();
  std::map<std::tuple<int, int64_t, int64_t>, int64_t> joint;  // (r,w,c)
  for (const auto& sent : corpus.sentences) {
    for (size_t i = 0; i < sent.size(); ++i) {
      if (i > 0) ++joint[{-1, sent[i], sent[i - 1]}];
      if (i + 1 < sent.size()) ++joint[{+1, sent[i], sent[i + 1]}];
    }
  }
  std::vector<double> rows(static_cast<size_t>(v) * 2 * v, 0.0);
  for (int r : {-1, +1}) {
    int64_t total = 0;
    std::map<int64_t, int64_t> focus, neighbor;
    for (const auto& [key, n] : joint) {
      if (std::get<0>(key) != r) continue;
      total += n;
      focus[std::get<1>(key)] += n;
      neighbor[std::get<2>(key)] += n;
    }
    for (const auto& [key, n] : joint) {
      if (std::get<0>(key) != r) continue;
      int64_t w = std::get<1>(key), c = std::get<2>(key);
      double pmi = std::log(static_cast<double>(n) * total /
                            (static_cast<double>(focus[w]) * neighbor[c]));
      if (pmi > 0.0)
        rows[w * 2 * v + (r == -1 ? 0 : v) + c] = pmi;
    }
  }
  for (int64_t w = 0; w < v; ++w) {
    for (int half = 0; half < 2; ++half) {
      double* part = rows.data() + w * 2 * v + half * v;
      double ss = 0.0;
      for (int64_t c = 0; c < v; ++c) ss += part[c] * part[c];
      if (ss > 0.0) {
        double inv = 1.0 / std::sqrt(ss);
        for (int64_t c = 0; c < v; ++c) part[c] *= inv;
      }
    }
  }
  return rows;
}

// --- exact tiny-instance SVM ----------------------------------------------

// Exhaustive KKT-pattern search for
//   min 0.5|w|^2 + C sum max(0, 1 - y(wx+b)),
// exact for n <= ~10 points. Every alpha is assigned {0, free, C}; each
// pattern's equality system is solved and checked against the KKT
// conditions; the best dual objective wins. The weight vector is unique
// (strict convexity), while the optimal bias is generally an interval:
// [b_lo, b_hi] is the full argmin of the hinge sum in b given w.
struct SvmOracle {
  std::vector<double> w;
  double b_lo = 0.0, b_hi = 0.0;
  double objective = std::numeric_limits<double>::infinity();
  bool found = false;
};

namespace detail {
// Solves a (m x m) dense system in place; returns false if singular.
inline bool solve(std::vector<double> a, std::vector<double> rhs, int m,
                  std::vector<double>& out) {
  const double kEps = 1e-12;
  std::vector<int> piv(m);
  for (int i = 0; i < m; ++i) piv[i] = i;
  for (int col = 0; col < m; ++col) {
    int best = col;
    for (int r = col + 1; r < m; ++r)
      if (std::fabs(a[r * m + col]) > std::fabs(a[best * m + col])) best = r;
    if (std::fabs(a[best * m + col]) < kEps) return false;
    for (int c = 0; c < m; ++c) std::swap(a[col * m + c], a[best * m + c]);
    std::swap(rhs[col], rhs[best]);
    for (int r = col + 1; r < m; ++r) {
      double f = a[r * m + col] / a[col * m + col];
      for (int c = col; c < m; ++c) a[r * m + c] -= f * a[col * m + c];
      rhs[r] -= f * rhs[col];
    }
  }
  out.assign(m, 0.0);
  for (int r = m - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < m; ++c) s -= a[r * m + c] * out[c];
    out[r] = s / a[r * m + r];
  }
  return true;
}
}  // namespace detail

inline SvmOracle svm_oracle(const std::vector<std::vector<double>>& x,
                            const std::vector<int>& y, double C) {
  const int n = static_cast<int>(x.size());
  const int d = static_cast<int>(x[0].size());
  const double kTol = 1e-7;
  std::vector<double> K(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int c = 0; c < d; ++c) s += x[i][c] * x[j][c];
      K[i * n + j] = s;
    }

  SvmOracle best;
  std::vector<int> state(n, 0);  // 0 = zero, 1 = free, 2 = at C
  int64_t patterns = 1;
  for (int i = 0; i < n; ++i) patterns *= 3;

  for (int64_t code = 0; code < patterns; ++code) {
    int64_t rem = code;
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i) {
      state[i] = rem % 3;
      rem /= 3;
      if (state[i] == 1) free_idx.push_back(i);
    }
    const int f = static_cast<int>(free_idx.size());

    std::vector<double> alpha(n, 0.0);
    for (int i = 0; i < n; ++i)
      if (state[i] == 2) alpha[i] = C;
    double b = 0.0, b_lo, b_hi;

    if (f > 0) {
      // unknowns: alpha over free set, then b
      int m = f + 1;
      std::vector<double> A(m * m, 0.0), rhs(m, 0.0);
      for (int r = 0; r < f; ++r) {
        int i = free_idx[r];
        for (int c = 0; c < f; ++c) {
          int j = free_idx[c];
          A[r * m + c] = y[j] * K[i * n + j];
        }
        A[r * m + f] = 1.0;
        double fixed = 0.0;
        for (int j = 0; j < n; ++j)
          if (state[j] == 2) fixed += C * y[j] * K[i * n + j];
        rhs[r] = y[i] - fixed;
      }
      for (int c = 0; c < f; ++c) A[f * m + c] = y[free_idx[c]];
      double fixed = 0.0;
      for (int j = 0; j < n; ++j)
        if (state[j] == 2) fixed += C * y[j];
      rhs[f] = -fixed;

      std::vector<double> sol;
      if (!detail::solve(A, rhs, m, sol)) continue;
      bool ok = true;
      for (int r = 0; r < f; ++r) {
        alpha[free_idx[r]] = sol[r];
        if (sol[r] < -kTol || sol[r] > C + kTol) ok = false;
      }
      if (!ok) continue;
      b = sol[f];
      b_lo = b_hi = b;
    } else {
      // no free support vectors: b constrained by the inequalities below
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += alpha[i] * y[i];
      if (std::fabs(sum) > kTol) continue;
      b_lo = -std::numeric_limits<double>::infinity();
      b_hi = std::numeric_limits<double>::infinity();
    }

    // margins without bias
    std::vector<double> u(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) u[i] += alpha[j] * y[j] * K[i * n + j];
    // KKT: zero alphas need y(u+b) >= 1, bound alphas need y(u+b) <= 1
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      double lim = y[i] - u[i];  // y(u+b) = 1  <=>  b = y - u (y in {-1,1})
      if (state[i] == 0) {
        if (y[i] == 1) b_lo = std::max(b_lo, lim);
        else b_hi = std::min(b_hi, lim);
      } else if (state[i] == 2) {
        if (y[i] == 1) b_hi = std::min(b_hi, lim);
        else b_lo = std::max(b_lo, lim);
      }
    }
    if (!ok || b_lo > b_hi + kTol) continue;
    (void)b;

    // bias-free dual objective: sum(a) - 0.5 a'Qa
    double dual = 0.0;
    for (int i = 0; i < n; ++i) dual += alpha[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dual -= 0.5 * alpha[i] * y[i] * alpha[j] * y[j] * K[i * n + j];

    if (-dual < best.objective - 1e-12) {
      best.found = true;
      best.objective = -dual;  // placeholder; replaced below from the primal
      std::vector<double> w(d, 0.0);
      for (int i = 0; i < n; ++i)
        if (alpha[i] != 0.0)
          for (int c = 0; c < d; ++c) w[c] += alpha[i] * y[i] * x[i][c];
      best.w = w;
    }
  }
  if (!best.found) return best;

  // Given the unique optimal w, the hinge sum is piecewise linear in b with
  // breakpoints at y_i - w.x_i; its argmin (an interval) and value are exact.
  std::vector<double> wu(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) s += best.w[c] * x[i][c];
    wu[i] = s;
  }
  auto hinge_sum = [&](double b) {
    double h = 0.0;
    for (int i = 0; i < n; ++i)
      h += std::max(0.0, 1.0 - y[i] * (wu[i] + b));
    return h;
  };
  double hmin = std::numeric_limits<double>::infinity();
  std::vector<double> bps(n);
  for (int i = 0; i < n; ++i) {
    bps[i] = y[i] - wu[i];
    hmin = std::min(hmin, hinge_sum(bps[i]));
  }
  best.b_lo = std::numeric_limits<double>::infinity();
  best.b_hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    if (hinge_sum(bps[i]) <= hmin + 1e-9) {
      best.b_lo = std::min(best.b_lo, bps[i]);
      best.b_hi = std::max(best.b_hi, bps[i]);
    }
  double wnorm = 0.0;
  for (int c = 0; c < d; ++c) wnorm += 0.5 * best.w[c] * best.w[c];
  best.objective = wnorm + C * hmin;
  return best;
}

}  // namespace oracles
