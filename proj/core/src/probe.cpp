#include "facetlab/probe.hpp"

#include <cmath>
#include <limits>

#include "facetlab/embedding.hpp"
#include "facetlab/util.hpp"

namespace facetlab {

LinearProbe LinearProbe::fit(const DataView& X, const std::vector<int>& y,
                             const ProbeConfig& cfg) {
  const size_t n = X.rows;
  if (n == 0 || X.cols == 0) throw Error("probe: empty training data");
  if (y.size() != n) throw Error("probe: label count != row count");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else throw Error("probe: labels must be +1 or -1");
  }
  if (!pos || !neg)
    throw Error("probe: training data must contain both classes");
  for (size_t i = 0; i < n * X.cols; ++i)
    if (!std::isfinite(X.data[i]))
      throw Error("probe: non-finite feature value");
  if (!(cfg.C > 0.0)) throw Error("probe: C must be positive");

  // Dual: min 0.5 a'Qa - e'a, 0 <= a <= C, y'a = 0, Q_ij = y_i y_j x_i.x_j.
  std::vector<double> K(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j <= i; ++j)
      K[i * n + j] = K[j * n + i] = dot(X.row(i), X.row(j), X.cols);

  std::vector<double> a(n, 0.0);
  std::vector<double> G(n, -1.0);  // gradient of the dual objective
  const double C = cfg.C;

  auto in_up = [&](size_t t) {
    return (y[t] == 1 && a[t] < C) || (y[t] == -1 && a[t] > 0.0);
  };
  auto in_low = [&](size_t t) {
    return (y[t] == 1 && a[t] > 0.0) || (y[t] == -1 && a[t] < C);
  };

  LinearProbe probe;
  probe.C_ = C;
  int64_t iter = 0;
  double m = 0.0, M = 0.0;
  for (; iter < cfg.max_iter; ++iter) {
    // maximal violating pair
    m = -std::numeric_limits<double>::infinity();
    M = std::numeric_limits<double>::infinity();
    size_t i = n, j = n;
    for (size_t t = 0; t < n; ++t) {
      double v = -y[t] * G[t];
      if (in_up(t) && v > m) {
        m = v;
        i = t;
      }
      if (in_low(t) && v < M) {
        M = v;
        j = t;
      }
    }
    if (i == n || j == n || m - M <= cfg.tol) break;

    // Feasible direction a_i += y_i*tau, a_j -= y_j*tau; minimize the
    // quadratic along it and clip to the box.
    double eta = K[i * n + i] + K[j * n + j] - 2.0 * K[i * n + j];
    if (eta < 1e-12) eta = 1e-12;
    double tau = (m - M) / eta;
    double bound_i = y[i] == 1 ? C - a[i] : a[i];
    double bound_j = y[j] == 1 ? a[j] : C - a[j];
    tau = std::min({tau, bound_i, bound_j});
    a[i] += y[i] * tau;
    a[j] -= y[j] * tau;
    for (size_t t = 0; t < n; ++t)
      G[t] += y[t] * tau * (K[t * n + i] - K[t * n + j]);
  }
  probe.iterations_ = iter;
  probe.gap_ = m - M;
  probe.converged_ = probe.gap_ <= cfg.tol;

  probe.w_.assign(X.cols, 0.0);
  for (size_t t = 0; t < n; ++t)
    if (a[t] != 0.0) {
      const double* x = X.row(t);
      double coef = a[t] * y[t];
      for (size_t c = 0; c < X.cols; ++c) probe.w_[c] += coef * x[c];
    }
  // For free support vectors -y_t G_t equals the bias exactly; m and M
  // bracket it otherwise. The midpoint is the canonical choice.
  probe.b_ = 0.5 * (m + M);
  return probe;
}

double LinearProbe::decision(const double* x) const {
  return dot(w_.data(), x, w_.size()) + b_;
}

int LinearProbe::predict(const double* x) const {
  return decision(x) >= 0.0 ? 1 : -1;
}

double LinearProbe::accuracy(const DataView& X,
                             const std::vector<int>& y) const {
  if (X.rows == 0) return 0.0;
  if (y.size() != X.rows) throw Error("probe: label count != row count");
  size_t ok = 0;
  for (size_t i = 0; i < X.rows; ++i)
    if (predict(X.row(i)) == y[i]) ++ok;
  return static_cast<double>(ok) / static_cast<double>(X.rows);
}

double LinearProbe::objective(const DataView& X,
                              const std::vector<int>& y) const {
  double obj = 0.5 * dot(w_.data(), w_.data(), w_.size());
  for (size_t i = 0; i < X.rows; ++i) {
    double margin = 1.0 - y[i] * decision(X.row(i));
    if (margin > 0.0) obj += C_ * margin;
  }
  return obj;
}

void save_split(const LabeledSplit& split, const std::string& path) {
  std::string out;
  auto emit = [&](const std::vector<std::pair<std::string, int>>& rows,
                  const char* role) {
    for (const auto& [token, label] : rows) {
      out += token;
      out += '\t';
      out += label > 0 ? "+1" : "-1";
      out += '\t';
      out += role;
      out += '\n';
    }
  };
  emit(split.train, "train");
  emit(split.test, "test");
  write_text_file(path, out);
}

LabeledSplit load_split(const std::string& path) {
  std::string text = read_text_file(path);
  LabeledSplit split;
  size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (eol == std::string::npos ? text.size() : eol) - pos);
    pos = (eol == std::string::npos) ? text.size() : eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw Error(path + " line " + std::to_string(lineno) + ": " + msg);
    };
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t1 == std::string_view::npos || t2 == std::string_view::npos)
      fail("expected 'token<TAB>label<TAB>role'");
    std::string_view token = line.substr(0, t1);
    std::string_view label = line.substr(t1 + 1, t2 - t1 - 1);
    std::string_view role = line.substr(t2 + 1);
    if (token.empty()) fail("empty token");
    int lab;
    if (label == "+1" || label == "1") lab = 1;
    else if (label == "-1") lab = -1;
    else fail("label must be +1 or -1, got '" + std::string(label) + "'");
    if (role == "train") split.train.emplace_back(token, lab);
    else if (role == "test") split.test.emplace_back(token, lab);
    else fail("role must be train or test, got '" + std::string(role) + "'");
  }
  return split;
}

}  // namespace facetlab
