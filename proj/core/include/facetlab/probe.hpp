#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace facetlab {

// Borrowed row-major matrix view.
struct DataView {
  const double* data = nullptr;
  size_t rows = 0;
  size_t cols = 0;
  const double* row(size_t i) const { return data + i * cols; }
};

struct ProbeConfig {
  double C = 1.0;
  double tol = 1e-4;      // KKT gap threshold
  int64_t max_iter = 100000;
};

// L2-regularized hinge-loss classifier
//   min_w,b  0.5|w|^2 + C sum_i max(0, 1 - y_i (w.x_i + b))
// solved in the dual by SMO with maximal-violating-pair selection. The bias
// is the unregularized intercept implied by the equality constraint and is
// recovered as the midpoint of the final KKT interval. The solver draws no
// randomness: identical inputs give identical models.
class LinearProbe {
 public:
  static LinearProbe fit(const DataView& X, const std::vector<int>& y,
                         const ProbeConfig& cfg = {});

  double decision(const double* x) const;  // w.x + b
  int predict(const double* x) const;      // sign; exact zero counts as +1
  double accuracy(const DataView& X, const std::vector<int>& y) const;
  // primal objective at the fitted point
  double objective(const DataView& X, const std::vector<int>& y) const;

  const std::vector<double>& weights() const { return w_; }
  double bias() const { return b_; }
  bool converged() const { return converged_; }
  int64_t iterations() const { return iterations_; }
  double kkt_gap() const { return gap_; }

 private:
  std::vector<double> w_;
  double b_ = 0.0;
  double C_ = 1.0;
  bool converged_ = false;
  int64_t iterations_ = 0;
  double gap_ = 0.0;
};

// Probe data on disk: token, +1/-1 label, train/test role, tab-separated.
struct LabeledSplit {
  std::vector<std::pair<std::string, int>> train;
  std::vector<std::pair<std::string, int>> test;
};

void save_split(const LabeledSplit& split, const std::string& path);
LabeledSplit load_split(const std::string& path);

}  // namespace facetlab
