#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "facetlab/corpus.hpp"
#include "facetlab/labels.hpp"
#include "facetlab/neural.hpp"

namespace facetlab {

// A full criterion experiment: trials x alpha-grid corpora, each probed with
// every requested model. resolve() fills criterion defaults; run_experiment
// handles the rest.
struct ExperimentPlan {
  Criterion criterion = Criterion::kNonconflation;
  std::vector<std::string> models;  // empty -> all six, report order
  int trials = 0;                   // 0 -> criterion default (5/5/50/10)
  size_t sentences = 100000;
  std::vector<double> alphas;       // ambiguity only; empty -> 1.0..2.0 by 0.1
  uint64_t master_seed = 42;

  int dim = 100;
  int negatives = 10;
  int epochs = 20;
  double learning_rate = 0.0;  // 0 -> per-kind default
  double subsample = 0.0;

  std::string space = "input";  // probed space for neural models
  bool eval_target_space = true;
  int jobs = 0;  // 0 -> hardware concurrency

  // When output_dir is set these retain per-cell artifacts under it.
  std::string output_dir;
  bool keep_vectors = false;
  bool keep_splits = false;

  void resolve();
  static const std::vector<std::string>& all_models();  // report order
  static int default_trials(Criterion c);
};

struct TestPrediction {
  std::string token;
  int gold = 0;
  int predicted = 0;
};

struct CellResult {
  std::string model;
  int trial = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();  // NaN: no grid
  std::string space;  // space the probe ran on
  uint64_t seed = 0;  // training seed (0 for ppmi)
  double accuracy = 0.0;
  int n_test = 0;
  std::vector<TestPrediction> predictions;
  bool probe_converged = true;
  // probe on the other parameter matrix (neural models only)
  double target_accuracy = std::numeric_limits<double>::quiet_NaN();
  // multifacet baselines, probed space
  double nn_accuracy = std::numeric_limits<double>::quiet_NaN();
  double analogy_accuracy = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // non-empty -> cell failed, other fields undefined

  bool failed() const { return !error.empty(); }
};

struct ExperimentReport {
  ExperimentPlan plan;
  // Fixed layout: model-major (plan order), then trial, then alpha.
  std::vector<CellResult> cells;
  // Set when rebuilt from a CSV: plan fields beyond models/trials/alphas are
  // unknown and the summary omits the full plan echo.
  bool regenerated = false;

  bool complete() const;
  size_t cell_index(size_t model, size_t trial, size_t alpha) const;
};

// Runs every (model, trial, alpha) cell. Worker threads pick up whole
// (trial, alpha) work items; all randomness flows from derive_seed, so the
// result is identical for any jobs value. Cell failures are captured in the
// cell, not thrown.
ExperimentReport run_experiment(const ExperimentPlan& plan);

// Sentences for one criterion corpus; seeds must come from derive_seed for
// reproducible experiments. Ambiguity cells get their grammar from alpha.
Corpus build_criterion_corpus(Criterion c, size_t sentences, double alpha,
                              uint64_t corpus_seed, uint64_t aux_seed);

}  // namespace facetlab
