#include "facetlab/harness.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include "facetlab/ppmi.hpp"
#include "facetlab/util.hpp"

namespace facetlab {

const std::vector<std::string>& ExperimentPlan::all_models() {
  // report order, fixed
  static const std::vector<std::string> kModels = {"ppmi", "lbl",  "cbow",
                                                   "cwin", "skip", "sskip"};
  return kModels;
}

int ExperimentPlan::default_trials(Criterion c) {
  switch (c) {
    case Criterion::kNonconflation: return 5;
    case Criterion::kSparseness: return 5;
    case Criterion::kAmbiguity: return 50;
    case Criterion::kMultifacet: return 10;
  }
  return 5;
}

void ExperimentPlan::resolve() {
  if (models.empty()) models = all_models();
  for (const auto& m : models)
    if (m != "ppmi") parse_model_kind(m);  // throws on unknown names
  if (trials <= 0) trials = default_trials(criterion);
  if (sentences == 0) throw Error("plan: sentences must be positive");
  if (criterion == Criterion::kAmbiguity) {
    if (alphas.empty())
      for (int i = 0; i <= 10; ++i)
        alphas.push_back(static_cast<double>(10 + i) / 10.0);
    for (double a : alphas) AmbiguityParams::from_alpha(a);  // validates
  } else if (!alphas.empty()) {
    throw Error("plan: alpha grid only applies to the ambiguity criterion");
  }
  if (space != "input" && space != "target")
    throw Error("plan: space must be 'input' or 'target'");
  if (dim <= 0 || negatives < 0 || epochs <= 0)
    throw Error("plan: invalid training configuration");
  if (jobs <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    jobs = hc ? static_cast<int>(hc) : 1;
  }
}

bool ExperimentReport::complete() const {
  for (const auto& c : cells)
    if (c.failed()) return false;
  return !cells.empty();
}

size_t ExperimentReport::cell_index(size_t model, size_t trial,
                                    size_t alpha) const {
  size_t grid = plan.criterion == Criterion::kAmbiguity
                    ? plan.alphas.size()
                    : 1;
  return (model * plan.trials + trial) * grid + alpha;
}

Corpus build_criterion_corpus(Criterion c, size_t sentences, double alpha,
                              uint64_t corpus_seed, uint64_t aux_seed) {
  switch (c) {
    case Criterion::kNonconflation: {
      Pcfg g = build_conflation_grammar();
      RngStream rng(corpus_seed);
      return generate_corpus(g, sentences, rng);
    }
    case Criterion::kSparseness: {
      SparsenessGrammar sg = build_sparseness_grammar();
      RngStream rng(corpus_seed);
      Corpus base = generate_corpus(sg.pcfg, sentences, rng);
      RngStream shuffle_rng(aux_seed);
      return merge_and_shuffle(base, sg.rare_sentences, shuffle_rng);
    }
    case Criterion::kAmbiguity: {
      Pcfg g = build_ambiguity_grammar(AmbiguityParams::from_alpha(alpha));
      RngStream rng(corpus_seed);
      return generate_corpus(g, sentences, rng);
    }
    case Criterion::kMultifacet: {
      RngStream mu_rng(aux_seed);
      MuMapping mu = sample_mu(mu_rng);
      Pcfg g = build_multifacet_grammar(mu);
      RngStream rng(corpus_seed);
      return generate_corpus(g, sentences, rng);
    }
  }
  throw Error("unknown criterion");
}

namespace {

struct ProbeOutcome {
  double accuracy = 0.0;
  int n_test = 0;
  bool converged = true;
  std::vector<TestPrediction> predictions;
};

ProbeOutcome probe_split(const EmbeddingSet& e, const LabeledSplit& split,
                         bool want_predictions) {
  auto gather = [&](const std::vector<std::pair<std::string, int>>& words,
                    std::vector<double>& x, std::vector<int>& y) {
    x.reserve(words.size() * e.dim);
    for (const auto& [token, label] : words) {
      auto row = e.find(token);
      if (!row)
        throw Error("probe vectors are missing token '" + token +
                    "' (vocabulary mismatch with criterion)");
      const double* r = e.row(*row);
      x.insert(x.end(), r, r + e.dim);
      y.push_back(label);
    }
  };
  std::vector<double> xtr, xte;
  std::vector<int> ytr, yte;
  gather(split.train, xtr, ytr);
  gather(split.test, xte, yte);

  LinearProbe probe = LinearProbe::fit(
      DataView{xtr.data(), split.train.size(), e.dim}, ytr);

  ProbeOutcome out;
  out.converged = probe.converged();
  out.n_test = static_cast<int>(split.test.size());
  size_t correct = 0;
  for (size_t i = 0; i < split.test.size(); ++i) {
    int pred = probe.predict(xte.data() + i * e.dim);
    if (pred == yte[i]) ++correct;
    if (want_predictions)
      out.predictions.push_back({split.test[i].first, yte[i], pred});
  }
  out.accuracy = split.test.empty()
                     ? 0.0
                     : static_cast<double>(correct) / split.test.size();
  return out;
}

std::string alpha_suffix(double alpha) {
  return std::isnan(alpha) ? std::string()
                           : "_a" + format_double(alpha);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentPlan& plan_in) {
  ExperimentPlan plan = plan_in;
  plan.resolve();

  const bool grid_used = plan.criterion == Criterion::kAmbiguity;
  const std::vector<double> grid =
      grid_used ? plan.alphas
                : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
  const size_t n_models = plan.models.size();
  const size_t n_items = static_cast<size_t>(plan.trials) * grid.size();

  ExperimentReport report;
  report.plan = plan;
  report.cells.resize(n_models * n_items);

  const bool retain =
      !plan.output_dir.empty() && (plan.keep_vectors || plan.keep_splits);
  if (retain) {
    namespace fs = std::filesystem;
    if (plan.keep_vectors)
      fs::create_directories(fs::path(plan.output_dir) / "vectors");
    if (plan.keep_splits)
      fs::create_directories(fs::path(plan.output_dir) / "splits");
  }

  const std::string crit_name(to_string(plan.criterion));

  auto run_item = [&](size_t item) {
    const int trial = static_cast<int>(item / grid.size());
    const size_t ai = item % grid.size();
    const double alpha = grid[ai];
    const double seed_alpha = std::isnan(alpha) ? 0.0 : alpha;

    auto cell_at = [&](size_t mi) -> CellResult& {
      return report.cells[(mi * plan.trials + trial) * grid.size() + ai];
    };
    for (size_t mi = 0; mi < n_models; ++mi) {
      CellResult& cell = cell_at(mi);
      cell.model = plan.models[mi];
      cell.trial = trial;
      cell.alpha = alpha;
    }

    Corpus corpus;
    LabeledSplit split;
    try {
      uint64_t corpus_seed = derive_seed(plan.master_seed, crit_name, "corpus",
                                         trial, seed_alpha);
      uint64_t aux_seed = derive_seed(
          plan.master_seed, crit_name,
          plan.criterion == Criterion::kSparseness ? "shuffle" : "mu", trial,
          seed_alpha);
      corpus = build_criterion_corpus(plan.criterion, plan.sentences, alpha,
                                      corpus_seed, aux_seed);
      split = label_words(plan.criterion, corpus.vocab);
    } catch (const std::exception& e) {
      for (size_t mi = 0; mi < n_models; ++mi) cell_at(mi).error = e.what();
      return;
    }

    if (retain && plan.keep_splits) {
      save_split(split, plan.output_dir + "/splits/trial" +
                            std::to_string(trial) + alpha_suffix(alpha) +
                            ".tsv");
    }

    for (size_t mi = 0; mi < n_models; ++mi) {
      CellResult& cell = cell_at(mi);
      try {
        EmbeddingSet main_vectors;
        if (cell.model == "ppmi") {
          main_vectors = train_ppmi(corpus);
          cell.space = main_vectors.space;
          cell.seed = 0;
        } else {
          TrainConfig cfg;
          cfg.kind = parse_model_kind(cell.model);
          cfg.dim = plan.dim;
          cfg.negatives = plan.negatives;
          cfg.epochs = plan.epochs;
          cfg.learning_rate = plan.learning_rate;
          cfg.subsample = plan.subsample;
          cfg.track_loss = false;
          cfg.seed = derive_seed(plan.master_seed, crit_name, cell.model,
                                 trial, seed_alpha);
          EmbeddingPair pair = train(corpus, cfg);
          main_vectors = export_vectors(pair, corpus.vocab, plan.space);
          cell.space = plan.space;
          cell.seed = cfg.seed;
          if (plan.eval_target_space) {
            std::string other =
                plan.space == "input" ? "target" : "input";
            EmbeddingSet ov = export_vectors(pair, corpus.vocab, other);
            ProbeOutcome po = probe_split(ov, split, false);
            cell.target_accuracy = po.accuracy;
          }
        }

        ProbeOutcome po = probe_split(main_vectors, split, true);
        cell.accuracy = po.accuracy;
        cell.n_test = po.n_test;
        cell.probe_converged = po.converged;
        cell.predictions = std::move(po.predictions);

        if (plan.criterion == Criterion::kMultifacet) {
          MultifacetWords mw = multifacet_words(main_vectors);
          cell.nn_accuracy =
              nn_label_eval(main_vectors, mw.adjectives, mw.content,
                            mw.gender_of_row)
                  .accuracy();
          cell.analogy_accuracy =
              analogy_eval(main_vectors, mw.triples, mw.content,
                           mw.category_of_row)
                  .accuracy();
        }

        if (retain && plan.keep_vectors) {
          save_embeddings(main_vectors,
                          plan.output_dir + "/vectors/" + cell.model +
                              "_trial" + std::to_string(trial) +
                              alpha_suffix(alpha) + "_" + cell.space + ".txt");
        }
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };

  int jobs = std::min<size_t>(plan.jobs, n_items);
  if (jobs <= 1) {
    for (size_t i = 0; i < n_items; ++i) run_item(i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n_items) break;
        run_item(i);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return report;
}

}  // namespace facetlab
