// facetlab: synthesize criterion corpora, train embedding models on them,
// and probe the resulting vectors. See README for the experiment layout.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "facetlab/corpus.hpp"
#include "facetlab/grammar.hpp"
#include "facetlab/harness.hpp"
#include "facetlab/labels.hpp"
#include "facetlab/neural.hpp"
#include "facetlab/ppmi.hpp"
#include "facetlab/probe.hpp"
#include "facetlab/report.hpp"
#include "facetlab/util.hpp"

namespace fl = facetlab;
using ordered_json = nlohmann::ordered_json;

namespace {

// Every subcommand announces its resolved configuration (defaults included)
// on stderr before doing any work.
class ConfigEcho {
 public:
  explicit ConfigEcho(const std::string& subcommand) {
    std::cerr << "resolved config (" << subcommand << "):\n";
  }
  template <typename T>
  ConfigEcho& set(const std::string& key, const T& value) {
    std::cerr << "  " << key << " = " << value << "\n";
    return *this;
  }
  ConfigEcho& set(const std::string& key, double value) {
    std::cerr << "  " << key << " = " << fl::format_double(value) << "\n";
    return *this;
  }
  ConfigEcho& set(const std::string& key, bool value) {
    std::cerr << "  " << key << " = " << (value ? "true" : "false") << "\n";
    return *this;
  }
  ConfigEcho& set(const std::string& key,
                  const std::vector<std::string>& values) {
    std::cerr << "  " << key << " = ";
    for (size_t i = 0; i < values.size(); ++i)
      std::cerr << (i ? "," : "") << values[i];
    std::cerr << "\n";
    return *this;
  }
  ConfigEcho& set(const std::string& key, const std::vector<double>& values) {
    std::cerr << "  " << key << " = ";
    for (size_t i = 0; i < values.size(); ++i)
      std::cerr << (i ? "," : "") << fl::format_double(values[i]);
    std::cerr << "\n";
    return *this;
  }
};

struct GenArgs {
  std::string criterion;
  size_t sentences = 100000;
  uint64_t seed = 1;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string output;
};

int cmd_gen(const GenArgs& a) {
  fl::Criterion crit = fl::parse_criterion(a.criterion);
  bool has_alpha = !std::isnan(a.alpha);
  if (crit == fl::Criterion::kAmbiguity && !has_alpha)
    throw fl::Error("--alpha is required for the ambiguity criterion");
  if (crit != fl::Criterion::kAmbiguity && has_alpha)
    throw fl::Error("--alpha only applies to the ambiguity criterion");

  ConfigEcho echo("gen");
  echo.set("criterion", a.criterion)
      .set("sentences", a.sentences)
      .set("seed", a.seed);
  if (has_alpha) echo.set("alpha", a.alpha);
  echo.set("output", a.output);

  ordered_json meta;
  meta["criterion"] = a.criterion;
  meta["sentences"] = a.sentences;
  meta["seed"] = a.seed;

  fl::RngStream rng(a.seed);
  fl::Corpus corpus;
  switch (crit) {
    case fl::Criterion::kNonconflation: {
      corpus = fl::generate_corpus(fl::build_conflation_grammar(), a.sentences,
                                   rng);
      break;
    }
    case fl::Criterion::kSparseness: {
      fl::SparsenessGrammar sg = fl::build_sparseness_grammar();
      fl::Corpus base = fl::generate_corpus(sg.pcfg, a.sentences, rng);
      corpus = fl::merge_and_shuffle(base, sg.rare_sentences, rng);
      ordered_json rare = ordered_json::array();
      for (const auto& sent : sg.rare_sentences) {
        std::string line;
        for (size_t i = 0; i < sent.size(); ++i)
          line += (i ? " " : "") + sent[i];
        rare.push_back(line);
      }
      meta["rare_sentences"] = rare;
      break;
    }
    case fl::Criterion::kAmbiguity: {
      auto params = fl::AmbiguityParams::from_alpha(a.alpha);
      corpus = fl::generate_corpus(fl::build_ambiguity_grammar(params),
                                   a.sentences, rng);
      meta["alpha"] = params.alpha;
      meta["beta"] = params.beta;
      break;
    }
    case fl::Criterion::kMultifacet: {
      fl::MuMapping mu = fl::sample_mu(rng);
      corpus = fl::generate_corpus(fl::build_multifacet_grammar(mu),
                                   a.sentences, rng);
      ordered_json jmu;
      for (int c = 0; c < 4; ++c)
        for (int i = 0; i < 5; ++i)
          jmu[std::string("U_") + fl::MuMapping::kCategories[c] + "_" +
              std::to_string(i)] = "u" + std::to_string(mu.at(c, i));
      meta["mu"] = jmu;
      break;
    }
  }
  meta["lines"] = corpus.sentences.size();
  meta["vocabulary"] = corpus.vocab.size();

  fl::save_corpus(corpus, a.output);
  fl::write_text_file(a.output + ".meta.json", meta.dump(2) + "\n");
  std::cerr << "wrote " << corpus.sentences.size() << " sentences ("
            << corpus.vocab.size() << " word types) to " << a.output << "\n";
  return 0;
}

struct TrainArgs {
  std::string model;
  std::string corpus;
  int dim = 100;
  int negatives = 10;
  int epochs = 20;
  double lr = 0.0;
  double subsample = 0.0;
  uint64_t seed = 1;
  std::string space = "input";
  std::string output;
};

int cmd_train(const TrainArgs& a) {
  if (a.space != "input" && a.space != "target")
    throw fl::Error("--space must be input or target");

  std::vector<std::string> warnings;
  fl::Corpus corpus = fl::load_corpus(a.corpus, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  ordered_json meta;
  meta["model"] = a.model;
  meta["corpus"] = a.corpus;
  meta["sentences"] = corpus.sentences.size();
  meta["vocabulary"] = corpus.vocab.size();

  fl::EmbeddingSet vectors;
  if (a.model == "ppmi") {
    ConfigEcho("train")
        .set("model", a.model)
        .set("corpus", a.corpus)
        .set("output", a.output);
    vectors = fl::train_ppmi(corpus);
    meta["space"] = vectors.space;
    meta["dim"] = vectors.dim;
  } else {
    fl::TrainConfig cfg;
    cfg.kind = fl::parse_model_kind(a.model);
    cfg.dim = a.dim;
    cfg.negatives = a.negatives;
    cfg.epochs = a.epochs;
    cfg.learning_rate = a.lr;
    cfg.subsample = a.subsample;
    cfg.seed = a.seed;
    cfg.track_loss = true;
    ConfigEcho("train")
        .set("model", a.model)
        .set("corpus", a.corpus)
        .set("dim", cfg.dim)
        .set("negatives", cfg.negatives)
        .set("epochs", cfg.epochs)
        .set("learning_rate", cfg.resolved_learning_rate())
        .set("subsample", cfg.subsample)
        .set("seed", a.seed)
        .set("space", a.space)
        .set("output", a.output);

    fl::EmbeddingPair pair = fl::train(corpus, cfg);
    if (pair.total_events == 0)
      std::cerr << "warning: corpus produced no training events; vectors "
                   "keep their initialization\n";
    vectors = fl::export_vectors(pair, corpus.vocab, a.space);
    meta["dim"] = cfg.dim;
    meta["negatives"] = cfg.negatives;
    meta["epochs"] = cfg.epochs;
    meta["learning_rate"] = cfg.resolved_learning_rate();
    meta["subsample"] = cfg.subsample;
    meta["seed"] = cfg.seed;
    meta["space"] = a.space;
    meta["total_events"] = pair.total_events;
    meta["epoch_loss"] = pair.epoch_loss;
    if (!pair.epoch_loss.empty()) meta["final_loss"] = pair.epoch_loss.back();
  }
  fl::save_embeddings(vectors, a.output);
  fl::write_text_file(a.output + ".meta.json", meta.dump(2) + "\n");
  std::cerr << "wrote " << vectors.tokens.size() << " x " << vectors.dim
            << " vectors to " << a.output << "\n";
  return 0;
}

struct ProbeArgs {
  std::string vectors;
  std::string split;
  double C = 1.0;
  double tol = 1e-4;
  int64_t max_iter = 100000;
  std::string output;
};

int cmd_probe(const ProbeArgs& a) {
  ConfigEcho("probe")
      .set("vectors", a.vectors)
      .set("split", a.split)
      .set("C", a.C)
      .set("tol", a.tol)
      .set("max_iter", a.max_iter)
      .set("output", a.output.empty() ? std::string("<stdout>") : a.output);

  fl::EmbeddingSet e = fl::load_embeddings(a.vectors);
  fl::LabeledSplit split = fl::load_split(a.split);

  auto gather = [&](const std::vector<std::pair<std::string, int>>& words,
                    std::vector<double>& x, std::vector<int>& y) {
    for (const auto& [token, label] : words) {
      auto row = e.find(token);
      if (!row)
        throw fl::Error("vectors file lacks token '" + token + "'");
      const double* r = e.row(*row);
      x.insert(x.end(), r, r + e.dim);
      y.push_back(label);
    }
  };
  std::vector<double> xtr, xte;
  std::vector<int> ytr, yte;
  gather(split.train, xtr, ytr);
  gather(split.test, xte, yte);

  fl::ProbeConfig cfg;
  cfg.C = a.C;
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  fl::DataView train_view{xtr.data(), split.train.size(), e.dim};
  fl::DataView test_view{xte.data(), split.test.size(), e.dim};
  fl::LinearProbe probe = fl::LinearProbe::fit(train_view, ytr, cfg);

  ordered_json out;
  out["n_train"] = split.train.size();
  out["n_test"] = split.test.size();
  out["converged"] = probe.converged();
  out["iterations"] = probe.iterations();
  out["bias"] = probe.bias();
  out["train_accuracy"] = probe.accuracy(train_view, ytr);
  out["test_accuracy"] = probe.accuracy(test_view, yte);
  ordered_json preds = ordered_json::array();
  for (size_t i = 0; i < split.test.size(); ++i) {
    preds.push_back({{"token", split.test[i].first},
                     {"gold", yte[i]},
                     {"predicted", probe.predict(xte.data() + i * e.dim)}});
  }
  out["predictions"] = preds;

  std::string text = out.dump(2) + "\n";
  if (a.output.empty())
    std::cout << text;
  else
    fl::write_text_file(a.output, text);
  return 0;
}

struct RunArgs {
  std::string experiment;
  std::vector<std::string> models;
  int trials = 0;
  size_t sentences = 100000;
  std::vector<double> alphas;
  uint64_t seed = 42;
  int dim = 100;
  int negatives = 10;
  int epochs = 20;
  double lr = 0.0;
  double subsample = 0.0;
  std::string space = "input";
  int jobs = 0;
  bool smoke = false;
  bool keep_vectors = false;
  bool keep_splits = false;
  std::string output;
};

int smoke_trials(int trials) {
  // CI scaling per the harness contract: 50 -> 10, 10 -> 3, rest unchanged.
  if (trials == 50) return 10;
  if (trials == 10) return 3;
  return trials;
}

fl::ExperimentPlan make_plan(const RunArgs& a, fl::Criterion crit) {
  fl::ExperimentPlan plan;
  plan.criterion = crit;
  plan.models = a.models;
  plan.trials = a.trials > 0
                    ? a.trials
                    : (a.smoke
                           ? smoke_trials(fl::ExperimentPlan::default_trials(
                                 crit))
                           : 0);
  plan.sentences = a.sentences;
  if (crit == fl::Criterion::kAmbiguity) plan.alphas = a.alphas;
  plan.master_seed = a.seed;
  plan.dim = a.dim;
  plan.negatives = a.negatives;
  plan.epochs = a.epochs;
  plan.learning_rate = a.lr;
  plan.subsample = a.subsample;
  plan.space = a.space;
  plan.jobs = a.jobs;
  plan.keep_vectors = a.keep_vectors;
  plan.keep_splits = a.keep_splits;
  return plan;
}

int run_one(const RunArgs& a, fl::Criterion crit, const std::string& dir) {
  fl::ExperimentPlan plan = make_plan(a, crit);
  plan.output_dir = dir;
  plan.resolve();

  ConfigEcho echo("run");
  echo.set("experiment", std::string(fl::to_string(crit)))
      .set("models", plan.models)
      .set("trials", plan.trials)
      .set("sentences", plan.sentences);
  if (crit == fl::Criterion::kAmbiguity) echo.set("alphas", plan.alphas);
  echo.set("master_seed", plan.master_seed)
      .set("dim", plan.dim)
      .set("negatives", plan.negatives)
      .set("epochs", plan.epochs)
      .set("learning_rate", plan.learning_rate)
      .set("subsample", plan.subsample)
      .set("space", plan.space)
      .set("jobs", plan.jobs)
      .set("smoke", a.smoke)
      .set("keep_vectors", plan.keep_vectors)
      .set("keep_splits", plan.keep_splits)
      .set("output", dir);

  fl::ExperimentReport report = fl::run_experiment(plan);
  fl::emit_report(report, dir);

  size_t failed = 0;
  for (const auto& c : report.cells)
    if (c.failed()) ++failed;
  std::cerr << fl::to_string(crit) << ": " << report.cells.size() - failed
            << "/" << report.cells.size() << " cells completed\n";
  if (failed) {
    std::cerr << "error: " << failed
              << " cell(s) failed; see summary.json failures\n";
    return 1;
  }
  return 0;
}

int cmd_run(const RunArgs& a) {
  namespace fs = std::filesystem;
  if (a.experiment == "all") {
    if (a.trials > 0)
      throw fl::Error(
          "--trials applies to a single experiment; 'all' uses the "
          "per-criterion defaults");
    if (!a.alphas.empty())
      throw fl::Error("--alphas applies only to 'run --experiment ambiguity'");
    int rc = 0;
    ordered_json index;
    index["schema"] = "facetlab.run-all.v1";
    ordered_json sub;
    for (fl::Criterion crit :
         {fl::Criterion::kNonconflation, fl::Criterion::kSparseness,
          fl::Criterion::kAmbiguity, fl::Criterion::kMultifacet}) {
      std::string name(fl::to_string(crit));
      std::string dir = (fs::path(a.output) / name).string();
      int one = run_one(a, crit, dir);
      sub[name] = {{"directory", name}, {"complete", one == 0}};
      rc = std::max(rc, one);
    }
    index["experiments"] = sub;
    index["complete"] = rc == 0;
    fs::create_directories(a.output);
    fl::write_text_file((fs::path(a.output) / "summary.json").string(),
                        index.dump(2) + "\n");
    return rc;
  }
  fl::Criterion crit = fl::parse_criterion(a.experiment);
  if (crit != fl::Criterion::kAmbiguity && !a.alphas.empty())
    throw fl::Error("--alphas applies only to the ambiguity experiment");
  return run_one(a, crit, a.output);
}

struct ReportArgs {
  std::string input;
  std::string output;
};

int cmd_report(const ReportArgs& a) {
  ConfigEcho("report").set("in", a.input).set("out", a.output);
  namespace fs = std::filesystem;
  std::string csv_path = a.input;
  if (fs::is_directory(csv_path)) csv_path += "/report.csv";
  fl::ExperimentReport report =
      fl::parse_report_csv(fl::read_text_file(csv_path));
  report.regenerated = true;
  fs::create_directories(a.output);
  fl::write_text_file(a.output + "/summary.json",
                      fl::report_summary_json(report));
  if (report.plan.criterion == fl::Criterion::kAmbiguity)
    fl::write_text_file(a.output + "/curve.svg",
                        fl::report_curve_svg(report));
  std::cerr << "regenerated summary for " << report.cells.size()
            << " cells\n";
  return report.complete() ? 0 : 1;
}

struct GrammarArgs {
  std::string file;
  std::string builtin;
  double alpha = 1.0;
  uint64_t mu_seed = 1;
  bool print = false;
};

int cmd_grammar_validate(const GrammarArgs& a) {
  if (a.file.empty() == a.builtin.empty())
    throw fl::Error("pass exactly one of FILE or --builtin");
  ConfigEcho echo("grammar-validate");
  if (!a.file.empty()) echo.set("file", a.file);
  if (!a.builtin.empty()) echo.set("builtin", a.builtin);

  fl::Pcfg g;
  if (!a.file.empty()) {
    // parse_grammar validates internally and throws with the violation list
    g = fl::parse_grammar(fl::read_text_file(a.file));
  } else {
    fl::Criterion crit = fl::parse_criterion(a.builtin);
    switch (crit) {
      case fl::Criterion::kNonconflation:
        g = fl::build_conflation_grammar();
        break;
      case fl::Criterion::kSparseness:
        g = fl::build_sparseness_grammar().pcfg;
        break;
      case fl::Criterion::kAmbiguity:
        g = fl::build_ambiguity_grammar(
            fl::AmbiguityParams::from_alpha(a.alpha));
        break;
      case fl::Criterion::kMultifacet: {
        fl::RngStream rng(a.mu_seed);
        g = fl::build_multifacet_grammar(fl::sample_mu(rng));
        break;
      }
    }
    auto violations = fl::validate(g);
    if (!violations.empty()) {
      for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
      return 1;
    }
  }
  std::cerr << "grammar OK: " << g.num_symbols() << " symbols, "
            << g.rules().size() << " rules, " << g.terminals().size()
            << " terminals\n";
  if (a.print) std::cout << fl::serialize_grammar(g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic-corpus workbench for word embedding facets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "facetlab 0.1.0");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a criterion corpus");
  g->add_option("--criterion", gen.criterion,
                "nonconflation|sparseness|ambiguity|multifacet")
      ->required();
  g->add_option("--sentences", gen.sentences, "sentences to sample")
      ->capture_default_str();
  g->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  g->add_option("--alpha", gen.alpha,
                "ambiguity skew, beta = 2^-alpha (ambiguity only)");
  g->add_option("-o,--output", gen.output, "corpus file to write")->required();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "train one embedding model");
  t->add_option("--model", tr.model, "ppmi|skip|sskip|cbow|cwin|lbl")
      ->required();
  t->add_option("--corpus", tr.corpus, "corpus file")->required();
  t->add_option("--dim", tr.dim, "embedding dimension")->capture_default_str();
  t->add_option("--neg,--negatives", tr.negatives, "negative samples")
      ->capture_default_str();
  t->add_option("--epochs", tr.epochs, "training epochs")
      ->capture_default_str();
  t->add_option("--lr", tr.lr,
                "learning rate (0 = model default: 0.025 skip/sskip, 0.05 "
                "cbow/cwin/lbl)");
  t->add_option("--subsample", tr.subsample,
                "frequent-word subsampling threshold (0 = off)")
      ->capture_default_str();
  t->add_option("--seed", tr.seed, "RNG seed")->capture_default_str();
  t->add_option("--space", tr.space, "exported side: input|target")
      ->capture_default_str();
  t->add_option("-o,--output", tr.output, "vectors file to write")->required();

  ProbeArgs pr;
  auto* p = app.add_subcommand("probe", "fit the linear probe on vectors");
  p->add_option("--vectors", pr.vectors, "vectors file")->required();
  p->add_option("--split", pr.split, "labeled split file (tsv)")->required();
  p->add_option("-C", pr.C, "hinge penalty")->capture_default_str();
  p->add_option("--tol", pr.tol, "KKT gap tolerance")->capture_default_str();
  p->add_option("--max-iter", pr.max_iter, "iteration cap")
      ->capture_default_str();
  p->add_option("-o,--output", pr.output, "report JSON (default: stdout)");

  RunArgs rn;
  auto* r = app.add_subcommand("run", "run a full criterion experiment");
  r->add_option("--experiment", rn.experiment,
                "nonconflation|sparseness|ambiguity|multifacet|all")
      ->required();
  r->add_option("--models", rn.models,
                "comma-separated subset of ppmi,lbl,cbow,cwin,skip,sskip")
      ->delimiter(',');
  r->add_option("--trials", rn.trials, "trials per cell (0 = criterion default)");
  r->add_option("--sentences", rn.sentences, "sentences per corpus")
      ->capture_default_str();
  r->add_option("--alphas", rn.alphas,
                "ambiguity alpha grid (default 1.0..2.0 step 0.1)")
      ->delimiter(',');
  r->add_option("--seed", rn.seed, "master seed")->capture_default_str();
  r->add_option("--dim", rn.dim, "embedding dimension")->capture_default_str();
  r->add_option("--neg,--negatives", rn.negatives, "negative samples")
      ->capture_default_str();
  r->add_option("--epochs", rn.epochs, "training epochs")
      ->capture_default_str();
  r->add_option("--lr", rn.lr, "learning rate (0 = model default)");
  r->add_option("--subsample", rn.subsample, "subsampling threshold")
      ->capture_default_str();
  r->add_option("--space", rn.space, "probed space: input|target")
      ->capture_default_str();
  r->add_option("--jobs", rn.jobs,
                "worker threads (0 = hardware concurrency)");
  r->add_flag("--smoke", rn.smoke, "CI scale-down: trials 50->10, 10->3");
  r->add_flag("--keep-vectors", rn.keep_vectors,
              "retain per-cell vectors under OUTPUT/vectors/");
  r->add_flag("--keep-splits", rn.keep_splits,
              "retain per-trial splits under OUTPUT/splits/");
  r->add_option("-o,--output", rn.output, "report directory")->required();

  ReportArgs rp;
  auto* re = app.add_subcommand(
      "report", "regenerate summary.json/curve.svg from a report.csv");
  re->add_option("--in", rp.input, "report.csv or report directory")
      ->required();
  re->add_option("-o,--output", rp.output, "output directory")->required();

  GrammarArgs gr;
  auto* gv = app.add_subcommand("grammar-validate",
                                "validate a grammar file or builtin");
  gv->add_option("file", gr.file, "grammar file");
  gv->add_option("--builtin", gr.builtin,
                 "builtin criterion grammar to validate");
  gv->add_option("--alpha", gr.alpha, "alpha for the ambiguity builtin")
      ->capture_default_str();
  gv->add_option("--mu-seed", gr.mu_seed, "mu seed for the multifacet builtin")
      ->capture_default_str();
  gv->add_flag("--print", gr.print, "dump the canonical grammar text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*t) return cmd_train(tr);
    if (*p) return cmd_probe(pr);
    if (*r) return cmd_run(rn);
    if (*re) return cmd_report(rp);
    if (*gv) return cmd_grammar_validate(gr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
