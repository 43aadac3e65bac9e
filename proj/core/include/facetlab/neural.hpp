#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "facetlab/corpus.hpp"
#include "facetlab/embedding.hpp"
#include "facetlab/rng.hpp"

namespace facetlab {

// The five §4 architectures share one negative-sampling SGD loop and differ
// only in how the hidden vector and the output side are wired:
//   SKIP   s = in(w) . out(c)
//   SSKIP  s = in(w) . out(c, r)          (separate output block per offset)
//   CBOW   s = (in(l) + in(r)) . out(t)
//   CWIN   s = [in(l); in(r)] . out2(t)   (2d concatenation, zero if absent)
//   LBL    s = (cl*in(l) + cr*in(r)) . out(t) + b(t)
enum class ModelKind { kSkip, kSskip, kCbow, kCwin, kLbl };

ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

struct TrainConfig {
  ModelKind kind = ModelKind::kSkip;
  int dim = 100;
  int negatives = 10;
  int epochs = 20;
  double learning_rate = 0.0;  // <= 0 selects the kind default
  double subsample = 0.0;      // word2vec-style threshold; 0 disables
  uint64_t seed = 1;
  bool track_loss = true;

  // 0.025 for the skip-gram kinds, 0.05 for the windowed kinds.
  double resolved_learning_rate() const;
  void validate() const;
};

struct EmbeddingPair {
  ModelKind kind{};
  int32_t vocab = 0;
  int dim = 0;
  std::vector<double> input;             // vocab x dim
  std::vector<double> target;            // vocab x target_cols()
  std::vector<double> ctx_left, ctx_right;  // LBL position scalers (dim)
  std::vector<double> bias;              // LBL (vocab)
  std::vector<double> epoch_loss;        // mean event loss per epoch
  uint64_t total_events = 0;

  int target_cols() const {
    return (kind == ModelKind::kSskip || kind == ModelKind::kCwin) ? 2 * dim
                                                                   : dim;
  }
  const double* input_row(int32_t w) const { return input.data() + size_t(w) * dim; }
  const double* target_row(int32_t w) const {
    return target.data() + size_t(w) * target_cols();
  }
};

// One prediction event. Skip kinds predict `predicted` (a neighbor at
// `offset` in {-1,+1}) from `center`; windowed kinds predict `predicted`
// (the focus word) from `left`/`right` neighbors, -1 marking an absent side.
struct Event {
  int32_t predicted = -1;
  int32_t center = -1;
  int offset = 0;
  int32_t left = -1;
  int32_t right = -1;
};

// Model score of the event's positive pair, exact arithmetic. Throws on an
// event whose populated fields do not fit the model kind.
double score(const EmbeddingPair& p, const Event& ev);

// Negative-sampling loss with explicit negatives:
//   L = -log sigma(s+) - sum_j log sigma(-s_j)
double event_loss(const EmbeddingPair& p, const Event& ev,
                  const std::vector<int32_t>& negatives);

// Maximum relative deviation between the analytic gradient of event_loss and
// central finite differences over every parameter the event touches.
// Relative deviation uses max(|ga|, |gn|, 1e-6) in the denominator, so the
// all-saturated case (both gradients ~0) reports 0.
double gradient_check(const EmbeddingPair& p, const Event& ev,
                      const std::vector<int32_t>& negatives,
                      double epsilon = 1e-5);

// Unigram^power noise distribution with an alias table for O(1) draws.
class NoiseDistribution {
 public:
  NoiseDistribution(const Vocabulary& vocab, double power);
  static NoiseDistribution unigram(const Vocabulary& vocab) {
    return NoiseDistribution(vocab, 0.75);
  }
  int32_t sample(RngStream& rng) const {
    return static_cast<int32_t>(alias_.sample(rng));
  }
  const std::vector<double>& probabilities() const {
    return alias_.probabilities();
  }

 private:
  AliasTable alias_;
};

uint64_t events_per_epoch(ModelKind kind, const Corpus& corpus);

// SGD with the word2vec recipe: per-event linear decay of the learning rate
// down to 1e-4 of its initial value, k noise draws per event, updates applied
// in event order from a single RNG stream seeded by cfg.seed. Bitwise
// deterministic for a fixed corpus and config.
EmbeddingPair train(const Corpus& corpus, const TrainConfig& cfg);

// space is "input" or "target"; rows follow vocabulary id order.
EmbeddingSet export_vectors(const EmbeddingPair& pair, const Vocabulary& vocab,
                            std::string_view space);

}  // namespace facetlab
