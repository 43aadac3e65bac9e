#include "facetlab/neural.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "facetlab/util.hpp"

namespace facetlab {

ModelKind parse_model_kind(std::string_view name) {
  if (name == "skip") return ModelKind::kSkip;
  if (name == "sskip") return ModelKind::kSskip;
  if (name == "cbow") return ModelKind::kCbow;
  if (name == "cwin") return ModelKind::kCwin;
  if (name == "lbl") return ModelKind::kLbl;
  throw Error("unknown model kind: '" + std::string(name) +
              "' (expected skip|sskip|cbow|cwin|lbl)");
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSkip: return "skip";
    case ModelKind::kSskip: return "sskip";
    case ModelKind::kCbow: return "cbow";
    case ModelKind::kCwin: return "cwin";
    case ModelKind::kLbl: return "lbl";
  }
  return "?";
}

double TrainConfig::resolved_learning_rate() const {
  if (learning_rate > 0.0) return learning_rate;
  return (kind == ModelKind::kSkip || kind == ModelKind::kSskip) ? 0.025
                                                                 : 0.05;
}

void TrainConfig::validate() const {
  if (dim <= 0) throw Error("TrainConfig: dim must be positive");
  if (negatives < 0) throw Error("TrainConfig: negatives must be >= 0");
  // zero epochs = initialization only, useful for inspecting the init
  if (epochs < 0) throw Error("TrainConfig: epochs must be >= 0");
  if (learning_rate < 0.0)
    throw Error("TrainConfig: learning rate must be >= 0");
  if (subsample < 0.0) throw Error("TrainConfig: subsample must be >= 0");
}

namespace {

inline double vdot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void vaxpy(double* y, double a, const double* x, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

inline double sigmoid_exact(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

inline double log_sigmoid_exact(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Precomputed sigmoid over [-6, 6], word2vec style: saturated scores clamp
// to 0/1 so their updates vanish. Training uses this; the exact-math paths
// (score, event_loss, gradient_check) do not.
class SigmoidTable {
 public:
  static const SigmoidTable& get() {
    static SigmoidTable t;
    return t;
  }
  double sigmoid(double x) const {
    if (x >= kMax) return 1.0;
    if (x <= -kMax) return 0.0;
    return sig_[index(x)];
  }
  double log_sigmoid(double x) const {
    if (x >= kMax) return top_;
    if (x <= -kMax) return x;  // log sigma(x) -> x as x -> -inf
    return logsig_[index(x)];
  }

 private:
  static constexpr int kBins = 4096;
  static constexpr double kMax = 6.0;
  std::vector<double> sig_, logsig_;
  double top_;

  SigmoidTable() : sig_(kBins), logsig_(kBins) {
    for (int i = 0; i < kBins; ++i) {
      double x = ((i + 0.5) / kBins) * (2.0 * kMax) - kMax;  // bin center
      sig_[i] = sigmoid_exact(x);
      logsig_[i] = log_sigmoid_exact(x);
    }
    top_ = log_sigmoid_exact(kMax);
  }
  static int index(double x) {
    int i = static_cast<int>((x + kMax) * (kBins / (2.0 * kMax)));
    return std::clamp(i, 0, kBins - 1);
  }
};

void require_event(bool ok, const char* what) {
  if (!ok) throw Error(std::string("event shape mismatch: ") + what);
}

void check_word(int32_t w, int32_t vocab, const char* what) {
  if (w < 0 || w >= vocab)
    throw Error(std::string("event word id out of range: ") + what);
}

// Materializes the hidden vector and the output-column offset of an event.
struct Hidden {
  std::vector<double> h;
  int block = 0;  // column offset into target rows (SSKIP halves)
};

Hidden hidden_of(const EmbeddingPair& p, const Event& ev) {
  const int d = p.dim;
  auto in = [&](int32_t w) { return p.input.data() + size_t(w) * d; };
  Hidden out;
  switch (p.kind) {
    case ModelKind::kSkip:
    case ModelKind::kSskip:
      require_event(ev.center >= 0 && ev.predicted >= 0,
                    "skip kinds need center and predicted");
      check_word(ev.center, p.vocab, "center");
      check_word(ev.predicted, p.vocab, "predicted");
      if (p.kind == ModelKind::kSskip) {
        require_event(ev.offset == -1 || ev.offset == 1,
                      "sskip needs offset -1 or +1");
        out.block = ev.offset == 1 ? d : 0;
      }
      out.h.assign(in(ev.center), in(ev.center) + d);
      return out;
    case ModelKind::kCbow:
    case ModelKind::kLbl: {
      require_event(ev.predicted >= 0 && (ev.left >= 0 || ev.right >= 0),
                    "windowed kinds need predicted and a neighbor");
      check_word(ev.predicted, p.vocab, "predicted");
      out.h.assign(d, 0.0);
      if (ev.left >= 0) {
        check_word(ev.left, p.vocab, "left");
        const double* x = in(ev.left);
        for (int i = 0; i < d; ++i)
          out.h[i] += p.kind == ModelKind::kLbl ? p.ctx_left[i] * x[i] : x[i];
      }
      if (ev.right >= 0) {
        check_word(ev.right, p.vocab, "right");
        const double* x = in(ev.right);
        for (int i = 0; i < d; ++i)
          out.h[i] += p.kind == ModelKind::kLbl ? p.ctx_right[i] * x[i] : x[i];
      }
      return out;
    }
    case ModelKind::kCwin: {
      require_event(ev.predicted >= 0 && (ev.left >= 0 || ev.right >= 0),
                    "cwin needs predicted and a neighbor");
      check_word(ev.predicted, p.vocab, "predicted");
      out.h.assign(2 * size_t(d), 0.0);  // absent side stays a zero block
      if (ev.left >= 0) {
        check_word(ev.left, p.vocab, "left");
        std::copy_n(in(ev.left), d, out.h.begin());
      }
      if (ev.right >= 0) {
        check_word(ev.right, p.vocab, "right");
        std::copy_n(in(ev.right), d, out.h.begin() + d);
      }
      return out;
    }
  }
  throw Error("unreachable model kind");
}

double target_score(const EmbeddingPair& p, const Hidden& hid, int32_t word) {
  double s = vdot(hid.h.data(), p.target_row(word) + hid.block,
                  static_cast<int>(hid.h.size()));
  if (p.kind == ModelKind::kLbl) s += p.bias[word];
  return s;
}

enum Component { kInput = 0, kTarget = 1, kCtxLeft = 2, kCtxRight = 3,
                 kBias = 4 };

using GradMap = std::map<std::pair<int, int64_t>, double>;

GradMap analytic_gradient(const EmbeddingPair& p, const Event& ev,
                          const std::vector<int32_t>& negatives) {
  Hidden hid = hidden_of(p, ev);
  const int d = p.dim;
  const int hw = static_cast<int>(hid.h.size());
  const int tc = p.target_cols();
  GradMap g;
  auto add = [&](int comp, int64_t idx, double v) { g[{comp, idx}] += v; };

  std::vector<double> dh(hw, 0.0);
  auto one_target = [&](int32_t word, double label) {
    check_word(word, p.vocab, "negative");
    const double* tr = p.target_row(word) + hid.block;
    double q = sigmoid_exact(target_score(p, hid, word)) - label;  // dL/ds
    for (int i = 0; i < hw; ++i)
      add(kTarget, int64_t(word) * tc + hid.block + i, q * hid.h[i]);
    for (int i = 0; i < hw; ++i) dh[i] += q * tr[i];
    if (p.kind == ModelKind::kLbl) add(kBias, word, q);
  };
  one_target(ev.predicted, 1.0);
  for (int32_t w : negatives) one_target(w, 0.0);

  auto in = [&](int32_t w) { return p.input.data() + size_t(w) * d; };
  switch (p.kind) {
    case ModelKind::kSkip:
    case ModelKind::kSskip:
      for (int i = 0; i < d; ++i)
        add(kInput, int64_t(ev.center) * d + i, dh[i]);
      break;
    case ModelKind::kCbow:
      for (int32_t side : {ev.left, ev.right})
        if (side >= 0)
          for (int i = 0; i < d; ++i)
            add(kInput, int64_t(side) * d + i, dh[i]);
      break;
    case ModelKind::kCwin:
      if (ev.left >= 0)
        for (int i = 0; i < d; ++i)
          add(kInput, int64_t(ev.left) * d + i, dh[i]);
      if (ev.right >= 0)
        for (int i = 0; i < d; ++i)
          add(kInput, int64_t(ev.right) * d + i, dh[d + i]);
      break;
    case ModelKind::kLbl:
      if (ev.left >= 0)
        for (int i = 0; i < d; ++i) {
          add(kInput, int64_t(ev.left) * d + i, p.ctx_left[i] * dh[i]);
          add(kCtxLeft, i, in(ev.left)[i] * dh[i]);
        }
      if (ev.right >= 0)
        for (int i = 0; i < d; ++i) {
          add(kInput, int64_t(ev.right) * d + i, p.ctx_right[i] * dh[i]);
          add(kCtxRight, i, in(ev.right)[i] * dh[i]);
        }
      break;
  }
  return g;
}

double* component_ptr(EmbeddingPair& p, int comp, int64_t idx) {
  switch (comp) {
    case kInput: return &p.input.at(idx);
    case kTarget: return &p.target.at(idx);
    case kCtxLeft: return &p.ctx_left.at(idx);
    case kCtxRight: return &p.ctx_right.at(idx);
    case kBias: return &p.bias.at(idx);
  }
  throw Error("bad component");
}

}  // namespace

double score(const EmbeddingPair& p, const Event& ev) {
  Hidden hid = hidden_of(p, ev);
  return target_score(p, hid, ev.predicted);
}

double event_loss(const EmbeddingPair& p, const Event& ev,
                  const std::vector<int32_t>& negatives) {
  Hidden hid = hidden_of(p, ev);
  double loss = -log_sigmoid_exact(target_score(p, hid, ev.predicted));
  for (int32_t w : negatives) {
    check_word(w, p.vocab, "negative");
    loss += -log_sigmoid_exact(-target_score(p, hid, w));
  }
  return loss;
}

double gradient_check(const EmbeddingPair& p, const Event& ev,
                      const std::vector<int32_t>& negatives, double epsilon) {
  GradMap ga = analytic_gradient(p, ev, negatives);
  EmbeddingPair work = p;
  double worst = 0.0;
  for (const auto& [key, grad_a] : ga) {
    double* slot = component_ptr(work, key.first, key.second);
    const double orig = *slot;
    *slot = orig + epsilon;
    double up = event_loss(work, ev, negatives);
    *slot = orig - epsilon;
    double down = event_loss(work, ev, negatives);
    *slot = orig;
    double grad_n = (up - down) / (2.0 * epsilon);
    double denom = std::max({std::fabs(grad_a), std::fabs(grad_n), 1e-6});
    worst = std::max(worst, std::fabs(grad_a - grad_n) / denom);
  }
  return worst;
}

NoiseDistribution::NoiseDistribution(const Vocabulary& vocab, double power)
    : alias_([&] {
        std::vector<double> w(vocab.size());
        for (int32_t i = 0; i < vocab.size(); ++i)
          w[i] = std::pow(static_cast<double>(vocab.count(i)), power);
        return w;
      }()) {}

uint64_t events_per_epoch(ModelKind kind, const Corpus& corpus) {
  uint64_t n = 0;
  bool skip_kind = kind == ModelKind::kSkip || kind == ModelKind::kSskip;
  for (const auto& s : corpus.sentences) {
    if (s.size() < 2) continue;
    n += skip_kind ? 2 * (s.size() - 1) : s.size();
  }
  return n;
}

static void check_finite(const EmbeddingPair& p, int epoch, double lr0) {
  auto bad = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return true;
    return false;
  };
  if (bad(p.input) || bad(p.target) || bad(p.ctx_left) || bad(p.ctx_right) ||
      bad(p.bias))
    throw Error("training diverged: non-finite parameters after epoch " +
                std::to_string(epoch + 1) + " (model " +
                std::string(to_string(p.kind)) + ", initial learning rate " +
                format_double(lr0) + "); try a lower learning rate");
}

EmbeddingPair train(const Corpus& corpus, const TrainConfig& cfg) {
  cfg.validate();
  const int32_t V = corpus.vocab.size();
  if (V == 0) throw Error("train: empty corpus");

  EmbeddingPair p;
  p.kind = cfg.kind;
  p.vocab = V;
  p.dim = cfg.dim;
  const int d = cfg.dim;
  const int tc = p.target_cols();
  const bool lbl = cfg.kind == ModelKind::kLbl;
  const bool skip_kind =
      cfg.kind == ModelKind::kSkip || cfg.kind == ModelKind::kSskip;

  RngStream rng(cfg.seed);
  p.input.resize(size_t(V) * d);
  for (double& x : p.input) x = (uniform_double(rng) - 0.5) / d;
  p.target.assign(size_t(V) * tc, 0.0);
  if (lbl) {
    p.ctx_left.assign(d, 1.0);
    p.ctx_right.assign(d, 1.0);
    p.bias.assign(V, 0.0);
  }

  NoiseDistribution noise = NoiseDistribution::unigram(corpus.vocab);
  const SigmoidTable& sig = SigmoidTable::get();
  const uint64_t per_epoch = events_per_epoch(cfg.kind, corpus);
  const uint64_t total = per_epoch * uint64_t(cfg.epochs);
  const double lr0 = cfg.resolved_learning_rate();
  const int k = cfg.negatives;
  const double inv_total = total ? 1.0 / static_cast<double>(total) : 0.0;
  const double all_tokens = static_cast<double>(corpus.vocab.total_tokens());

  double* const pin = p.input.data();
  double* const ptar = p.target.data();
  std::vector<double> hbuf(tc), hg(tc);
  std::vector<int32_t> kept;
  uint64_t t = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    uint64_t loss_n = 0;
    for (const auto& sent_full : corpus.sentences) {
      const std::vector<int32_t>* view = &sent_full;
      if (cfg.subsample > 0.0) {
        kept.clear();
        for (int32_t w : sent_full) {
          double f = static_cast<double>(corpus.vocab.count(w)) / all_tokens;
          double keep = (std::sqrt(f / cfg.subsample) + 1.0) *
                        (cfg.subsample / f);
          if (keep >= 1.0 || uniform_double(rng) < keep) kept.push_back(w);
        }
        view = &kept;
      }
      const auto& s = *view;
      const size_t len = s.size();
      if (len < 2) continue;

      for (size_t pos = 0; pos < len; ++pos) {
        if (skip_kind) {
          double* inrow = pin + size_t(s[pos]) * d;
          for (int off = -1; off <= 1; off += 2) {
            if (off < 0 ? pos == 0 : pos + 1 >= len) continue;
            const int32_t predicted = s[pos + off];
            const int block =
                (cfg.kind == ModelKind::kSskip && off == 1) ? d : 0;
            const double lr = lr0 * (1.0 - (1.0 - 1e-4) *
                                              (static_cast<double>(t) *
                                               inv_total));
            ++t;
            std::fill_n(hg.data(), d, 0.0);
            double ev_loss = 0.0;
            for (int j = 0; j <= k; ++j) {
              const int32_t word = j == 0 ? predicted : noise.sample(rng);
              double* tr = ptar + size_t(word) * tc + block;
              const double sc = vdot(inrow, tr, d);
              if (cfg.track_loss)
                ev_loss -= j == 0 ? sig.log_sigmoid(sc) : sig.log_sigmoid(-sc);
              const double g = lr * ((j == 0 ? 1.0 : 0.0) - sig.sigmoid(sc));
              vaxpy(hg.data(), g, tr, d);
              vaxpy(tr, g, inrow, d);
            }
            vaxpy(inrow, 1.0, hg.data(), d);
            loss_sum += ev_loss;
            ++loss_n;
          }
        } else {
          const int32_t wl = pos > 0 ? s[pos - 1] : -1;
          const int32_t wr = pos + 1 < len ? s[pos + 1] : -1;
          const int32_t predicted = s[pos];
          const int hw = cfg.kind == ModelKind::kCwin ? 2 * d : d;
          double* h = hbuf.data();
          if (cfg.kind == ModelKind::kCwin) {
            std::fill_n(h, 2 * d, 0.0);
            if (wl >= 0) std::copy_n(pin + size_t(wl) * d, d, h);
            if (wr >= 0) std::copy_n(pin + size_t(wr) * d, d, h + d);
          } else if (lbl) {
            std::fill_n(h, d, 0.0);
            if (wl >= 0) {
              const double* x = pin + size_t(wl) * d;
              for (int i = 0; i < d; ++i) h[i] += p.ctx_left[i] * x[i];
            }
            if (wr >= 0) {
              const double* x = pin + size_t(wr) * d;
              for (int i = 0; i < d; ++i) h[i] += p.ctx_right[i] * x[i];
            }
          } else {  // CBOW
            std::fill_n(h, d, 0.0);
            if (wl >= 0) vaxpy(h, 1.0, pin + size_t(wl) * d, d);
            if (wr >= 0) vaxpy(h, 1.0, pin + size_t(wr) * d, d);
          }

          const double lr = lr0 * (1.0 - (1.0 - 1e-4) *
                                            (static_cast<double>(t) *
                                             inv_total));
          ++t;
          std::fill_n(hg.data(), hw, 0.0);
          double ev_loss = 0.0;
          for (int j = 0; j <= k; ++j) {
            const int32_t word = j == 0 ? predicted : noise.sample(rng);
            double* tr = ptar + size_t(word) * tc;
            double sc = vdot(h, tr, hw);
            if (lbl) sc += p.bias[word];
            if (cfg.track_loss)
              ev_loss -= j == 0 ? sig.log_sigmoid(sc) : sig.log_sigmoid(-sc);
            const double g = lr * ((j == 0 ? 1.0 : 0.0) - sig.sigmoid(sc));
            vaxpy(hg.data(), g, tr, hw);
            vaxpy(tr, g, h, hw);
            if (lbl) p.bias[word] += g;
          }
          if (cfg.kind == ModelKind::kCwin) {
            if (wl >= 0) vaxpy(pin + size_t(wl) * d, 1.0, hg.data(), d);
            if (wr >= 0) vaxpy(pin + size_t(wr) * d, 1.0, hg.data() + d, d);
          } else if (lbl) {
            // position scalers and inputs both read pre-update values
            if (wl >= 0) {
              double* iw = pin + size_t(wl) * d;
              for (int i = 0; i < d; ++i) {
                const double di = p.ctx_left[i] * hg[i];
                const double dc = iw[i] * hg[i];
                iw[i] += di;
                p.ctx_left[i] += dc;
              }
            }
            if (wr >= 0) {
              double* iw = pin + size_t(wr) * d;
              for (int i = 0; i < d; ++i) {
                const double di = p.ctx_right[i] * hg[i];
                const double dc = iw[i] * hg[i];
                iw[i] += di;
                p.ctx_right[i] += dc;
              }
            }
          } else {
            if (wl >= 0) vaxpy(pin + size_t(wl) * d, 1.0, hg.data(), d);
            if (wr >= 0) vaxpy(pin + size_t(wr) * d, 1.0, hg.data(), d);
          }
          loss_sum += ev_loss;
          ++loss_n;
        }
      }
    }
    p.epoch_loss.push_back(loss_n ? loss_sum / static_cast<double>(loss_n)
                                  : 0.0);
    check_finite(p, epoch, lr0);
  }
  p.total_events = t;
  return p;
}

EmbeddingSet export_vectors(const EmbeddingPair& pair, const Vocabulary& vocab,
                            std::string_view space) {
  if (vocab.size() != pair.vocab)
    throw Error("export_vectors: vocabulary size does not match model");
  EmbeddingSet e;
  e.kind = std::string(to_string(pair.kind));
  e.space = std::string(space);
  e.tokens = vocab.tokens();
  if (space == "input") {
    e.dim = static_cast<size_t>(pair.dim);
    e.data = pair.input;
  } else if (space == "target") {
    e.dim = static_cast<size_t>(pair.target_cols());
    e.data = pair.target;
  } else {
    throw Error("export_vectors: space must be 'input' or 'target'");
  }
  return e;
}

}  // namespace facetlab
