// Copyright 2026 The kovec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Fine-tuning on frozen representations: phoneme, word and mixed input
// sequences feed one shared downstream head; the training loss is the
// alpha-weighted sum of the per-modality cross-entropies and inference
// ensembles the per-modality logits with beta weights.

#ifndef KOVEC_DOWNSTREAM_HPP_
#define KOVEC_DOWNSTREAM_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kovec/autodiff.hpp"
#include "kovec/dataset.hpp"
#include "kovec/embeddings.hpp"
#include "kovec/encoder.hpp"
#include "kovec/errors.hpp"
#include "kovec/g2p.hpp"
#include "kovec/tokenize.hpp"

namespace kovec {

enum class HeadKind { kCnn, kBiLstm };

// Modality order everywhere: 0 = phoneme, 1 = word, 2 = mixed.
struct FinetuneConfig {
  std::array<float, 3> alphas = {1.f, 1.f, 1.f};
  std::array<float, 3> betas = {1.f / 3.f, 1.f / 3.f, 1.f / 3.f};
  std::array<bool, 3> modality_mask = {true, true, true};
  HeadKind head = HeadKind::kCnn;
  int epochs = 10;
  float lr = 1e-3f;
  int batch_size = 32;
  float weight_decay = 0.f;
  std::uint64_t seed = 42;

  void validate() const {
    if (!modality_mask[0] && !modality_mask[1] && !modality_mask[2])
      throw ConfigError("at least one modality must be enabled");
    if (epochs < 1 || batch_size < 1)
      throw ConfigError("epochs and batch_size must be >= 1");
    float beta_sum = 0.f;
    for (int i = 0; i < 3; ++i)
      if (modality_mask[i]) beta_sum += betas[i];
    if (beta_sum <= 0.f)
      throw ConfigError("enabled betas must have a positive sum");
  }

  // Betas renormalized over the enabled modalities (disabled ones get 0).
  std::array<float, 3> effective_betas() const {
    validate();
    std::array<float, 3> out = {0.f, 0.f, 0.f};
    float sum = 0.f;
    for (int i = 0; i < 3; ++i)
      if (modality_mask[i]) sum += betas[i];
    for (int i = 0; i < 3; ++i)
      if (modality_mask[i]) out[i] = betas[i] / sum;
    return out;
  }
};

// Frozen per-word representation sequences for one example, n x d each.
template <typename S>
struct ModalInputsT {
  Mat<S> phoneme;
  Mat<S> word;
  Mat<S> mixed;
};
using ModalInputs = ModalInputsT<float>;

// The shared downstream model G. One parameter set produces the prediction
// scores of every modality.
//
// CNN: filter widths 3/4/5 with 100 maps each, max-over-time pooling, one
// linear layer to the class logits (1 x C). Inputs shorter than the widest
// filter are zero-padded.
// BiLSTM: one bidirectional layer, 256 units per direction, linear
// projection per token (n x C).
template <typename S>
class HeadT {
 public:
  static constexpr int kCnnWidths[3] = {3, 4, 5};
  static constexpr int kCnnMaps = 100;
  static constexpr int kLstmHidden = 256;

  // The size overrides exist for cheap finite-difference checks; production
  // code uses the defaults.
  HeadT(HeadKind kind, int input_dim, int num_classes, std::uint64_t seed,
        int cnn_maps = kCnnMaps, int lstm_hidden = kLstmHidden)
      : kind_(kind),
        input_dim_(input_dim),
        num_classes_(num_classes),
        cnn_maps_(cnn_maps),
        lstm_hidden_(lstm_hidden) {
    if (input_dim < 1 || num_classes < 1 || cnn_maps < 1 || lstm_hidden < 1)
      throw ConfigError("head dimensions must be positive");
    std::mt19937_64 rng(sub_seed(seed, "head-init"));
    if (kind_ == HeadKind::kCnn) {
      for (int w : kCnnWidths)
        for (int j = 0; j < w; ++j)
          init(rng, "cnn.w" + std::to_string(w) + "." + std::to_string(j),
               input_dim, cnn_maps_);
      for (int w : kCnnWidths)
        params_.create("cnn.b" + std::to_string(w), 1, cnn_maps_);
      init(rng, "out.w", 3 * cnn_maps_, num_classes);
      params_.create("out.b", 1, num_classes);
    } else {
      for (const char* dir : {"fwd", "bwd"}) {
        init(rng, std::string(dir) + ".w", input_dim, 4 * lstm_hidden_);
        init(rng, std::string(dir) + ".u", lstm_hidden_, 4 * lstm_hidden_);
        params_.create(std::string(dir) + ".b", 1, 4 * lstm_hidden_);
      }
      init(rng, "out.w", 2 * lstm_hidden_, num_classes);
      params_.create("out.b", 1, num_classes);
    }
  }

  HeadKind kind() const { return kind_; }
  int input_dim() const { return input_dim_; }
  int num_classes() const { return num_classes_; }
  int cnn_maps() const { return cnn_maps_; }
  int lstm_hidden() const { return lstm_hidden_; }
  ParamSet<S>& params() { return params_; }
  const ParamSet<S>& params() const { return params_; }

  // Prediction scores for one input sequence: 1 x C for the CNN,
  // n x C (per token) for the BiLSTM.
  Var<S> logits(Tape<S>& tape, Var<S> x) {
    if (x.cols() != input_dim_)
      throw ShapeError("head expects " + std::to_string(input_dim_) +
                       " input columns, got " + std::to_string(x.cols()));
    if (x.rows() < 1) throw EmptyInput("head input has no rows");
    return kind_ == HeadKind::kCnn ? cnn_logits(tape, x)
                                   : bilstm_logits(tape, x);
  }

  // Lets train_head snapshot/restore the best-dev parameters.
  std::vector<Mat<S>> snapshot_values() const {
    std::vector<Mat<S>> out;
    for (const auto& p : params_.items()) out.push_back(p->value);
    return out;
  }
  void restore_values(const std::vector<Mat<S>>& values) {
    if (values.size() != params_.items().size())
      throw ConfigError("snapshot size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
      params_.items()[i]->value = values[i];
  }

 private:
  void init(std::mt19937_64& rng, const std::string& name, int rows,
            int cols) {
    Mat<S> m(rows, cols);
    xavier_fill(m, rng);
    params_.add(name, std::move(m));
  }

  Var<S> cnn_logits(Tape<S>& tape, Var<S> x) {
    const int widest = kCnnWidths[2];
    if (x.rows() < widest) {
      Var<S> pad = tape.constant(
          Mat<S>::Zero(widest - x.rows(), input_dim_));
      x = concat_rows<S>({x, pad});
    }
    const Eigen::Index n = x.rows();
    std::vector<Var<S>> features;
    for (int w : kCnnWidths) {
      const Eigen::Index windows = n - w + 1;
      Var<S> acc;
      for (int j = 0; j < w; ++j) {
        Var<S> slice = narrow_rows(x, j, windows);
        Var<S> term = matmul(
            slice, tape.leaf(params_.at("cnn.w" + std::to_string(w) + "." +
                                        std::to_string(j))));
        acc = j == 0 ? term : add(acc, term);
      }
      acc = add_rowvec(acc, tape.leaf(params_.at("cnn.b" + std::to_string(w))));
      features.push_back(max_rows(relu(acc)));
    }
    Var<S> pooled = concat_cols(features);
    return add_rowvec(matmul(pooled, tape.leaf(params_.at("out.w"))),
                      tape.leaf(params_.at("out.b")));
  }

  Var<S> lstm_direction(Tape<S>& tape, Var<S> x, const std::string& dir,
                        std::vector<Var<S>>& states) {
    const Eigen::Index n = x.rows();
    const int H = lstm_hidden_;
    Var<S> w = tape.leaf(params_.at(dir + ".w"));
    Var<S> u = tape.leaf(params_.at(dir + ".u"));
    Var<S> b = tape.leaf(params_.at(dir + ".b"));
    Var<S> h = tape.constant(Mat<S>::Zero(1, H));
    Var<S> c = tape.constant(Mat<S>::Zero(1, H));
    states.assign(static_cast<std::size_t>(n), Var<S>{});
    for (Eigen::Index step = 0; step < n; ++step) {
      Eigen::Index at = dir == "fwd" ? step : n - 1 - step;
      Var<S> xt = narrow_rows(x, at, 1);
      Var<S> z = add(add(matmul(xt, w), matmul(h, u)), b);
      Var<S> i = sigmoid(narrow_cols(z, 0, H));
      Var<S> f = sigmoid(narrow_cols(z, H, H));
      Var<S> g = tanh(narrow_cols(z, 2 * H, H));
      Var<S> o = sigmoid(narrow_cols(z, 3 * H, H));
      c = add(hadamard(f, c), hadamard(i, g));
      h = hadamard(o, tanh(c));
      states[static_cast<std::size_t>(at)] = h;
    }
    return h;
  }

  Var<S> bilstm_logits(Tape<S>& tape, Var<S> x) {
    std::vector<Var<S>> fwd, bwd;
    lstm_direction(tape, x, "fwd", fwd);
    lstm_direction(tape, x, "bwd", bwd);
    std::vector<Var<S>> rows;
    rows.reserve(fwd.size());
    for (std::size_t t = 0; t < fwd.size(); ++t)
      rows.push_back(concat_cols<S>({fwd[t], bwd[t]}));
    Var<S> states = concat_rows(rows);
    return add_rowvec(matmul(states, tape.leaf(params_.at("out.w"))),
                      tape.leaf(params_.at("out.b")));
  }

  HeadKind kind_;
  int input_dim_;
  int num_classes_;
  int cnn_maps_;
  int lstm_hidden_;
  ParamSet<S> params_;
};

using Head = HeadT<float>;

// Labels of one example as the loss sees them: a single class id for
// classification, one tag id per token for tagging.
inline std::vector<int> example_labels(const LabeledExample& ex) {
  if (!ex.tags.empty()) return ex.tags;
  return {ex.label};
}

template <typename S>
struct MultimodalLoss {
  Var<S> total;
  // Raw cross-entropy values per modality (phoneme, word, mixed);
  // disabled modalities report 0.
  std::array<double, 3> components = {0.0, 0.0, 0.0};
};

// L = a1 * l(G(p), y) + a2 * l(G(e), y) + a3 * l(G(m), y) over the enabled
// modalities.
template <typename S>
MultimodalLoss<S> multimodal_loss(Tape<S>& tape, HeadT<S>& head,
                                  const ModalInputsT<S>& inputs,
                                  const std::vector<int>& labels,
                                  const FinetuneConfig& config) {
  config.validate();
  MultimodalLoss<S> out;
  const Mat<S>* mats[3] = {&inputs.phoneme, &inputs.word, &inputs.mixed};
  bool first = true;
  for (int i = 0; i < 3; ++i) {
    if (!config.modality_mask[i]) continue;
    Var<S> term =
        cross_entropy(head.logits(tape, tape.constant(*mats[i])), labels);
    out.components[static_cast<std::size_t>(i)] =
        static_cast<double>(term.value()(0, 0));
    Var<S> weighted = scale(term, static_cast<S>(config.alphas[i]));
    out.total = first ? weighted : add(out.total, weighted);
    first = false;
  }
  return out;
}

// Per-modality prediction scores and their beta-weighted ensemble.
struct PredictionScores {
  std::optional<Mat<float>> phoneme, word, mixed;
  Mat<float> ensemble;
  std::vector<int> argmax;  // per row; one entry for classification
};

PredictionScores ensemble_predict(Head& head, const ModalInputs& inputs,
                                  const FinetuneConfig& config);

// Precomputed frozen inputs plus labels for a whole dataset.
struct PreparedExample {
  ModalInputs inputs;
  std::vector<int> labels;
};
using PreparedDataset = std::vector<PreparedExample>;

// Runs the frozen encoders over every example. When `external` is given the
// word-modality vectors are replaced by table rows where the word is
// present (encoder output is the fallback); `external_flags` records which
// words came from the table. Phoneme and mixed sequences are unaffected.
ModalInputs precompute_inputs(const std::vector<std::string>& words,
                              TwinEncoder& encoder, const RuleTable& rules,
                              const MorphemeVocab& vocab,
                              const EmbeddingTable* external = nullptr,
                              std::vector<bool>* external_flags = nullptr);

PreparedDataset prepare_dataset(const Dataset& data, TwinEncoder& encoder,
                                const RuleTable& rules,
                                const MorphemeVocab& vocab,
                                const EmbeddingTable* external = nullptr);

struct Metrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

// Exact-match accuracy (per token for tagging) and unweighted mean of
// per-class F1; classes absent from both gold and prediction are skipped.
Metrics metrics_from_predictions(const std::vector<std::vector<int>>& gold,
                                 const std::vector<std::vector<int>>& predicted,
                                 int num_classes);

Metrics evaluate(const PreparedDataset& data, Head& head,
                 const FinetuneConfig& config);

struct HeadTrainResult {
  std::vector<double> epoch_train_loss;
  std::vector<double> epoch_dev_accuracy;
  int best_epoch = -1;  // epoch whose parameters the head now carries
};

// AdamW on the multimodal loss over shuffled mini-batches; keeps the
// best-dev-accuracy parameters. Deterministic for a fixed seed.
HeadTrainResult train_head(Head& head, const PreparedDataset& train,
                           const PreparedDataset& dev,
                           const FinetuneConfig& config);

}  // namespace kovec

#endif  // KOVEC_DOWNSTREAM_HPP_
