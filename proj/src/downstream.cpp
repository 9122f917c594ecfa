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

#include "kovec/downstream.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "kovec/optim.hpp"

namespace kovec {

namespace {

Mat<float> head_scores(Head& head, const Mat<float>& input) {
  Tape<float> tape;
  Mat<float> x = input;
  return head.logits(tape, tape.constant(std::move(x))).value();
}

std::vector<int> row_argmax(const Mat<float>& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    int best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c)
      if (scores(r, c) > scores(r, best)) best = static_cast<int>(c);
    out[static_cast<std::size_t>(r)] = best;
  }
  return out;
}

}  // namespace

PredictionScores ensemble_predict(Head& head, const ModalInputs& inputs,
                                  const FinetuneConfig& config) {
  std::array<float, 3> betas = config.effective_betas();
  PredictionScores out;
  const Mat<float>* mats[3] = {&inputs.phoneme, &inputs.word,
                                    &inputs.mixed};
  std::optional<Mat<float>>* slots[3] = {&out.phoneme, &out.word,
                                              &out.mixed};
  bool first = true;
  for (int i = 0; i < 3; ++i) {
    if (!config.modality_mask[i]) continue;
    Mat<float> z = head_scores(head, *mats[i]);
    *slots[i] = z;
    if (first) {
      out.ensemble = betas[i] * z;
      first = false;
    } else {
      out.ensemble += betas[i] * z;
    }
  }
  out.argmax = row_argmax(out.ensemble);
  return out;
}

ModalInputs precompute_inputs(const std::vector<std::string>& words,
                              TwinEncoder& encoder, const RuleTable& rules,
                              const MorphemeVocab& vocab,
                              const EmbeddingTable* external,
                              std::vector<bool>* external_flags) {
  if (words.empty()) throw EmptyInput("example has no words");
  const int d = encoder.config().model_dim;
  if (external && external->dim != d)
    throw DimMismatch("external embedding dim " +
                      std::to_string(external->dim) + " vs encoder dim " +
                      std::to_string(d));
  ModalInputs out;
  const Eigen::Index n = static_cast<Eigen::Index>(words.size());
  out.phoneme.resize(n, d);
  out.word.resize(n, d);
  out.mixed.resize(n, d);
  if (external_flags) external_flags->assign(words.size(), false);
  const float lambda = encoder.mixup_lambda();
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string& w = words[static_cast<std::size_t>(i)];
    Representation rp = encode_phonemes(rules.to_ipa(w), encoder);
    Representation rw = encode_word(w, encoder, vocab);
    Representation rm = mix(rp, rw, lambda);
    out.phoneme.row(i) = rp.vector.transpose();
    out.mixed.row(i) = rm.vector.transpose();
    int ext_row = external ? external->find(w) : -1;
    if (ext_row >= 0) {
      out.word.row(i) = external->vectors.row(ext_row);
      if (external_flags) (*external_flags)[static_cast<std::size_t>(i)] = true;
    } else {
      out.word.row(i) = rw.vector.transpose();
    }
  }
  return out;
}

PreparedDataset prepare_dataset(const Dataset& data, TwinEncoder& encoder,
                                const RuleTable& rules,
                                const MorphemeVocab& vocab,
                                const EmbeddingTable* external) {
  PreparedDataset out;
  out.reserve(data.examples.size());
  for (const LabeledExample& ex : data.examples) {
    PreparedExample prepared;
    prepared.inputs =
        precompute_inputs(ex.words, encoder, rules, vocab, external);
    prepared.labels = example_labels(ex);
    out.push_back(std::move(prepared));
  }
  return out;
}

Metrics metrics_from_predictions(const std::vector<std::vector<int>>& gold,
                                 const std::vector<std::vector<int>>& predicted,
                                 int num_classes) {
  if (gold.empty()) throw EmptyDataset("metrics: no examples");
  if (gold.size() != predicted.size())
    throw ShapeError("metrics: gold/prediction example counts differ");
  std::vector<long long> tp(static_cast<std::size_t>(num_classes), 0);
  std::vector<long long> fp(static_cast<std::size_t>(num_classes), 0);
  std::vector<long long> fn(static_cast<std::size_t>(num_classes), 0);
  long long correct = 0, total = 0;
  for (std::size_t e = 0; e < gold.size(); ++e) {
    if (gold[e].size() != predicted[e].size())
      throw ShapeError("prediction/label count mismatch (head kind vs task)");
    for (std::size_t i = 0; i < gold[e].size(); ++i) {
      int g = gold[e][i], p = predicted[e][i];
      ++total;
      if (g == p) {
        ++correct;
        ++tp[static_cast<std::size_t>(g)];
      } else {
        ++fn[static_cast<std::size_t>(g)];
        ++fp[static_cast<std::size_t>(p)];
      }
    }
  }
  Metrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  double f1_sum = 0.0;
  int f1_classes = 0;
  for (int c = 0; c < num_classes; ++c) {
    long long support = tp[c] + fp[c] + fn[c];
    if (support == 0) continue;  // absent from gold and prediction
    f1_sum += 2.0 * tp[c] / static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
    ++f1_classes;
  }
  m.macro_f1 = f1_classes > 0 ? f1_sum / f1_classes : 0.0;
  return m;
}

Metrics evaluate(const PreparedDataset& data, Head& head,
                 const FinetuneConfig& config) {
  if (data.empty()) throw EmptyDataset("evaluate: no examples");
  std::vector<std::vector<int>> gold, predicted;
  gold.reserve(data.size());
  predicted.reserve(data.size());
  for (const PreparedExample& ex : data) {
    gold.push_back(ex.labels);
    predicted.push_back(ensemble_predict(head, ex.inputs, config).argmax);
  }
  return metrics_from_predictions(gold, predicted, head.num_classes());
}

HeadTrainResult train_head(Head& head, const PreparedDataset& train,
                           const PreparedDataset& dev,
                           const FinetuneConfig& config) {
  config.validate();
  if (train.empty()) throw EmptyDataset("train_head: no training examples");
  AdamW<float> optimizer(AdamWConfig<float>{config.lr, 0.9f, 0.999f, 1e-8f,
                                            config.weight_decay});
  std::mt19937_64 shuffle_rng(sub_seed(config.seed, "finetune-shuffle"));
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  HeadTrainResult result;
  std::vector<Mat<float>> best_values = head.snapshot_values();
  double best_acc = -1.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      Tape<float> tape;
      Var<float> batch_loss;
      const float inv = 1.f / static_cast<float>(stop - start);
      for (std::size_t k = start; k < stop; ++k) {
        const PreparedExample& ex =
            train[static_cast<std::size_t>(order[k])];
        MultimodalLoss<float> loss =
            multimodal_loss(tape, head, ex.inputs, ex.labels, config);
        Var<float> scaled = scale(loss.total, inv);
        batch_loss = k == start ? scaled : add(batch_loss, scaled);
      }
      head.params().zero_grads();
      tape.backward(batch_loss);
      optimizer.step(head.params());
      loss_sum +=
          static_cast<double>(batch_loss.value()(0, 0)) * (stop - start);
    }
    result.epoch_train_loss.push_back(loss_sum /
                                      static_cast<double>(train.size()));
    if (!dev.empty()) {
      double acc = evaluate(dev, head, config).accuracy;
      result.epoch_dev_accuracy.push_back(acc);
      if (acc > best_acc) {
        best_acc = acc;
        best_values = head.snapshot_values();
        result.best_epoch = epoch;
      }
    }
  }
  if (!dev.empty()) {
    head.restore_values(best_values);
  } else {
    result.best_epoch = config.epochs - 1;
  }
  return result;
}

}  // namespace kovec
