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
// Twin sequence encoders: one over phoneme symbols, one over mixed
// subcharacter+morpheme tokens. Each is a stack of post-norm self-attention
// layers with learned positional embeddings, pooled by masked mean into a
// single vector. The two outputs interpolate into the mixed representation.

#ifndef KOVEC_ENCODER_HPP_
#define KOVEC_ENCODER_HPP_

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "kovec/autodiff.hpp"
#include "kovec/errors.hpp"
#include "kovec/g2p.hpp"
#include "kovec/tokenize.hpp"

namespace kovec {

struct EncoderConfig {
  int num_layers = 2;
  int model_dim = 300;
  int num_heads = 6;
  int ffn_dim = 600;
  int max_seq_len = 64;
  float dropout = 0.1f;

  void validate() const {
    if (num_layers < 1 || model_dim < 1 || num_heads < 1 || ffn_dim < 1 ||
        max_seq_len < 1)
      throw ConfigError("encoder dimensions must be positive");
    if (model_dim % num_heads != 0)
      throw ConfigError("model_dim " + std::to_string(model_dim) +
                        " not divisible by num_heads " +
                        std::to_string(num_heads));
    if (dropout < 0.f || dropout >= 1.f)
      throw ConfigError("dropout must be in [0, 1)");
  }
};

enum class Modality { kPhoneme, kWord, kMixed };

struct Representation {
  Eigen::VectorXf vector;
  Modality modality = Modality::kMixed;
};

enum class EncoderSide { kPhoneme, kWord };

// Both encoders plus the shared symbol-embedding table and the fixed mixup
// ratio. Parameters are owned by one ParamSet so the optimizer and the
// checkpoint writer see a single flat list.
template <typename S>
class TwinEncoderT {
 public:
  TwinEncoderT(EncoderConfig config, SymbolTable symbols, float mixup_lambda,
               std::uint64_t seed)
      : config_(config), symbols_(std::move(symbols)), lambda_(mixup_lambda) {
    config_.validate();
    if (lambda_ < 0.f || lambda_ > 1.f)
      throw ConfigError("mixup lambda must be in [0, 1]");
    std::mt19937_64 rng(sub_seed(seed, "encoder-init"));
    const int d = config_.model_dim;
    embeddings_ = &init(rng, "embeddings", symbols_.size(), d);
    build_side(rng, "fp");
    build_side(rng, "fw");
  }

  const EncoderConfig& config() const { return config_; }
  const SymbolTable& symbols() const { return symbols_; }
  float mixup_lambda() const { return lambda_; }
  ParamSet<S>& params() { return params_; }
  const ParamSet<S>& params() const { return params_; }

  // Encodes a symbol-id sequence into a 1 x d row on the tape. Training mode
  // applies dropout from `rng`. Sequences longer than max_seq_len are
  // truncated with a warning on stderr; empty input throws EmptyInput.
  Var<S> encode(Tape<S>& tape, const std::vector<int>& ids, EncoderSide side,
                bool train = false, std::mt19937_64* rng = nullptr) {
    if (ids.empty())
      throw EmptyInput("encoder input is empty");
    std::vector<int> clipped = ids;
    if (static_cast<int>(clipped.size()) > config_.max_seq_len) {
      std::cerr << "kovec: warning: truncating sequence of length "
                << clipped.size() << " to " << config_.max_seq_len << "\n";
      clipped.resize(config_.max_seq_len);
    }
    const std::string prefix = side == EncoderSide::kPhoneme ? "fp" : "fw";
    const int n = static_cast<int>(clipped.size());
    const int d = config_.model_dim;
    const int heads = config_.num_heads;
    const int dh = d / heads;
    const S inv_sqrt_dh = S(1) / std::sqrt(static_cast<S>(dh));

    Var<S> x = embedding_lookup(tape, *embeddings_, clipped);
    Var<S> pos = narrow_rows(tape.leaf(params_.at(prefix + ".pos")), 0, n);
    x = add(x, pos);

    for (int layer = 0; layer < config_.num_layers; ++layer) {
      const std::string lp = prefix + ".l" + std::to_string(layer);
      auto w = [&](const std::string& leafname) {
        return tape.leaf(params_.at(lp + "." + leafname));
      };
      Var<S> q = add_rowvec(matmul(x, w("wq")), w("bq"));
      Var<S> k = add_rowvec(matmul(x, w("wk")), w("bk"));
      Var<S> v = add_rowvec(matmul(x, w("wv")), w("bv"));
      std::vector<Var<S>> head_outputs;
      head_outputs.reserve(heads);
      for (int h = 0; h < heads; ++h) {
        Var<S> qh = narrow_cols(q, h * dh, dh);
        Var<S> kh = narrow_cols(k, h * dh, dh);
        Var<S> vh = narrow_cols(v, h * dh, dh);
        Var<S> attn = softmax_rows(scale(matmul_nt(qh, kh), inv_sqrt_dh));
        head_outputs.push_back(matmul(attn, vh));
      }
      Var<S> ctx = add_rowvec(matmul(concat_cols(head_outputs), w("wo")),
                              w("bo"));
      if (train && config_.dropout > 0.f && rng)
        ctx = dropout(ctx, static_cast<S>(config_.dropout), *rng);
      x = layer_norm_rows(add(x, ctx), w("ln1.g"), w("ln1.b"));

      Var<S> ffn = add_rowvec(
          matmul(relu(add_rowvec(matmul(x, w("w1")), w("b1"))), w("w2")),
          w("b2"));
      if (train && config_.dropout > 0.f && rng)
        ffn = dropout(ffn, static_cast<S>(config_.dropout), *rng);
      x = layer_norm_rows(add(x, ffn), w("ln2.g"), w("ln2.b"));
    }
    return mean_pool_rows(x);
  }

  // lambda * phoneme + (1 - lambda) * word, as tape nodes.
  Var<S> mix_on_tape(Var<S> phoneme_rep, Var<S> word_rep) const {
    return add(scale(phoneme_rep, static_cast<S>(lambda_)),
               scale(word_rep, S(1) - static_cast<S>(lambda_)));
  }

 private:
  Parameter<S>& init(std::mt19937_64& rng, const std::string& name, int rows,
                     int cols) {
    Mat<S> m(rows, cols);
    xavier_fill(m, rng);
    return params_.add(name, std::move(m));
  }

  void build_side(std::mt19937_64& rng, const std::string& prefix) {
    const int d = config_.model_dim;
    init(rng, prefix + ".pos", config_.max_seq_len, d);
    for (int layer = 0; layer < config_.num_layers; ++layer) {
      const std::string lp = prefix + ".l" + std::to_string(layer);
      for (const char* w : {"wq", "wk", "wv", "wo"}) init(rng, lp + "." + w, d, d);
      for (const char* b : {"bq", "bk", "bv", "bo"})
        params_.create(lp + "." + b, 1, d);
      init(rng, lp + ".w1", d, config_.ffn_dim);
      params_.create(lp + ".b1", 1, config_.ffn_dim);
      init(rng, lp + ".w2", config_.ffn_dim, d);
      params_.create(lp + ".b2", 1, d);
      for (const char* g : {"ln1.g", "ln2.g"})
        params_.add(lp + "." + g, Mat<S>::Ones(1, d));
      for (const char* b : {"ln1.b", "ln2.b"})
        params_.create(lp + "." + b, 1, d);
    }
  }

  EncoderConfig config_;
  SymbolTable symbols_;
  float lambda_;
  ParamSet<S> params_;
  Parameter<S>* embeddings_;
};

using TwinEncoder = TwinEncoderT<float>;

// Inference-mode encoders returning plain vectors. Pure: repeated calls give
// bit-identical results.
Representation encode_phonemes(const PhonemeSequence& phonemes,
                               TwinEncoder& encoder);
Representation encode_word(std::string_view word, TwinEncoder& encoder,
                           const MorphemeVocab& vocab);

// Element-wise lambda * rp + (1 - lambda) * rw. The endpoints return the
// corresponding input bit-exactly.
Representation mix(const Representation& rp, const Representation& rw,
                   float lambda);

}  // namespace kovec

#endif  // KOVEC_ENCODER_HPP_
