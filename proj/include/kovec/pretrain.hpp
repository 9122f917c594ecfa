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
// Contrastive mimick pre-training: the mixed representation of each word is
// pulled toward its target embedding, with the other targets in the
// mini-batch acting as negatives.

#ifndef KOVEC_PRETRAIN_HPP_
#define KOVEC_PRETRAIN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "kovec/autodiff.hpp"
#include "kovec/embeddings.hpp"
#include "kovec/encoder.hpp"
#include "kovec/errors.hpp"
#include "kovec/g2p.hpp"
#include "kovec/tokenize.hpp"

namespace kovec {

enum class Score { kDot, kCosine };

struct PretrainConfig {
  float temperature = 0.07f;
  int batch_size = 32;
  int epochs = 10;
  float lr = 1e-3f;
  float weight_decay = 0.f;
  std::uint64_t seed = 42;
  Score score = Score::kCosine;

  void validate() const {
    if (temperature <= 0.f) throw ConfigError("temperature must be positive");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  }
};

// In-batch-negative contrastive loss. `reps` is the B x d matrix of mixed
// representations, `targets` the matching rows of target embeddings; row i
// is positive against target i and negative against every other row.
// Mean of -log( exp(s_i,i / tau) / sum_j exp(s_i,j / tau) ) over rows.
template <typename S>
Var<S> contrastive_loss(Var<S> reps, const Mat<S>& targets, S temperature,
                        Score score) {
  Tape<S>& tape = *reps.tape;
  if (reps.rows() == 0) throw EmptyBatch("contrastive_loss: empty batch");
  if (temperature <= S(0))
    throw ConfigError("contrastive_loss: temperature must be positive");
  if (targets.rows() != reps.rows() || targets.cols() != reps.cols())
    throw ShapeError("contrastive_loss: reps " +
                     shape_str(reps.rows(), reps.cols()) + " vs targets " +
                     shape_str(targets.rows(), targets.cols()));
  Var<S> scores;
  if (score == Score::kCosine) {
    Mat<S> tn = targets;
    for (Eigen::Index r = 0; r < tn.rows(); ++r) {
      S norm = tn.row(r).norm();
      if (norm > S(0)) tn.row(r) /= norm;
    }
    scores = matmul_nt(l2_normalize_rows(reps), tape.constant(std::move(tn)));
  } else {
    scores = matmul_nt(reps, tape.constant(targets));
  }
  std::vector<int> labels(static_cast<std::size_t>(reps.rows()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = static_cast<int>(i);
  return cross_entropy(scale(scores, S(1) / temperature), labels);
}

// Precomputed encoder inputs for one vocabulary word.
struct WordEncoding {
  std::vector<int> phoneme_ids;
  std::vector<int> word_ids;
};

// Symbol streams for a word: jamo+morpheme tokens and IPA symbols.
// Used both for symbol-table construction and for encoding.
WordEncoding encode_word_ids(const std::string& word,
                             const SymbolTable& symbols,
                             const RuleTable& rules,
                             const MorphemeVocab& vocab);

// Builds the shared symbol table over jamo, morpheme and IPA symbols of a
// word list (deterministic for a fixed corpus).
SymbolTable build_corpus_symbol_table(const std::vector<std::string>& words,
                                      const RuleTable& rules,
                                      const MorphemeVocab& vocab);

struct PretrainLog {
  std::vector<double> epoch_mean_loss;  // one entry per epoch
};

// Runs the full pre-training loop with AdamW; deterministic for a fixed
// seed. Throws EmptyInput for vocabulary words without any Hangul (they
// have no phonemes) and DimMismatch when table dim != encoder dim.
PretrainLog pretrain(TwinEncoder& encoder, const EmbeddingTable& table,
                     const RuleTable& rules, const MorphemeVocab& vocab,
                     const PretrainConfig& config);

// Mixed representations F(w) for arbitrary words under trained parameters.
std::vector<Representation> embed_oov(const std::vector<std::string>& words,
                                      TwinEncoder& encoder,
                                      const RuleTable& rules,
                                      const MorphemeVocab& vocab);

}  // namespace kovec

#endif  // KOVEC_PRETRAIN_HPP_
