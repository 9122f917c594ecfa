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

#include "kovec/pretrain.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "kovec/optim.hpp"

namespace kovec {

WordEncoding encode_word_ids(const std::string& word,
                             const SymbolTable& symbols,
                             const RuleTable& rules,
                             const MorphemeVocab& vocab) {
  PhonemeSequence phonemes = rules.to_ipa(word);
  if (phonemes.phonemes.empty())
    throw EmptyInput("word '" + word + "' yields no phonemes");
  MixedTokenSequence mixed = build_mixed_input(word, vocab);
  WordEncoding enc;
  enc.phoneme_ids = symbols.lookup(phonemes.phonemes);
  enc.word_ids = symbols.lookup(mixed.tokens);
  return enc;
}

SymbolTable build_corpus_symbol_table(const std::vector<std::string>& words,
                                      const RuleTable& rules,
                                      const MorphemeVocab& vocab) {
  std::vector<std::vector<std::string>> sequences;
  sequences.reserve(words.size() * 2);
  for (const std::string& word : words) {
    sequences.push_back(build_mixed_input(word, vocab).tokens);
    sequences.push_back(rules.to_ipa(word).phonemes);
  }
  return build_symbol_table(sequences);
}

PretrainLog pretrain(TwinEncoder& encoder, const EmbeddingTable& table,
                     const RuleTable& rules, const MorphemeVocab& vocab,
                     const PretrainConfig& config) {
  config.validate();
  if (table.size() == 0) throw EmptyDataset("embedding table is empty");
  if (table.dim != encoder.config().model_dim)
    throw DimMismatch("target embedding dim " + std::to_string(table.dim) +
                      " vs encoder dim " +
                      std::to_string(encoder.config().model_dim));

  std::vector<WordEncoding> encodings;
  encodings.reserve(table.words.size());
  for (const std::string& word : table.words)
    encodings.push_back(
        encode_word_ids(word, encoder.symbols(), rules, vocab));

  std::mt19937_64 shuffle_rng(sub_seed(config.seed, "pretrain-shuffle"));
  std::mt19937_64 dropout_rng(sub_seed(config.seed, "pretrain-dropout"));
  AdamW<float> optimizer(AdamWConfig<float>{
      config.lr, 0.9f, 0.999f, 1e-8f, config.weight_decay});

  std::vector<int> order(table.words.size());
  std::iota(order.begin(), order.end(), 0);

  PretrainLog log;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      const int batch = static_cast<int>(stop - start);

      Tape<float> tape;
      std::vector<Var<float>> reps;
      reps.reserve(batch);
      Mat<float> targets(batch, table.dim);
      for (int b = 0; b < batch; ++b) {
        const int word = order[start + static_cast<std::size_t>(b)];
        const WordEncoding& enc = encodings[static_cast<std::size_t>(word)];
        Var<float> rp = encoder.encode(tape, enc.phoneme_ids,
                                       EncoderSide::kPhoneme, true,
                                       &dropout_rng);
        Var<float> rw = encoder.encode(tape, enc.word_ids, EncoderSide::kWord,
                                       true, &dropout_rng);
        reps.push_back(encoder.mix_on_tape(rp, rw));
        targets.row(b) = table.vectors.row(word);
      }
      Var<float> loss =
          contrastive_loss(concat_rows(reps), targets, config.temperature,
                           config.score);
      encoder.params().zero_grads();
      tape.backward(loss);
      try {
        optimizer.step(encoder.params());
      } catch (const NonFiniteGradient& e) {
        throw NonFiniteGradient(std::string(e.what()) + " (epoch " +
                                std::to_string(epoch + 1) + ", batch at " +
                                std::to_string(start) + ")");
      }
      loss_sum += static_cast<double>(loss.value()(0, 0)) * batch;
    }
    log.epoch_mean_loss.push_back(loss_sum /
                                  static_cast<double>(order.size()));
  }
  return log;
}

std::vector<Representation> embed_oov(const std::vector<std::string>& words,
                                      TwinEncoder& encoder,
                                      const RuleTable& rules,
                                      const MorphemeVocab& vocab) {
  std::vector<Representation> out;
  out.reserve(words.size());
  for (const std::string& word : words) {
    Representation rp = encode_phonemes(rules.to_ipa(word), encoder);
    Representation rw = encode_word(word, encoder, vocab);
    out.push_back(mix(rp, rw, encoder.mixup_lambda()));
  }
  return out;
}

}  // namespace kovec
