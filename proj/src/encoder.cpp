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

#include "kovec/encoder.hpp"

namespace kovec {

Representation encode_phonemes(const PhonemeSequence& phonemes,
                               TwinEncoder& encoder) {
  if (phonemes.phonemes.empty())
    throw EmptyInput("no phonemes for '" + phonemes.source + "'");
  Tape<float> tape;
  Var<float> out = encoder.encode(tape, encoder.symbols().lookup(phonemes.phonemes),
                                  EncoderSide::kPhoneme);
  return Representation{out.value().row(0).transpose(), Modality::kPhoneme};
}

Representation encode_word(std::string_view word, TwinEncoder& encoder,
                           const MorphemeVocab& vocab) {
  MixedTokenSequence tokens = build_mixed_input(word, vocab);
  if (tokens.tokens.empty())
    throw EmptyInput("empty word");
  Tape<float> tape;
  Var<float> out = encoder.encode(tape, encoder.symbols().lookup(tokens.tokens),
                                  EncoderSide::kWord);
  return Representation{out.value().row(0).transpose(), Modality::kWord};
}

Representation mix(const Representation& rp, const Representation& rw,
                   float lambda) {
  if (rp.vector.size() != rw.vector.size())
    throw ShapeError("mix: dimension mismatch, " +
                     shape_str(rp.vector.size(), 1) + " vs " +
                     shape_str(rw.vector.size(), 1));
  if (lambda < 0.f || lambda > 1.f)
    throw ConfigError("mix: lambda must be in [0, 1]");
  // Endpoints are exact by construction.
  if (lambda == 0.f) return Representation{rw.vector, Modality::kMixed};
  if (lambda == 1.f) return Representation{rp.vector, Modality::kMixed};
  return Representation{lambda * rp.vector + (1.f - lambda) * rw.vector,
                        Modality::kMixed};
}

}  // namespace kovec
