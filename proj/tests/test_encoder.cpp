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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gradcheck.hpp"
#include "kovec/encoder.hpp"
#include "kovec/errors.hpp"
#include "kovec/g2p.hpp"

using namespace kovec;

namespace {

SymbolTable demo_symbols() {
  return build_symbol_table({{"ㅁ", "ㅏ", "ㅅ", "ㅇ", "ㅣ", "ㅆ", "ㄷ",
                              "맛있", "##다", "m", "ʌ", "s", "i", "t", "t'"}});
}

TwinEncoder make_encoder(float lambda = 0.1f, std::uint64_t seed = 7) {
  return TwinEncoder(EncoderConfig{}, demo_symbols(), lambda, seed);
}

}  // namespace

TEST_CASE("outputs have dimension 300 for both sides") {
  TwinEncoder enc = make_encoder();
  for (EncoderSide side : {EncoderSide::kPhoneme, EncoderSide::kWord}) {
    Tape<float> tape;
    Var<float> out = enc.encode(tape, {2, 3, 4}, side);
    CHECK(out.rows() == 1);
    CHECK(out.cols() == 300);
  }
}

TEST_CASE("inference is deterministic") {
  TwinEncoder enc = make_encoder();
  Tape<float> t1, t2;
  Mat<float> a = enc.encode(t1, {2, 3, 4, 5}, EncoderSide::kPhoneme).value();
  Mat<float> b = enc.encode(t2, {2, 3, 4, 5}, EncoderSide::kPhoneme).value();
  CHECK(a == b);
}

TEST_CASE("positional embeddings make order matter") {
  TwinEncoder enc = make_encoder();
  Tape<float> t1, t2;
  Mat<float> ab = enc.encode(t1, {2, 3}, EncoderSide::kWord).value();
  Mat<float> ba = enc.encode(t2, {3, 2}, EncoderSide::kWord).value();
  CHECK((ab - ba).cwiseAbs().maxCoeff() > 1e-6f);
}

TEST_CASE("empty input is rejected") {
  TwinEncoder enc = make_encoder();
  Tape<float> tape;
  CHECK_THROWS_AS(enc.encode(tape, {}, EncoderSide::kPhoneme), EmptyInput);
}

TEST_CASE("overlong input truncates to max_seq_len") {
  EncoderConfig config;
  config.max_seq_len = 4;
  config.model_dim = 12;
  config.num_heads = 3;
  config.ffn_dim = 24;
  TwinEncoder enc(config, demo_symbols(), 0.1f, 3);
  std::vector<int> long_ids(32, 2);
  Tape<float> tape;
  Var<float> out = enc.encode(tape, long_ids, EncoderSide::kWord);
  CHECK(out.cols() == 12);
  Tape<float> t2;
  std::vector<int> head_ids(4, 2);
  CHECK(out.value() ==
        enc.encode(t2, head_ids, EncoderSide::kWord).value());
}

TEST_CASE("the two sides give different representations") {
  TwinEncoder enc = make_encoder();
  Tape<float> t1, t2;
  Mat<float> p = enc.encode(t1, {2, 3, 4}, EncoderSide::kPhoneme).value();
  Mat<float> w = enc.encode(t2, {2, 3, 4}, EncoderSide::kWord).value();
  CHECK((p - w).cwiseAbs().maxCoeff() > 1e-6f);
}

TEST_CASE("config validation") {
  EncoderConfig config;
  config.model_dim = 300;
  config.num_heads = 7;  // does not divide 300
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.num_heads = 6;
  config.dropout = 1.f;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("mix endpoints are bit-exact") {
  Representation rp{Eigen::VectorXf::Random(300), Modality::kPhoneme};
  Representation rw{Eigen::VectorXf::Random(300), Modality::kWord};
  Representation at0 = mix(rp, rw, 0.f);
  Representation at1 = mix(rp, rw, 1.f);
  CHECK(at0.vector == rw.vector);
  CHECK(at1.vector == rp.vector);
  CHECK(at0.modality == Modality::kMixed);
}

TEST_CASE("mix at lambda 0.1 matches direct arithmetic") {
  Representation rp{Eigen::VectorXf::Ones(300), Modality::kPhoneme};
  Representation rw{Eigen::VectorXf::Zero(300), Modality::kWord};
  Representation m = mix(rp, rw, 0.1f);
  for (int i = 0; i < 300; ++i)
    CHECK(m.vector(i) == doctest::Approx(0.1f).epsilon(1e-7));
}

TEST_CASE("mix is linear in its inputs") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXf p = Eigen::VectorXf::Random(16);
    Eigen::VectorXf w = Eigen::VectorXf::Random(16);
    float a = std::uniform_real_distribution<float>(-2.f, 2.f)(rng);
    float lambda = std::uniform_real_distribution<float>(0.f, 1.f)(rng);
    Representation scaled =
        mix({a * p, Modality::kPhoneme}, {a * w, Modality::kWord}, lambda);
    Representation plain =
        mix({p, Modality::kPhoneme}, {w, Modality::kWord}, lambda);
    CHECK(scaled.vector.isApprox(a * plain.vector, 1e-5f));
  }
}

TEST_CASE("mix rejects mismatched dimensions") {
  Representation rp{Eigen::VectorXf::Zero(3), Modality::kPhoneme};
  Representation rw{Eigen::VectorXf::Zero(4), Modality::kWord};
  CHECK_THROWS_AS(mix(rp, rw, 0.5f), ShapeError);
}

TEST_CASE("both sides share one symbol-embedding table") {
  TwinEncoder enc = make_encoder();
  CHECK(enc.params().has("embeddings"));
  CHECK(enc.params().has("fp.pos"));
  CHECK(enc.params().has("fw.pos"));
  CHECK(!enc.params().has("fp.embeddings"));
  CHECK(!enc.params().has("fw.embeddings"));
}

TEST_CASE("gradients flow through the full encoder (finite differences)") {
  EncoderConfig config;
  config.num_layers = 2;
  config.model_dim = 8;
  config.num_heads = 2;
  config.ffn_dim = 12;
  config.max_seq_len = 6;
  config.dropout = 0.f;
  SymbolTable symbols = build_symbol_table({{"a", "b", "c", "d"}});
  TwinEncoderT<double> enc(config, symbols, 0.1f, 11);

  std::mt19937_64 rng(99);
  Mat<double> w = kovec::testing::random_matrix(rng, 1, 8);
  auto build = [&](Tape<double>& t) {
    Var<double> rp = enc.encode(t, {2, 3, 4}, EncoderSide::kPhoneme);
    Var<double> rw = enc.encode(t, {2, 3, 4, 5}, EncoderSide::kWord);
    return sum(hadamard(enc.mix_on_tape(rp, rw), t.constant(w)));
  };
  std::vector<Parameter<double>*> ptrs;
  for (const auto& p : enc.params().items()) ptrs.push_back(p.get());
  CHECK(kovec::testing::max_grad_error(build, ptrs, 1e-5) < 1e-3);
}

TEST_CASE("dropout in training mode is seed-deterministic") {
  TwinEncoder enc = make_encoder();
  std::mt19937_64 r1(5), r2(5), r3(6);
  Tape<float> t1, t2, t3;
  Mat<float> a =
      enc.encode(t1, {2, 3, 4}, EncoderSide::kWord, true, &r1).value();
  Mat<float> b =
      enc.encode(t2, {2, 3, 4}, EncoderSide::kWord, true, &r2).value();
  Mat<float> c =
      enc.encode(t3, {2, 3, 4}, EncoderSide::kWord, true, &r3).value();
  CHECK(a == b);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.f);  // different seed, different mask
}
