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

#include <filesystem>
#include <random>

#include "gradcheck.hpp"
#include "kovec/autodiff.hpp"
#include "kovec/checkpoint.hpp"
#include "kovec/errors.hpp"
#include "kovec/optim.hpp"

using namespace kovec;
using kovec::testing::max_grad_error;
using kovec::testing::random_matrix;

namespace {

constexpr double kTol = 1e-3;

// One randomized gradcheck instance per call; every op below is exercised
// with >= 20 instances.
template <typename MakeLoss>
void run_instances(int count, std::uint64_t seed, MakeLoss make) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    ParamSet<double> params;
    auto build = make(rng, params);
    std::vector<Parameter<double>*> ptrs;
    for (const auto& p : params.items()) ptrs.push_back(p.get());
    CAPTURE(i);
    CHECK(max_grad_error(build, ptrs) < kTol);
  }
}

std::uniform_int_distribution<Eigen::Index> dim_dist(1, 6);

}  // namespace

TEST_CASE("softmax of a constant row is uniform") {
  Tape<float> tape;
  Mat<float> in(1, 2);
  in << 0.f, 0.f;
  Var<float> out = softmax_rows(tape.constant(in));
  CHECK(out.value()(0, 0) == doctest::Approx(0.5));
  CHECK(out.value()(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("softmax rows sum to one") {
  std::mt19937_64 rng(40);
  Tape<double> tape;
  Var<double> out = softmax_rows(tape.constant(random_matrix(rng, 7, 9)));
  for (Eigen::Index r = 0; r < 7; ++r)
    CHECK(out.value().row(r).sum() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cross entropy approaches zero at a large margin") {
  Tape<float> tape;
  Mat<float> logits(1, 3);
  logits << 100.f, 0.f, -5.f;
  Var<float> loss = cross_entropy(tape.constant(logits), {0});
  CHECK(loss.value()(0, 0) == doctest::Approx(0.f).epsilon(1e-6));
}

TEST_CASE("shape mismatches raise ShapeError with both shapes") {
  Tape<float> tape;
  Var<float> a = tape.constant(Mat<float>::Zero(2, 3));
  Var<float> b = tape.constant(Mat<float>::Zero(3, 3));
  try {
    add(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    std::string msg = e.what();
    CHECK(msg.find("[2x3]") != std::string::npos);
    CHECK(msg.find("[3x3]") != std::string::npos);
  }
  CHECK_THROWS_AS(matmul(a, tape.constant(Mat<float>::Zero(2, 2))),
                  ShapeError);
}

TEST_CASE("backward rejects non-scalar losses") {
  Tape<float> tape;
  ParamSet<float> params;
  Parameter<float>& p = params.add("p", Mat<float>::Ones(2, 2));
  Var<float> x = tape.leaf(p);
  CHECK_THROWS_AS(tape.backward(x), NotScalar);
}

TEST_CASE("loss = sum(p) has all-ones gradient") {
  ParamSet<float> params;
  Parameter<float>& p = params.add("p", Mat<float>::Random(3, 4));
  Tape<float> tape;
  tape.backward(sum(tape.leaf(p)));
  CHECK(p.grad.isApprox(Mat<float>::Ones(3, 4)));
}

TEST_CASE("loss = dot(p, p) has gradient 2p") {
  ParamSet<float> params;
  Parameter<float>& p = params.add("p", Mat<float>::Random(2, 5));
  Tape<float> tape;
  Var<float> leaf = tape.leaf(p);
  tape.backward(dot(leaf, leaf));
  CHECK(p.grad.isApprox(2.f * p.value));
}

TEST_CASE("gradcheck: matmul") {
  run_instances(20, 101, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), k = dim_dist(rng), m = dim_dist(rng);
    ps.add("a", random_matrix(rng, n, k));
    ps.add("b", random_matrix(rng, k, m));
    Mat<double> w = random_matrix(rng, n, m);
    return [&ps, w](Tape<double>& t) {
      return sum(hadamard(matmul(t.leaf(ps.at("a")), t.leaf(ps.at("b"))),
                          t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: matmul_nt") {
  run_instances(20, 102, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), k = dim_dist(rng), m = dim_dist(rng);
    ps.add("a", random_matrix(rng, n, k));
    ps.add("b", random_matrix(rng, m, k));
    Mat<double> w = random_matrix(rng, n, m);
    return [&ps, w](Tape<double>& t) {
      return sum(hadamard(matmul_nt(t.leaf(ps.at("a")), t.leaf(ps.at("b"))),
                          t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: add, add_rowvec, scale, hadamard") {
  run_instances(20, 103, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), m = dim_dist(rng);
    ps.add("a", random_matrix(rng, n, m));
    ps.add("b", random_matrix(rng, n, m));
    ps.add("bias", random_matrix(rng, 1, m));
    Mat<double> w = random_matrix(rng, n, m);
    return [&ps, w](Tape<double>& t) {
      Var<double> x = add(t.leaf(ps.at("a")), t.leaf(ps.at("b")));
      x = add_rowvec(scale(x, 1.7), t.leaf(ps.at("bias")));
      x = hadamard(x, t.leaf(ps.at("a")));
      return sum(hadamard(x, t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: relu") {
  run_instances(20, 104, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), m = dim_dist(rng);
    ps.add("a", random_matrix(rng, n, m, /*avoid_zero=*/true));
    Mat<double> w = random_matrix(rng, n, m);
    return [&ps, w](Tape<double>& t) {
      return sum(hadamard(relu(t.leaf(ps.at("a"))), t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: sigmoid and tanh") {
  run_instances(20, 105, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), m = dim_dist(rng);
    ps.add("a", random_matrix(rng, n, m));
    Mat<double> w = random_matrix(rng, n, m);
    return [&ps, w](Tape<double>& t) {
      Var<double> x = t.leaf(ps.at("a"));
      return sum(hadamard(add(sigmoid(x), tanh(x)), t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: softmax_rows") {
  run_instances(20, 106, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), m = dim_dist(rng) + 1;
    ps.add("a", random_matrix(rng, n, m));
    Mat<double> w = random_matrix(rng, n, m);
    return [&ps, w](Tape<double>& t) {
      return sum(hadamard(softmax_rows(t.leaf(ps.at("a"))), t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: layer_norm_rows") {
  run_instances(20, 107, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), m = dim_dist(rng) + 2;
    ps.add("x", random_matrix(rng, n, m));
    ps.add("g", random_matrix(rng, 1, m));
    ps.add("b", random_matrix(rng, 1, m));
    Mat<double> w = random_matrix(rng, n, m);
    return [&ps, w](Tape<double>& t) {
      return sum(hadamard(layer_norm_rows(t.leaf(ps.at("x")),
                                          t.leaf(ps.at("g")),
                                          t.leaf(ps.at("b"))),
                          t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: embedding_lookup") {
  run_instances(20, 108, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index rows = dim_dist(rng) + 2, d = dim_dist(rng);
    Parameter<double>& table = ps.add("table", random_matrix(rng, rows, d));
    std::uniform_int_distribution<int> pick(0, static_cast<int>(rows) - 1);
    std::vector<int> ids;
    for (int i = 0; i < 5; ++i) ids.push_back(pick(rng));
    Mat<double> w = random_matrix(rng, 5, d);
    return [&table, ids, w](Tape<double>& t) {
      return sum(hadamard(embedding_lookup(t, table, ids), t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: mean_pool_rows, masked and not") {
  run_instances(20, 109, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng) + 1, m = dim_dist(rng);
    ps.add("x", random_matrix(rng, n, m));
    std::vector<bool> mask(static_cast<std::size_t>(n), false);
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = coin(rng) == 1;
    mask[0] = true;
    Mat<double> w = random_matrix(rng, 1, m);
    return [&ps, mask, w](Tape<double>& t) {
      Var<double> x = t.leaf(ps.at("x"));
      Var<double> pooled = add(mean_pool_rows(x), mean_pool_rows(x, mask));
      return sum(hadamard(pooled, t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: max_rows") {
  run_instances(20, 110, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng) + 1, m = dim_dist(rng);
    ps.add("x", random_matrix(rng, n, m, /*avoid_zero=*/true));
    Mat<double> w = random_matrix(rng, 1, m);
    return [&ps, w](Tape<double>& t) {
      return sum(hadamard(max_rows(t.leaf(ps.at("x"))), t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: concat and narrow") {
  run_instances(20, 111, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng) + 1, m = dim_dist(rng) + 1;
    ps.add("a", random_matrix(rng, n, m));
    ps.add("b", random_matrix(rng, n, m));
    Mat<double> w = random_matrix(rng, 2 * n, m);
    return [&ps, w, n, m](Tape<double>& t) {
      Var<double> a = t.leaf(ps.at("a"));
      Var<double> b = t.leaf(ps.at("b"));
      Var<double> cat = concat_rows<double>({a, b});
      Var<double> body = concat_cols<double>(
          {narrow_cols(cat, 0, m / 2), narrow_cols(cat, m / 2, m - m / 2)});
      Var<double> rows = narrow_rows(body, 1, 2 * n - 1);
      return sum(hadamard(concat_rows<double>({narrow_rows(body, 0, 1), rows}),
                          t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: cross_entropy") {
  run_instances(20, 112, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), c = dim_dist(rng) + 1;
    ps.add("logits", random_matrix(rng, n, c));
    std::uniform_int_distribution<int> pick(0, static_cast<int>(c) - 1);
    std::vector<int> labels;
    for (Eigen::Index i = 0; i < n; ++i) labels.push_back(pick(rng));
    return [&ps, labels](Tape<double>& t) {
      return cross_entropy(t.leaf(ps.at("logits")), labels);
    };
  });
}

TEST_CASE("gradcheck: l2_normalize_rows") {
  run_instances(20, 113, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng), m = dim_dist(rng) + 1;
    ps.add("x", random_matrix(rng, n, m, /*avoid_zero=*/true));
    Mat<double> w = random_matrix(rng, n, m);
    return [&ps, w](Tape<double>& t) {
      return sum(hadamard(l2_normalize_rows(t.leaf(ps.at("x"))),
                          t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: dropout with a fixed mask") {
  run_instances(20, 114, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng) + 1, m = dim_dist(rng) + 1;
    ps.add("x", random_matrix(rng, n, m));
    Mat<double> w = random_matrix(rng, n, m);
    std::uint64_t mask_seed = rng();
    return [&ps, w, mask_seed](Tape<double>& t) {
      std::mt19937_64 mask_rng(mask_seed);  // same mask on every rebuild
      return sum(hadamard(dropout(t.leaf(ps.at("x")), 0.4, mask_rng),
                          t.constant(w)));
    };
  });
}

TEST_CASE("gradcheck: random op chains") {
  run_instances(20, 115, [](std::mt19937_64& rng, ParamSet<double>& ps) {
    Eigen::Index n = dim_dist(rng) + 1, d = dim_dist(rng) + 2;
    ps.add("x", random_matrix(rng, n, d));
    ps.add("w1", random_matrix(rng, d, d));
    ps.add("b1", random_matrix(rng, 1, d));
    ps.add("g", random_matrix(rng, 1, d));
    ps.add("b", random_matrix(rng, 1, d));
    std::uniform_int_distribution<int> pick(0, static_cast<int>(d) - 1);
    std::vector<int> labels = {pick(rng)};
    return [&ps, labels](Tape<double>& t) {
      Var<double> x = t.leaf(ps.at("x"));
      Var<double> h =
          relu(add_rowvec(matmul(x, t.leaf(ps.at("w1"))), t.leaf(ps.at("b1"))));
      h = layer_norm_rows(add(h, x), t.leaf(ps.at("g")), t.leaf(ps.at("b")));
      Var<double> attn = softmax_rows(scale(matmul_nt(h, h), 0.5));
      Var<double> pooled = mean_pool_rows(matmul(attn, h));
      return cross_entropy(pooled, labels);
    };
  });
}

TEST_CASE("adamw: zero gradient and zero decay leave parameters unchanged") {
  ParamSet<float> params;
  Parameter<float>& p = params.add("p", Mat<float>::Constant(2, 2, 3.f));
  AdamW<float> opt;
  p.grad.setZero();
  opt.step(params);
  CHECK(p.value.isApprox(Mat<float>::Constant(2, 2, 3.f)));
}

TEST_CASE("adamw: first bias-corrected step is about -lr") {
  ParamSet<float> params;
  Parameter<float>& p = params.add("p", Mat<float>::Zero(1, 1));
  AdamW<float> opt;
  p.grad(0, 0) = 1.f;
  opt.step(params);
  // m_hat = 1, v_hat = 1 after correction, so the update is lr/(1+eps).
  CHECK(p.value(0, 0) == doctest::Approx(-1e-3).epsilon(1e-4));
}

TEST_CASE("adamw: decoupled decay shrinks by (1 - lr*wd) at zero gradient") {
  ParamSet<float> params;
  Parameter<float>& p = params.add("p", Mat<float>::Constant(1, 3, 2.f));
  AdamW<float> opt(AdamWConfig<float>{1e-2f, 0.9f, 0.999f, 1e-8f, 0.5f});
  p.grad.setZero();
  opt.step(params);
  CHECK(p.value(0, 0) == doctest::Approx(2.f * (1.f - 1e-2f * 0.5f)));
}

TEST_CASE("adamw: non-finite gradients abort with the parameter name") {
  ParamSet<float> params;
  Parameter<float>& p = params.add("embeddings", Mat<float>::Zero(1, 2));
  AdamW<float> opt;
  p.grad(0, 0) = std::numeric_limits<float>::quiet_NaN();
  try {
    opt.step(params);
    FAIL("expected NonFiniteGradient");
  } catch (const NonFiniteGradient& e) {
    CHECK(std::string(e.what()).find("embeddings") != std::string::npos);
  }
}

TEST_CASE("checkpoint round-trips float values bit-exactly") {
  std::mt19937_64 rng(77);
  ParamSet<float> params;
  Mat<float> a(3, 4), b(1, 7);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    a.data()[i] = static_cast<float>(testing::random_matrix(rng, 1, 1)(0, 0));
  for (Eigen::Index i = 0; i < b.size(); ++i)
    b.data()[i] = static_cast<float>(testing::random_matrix(rng, 1, 1)(0, 0));
  params.add("w", a);
  params.add("bias", b);

  std::filesystem::path path =
      std::filesystem::temp_directory_path() / "kovec_ckpt_test.bin";
  save_checkpoint(path.string(), params);

  ParamSet<float> restored;
  restored.add("w", Mat<float>::Zero(3, 4));
  restored.add("bias", Mat<float>::Zero(1, 7));
  load_checkpoint(path.string(), restored);
  CHECK(restored.at("w").value == a);
  CHECK(restored.at("bias").value == b);

  ParamSet<float> wrong_shape;
  wrong_shape.add("w", Mat<float>::Zero(4, 3));
  wrong_shape.add("bias", Mat<float>::Zero(1, 7));
  CHECK_THROWS_AS(load_checkpoint(path.string(), wrong_shape), DimMismatch);

  ParamSet<float> missing;
  missing.add("w", Mat<float>::Zero(3, 4));
  CHECK_THROWS_AS(load_checkpoint(path.string(), missing), ParseError);
}

TEST_CASE("params_checksum tracks value changes") {
  ParamSet<float> params;
  Parameter<float>& p = params.add("p", Mat<float>::Constant(2, 2, 1.f));
  std::uint64_t before = params_checksum(params);
  CHECK(params_checksum(params) == before);
  p.value(0, 0) = 2.f;
  CHECK(params_checksum(params) != before);
}

TEST_CASE("xavier_fill is deterministic for a fixed seed") {
  Mat<float> a(4, 6), b(4, 6);
  std::mt19937_64 r1(5), r2(5);
  xavier_fill(a, r1);
  xavier_fill(b, r2);
  CHECK(a == b);
  double limit = std::sqrt(6.0 / (4 + 6));
  CHECK(a.maxCoeff() <= limit);
  CHECK(a.minCoeff() >= -limit);
}
