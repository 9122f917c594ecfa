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

#ifndef KOVEC_OPTIM_HPP_
#define KOVEC_OPTIM_HPP_

#include <cmath>
#include <unordered_map>

#include "kovec/autodiff.hpp"
#include "kovec/errors.hpp"

namespace kovec {

template <typename S>
struct AdamWConfig {
  S lr = S(1e-3);
  S beta1 = S(0.9);
  S beta2 = S(0.999);
  S eps = S(1e-8);
  S weight_decay = S(0);
};

// AdamW with bias correction and decoupled weight decay:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps) - lr * wd * p
template <typename S>
class AdamW {
 public:
  explicit AdamW(AdamWConfig<S> cfg = {}) : cfg_(cfg) {}

  long long step_count() const { return step_; }
  const AdamWConfig<S>& config() const { return cfg_; }

  // Applies one update from the gradients currently held in `params`.
  // Throws NonFiniteGradient if any gradient entry is NaN or infinite.
  void step(ParamSet<S>& params) {
    ++step_;
    S bc1 = S(1) - std::pow(cfg_.beta1, static_cast<S>(step_));
    S bc2 = S(1) - std::pow(cfg_.beta2, static_cast<S>(step_));
    for (const auto& p : params.items()) {
      if (!p->grad.allFinite())
        throw NonFiniteGradient("non-finite gradient in parameter '" +
                                p->name + "' at optimizer step " +
                                std::to_string(step_));
      Moments& mo = moments_[p.get()];
      if (mo.m.size() == 0) {
        mo.m = Mat<S>::Zero(p->value.rows(), p->value.cols());
        mo.v = Mat<S>::Zero(p->value.rows(), p->value.cols());
      }
      mo.m = cfg_.beta1 * mo.m + (S(1) - cfg_.beta1) * p->grad;
      mo.v = (cfg_.beta2 * mo.v.array() +
              (S(1) - cfg_.beta2) * p->grad.array().square())
                 .matrix();
      auto m_hat = (mo.m.array() / bc1).eval();
      auto v_hat = (mo.v.array() / bc2).eval();
      if (cfg_.weight_decay != S(0))
        p->value -= cfg_.lr * cfg_.weight_decay * p->value;
      p->value.array() -= cfg_.lr * m_hat / (v_hat.sqrt() + cfg_.eps);
    }
  }

 private:
  struct Moments {
    Mat<S> m, v;
  };

  AdamWConfig<S> cfg_;
  long long step_ = 0;
  std::unordered_map<const Parameter<S>*, Moments> moments_;
};

}  // namespace kovec

#endif  // KOVEC_OPTIM_HPP_
