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
// Reverse-mode automatic differentiation over dense row-major matrices.
// Everything is templated on the scalar so training runs in float while
// gradient checking instantiates the same graphs in double.

#ifndef KOVEC_AUTODIFF_HPP_
#define KOVEC_AUTODIFF_HPP_

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "kovec/errors.hpp"

namespace kovec {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::string shape_str(Eigen::Index rows, Eigen::Index cols) {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

// A named trainable tensor. Lives outside any tape; gradients accumulate
// here across a backward pass and are consumed by the optimizer.
template <typename S>
struct Parameter {
  std::string name;
  Mat<S> value;
  Mat<S> grad;

  Parameter(std::string n, Mat<S> v)
      : name(std::move(n)), value(std::move(v)) {
    grad = Mat<S>::Zero(value.rows(), value.cols());
  }
};

template <typename S>
class ParamSet {
 public:
  Parameter<S>& create(const std::string& name, Eigen::Index rows,
                       Eigen::Index cols) {
    return add(name, Mat<S>::Zero(rows, cols));
  }

  Parameter<S>& add(const std::string& name, Mat<S> value) {
    if (index_.count(name))
      throw ConfigError("duplicate parameter name: " + name);
    index_[name] = items_.size();
    items_.push_back(
        std::make_unique<Parameter<S>>(name, std::move(value)));
    return *items_.back();
  }

  Parameter<S>& at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("no parameter named " + name);
    return *items_[it->second];
  }
  const Parameter<S>& at(const std::string& name) const {
    return const_cast<ParamSet*>(this)->at(name);
  }
  bool has(const std::string& name) const { return index_.count(name) != 0; }

  const std::vector<std::unique_ptr<Parameter<S>>>& items() const {
    return items_;
  }

  void zero_grads() {
    for (auto& p : items_) p->grad.setZero();
  }

  std::size_t total_parameters() const {
    std::size_t n = 0;
    for (const auto& p : items_) n += p->value.size();
    return n;
  }

 private:
  std::vector<std::unique_ptr<Parameter<S>>> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

// FNV-1a over the bit patterns of all parameter values, in registration
// order. Used to verify that a parameter set was left untouched.
template <typename S>
std::uint64_t params_checksum(const ParamSet<S>& params) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t bits) {
    h ^= bits;
    h *= 1099511628211ull;
  };
  for (const auto& p : params.items()) {
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      S v = p->value.data()[i];
      if constexpr (sizeof(S) == 4)
        mix(std::bit_cast<std::uint32_t>(v));
      else
        mix(std::bit_cast<std::uint64_t>(v));
    }
  }
  return h;
}

template <typename S>
class Tape;

// Handle to a node on a tape.
template <typename S>
struct Var {
  Tape<S>* tape = nullptr;
  int id = -1;

  const Mat<S>& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
};

template <typename S>
class Tape {
 public:
  struct Node {
    Mat<S> value;
    Mat<S> grad;
    bool needs_grad = false;
    std::function<void(Tape&)> backprop;
  };

  Var<S> constant(Mat<S> value) {
    return push(std::move(value), false, nullptr);
  }

  Var<S> scalar(S value) {
    Mat<S> m(1, 1);
    m(0, 0) = value;
    return constant(std::move(m));
  }

  // Brings a parameter onto the tape; its gradient flows back into
  // Parameter::grad. Repeated calls for the same parameter share one node.
  Var<S> leaf(Parameter<S>& p) {
    auto it = leaves_.find(&p);
    if (it != leaves_.end()) return Var<S>{this, it->second};
    Parameter<S>* pp = &p;
    Var<S> v = push(p.value, true, [pp](Tape&, const Node& node) {
      pp->grad += node.grad;
    });
    leaves_[pp] = v.id;
    return v;
  }

  // Scalar loss only; throws NotScalar otherwise. Gradients accumulate into
  // every parameter reachable from the loss.
  void backward(Var<S> loss) {
    if (loss.tape != this) throw NumericError("loss is on a different tape");
    Node& top = nodes_[loss.id];
    if (top.value.rows() != 1 || top.value.cols() != 1)
      throw NotScalar("backward() wants a scalar loss, got " +
                      shape_str(top.value.rows(), top.value.cols()));
    top.grad(0, 0) = S(1);
    for (int i = loss.id; i >= 0; --i) {
      Node& n = nodes_[i];
      if (n.needs_grad && n.backprop) n.backprop(*this);
    }
  }

  const Mat<S>& value(int id) const { return nodes_[id].value; }
  Mat<S>& grad(int id) { return nodes_[id].grad; }
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Core primitive: appends a node. backprop receives the tape and the
  // finished node and must accumulate into its inputs' grads.
  Var<S> push(Mat<S> value, bool needs_grad,
              std::function<void(Tape&, const Node&)> backprop) {
    Node n;
    n.value = std::move(value);
    n.grad = Mat<S>::Zero(n.value.rows(), n.value.cols());
    n.needs_grad = needs_grad;
    if (backprop) {
      int id = static_cast<int>(nodes_.size());
      n.backprop = [id, f = std::move(backprop)](Tape& t) {
        f(t, t.nodes_[id]);
      };
    }
    nodes_.push_back(std::move(n));
    return Var<S>{this, static_cast<int>(nodes_.size()) - 1};
  }

 private:
  std::vector<Node> nodes_;
  std::unordered_map<Parameter<S>*, int> leaves_;
};

template <typename S>
const Mat<S>& Var<S>::value() const {
  return tape->value(id);
}

namespace detail {

template <typename S>
void check_same_shape(const char* op, const Var<S>& a, const Var<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(op) + ": shapes differ, " +
                     shape_str(a.rows(), a.cols()) + " vs " +
                     shape_str(b.rows(), b.cols()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Free functions building the graph. All return new nodes on the same tape.
// ---------------------------------------------------------------------------

template <typename S>
Var<S> matmul(Var<S> a, Var<S> b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: inner dimensions differ, " +
                     shape_str(a.rows(), a.cols()) + " vs " +
                     shape_str(b.rows(), b.cols()));
  Tape<S>& t = *a.tape;
  bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  Mat<S> out = t.value(a.id) * t.value(b.id);
  return t.push(std::move(out), ng, [a, b](Tape<S>& t, const auto& n) {
    if (t.needs_grad(a.id)) t.grad(a.id) += n.grad * t.value(b.id).transpose();
    if (t.needs_grad(b.id)) t.grad(b.id) += t.value(a.id).transpose() * n.grad;
  });
}

// a * b^T; the usual way to score every row of a against every row of b.
template <typename S>
Var<S> matmul_nt(Var<S> a, Var<S> b) {
  if (a.cols() != b.cols())
    throw ShapeError("matmul_nt: column counts differ, " +
                     shape_str(a.rows(), a.cols()) + " vs " +
                     shape_str(b.rows(), b.cols()));
  Tape<S>& t = *a.tape;
  bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  Mat<S> out = t.value(a.id) * t.value(b.id).transpose();
  return t.push(std::move(out), ng, [a, b](Tape<S>& t, const auto& n) {
    if (t.needs_grad(a.id)) t.grad(a.id) += n.grad * t.value(b.id);
    if (t.needs_grad(b.id)) t.grad(b.id) += n.grad.transpose() * t.value(a.id);
  });
}

template <typename S>
Var<S> add(Var<S> a, Var<S> b) {
  detail::check_same_shape("add", a, b);
  Tape<S>& t = *a.tape;
  bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  Mat<S> out = t.value(a.id) + t.value(b.id);
  return t.push(std::move(out), ng, [a, b](Tape<S>& t, const auto& n) {
    if (t.needs_grad(a.id)) t.grad(a.id) += n.grad;
    if (t.needs_grad(b.id)) t.grad(b.id) += n.grad;
  });
}

// Adds a 1xC bias row to every row of a.
template <typename S>
Var<S> add_rowvec(Var<S> a, Var<S> bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols())
    throw ShapeError("add_rowvec: want 1x" + std::to_string(a.cols()) +
                     " bias, got " + shape_str(bias.rows(), bias.cols()));
  Tape<S>& t = *a.tape;
  bool ng = t.needs_grad(a.id) || t.needs_grad(bias.id);
  Mat<S> out = t.value(a.id).rowwise() + t.value(bias.id).row(0);
  return t.push(std::move(out), ng, [a, bias](Tape<S>& t, const auto& n) {
    if (t.needs_grad(a.id)) t.grad(a.id) += n.grad;
    if (t.needs_grad(bias.id))
      t.grad(bias.id).row(0) += n.grad.colwise().sum();
  });
}

template <typename S>
Var<S> scale(Var<S> a, S k) {
  Tape<S>& t = *a.tape;
  Mat<S> out = t.value(a.id) * k;
  return t.push(std::move(out), t.needs_grad(a.id),
                [a, k](Tape<S>& t, const auto& n) {
                  if (t.needs_grad(a.id)) t.grad(a.id) += n.grad * k;
                });
}

template <typename S>
Var<S> hadamard(Var<S> a, Var<S> b) {
  detail::check_same_shape("hadamard", a, b);
  Tape<S>& t = *a.tape;
  bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  Mat<S> out = t.value(a.id).cwiseProduct(t.value(b.id));
  return t.push(std::move(out), ng, [a, b](Tape<S>& t, const auto& n) {
    if (t.needs_grad(a.id))
      t.grad(a.id) += n.grad.cwiseProduct(t.value(b.id));
    if (t.needs_grad(b.id))
      t.grad(b.id) += n.grad.cwiseProduct(t.value(a.id));
  });
}

template <typename S>
Var<S> relu(Var<S> a) {
  Tape<S>& t = *a.tape;
  Mat<S> out = t.value(a.id).cwiseMax(S(0));
  return t.push(std::move(out), t.needs_grad(a.id),
                [a](Tape<S>& t, const auto& n) {
                  if (!t.needs_grad(a.id)) return;
                  t.grad(a.id) += n.grad.cwiseProduct(
                      (t.value(a.id).array() > S(0)).template cast<S>().matrix());
                });
}

template <typename S>
Var<S> sigmoid(Var<S> a) {
  Tape<S>& t = *a.tape;
  Mat<S> out = ((-t.value(a.id).array()).exp() + S(1)).inverse().matrix();
  return t.push(std::move(out), t.needs_grad(a.id),
                [a](Tape<S>& t, const auto& n) {
                  if (!t.needs_grad(a.id)) return;
                  auto y = n.value.array();
                  t.grad(a.id) +=
                      n.grad.cwiseProduct((y * (S(1) - y)).matrix());
                });
}

template <typename S>
Var<S> tanh(Var<S> a) {
  Tape<S>& t = *a.tape;
  Mat<S> out = t.value(a.id).array().tanh().matrix();
  return t.push(std::move(out), t.needs_grad(a.id),
                [a](Tape<S>& t, const auto& n) {
                  if (!t.needs_grad(a.id)) return;
                  auto y = n.value.array();
                  t.grad(a.id) += n.grad.cwiseProduct((S(1) - y * y).matrix());
                });
}

// Softmax along each row (the last axis).
template <typename S>
Var<S> softmax_rows(Var<S> a) {
  Tape<S>& t = *a.tape;
  Mat<S> out = t.value(a.id);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    S m = out.row(r).maxCoeff();
    out.row(r) = (out.row(r).array() - m).exp();
    out.row(r) /= out.row(r).sum();
  }
  return t.push(std::move(out), t.needs_grad(a.id),
                [a](Tape<S>& t, const auto& n) {
                  if (!t.needs_grad(a.id)) return;
                  for (Eigen::Index r = 0; r < n.value.rows(); ++r) {
                    S s = n.grad.row(r).dot(n.value.row(r));
                    t.grad(a.id).row(r) += n.value.row(r).cwiseProduct(
                        (n.grad.row(r).array() - s).matrix());
                  }
                });
}

// Per-row layer normalization with learned gain/bias (both 1xC).
template <typename S>
Var<S> layer_norm_rows(Var<S> x, Var<S> gain, Var<S> bias,
                       S eps = S(1e-5)) {
  if (gain.rows() != 1 || gain.cols() != x.cols() || bias.rows() != 1 ||
      bias.cols() != x.cols())
    throw ShapeError("layer_norm_rows: gain/bias must be 1x" +
                     std::to_string(x.cols()));
  Tape<S>& t = *x.tape;
  const Mat<S>& v = t.value(x.id);
  const Eigen::Index n = v.cols();
  Mat<S> xhat(v.rows(), n);
  Mat<S> inv_sigma(v.rows(), 1);
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    S mu = v.row(r).mean();
    auto centered = v.row(r).array() - mu;
    S var = centered.square().sum() / S(n);
    S is = S(1) / std::sqrt(var + eps);
    inv_sigma(r, 0) = is;
    xhat.row(r) = (centered * is).matrix();
  }
  Mat<S> out =
      (xhat.array().rowwise() * t.value(gain.id).row(0).array()).matrix();
  out.rowwise() += t.value(bias.id).row(0);
  bool ng = t.needs_grad(x.id) || t.needs_grad(gain.id) ||
            t.needs_grad(bias.id);
  return t.push(
      std::move(out), ng,
      [x, gain, bias, xhat = std::move(xhat),
       inv_sigma = std::move(inv_sigma)](Tape<S>& t, const auto& node) {
        if (t.needs_grad(bias.id))
          t.grad(bias.id).row(0) += node.grad.colwise().sum();
        if (t.needs_grad(gain.id))
          t.grad(gain.id).row(0) +=
              node.grad.cwiseProduct(xhat).colwise().sum();
        if (!t.needs_grad(x.id)) return;
        const auto g = t.value(gain.id).row(0).array();
        for (Eigen::Index r = 0; r < xhat.rows(); ++r) {
          auto dxhat = (node.grad.row(r).array() * g).eval();
          S mean_dxhat = dxhat.mean();
          S mean_dxhat_xhat =
              (dxhat * xhat.row(r).array()).mean();
          t.grad(x.id).row(r) +=
              (inv_sigma(r, 0) *
               (dxhat - mean_dxhat - xhat.row(r).array() * mean_dxhat_xhat))
                  .matrix();
        }
      });
}

// Gathers rows of an embedding table; gradients scatter-add back into the
// parameter without materializing the full table on the tape.
template <typename S>
Var<S> embedding_lookup(Tape<S>& t, Parameter<S>& table,
                        const std::vector<int>& ids) {
  if (ids.empty()) throw EmptyInput("embedding_lookup: empty id list");
  Mat<S> out(static_cast<Eigen::Index>(ids.size()), table.value.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= table.value.rows())
      throw DataError("embedding id out of range: " + std::to_string(ids[i]));
    out.row(static_cast<Eigen::Index>(i)) = table.value.row(ids[i]);
  }
  Parameter<S>* tp = &table;
  return t.push(std::move(out), true,
                [tp, ids](Tape<S>&, const auto& n) {
                  for (std::size_t i = 0; i < ids.size(); ++i)
                    tp->grad.row(ids[i]) +=
                        n.grad.row(static_cast<Eigen::Index>(i));
                });
}

// Mean over rows -> 1xC. The masked overload averages only rows whose mask
// entry is set; at least one row must be kept.
template <typename S>
Var<S> mean_pool_rows(Var<S> x, const std::vector<bool>& mask);

template <typename S>
Var<S> mean_pool_rows(Var<S> x) {
  std::vector<bool> mask(static_cast<std::size_t>(x.rows()), true);
  return mean_pool_rows(x, mask);
}

template <typename S>
Var<S> mean_pool_rows(Var<S> x, const std::vector<bool>& mask) {
  Tape<S>& t = *x.tape;
  if (static_cast<Eigen::Index>(mask.size()) != x.rows())
    throw ShapeError("mean_pool_rows: mask length " +
                     std::to_string(mask.size()) + " vs " +
                     std::to_string(x.rows()) + " rows");
  Eigen::Index kept = 0;
  for (bool b : mask) kept += b ? 1 : 0;
  if (kept == 0) throw EmptyInput("mean_pool_rows: all rows masked out");
  Mat<S> out = Mat<S>::Zero(1, x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    if (mask[static_cast<std::size_t>(r)]) out.row(0) += t.value(x.id).row(r);
  out /= S(kept);
  return t.push(std::move(out), t.needs_grad(x.id),
                [x, mask, kept](Tape<S>& t, const auto& n) {
                  if (!t.needs_grad(x.id)) return;
                  Mat<S> per_row = n.grad / S(kept);
                  for (Eigen::Index r = 0; r < t.value(x.id).rows(); ++r)
                    if (mask[static_cast<std::size_t>(r)])
                      t.grad(x.id).row(r) += per_row.row(0);
                });
}

// Column-wise max over rows -> 1xC (max-over-time pooling). Gradient routes
// to the first maximal row of each column.
template <typename S>
Var<S> max_rows(Var<S> x) {
  Tape<S>& t = *x.tape;
  if (x.rows() == 0) throw EmptyInput("max_rows: no rows");
  const Mat<S>& v = t.value(x.id);
  Mat<S> out(1, v.cols());
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(v.cols()));
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < v.rows(); ++r)
      if (v(r, c) > v(best, c)) best = r;
    arg[static_cast<std::size_t>(c)] = best;
    out(0, c) = v(best, c);
  }
  return t.push(std::move(out), t.needs_grad(x.id),
                [x, arg = std::move(arg)](Tape<S>& t, const auto& n) {
                  if (!t.needs_grad(x.id)) return;
                  for (Eigen::Index c = 0; c < n.value.cols(); ++c)
                    t.grad(x.id)(arg[static_cast<std::size_t>(c)], c) +=
                        n.grad(0, c);
                });
}

template <typename S>
Var<S> concat_rows(const std::vector<Var<S>>& parts) {
  if (parts.empty()) throw EmptyInput("concat_rows: nothing to concatenate");
  Tape<S>& t = *parts[0].tape;
  Eigen::Index cols = parts[0].cols(), rows = 0;
  bool ng = false;
  for (const Var<S>& p : parts) {
    if (p.cols() != cols)
      throw ShapeError("concat_rows: column counts differ, " +
                       std::to_string(cols) + " vs " +
                       std::to_string(p.cols()));
    rows += p.rows();
    ng = ng || t.needs_grad(p.id);
  }
  Mat<S> out(rows, cols);
  Eigen::Index at = 0;
  for (const Var<S>& p : parts) {
    out.middleRows(at, p.rows()) = t.value(p.id);
    at += p.rows();
  }
  return t.push(std::move(out), ng, [parts](Tape<S>& t, const auto& n) {
    Eigen::Index at = 0;
    for (const Var<S>& p : parts) {
      if (t.needs_grad(p.id))
        t.grad(p.id) += n.grad.middleRows(at, t.value(p.id).rows());
      at += t.value(p.id).rows();
    }
  });
}

template <typename S>
Var<S> concat_cols(const std::vector<Var<S>>& parts) {
  if (parts.empty()) throw EmptyInput("concat_cols: nothing to concatenate");
  Tape<S>& t = *parts[0].tape;
  Eigen::Index rows = parts[0].rows(), cols = 0;
  bool ng = false;
  for (const Var<S>& p : parts) {
    if (p.rows() != rows)
      throw ShapeError("concat_cols: row counts differ, " +
                       std::to_string(rows) + " vs " +
                       std::to_string(p.rows()));
    cols += p.cols();
    ng = ng || t.needs_grad(p.id);
  }
  Mat<S> out(rows, cols);
  Eigen::Index at = 0;
  for (const Var<S>& p : parts) {
    out.middleCols(at, p.cols()) = t.value(p.id);
    at += p.cols();
  }
  return t.push(std::move(out), ng, [parts](Tape<S>& t, const auto& n) {
    Eigen::Index at = 0;
    for (const Var<S>& p : parts) {
      if (t.needs_grad(p.id))
        t.grad(p.id) += n.grad.middleCols(at, t.value(p.id).cols());
      at += t.value(p.id).cols();
    }
  });
}

template <typename S>
Var<S> narrow_rows(Var<S> x, Eigen::Index start, Eigen::Index len) {
  Tape<S>& t = *x.tape;
  if (start < 0 || len < 0 || start + len > x.rows())
    throw ShapeError("narrow_rows: slice [" + std::to_string(start) + ", +" +
                     std::to_string(len) + ") out of " +
                     std::to_string(x.rows()) + " rows");
  Mat<S> out = t.value(x.id).middleRows(start, len);
  return t.push(std::move(out), t.needs_grad(x.id),
                [x, start, len](Tape<S>& t, const auto& n) {
                  if (t.needs_grad(x.id))
                    t.grad(x.id).middleRows(start, len) += n.grad;
                });
}

template <typename S>
Var<S> narrow_cols(Var<S> x, Eigen::Index start, Eigen::Index len) {
  Tape<S>& t = *x.tape;
  if (start < 0 || len < 0 || start + len > x.cols())
    throw ShapeError("narrow_cols: slice [" + std::to_string(start) + ", +" +
                     std::to_string(len) + ") out of " +
                     std::to_string(x.cols()) + " cols");
  Mat<S> out = t.value(x.id).middleCols(start, len);
  return t.push(std::move(out), t.needs_grad(x.id),
                [x, start, len](Tape<S>& t, const auto& n) {
                  if (t.needs_grad(x.id))
                    t.grad(x.id).middleCols(start, len) += n.grad;
                });
}

// Mean over rows of -log softmax(row)[label]; the standard classification
// loss. One label per row.
template <typename S>
Var<S> cross_entropy(Var<S> logits, const std::vector<int>& labels) {
  Tape<S>& t = *logits.tape;
  const Mat<S>& v = t.value(logits.id);
  if (v.rows() == 0) throw EmptyBatch("cross_entropy: no rows");
  if (static_cast<Eigen::Index>(labels.size()) != v.rows())
    throw ShapeError("cross_entropy: " + std::to_string(labels.size()) +
                     " labels for " + std::to_string(v.rows()) + " rows");
  Mat<S> probs(v.rows(), v.cols());
  S total = S(0);
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    int y = labels[static_cast<std::size_t>(r)];
    if (y < 0 || y >= v.cols())
      throw DataError("cross_entropy: label " + std::to_string(y) +
                      " outside [0, " + std::to_string(v.cols()) + ")");
    S m = v.row(r).maxCoeff();
    auto shifted = (v.row(r).array() - m).eval();
    S lse = std::log(shifted.exp().sum());
    probs.row(r) = (shifted - lse).exp().matrix();
    total += lse - shifted(y);
  }
  Mat<S> out(1, 1);
  out(0, 0) = total / S(v.rows());
  return t.push(std::move(out), t.needs_grad(logits.id),
                [logits, labels, probs = std::move(probs)](Tape<S>& t,
                                                           const auto& n) {
                  if (!t.needs_grad(logits.id)) return;
                  S w = n.grad(0, 0) / S(probs.rows());
                  Mat<S> d = probs;
                  for (Eigen::Index r = 0; r < d.rows(); ++r)
                    d(r, labels[static_cast<std::size_t>(r)]) -= S(1);
                  t.grad(logits.id) += w * d;
                });
}

// Rows rescaled to unit L2 norm, smoothed by eps inside the square root so
// the zero row stays differentiable.
template <typename S>
Var<S> l2_normalize_rows(Var<S> x, S eps = S(1e-12)) {
  Tape<S>& t = *x.tape;
  const Mat<S>& v = t.value(x.id);
  Mat<S> out(v.rows(), v.cols());
  Mat<S> inv_norm(v.rows(), 1);
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    S in = S(1) / std::sqrt(v.row(r).squaredNorm() + eps);
    inv_norm(r, 0) = in;
    out.row(r) = v.row(r) * in;
  }
  return t.push(std::move(out), t.needs_grad(x.id),
                [x, inv_norm = std::move(inv_norm)](Tape<S>& t,
                                                    const auto& n) {
                  if (!t.needs_grad(x.id)) return;
                  for (Eigen::Index r = 0; r < n.value.rows(); ++r) {
                    S s = n.grad.row(r).dot(n.value.row(r));
                    t.grad(x.id).row(r) +=
                        inv_norm(r, 0) *
                        (n.grad.row(r) - n.value.row(r) * s);
                  }
                });
}

// Inverted dropout; identity when p == 0. Draws one Bernoulli mask per call
// from the provided generator, so a fixed seed gives a fixed mask sequence.
template <typename S>
Var<S> dropout(Var<S> x, S p, std::mt19937_64& rng) {
  if (p <= S(0)) return x;
  if (p >= S(1)) throw ConfigError("dropout probability must be < 1");
  Tape<S>& t = *x.tape;
  std::bernoulli_distribution keep(1.0 - static_cast<double>(p));
  Mat<S> mask(x.rows(), x.cols());
  S inv_keep = S(1) / (S(1) - p);
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      mask(r, c) = keep(rng) ? inv_keep : S(0);
  Mat<S> out = t.value(x.id).cwiseProduct(mask);
  return t.push(std::move(out), t.needs_grad(x.id),
                [x, mask = std::move(mask)](Tape<S>& t, const auto& n) {
                  if (t.needs_grad(x.id))
                    t.grad(x.id) += n.grad.cwiseProduct(mask);
                });
}

template <typename S>
Var<S> sum(Var<S> x) {
  Tape<S>& t = *x.tape;
  Mat<S> out(1, 1);
  out(0, 0) = t.value(x.id).sum();
  return t.push(std::move(out), t.needs_grad(x.id),
                [x](Tape<S>& t, const auto& n) {
                  if (t.needs_grad(x.id))
                    t.grad(x.id).array() += n.grad(0, 0);
                });
}

template <typename S>
Var<S> dot(Var<S> a, Var<S> b) {
  return sum(hadamard(a, b));
}

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

// Xavier-uniform fill: U(-limit, limit) with limit = sqrt(6 / (fan_in+fan_out)).
template <typename S>
void xavier_fill(Mat<S>& m, std::mt19937_64& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = static_cast<S>(dist(rng));
}

// Deterministic sub-seed derivation (splitmix64 over seed ^ hash(tag)).
inline std::uint64_t sub_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : tag) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace kovec

#endif  // KOVEC_AUTODIFF_HPP_
