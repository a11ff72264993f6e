// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace snnf {

using MatrixRM =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatrixRM>;
using CMapRM = Eigen::Map<const MatrixRM>;

int64_t shape_numel(const Shape& shape) {
  int64_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw error("non-positive dimension in shape " + shape_str(shape));
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ")";
  return os.str();
}

namespace detail {
uint64_t next_node_id() {
  static std::atomic<uint64_t> counter{0};
  return ++counter;
}
}  // namespace detail

namespace {

using detail::Node;

void check_finite(const std::vector<float>& v, const char* op) {
  if (!Eigen::Map<const Eigen::ArrayXf>(v.data(),
                                        static_cast<Eigen::Index>(v.size()))
           .allFinite())
    throw error(std::string("non-finite value produced by ") + op);
}

std::shared_ptr<Node> new_node(Shape shape, std::vector<float> value) {
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(value);
  n->id = detail::next_node_id();
  return n;
}

// Builds an op node. The backprop closure receives the output node and
// accumulates into the inputs it captured.
Tensor make_op(const char* name, Shape shape, std::vector<float> value,
               std::initializer_list<Tensor> inputs,
               std::function<void(Node&)> backprop) {
  if (static_cast<int64_t>(value.size()) != shape_numel(shape))
    throw error(std::string(name) + ": value/shape mismatch");
  check_finite(value, name);
  auto n = new_node(std::move(shape), std::move(value));
  n->is_leaf = false;
  bool rg = false;
  for (const Tensor& t : inputs) rg = rg || t.requires_grad();
  n->requires_grad = rg;
  if (rg) {
    for (const Tensor& t : inputs)
      if (t.defined()) n->parents.push_back(t.node());
    n->backprop = std::move(backprop);
  }
  return Tensor(n);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw error(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                " vs " + shape_str(b.shape()));
}

}  // namespace

// ---- Tensor basics ----

Tensor Tensor::from(Shape shape, std::vector<float> values, bool requires_grad) {
  if (static_cast<int64_t>(values.size()) != shape_numel(shape))
    throw error("Tensor::from: values length " + std::to_string(values.size()) +
                " != numel of " + shape_str(shape));
  check_finite(values, "Tensor::from");
  auto n = new_node(std::move(shape), std::move(values));
  n->requires_grad = requires_grad;
  return Tensor(n);
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  return full(std::move(shape), 0.0f, requires_grad);
}

Tensor Tensor::full(Shape shape, float v, bool requires_grad) {
  std::vector<float> vals(static_cast<size_t>(shape_numel(shape)), v);
  return from(std::move(shape), std::move(vals), requires_grad);
}

Tensor Tensor::scalar(float v, bool requires_grad) {
  return from({1}, {v}, requires_grad);
}

Tensor Tensor::uniform(Shape shape, std::mt19937& rng, float lo, float hi,
                       bool requires_grad) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> vals(static_cast<size_t>(shape_numel(shape)));
  for (float& v : vals) v = dist(rng);
  return from(std::move(shape), std::move(vals), requires_grad);
}

float Tensor::item() const {
  if (size() != 1) throw error("item(): tensor is not scalar");
  return n_->value[0];
}

const std::vector<float>& Tensor::grad() const {
  if (!has_grad()) throw error("grad(): no gradient recorded");
  return n_->grad;
}

void Tensor::zero_grad() {
  if (n_) n_->grad.clear();
}

Tensor Tensor::detach() const {
  auto n = new_node(n_->shape, n_->value);
  return Tensor(n);
}

// ---- elementwise ----

namespace {

template <typename F, typename A>
Tensor binary_ew(const char* name, const Tensor& a, const Tensor& b, F f,
                 A accum) {
  require_same_shape(a, b, name);
  std::vector<float> out(a.values().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = f(a.values()[i], b.values()[i]);
  auto an = a.node(), bn = b.node();
  return make_op(name, a.shape(), std::move(out), {a, b},
                 [an, bn, accum](Node& o) { accum(o, *an, *bn); });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_ew(
      "add", a, b, [](float x, float y) { return x + y; },
      [](Node& o, Node& an, Node& bn) {
        if (an.requires_grad) {
          auto& g = an.ensure_grad();
          for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
        }
        if (bn.requires_grad) {
          auto& g = bn.ensure_grad();
          for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
        }
      });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_ew(
      "sub", a, b, [](float x, float y) { return x - y; },
      [](Node& o, Node& an, Node& bn) {
        if (an.requires_grad) {
          auto& g = an.ensure_grad();
          for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
        }
        if (bn.requires_grad) {
          auto& g = bn.ensure_grad();
          for (size_t i = 0; i < g.size(); ++i) g[i] -= o.grad[i];
        }
      });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary_ew(
      "mul", a, b, [](float x, float y) { return x * y; },
      [](Node& o, Node& an, Node& bn) {
        if (an.requires_grad) {
          auto& g = an.ensure_grad();
          for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i] * bn.value[i];
        }
        if (bn.requires_grad) {
          auto& g = bn.ensure_grad();
          for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i] * an.value[i];
        }
      });
}

Tensor add_scalar(const Tensor& a, float s) {
  std::vector<float> out(a.values());
  for (float& v : out) v += s;
  auto an = a.node();
  return make_op("add_scalar", a.shape(), std::move(out), {a}, [an](Node& o) {
    if (!an->requires_grad) return;
    auto& g = an->ensure_grad();
    for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
  });
}

Tensor mul_scalar(const Tensor& a, float s) {
  std::vector<float> out(a.values());
  for (float& v : out) v *= s;
  auto an = a.node();
  return make_op("mul_scalar", a.shape(), std::move(out), {a}, [an, s](Node& o) {
    if (!an->requires_grad) return;
    auto& g = an->ensure_grad();
    for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i] * s;
  });
}

// ---- linear algebra ----

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2)
    throw error("matmul: expects 2D operands");
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k)
    throw error("matmul: inner dims differ, " + shape_str(a.shape()) + " x " +
                shape_str(b.shape()));
  std::vector<float> out(static_cast<size_t>(m) * n);
  CMapRM A(a.values().data(), m, k), B(b.values().data(), k, n);
  MapRM(out.data(), m, n).noalias() = A * B;
  auto an = a.node(), bn = b.node();
  return make_op("matmul", {m, n}, std::move(out), {a, b},
                 [an, bn, m, k, n](Node& o) {
                   CMapRM G(o.grad.data(), m, n);
                   if (an->requires_grad) {
                     CMapRM B(bn->value.data(), k, n);
                     MapRM(an->ensure_grad().data(), m, k).noalias() +=
                         G * B.transpose();
                   }
                   if (bn->requires_grad) {
                     CMapRM A(an->value.data(), m, k);
                     MapRM(bn->ensure_grad().data(), k, n).noalias() +=
                         A.transpose() * G;
                   }
                 });
}

Tensor bmm(const Tensor& a, const Tensor& b) {
  if (a.rank() != 3 || b.rank() != 3 || a.dim(0) != b.dim(0))
    throw error("bmm: expects (B,m,k)x(B,k,n)");
  const int bs = a.dim(0), m = a.dim(1), k = a.dim(2), n = b.dim(2);
  if (b.dim(1) != k) throw error("bmm: inner dims differ");
  std::vector<float> out(static_cast<size_t>(bs) * m * n);
  for (int i = 0; i < bs; ++i) {
    CMapRM A(a.values().data() + static_cast<size_t>(i) * m * k, m, k);
    CMapRM B(b.values().data() + static_cast<size_t>(i) * k * n, k, n);
    MapRM(out.data() + static_cast<size_t>(i) * m * n, m, n).noalias() = A * B;
  }
  auto an = a.node(), bn = b.node();
  return make_op("bmm", {bs, m, n}, std::move(out), {a, b},
                 [an, bn, bs, m, k, n](Node& o) {
                   for (int i = 0; i < bs; ++i) {
                     CMapRM G(o.grad.data() + static_cast<size_t>(i) * m * n, m, n);
                     if (an->requires_grad) {
                       CMapRM B(bn->value.data() + static_cast<size_t>(i) * k * n, k, n);
                       MapRM(an->ensure_grad().data() + static_cast<size_t>(i) * m * k,
                             m, k)
                           .noalias() += G * B.transpose();
                     }
                     if (bn->requires_grad) {
                       CMapRM A(an->value.data() + static_cast<size_t>(i) * m * k, m, k);
                       MapRM(bn->ensure_grad().data() + static_cast<size_t>(i) * k * n,
                             k, n)
                           .noalias() += A.transpose() * G;
                     }
                   }
                 });
}

Tensor affine(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (w.rank() != 2) throw error("affine: weight must be 2D");
  const int d_in = w.dim(0), d_out = w.dim(1);
  if (x.dim(x.rank() - 1) != d_in)
    throw error("affine: input last dim " + std::to_string(x.dim(x.rank() - 1)) +
                " != " + std::to_string(d_in));
  if (b.defined() && (b.rank() != 1 || b.dim(0) != d_out))
    throw error("affine: bias shape mismatch");
  const int64_t rows = x.size() / d_in;
  Tensor x2 = reshape(x, {static_cast<int>(rows), d_in});
  Tensor y2 = matmul(x2, w);
  if (b.defined()) y2 = add_rowvec(y2, b);
  Shape out_shape = x.shape();
  out_shape.back() = d_out;
  return reshape(y2, out_shape);
}

Tensor conv1d_causal(const Tensor& x, const Tensor& w, const Tensor& b,
                     int dilation) {
  if (dilation < 1) throw error("conv1d_causal: dilation must be >= 1");
  if (w.rank() != 3) throw error("conv1d_causal: kernels must be (Cout,Cin,k)");
  const bool batched = x.rank() == 3;
  if (!batched && x.rank() != 2)
    throw error("conv1d_causal: input must be (Cin,T) or (B,Cin,T)");
  const int B = batched ? x.dim(0) : 1;
  const int c_in = batched ? x.dim(1) : x.dim(0);
  const int T = batched ? x.dim(2) : x.dim(1);
  const int c_out = w.dim(0), k = w.dim(2);
  if (w.dim(1) != c_in) throw error("conv1d_causal: channel mismatch");
  if (b.defined() && (b.rank() != 1 || b.dim(0) != c_out))
    throw error("conv1d_causal: bias shape mismatch");

  const auto& xv = x.values();
  const auto& wv = w.values();
  std::vector<float> out(static_cast<size_t>(B) * c_out * T, 0.0f);
  auto xat = [&](int bb, int c, int t) {
    return xv[(static_cast<size_t>(bb) * c_in + c) * T + t];
  };
  for (int bb = 0; bb < B; ++bb)
    for (int co = 0; co < c_out; ++co) {
      float* orow = out.data() + (static_cast<size_t>(bb) * c_out + co) * T;
      for (int ci = 0; ci < c_in; ++ci)
        for (int j = 0; j < k; ++j) {
          const float wj = wv[(static_cast<size_t>(co) * c_in + ci) * k + j];
          const int off = j * dilation;
          for (int t = off; t < T; ++t) orow[t] += wj * xat(bb, ci, t - off);
        }
      if (b.defined())
        for (int t = 0; t < T; ++t) orow[t] += b.values()[co];
    }

  Shape out_shape = batched ? Shape{B, c_out, T} : Shape{c_out, T};
  auto xn = x.node(), wn = w.node(), bn = b.defined() ? b.node() : nullptr;
  return make_op(
      "conv1d_causal", std::move(out_shape), std::move(out), {x, w, b},
      [xn, wn, bn, B, c_in, c_out, T, k, dilation](Node& o) {
        auto gat = [&](int bb, int co, int t) {
          return o.grad[(static_cast<size_t>(bb) * c_out + co) * T + t];
        };
        if (xn->requires_grad) {
          auto& gx = xn->ensure_grad();
          for (int bb = 0; bb < B; ++bb)
            for (int co = 0; co < c_out; ++co)
              for (int ci = 0; ci < c_in; ++ci)
                for (int j = 0; j < k; ++j) {
                  const float wj =
                      wn->value[(static_cast<size_t>(co) * c_in + ci) * k + j];
                  const int off = j * dilation;
                  for (int t = off; t < T; ++t)
                    gx[(static_cast<size_t>(bb) * c_in + ci) * T + (t - off)] +=
                        wj * gat(bb, co, t);
                }
        }
        if (wn->requires_grad) {
          auto& gw = wn->ensure_grad();
          for (int bb = 0; bb < B; ++bb)
            for (int co = 0; co < c_out; ++co)
              for (int ci = 0; ci < c_in; ++ci)
                for (int j = 0; j < k; ++j) {
                  const int off = j * dilation;
                  float acc = 0.0f;
                  for (int t = off; t < T; ++t)
                    acc += gat(bb, co, t) *
                           xn->value[(static_cast<size_t>(bb) * c_in + ci) * T +
                                     (t - off)];
                  gw[(static_cast<size_t>(co) * c_in + ci) * k + j] += acc;
                }
        }
        if (bn && bn->requires_grad) {
          auto& gb = bn->ensure_grad();
          for (int bb = 0; bb < B; ++bb)
            for (int co = 0; co < c_out; ++co)
              for (int t = 0; t < T; ++t) gb[co] += gat(bb, co, t);
        }
      });
}

// ---- row-vector broadcast ----

namespace {

void check_rowvec(const Tensor& x, const Tensor& v, const char* op) {
  if (x.rank() != 2 || v.rank() != 1 || v.dim(0) != x.dim(1))
    throw error(std::string(op) + ": expects (R,F) with (F,) vector");
}

}  // namespace

Tensor add_rowvec(const Tensor& x, const Tensor& v) {
  check_rowvec(x, v, "add_rowvec");
  const int R = x.dim(0), F = x.dim(1);
  std::vector<float> out(x.values());
  for (int r = 0; r < R; ++r)
    for (int f = 0; f < F; ++f) out[static_cast<size_t>(r) * F + f] += v.values()[f];
  auto xn = x.node(), vn = v.node();
  return make_op("add_rowvec", x.shape(), std::move(out), {x, v},
                 [xn, vn, R, F](Node& o) {
                   if (xn->requires_grad) {
                     auto& g = xn->ensure_grad();
                     for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
                   }
                   if (vn->requires_grad) {
                     auto& g = vn->ensure_grad();
                     for (int r = 0; r < R; ++r)
                       for (int f = 0; f < F; ++f)
                         g[f] += o.grad[static_cast<size_t>(r) * F + f];
                   }
                 });
}

Tensor sub_rowvec(const Tensor& x, const Tensor& v) {
  check_rowvec(x, v, "sub_rowvec");
  const int R = x.dim(0), F = x.dim(1);
  std::vector<float> out(x.values());
  for (int r = 0; r < R; ++r)
    for (int f = 0; f < F; ++f) out[static_cast<size_t>(r) * F + f] -= v.values()[f];
  auto xn = x.node(), vn = v.node();
  return make_op("sub_rowvec", x.shape(), std::move(out), {x, v},
                 [xn, vn, R, F](Node& o) {
                   if (xn->requires_grad) {
                     auto& g = xn->ensure_grad();
                     for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
                   }
                   if (vn->requires_grad) {
                     auto& g = vn->ensure_grad();
                     for (int r = 0; r < R; ++r)
                       for (int f = 0; f < F; ++f)
                         g[f] -= o.grad[static_cast<size_t>(r) * F + f];
                   }
                 });
}

Tensor mul_rowvec(const Tensor& x, const Tensor& v) {
  check_rowvec(x, v, "mul_rowvec");
  const int R = x.dim(0), F = x.dim(1);
  std::vector<float> out(x.values());
  for (int r = 0; r < R; ++r)
    for (int f = 0; f < F; ++f) out[static_cast<size_t>(r) * F + f] *= v.values()[f];
  auto xn = x.node(), vn = v.node();
  return make_op("mul_rowvec", x.shape(), std::move(out), {x, v},
                 [xn, vn, R, F](Node& o) {
                   if (xn->requires_grad) {
                     auto& g = xn->ensure_grad();
                     for (int r = 0; r < R; ++r)
                       for (int f = 0; f < F; ++f)
                         g[static_cast<size_t>(r) * F + f] +=
                             o.grad[static_cast<size_t>(r) * F + f] * vn->value[f];
                   }
                   if (vn->requires_grad) {
                     auto& g = vn->ensure_grad();
                     for (int r = 0; r < R; ++r)
                       for (int f = 0; f < F; ++f)
                         g[f] += o.grad[static_cast<size_t>(r) * F + f] *
                                 xn->value[static_cast<size_t>(r) * F + f];
                   }
                 });
}

// ---- reductions ----

Tensor sum(const Tensor& x) {
  float acc = 0.0f;
  for (float v : x.values()) acc += v;
  auto xn = x.node();
  return make_op("sum", {1}, {acc}, {x}, [xn](Node& o) {
    if (!xn->requires_grad) return;
    auto& g = xn->ensure_grad();
    for (float& v : g) v += o.grad[0];
  });
}

Tensor mean(const Tensor& x) {
  return mul_scalar(sum(x), 1.0f / static_cast<float>(x.size()));
}

Tensor sum_axis(const Tensor& x, int axis) {
  if (axis < 0 || axis >= x.rank()) throw error("sum_axis: bad axis");
  int64_t outer = 1, inner = 1;
  const int n = x.dim(axis);
  for (int i = 0; i < axis; ++i) outer *= x.dim(i);
  for (int i = axis + 1; i < x.rank(); ++i) inner *= x.dim(i);
  Shape out_shape;
  for (int i = 0; i < x.rank(); ++i)
    if (i != axis) out_shape.push_back(x.dim(i));
  if (out_shape.empty()) out_shape = {1};
  std::vector<float> out(static_cast<size_t>(outer) * inner, 0.0f);
  const auto& xv = x.values();
  for (int64_t o = 0; o < outer; ++o)
    for (int j = 0; j < n; ++j)
      for (int64_t i = 0; i < inner; ++i)
        out[o * inner + i] += xv[(o * n + j) * inner + i];
  auto xn = x.node();
  return make_op("sum_axis", std::move(out_shape), std::move(out), {x},
                 [xn, outer, inner, n](Node& o) {
                   if (!xn->requires_grad) return;
                   auto& g = xn->ensure_grad();
                   for (int64_t oo = 0; oo < outer; ++oo)
                     for (int j = 0; j < n; ++j)
                       for (int64_t i = 0; i < inner; ++i)
                         g[(oo * n + j) * inner + i] += o.grad[oo * inner + i];
                 });
}

Tensor mean_axis(const Tensor& x, int axis) {
  return mul_scalar(sum_axis(x, axis), 1.0f / static_cast<float>(x.dim(axis)));
}

// ---- shape ----

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_numel(shape) != x.size())
    throw error("reshape: numel mismatch " + shape_str(x.shape()) + " -> " +
                shape_str(shape));
  auto xn = x.node();
  return make_op("reshape", std::move(shape), x.values(), {x}, [xn](Node& o) {
    if (!xn->requires_grad) return;
    auto& g = xn->ensure_grad();
    for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
  });
}

Tensor transpose(const Tensor& x) {
  if (x.rank() != 2) throw error("transpose: expects 2D");
  return permute(x, {1, 0});
}

namespace {

// Row-major strides for a shape.
std::vector<int64_t> strides_of(const Shape& s) {
  std::vector<int64_t> st(s.size());
  int64_t acc = 1;
  for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
    st[static_cast<size_t>(i)] = acc;
    acc *= s[static_cast<size_t>(i)];
  }
  return st;
}

}  // namespace

Tensor permute(const Tensor& x, const std::vector<int>& axes) {
  const int r = x.rank();
  if (static_cast<int>(axes.size()) != r) throw error("permute: bad axes");
  std::vector<bool> seen(static_cast<size_t>(r), false);
  Shape out_shape(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    int a = axes[static_cast<size_t>(i)];
    if (a < 0 || a >= r || seen[static_cast<size_t>(a)]) throw error("permute: bad axes");
    seen[static_cast<size_t>(a)] = true;
    out_shape[static_cast<size_t>(i)] = x.dim(a);
  }
  auto in_strides = strides_of(x.shape());
  auto out_strides = strides_of(out_shape);
  const int64_t n = x.size();
  // mapping[i] = source flat index for output flat index i
  std::vector<int64_t> mapping(static_cast<size_t>(n));
  std::vector<int> idx(static_cast<size_t>(r), 0);
  for (int64_t flat = 0; flat < n; ++flat) {
    int64_t rem = flat;
    int64_t src = 0;
    for (int i = 0; i < r; ++i) {
      int64_t c = rem / out_strides[static_cast<size_t>(i)];
      rem %= out_strides[static_cast<size_t>(i)];
      src += c * in_strides[static_cast<size_t>(axes[static_cast<size_t>(i)])];
    }
    mapping[static_cast<size_t>(flat)] = src;
  }
  std::vector<float> out(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = x.values()[static_cast<size_t>(mapping[static_cast<size_t>(i)])];
  auto xn = x.node();
  return make_op("permute", std::move(out_shape), std::move(out), {x},
                 [xn, mapping = std::move(mapping)](Node& o) {
                   if (!xn->requires_grad) return;
                   auto& g = xn->ensure_grad();
                   for (size_t i = 0; i < mapping.size(); ++i)
                     g[static_cast<size_t>(mapping[i])] += o.grad[i];
                 });
}

Tensor concat(const std::vector<Tensor>& parts, int axis) {
  if (parts.empty()) throw error("concat: no inputs");
  const int r = parts[0].rank();
  if (axis < 0 || axis >= r) throw error("concat: bad axis");
  Shape out_shape = parts[0].shape();
  int total = 0;
  for (const Tensor& p : parts) {
    if (p.rank() != r) throw error("concat: rank mismatch");
    for (int i = 0; i < r; ++i)
      if (i != axis && p.dim(i) != out_shape[static_cast<size_t>(i)])
        throw error("concat: shape mismatch");
    total += p.dim(axis);
  }
  out_shape[static_cast<size_t>(axis)] = total;
  int64_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= out_shape[static_cast<size_t>(i)];
  for (int i = axis + 1; i < r; ++i) inner *= out_shape[static_cast<size_t>(i)];
  std::vector<float> out(static_cast<size_t>(shape_numel(out_shape)));
  int64_t col_off = 0;
  for (const Tensor& p : parts) {
    const int64_t pn = p.dim(axis) * inner;
    for (int64_t o = 0; o < outer; ++o)
      std::copy_n(p.values().data() + o * pn, pn,
                  out.data() + o * (static_cast<int64_t>(total) * inner) +
                      col_off * inner);
    col_off += p.dim(axis);
  }

  std::vector<std::shared_ptr<Node>> pnodes;
  std::vector<int> sizes;
  for (const Tensor& p : parts) {
    pnodes.push_back(p.node());
    sizes.push_back(p.dim(axis));
  }
  auto n = new_node(out_shape, std::move(out));
  n->is_leaf = false;
  bool rg = false;
  for (const Tensor& p : parts) rg = rg || p.requires_grad();
  n->requires_grad = rg;
  if (rg) {
    n->parents.assign(pnodes.begin(), pnodes.end());
    n->backprop = [pnodes, sizes, outer, inner, total](Node& o) {
      int64_t col_off2 = 0;
      for (size_t pi = 0; pi < pnodes.size(); ++pi) {
        auto& pn = *pnodes[pi];
        const int64_t plen = static_cast<int64_t>(sizes[pi]) * inner;
        if (pn.requires_grad) {
          auto& g = pn.ensure_grad();
          for (int64_t oo = 0; oo < outer; ++oo)
            for (int64_t i = 0; i < plen; ++i)
              g[static_cast<size_t>(oo * plen + i)] +=
                  o.grad[static_cast<size_t>(oo * (static_cast<int64_t>(total) * inner) +
                                             col_off2 * inner + i)];
        }
        col_off2 += sizes[pi];
      }
    };
  }
  return Tensor(n);
}

Tensor slice(const Tensor& x, int axis, int start, int len) {
  const int r = x.rank();
  if (axis < 0 || axis >= r) throw error("slice: bad axis");
  if (start < 0 || len < 1 || start + len > x.dim(axis))
    throw error("slice: range [" + std::to_string(start) + "," +
                std::to_string(start + len) + ") out of bounds for dim " +
                std::to_string(x.dim(axis)));
  int64_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= x.dim(i);
  for (int i = axis + 1; i < r; ++i) inner *= x.dim(i);
  const int n = x.dim(axis);
  Shape out_shape = x.shape();
  out_shape[static_cast<size_t>(axis)] = len;
  std::vector<float> out(static_cast<size_t>(outer) * len * inner);
  for (int64_t o = 0; o < outer; ++o)
    std::copy_n(x.values().data() + (o * n + start) * inner,
                static_cast<int64_t>(len) * inner,
                out.data() + o * len * inner);
  auto xn = x.node();
  return make_op("slice", std::move(out_shape), std::move(out), {x},
                 [xn, outer, inner, n, start, len](Node& o) {
                   if (!xn->requires_grad) return;
                   auto& g = xn->ensure_grad();
                   for (int64_t oo = 0; oo < outer; ++oo)
                     for (int64_t i = 0; i < static_cast<int64_t>(len) * inner; ++i)
                       g[static_cast<size_t>((oo * n + start) * inner + i)] +=
                           o.grad[static_cast<size_t>(oo * len * inner + i)];
                 });
}

// ---- custom gradient ----

Tensor custom_unary(const Tensor& x, std::function<float(float)> fwd,
                    std::function<float(float, float)> bwd) {
  std::vector<float> out(x.values().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = fwd(x.values()[i]);
  auto xn = x.node();
  return make_op("custom_unary", x.shape(), std::move(out), {x},
                 [xn, bwd = std::move(bwd)](Node& o) {
                   if (!xn->requires_grad) return;
                   auto& g = xn->ensure_grad();
                   for (size_t i = 0; i < g.size(); ++i)
                     g[i] += bwd(xn->value[i], o.grad[i]);
                 });
}

float surrogate_grad(float u_minus_thr, float alpha) {
  const float z = 0.5f * std::numbers::pi_v<float> * alpha * u_minus_thr;
  return (alpha / 2.0f) / (1.0f + z * z);
}

Tensor spike(const Tensor& u, float u_thr, float alpha, bool center_at_threshold) {
  std::vector<float> out(u.values().size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = u.values()[i] >= u_thr ? 1.0f : 0.0f;
  auto un = u.node();
  return make_op("spike", u.shape(), std::move(out), {u},
                 [un, u_thr, alpha, center_at_threshold](Node& o) {
                   if (!un->requires_grad) return;
                   auto& g = un->ensure_grad();
                   for (size_t i = 0; i < g.size(); ++i) {
                     const float arg = center_at_threshold
                                           ? un->value[i] - u_thr
                                           : un->value[i];
                     g[i] += surrogate_grad(arg, alpha) * o.grad[i];
                   }
                 });
}

// ---- backward ----

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1)
    throw error("backward: loss must be a defined scalar");
  if (!loss.requires_grad())
    throw error("backward: loss is detached from the tape");

  // Collect the reachable tape and order it by creation id (already
  // topological); walk in reverse so each node fires exactly once.
  std::vector<detail::Node*> tape;
  std::unordered_set<detail::Node*> seen;
  std::vector<std::shared_ptr<detail::Node>> stack{loss.node()};
  // Keep shared ownership alive during traversal.
  std::vector<std::shared_ptr<detail::Node>> owned;
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    if (!n || !n->requires_grad || seen.count(n.get())) continue;
    seen.insert(n.get());
    owned.push_back(n);
    tape.push_back(n.get());
    for (auto& p : n->parents) stack.push_back(p);
  }
  std::sort(tape.begin(), tape.end(),
            [](const detail::Node* a, const detail::Node* b) { return a->id > b->id; });

  loss.node()->ensure_grad()[0] += 1.0f;
  for (detail::Node* n : tape) {
    if (n->backprop && !n->grad.empty()) n->backprop(*n);
  }
  // Consume the tape: release closures and intermediate buffers so a
  // second backward on the same graph is impossible by construction.
  for (detail::Node* n : tape) {
    if (!n->is_leaf) {
      n->backprop = nullptr;
      n->parents.clear();
    }
  }
}

}  // namespace snnf
