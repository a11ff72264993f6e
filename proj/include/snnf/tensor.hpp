// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_TENSOR_HPP_
#define SNNF_TENSOR_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace snnf {

using Shape = std::vector<int>;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

// One recorded node of the computation tape. Nodes are created in
// topological order (monotone ids); backward walks ids in reverse, so
// every node is visited exactly once.
struct Node {
  Shape shape;
  std::vector<float> value;
  std::vector<float> grad;  // allocated lazily, same length as value
  bool requires_grad = false;
  bool is_leaf = true;
  uint64_t id = 0;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backprop;

  std::vector<float>& ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0f);
    return grad;
  }
};

uint64_t next_node_id();

}  // namespace detail

// Dense float32 N-d array participating in reverse-mode differentiation.
// Copies are shallow (shared node); values are row-major.
class Tensor {
 public:
  Tensor() = default;

  static Tensor from(Shape shape, std::vector<float> values,
                     bool requires_grad = false);
  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, float v, bool requires_grad = false);
  static Tensor scalar(float v, bool requires_grad = false);
  // Uniform in [lo, hi).
  static Tensor uniform(Shape shape, std::mt19937& rng, float lo, float hi,
                        bool requires_grad = false);

  bool defined() const { return n_ != nullptr; }
  const Shape& shape() const { return n_->shape; }
  int rank() const { return static_cast<int>(n_->shape.size()); }
  int dim(int i) const { return n_->shape[static_cast<size_t>(i)]; }
  int64_t size() const { return static_cast<int64_t>(n_->value.size()); }

  const std::vector<float>& values() const { return n_->value; }
  std::vector<float>& mutable_values() { return n_->value; }
  float item() const;

  bool requires_grad() const { return n_ && n_->requires_grad; }
  void set_requires_grad(bool rg) { n_->requires_grad = rg; }
  bool has_grad() const { return n_ && !n_->grad.empty(); }
  const std::vector<float>& grad() const;
  void zero_grad();

  // Same values, cut off from the tape.
  Tensor detach() const;

  std::shared_ptr<detail::Node> node() const { return n_; }
  explicit Tensor(std::shared_ptr<detail::Node> n) : n_(std::move(n)) {}

 private:
  std::shared_ptr<detail::Node> n_;
};

// ---- elementwise ----
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor add_scalar(const Tensor& a, float s);
Tensor mul_scalar(const Tensor& a, float s);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }
inline Tensor operator*(float s, const Tensor& a) { return mul_scalar(a, s); }
inline Tensor operator*(const Tensor& a, float s) { return mul_scalar(a, s); }
inline Tensor operator+(const Tensor& a, float s) { return add_scalar(a, s); }

// ---- linear algebra ----
Tensor matmul(const Tensor& a, const Tensor& b);             // (m,k)x(k,n)
Tensor bmm(const Tensor& a, const Tensor& b);                // (B,m,k)x(B,k,n)
// y = x W + b over the last axis; b may be undefined.
Tensor affine(const Tensor& x, const Tensor& w, const Tensor& b);
// Left-padded causal convolution. x: (Cin,T) or (B,Cin,T); w: (Cout,Cin,k);
// b: (Cout) or undefined. Output length equals input length.
Tensor conv1d_causal(const Tensor& x, const Tensor& w, const Tensor& b,
                     int dilation = 1);

// ---- 2D helpers (row vector broadcast against (R,F)) ----
Tensor add_rowvec(const Tensor& x, const Tensor& v);
Tensor sub_rowvec(const Tensor& x, const Tensor& v);
Tensor mul_rowvec(const Tensor& x, const Tensor& v);

// ---- reductions ----
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor mean_axis(const Tensor& x, int axis);  // drops the axis
Tensor sum_axis(const Tensor& x, int axis);

// ---- shape ----
Tensor reshape(const Tensor& x, Shape shape);
Tensor transpose(const Tensor& x);             // 2D
Tensor permute(const Tensor& x, const std::vector<int>& axes);
Tensor concat(const std::vector<Tensor>& parts, int axis);
Tensor slice(const Tensor& x, int axis, int start, int len);

// ---- custom-gradient hook ----
// Applies fwd elementwise; the reverse pass calls bwd(x_saved, upstream)
// per element instead of differentiating fwd. This is how the spike
// nonlinearity decouples its binary forward from its surrogate backward.
Tensor custom_unary(const Tensor& x, std::function<float(float)> fwd,
                    std::function<float(float, float)> bwd);

// Scalar surrogate: d/du of the arctangent spike relaxation,
// (alpha/2) / (1 + ((pi/2) * alpha * u)^2).
float surrogate_grad(float u_minus_thr, float alpha);

// Binary spike with surrogate backward. Forward: 1 if u >= u_thr else 0.
// Backward evaluates the surrogate at (u - u_thr) when centered, else at u.
Tensor spike(const Tensor& u, float u_thr, float alpha,
             bool center_at_threshold = true);

// Reverse pass from a scalar loss. Populates grad on every requires_grad
// node reachable from the loss, then consumes the tape (intermediate
// backprop closures are released). Grads accumulate until zero_grad.
void backward(const Tensor& loss);

}  // namespace snnf

#endif  // SNNF_TENSOR_HPP_
