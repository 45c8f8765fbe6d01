// Copyright 2026 The Intovar Authors.
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

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "intovar/matrix.hpp"
#include "intovar/rng.hpp"

namespace intovar::net {

// All trainable tensors of a model live in one flat double buffer; layers
// hold offsets into it. Gradients use an identically-shaped buffer, which
// keeps the optimizer, serialization, and finite-difference checks trivial.
struct TensorRef {
  std::string name;
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;  // 1 for bias vectors
  std::size_t size() const { return rows * cols; }
};

class ParamLayout {
 public:
  std::size_t add(const std::string& name, std::size_t rows, std::size_t cols = 1);
  std::size_t size() const { return size_; }
  const std::vector<TensorRef>& tensors() const { return tensors_; }
  const TensorRef& find(const std::string& name) const;

 private:
  std::vector<TensorRef> tensors_;
  std::size_t size_ = 0;
};

struct LinearRef {
  std::size_t w = 0;  // out x in, row-major
  std::size_t b = 0;  // out
  std::size_t out = 0, in = 0;
};

// Gate order: update (z), reset (r), candidate (h):
//   z_t = sigmoid(Wz x_t + Uz h_{t-1} + bz)
//   r_t = sigmoid(Wr x_t + Ur h_{t-1} + br)
//   hc_t = tanh(Wh x_t + Uh (r_t . h_{t-1}) + bh)
//   h_t = (1 - z_t) . h_{t-1} + z_t . hc_t,  h_0 = 0
struct GruRef {
  std::size_t wz = 0, uz = 0, bz = 0;
  std::size_t wr = 0, ur = 0, br = 0;
  std::size_t wh = 0, uh = 0, bh = 0;
  std::size_t units = 0, in = 0;
};

LinearRef add_linear(ParamLayout& layout, const std::string& prefix,
                     std::size_t out, std::size_t in);
GruRef add_gru(ParamLayout& layout, const std::string& prefix,
               std::size_t units, std::size_t in);

// Uniform +-sqrt(6 / (fan_in + fan_out)) for matrices, zero biases.
void init_params(const ParamLayout& layout, std::span<double> params, Rng& rng);

// y = x W^T + b applied per frame.
Matrix linear_forward(std::span<const double> params, const LinearRef& ref,
                      const Matrix& x);
// Accumulates dW/db into grads; dx returned when wanted.
Matrix linear_backward(std::span<const double> params, const LinearRef& ref,
                       const Matrix& x, const Matrix& dy,
                       std::span<double> grads, bool want_dx);

struct GruTape {
  Matrix h;      // T x units
  Matrix z, r;   // gate activations
  Matrix hcand;  // candidate
  Matrix rh;     // r . h_{t-1}
};

Matrix gru_forward(std::span<const double> params, const GruRef& ref,
                   const Matrix& x, GruTape* tape);
Matrix gru_backward(std::span<const double> params, const GruRef& ref,
                    const Matrix& x, const GruTape& tape, const Matrix& dh,
                    std::span<double> grads, bool want_dx);

// Shared trunk: tanh feedforward layer into a stack of GRU layers. The
// trunk output is the top layer's state sequence; heads project it.
struct TrunkRef {
  LinearRef ff;
  std::vector<GruRef> gru;
};

TrunkRef add_trunk(ParamLayout& layout, const std::string& prefix,
                   std::size_t input_dim, std::size_t ff_units,
                   std::size_t gru_units, std::size_t n_gru);

struct TrunkTape {
  Matrix ff_out;  // post-tanh
  std::vector<GruTape> gru;
};

Matrix trunk_forward(std::span<const double> params, const TrunkRef& ref,
                     const Matrix& x, TrunkTape* tape);
// d_top is the gradient on the trunk output sequence.
Matrix trunk_backward(std::span<const double> params, const TrunkRef& ref,
                      const Matrix& x, const TrunkTape& tape,
                      const Matrix& d_top, std::span<double> grads,
                      bool want_dx);

}  // namespace intovar::net
