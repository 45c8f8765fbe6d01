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

#include "intovar/net.hpp"

#include <cmath>
#include <stdexcept>

#include "intovar/errors.hpp"
#include "intovar/kernels.hpp"

namespace intovar::net {

namespace {

double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

const kernels::Ops& k() { return kernels::ops(); }

// Reusable per-thread scratch for fully-overwritten transients in the GRU
// passes. Grow-only, contents stale by design.
double* scratch(std::size_t slot, std::size_t size) {
  thread_local std::vector<double> buffers[8];
  if (buffers[slot].size() < size) buffers[slot].resize(size);
  return buffers[slot].data();
}

}  // namespace

std::size_t ParamLayout::add(const std::string& name, std::size_t rows,
                             std::size_t cols) {
  const std::size_t offset = size_;
  tensors_.push_back(TensorRef{name, offset, rows, cols});
  size_ += rows * cols;
  return offset;
}

const TensorRef& ParamLayout::find(const std::string& name) const {
  for (const TensorRef& t : tensors_)
    if (t.name == name) return t;
  throw DataError("ParamLayout: no tensor named '" + name + "'");
}

LinearRef add_linear(ParamLayout& layout, const std::string& prefix,
                     std::size_t out, std::size_t in) {
  LinearRef ref;
  ref.out = out;
  ref.in = in;
  ref.w = layout.add(prefix + ".w", out, in);
  ref.b = layout.add(prefix + ".b", out);
  return ref;
}

GruRef add_gru(ParamLayout& layout, const std::string& prefix,
               std::size_t units, std::size_t in) {
  GruRef ref;
  ref.units = units;
  ref.in = in;
  ref.wz = layout.add(prefix + ".wz", units, in);
  ref.uz = layout.add(prefix + ".uz", units, units);
  ref.bz = layout.add(prefix + ".bz", units);
  ref.wr = layout.add(prefix + ".wr", units, in);
  ref.ur = layout.add(prefix + ".ur", units, units);
  ref.br = layout.add(prefix + ".br", units);
  ref.wh = layout.add(prefix + ".wh", units, in);
  ref.uh = layout.add(prefix + ".uh", units, units);
  ref.bh = layout.add(prefix + ".bh", units);
  return ref;
}

void init_params(const ParamLayout& layout, std::span<double> params, Rng& rng) {
  if (params.size() != layout.size())
    throw DataError("init_params: buffer size mismatch");
  for (const TensorRef& t : layout.tensors()) {
    if (t.cols == 1) {
      for (std::size_t i = 0; i < t.size(); ++i) params[t.offset + i] = 0.0;
      continue;
    }
    const double limit = std::sqrt(6.0 / static_cast<double>(t.rows + t.cols));
    for (std::size_t i = 0; i < t.size(); ++i)
      params[t.offset + i] = limit * (2.0 * rng.uniform() - 1.0);
  }
}

Matrix linear_forward(std::span<const double> params, const LinearRef& ref,
                      const Matrix& x) {
  if (x.cols() != ref.in) throw DataError("linear_forward: input dim mismatch");
  const std::size_t T = x.rows();
  Matrix y(T, ref.out);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < ref.out; ++j) y(t, j) = params[ref.b + j];
  k().gemm_nt(x.data(), params.data() + ref.w, y.data(), T, ref.out, ref.in);
  return y;
}

Matrix linear_backward(std::span<const double> params, const LinearRef& ref,
                       const Matrix& x, const Matrix& dy,
                       std::span<double> grads, bool want_dx) {
  const std::size_t T = x.rows();
  if (dy.rows() != T || dy.cols() != ref.out)
    throw DataError("linear_backward: gradient shape mismatch");
  k().gemm_tn(dy.data(), x.data(), grads.data() + ref.w, ref.out, ref.in, T);
  for (std::size_t t = 0; t < T; ++t) {
    const double* row = dy.row(t);
    for (std::size_t j = 0; j < ref.out; ++j) grads[ref.b + j] += row[j];
  }
  Matrix dx;
  if (want_dx) {
    dx = Matrix(T, ref.in);
    k().gemm_nn(dy.data(), params.data() + ref.w, dx.data(), T, ref.in, ref.out);
  }
  return dx;
}

Matrix gru_forward(std::span<const double> params, const GruRef& ref,
                   const Matrix& x, GruTape* tape) {
  if (x.cols() != ref.in) throw DataError("gru_forward: input dim mismatch");
  const std::size_t T = x.rows();
  const std::size_t u = ref.units;

  // Input contributions for all frames at once.
  double* az = scratch(0, T * u);
  double* ar = scratch(1, T * u);
  double* ah = scratch(2, T * u);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < u; ++j) {
      az[t * u + j] = params[ref.bz + j];
      ar[t * u + j] = params[ref.br + j];
      ah[t * u + j] = params[ref.bh + j];
    }
  }
  k().gemm_nt(x.data(), params.data() + ref.wz, az, T, u, ref.in);
  k().gemm_nt(x.data(), params.data() + ref.wr, ar, T, u, ref.in);
  k().gemm_nt(x.data(), params.data() + ref.wh, ah, T, u, ref.in);

  Matrix h(T, u), z(T, u), r(T, u), hcand(T, u), rh(T, u);
  std::vector<double> hprev(u, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double* azt = az + t * u;
    double* art = ar + t * u;
    double* aht = ah + t * u;
    k().matvec(params.data() + ref.uz, hprev.data(), azt, u, u);
    k().matvec(params.data() + ref.ur, hprev.data(), art, u, u);
    double* zt = z.row(t);
    double* rt = r.row(t);
    double* rht = rh.row(t);
    for (std::size_t j = 0; j < u; ++j) {
      zt[j] = sigmoid(azt[j]);
      rt[j] = sigmoid(art[j]);
      rht[j] = rt[j] * hprev[j];
    }
    k().matvec(params.data() + ref.uh, rht, aht, u, u);
    double* ht = h.row(t);
    double* hct = hcand.row(t);
    for (std::size_t j = 0; j < u; ++j) {
      hct[j] = std::tanh(aht[j]);
      ht[j] = (1.0 - zt[j]) * hprev[j] + zt[j] * hct[j];
      hprev[j] = ht[j];
    }
  }
  if (tape) {
    tape->h = h;
    tape->z = std::move(z);
    tape->r = std::move(r);
    tape->hcand = std::move(hcand);
    tape->rh = std::move(rh);
  }
  return h;
}

Matrix gru_backward(std::span<const double> params, const GruRef& ref,
                    const Matrix& x, const GruTape& tape, const Matrix& dh,
                    std::span<double> grads, bool want_dx) {
  const std::size_t T = x.rows();
  const std::size_t u = ref.units;
  if (dh.rows() != T || dh.cols() != u)
    throw DataError("gru_backward: gradient shape mismatch");

  // h_{t-1} rows, needed both per step and for the batched weight grads.
  double* hm1 = scratch(3, T * u);
  for (std::size_t j = 0; j < u; ++j) hm1[j] = 0.0;
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t j = 0; j < u; ++j) hm1[t * u + j] = tape.h(t - 1, j);

  double* daz = scratch(4, T * u);
  double* dar = scratch(5, T * u);
  double* dah = scratch(6, T * u);
  std::vector<double> carry(u, 0.0), next_carry(u), drh(u);
  for (std::size_t ti = T; ti-- > 0;) {
    const double* zt = tape.z.row(ti);
    const double* rt = tape.r.row(ti);
    const double* hct = tape.hcand.row(ti);
    const double* hp = hm1 + ti * u;
    const double* dht = dh.row(ti);
    double* dazt = daz + ti * u;
    double* dart = dar + ti * u;
    double* daht = dah + ti * u;
    for (std::size_t j = 0; j < u; ++j) {
      const double g = dht[j] + carry[j];
      const double dhc = g * zt[j];
      const double dz = g * (hct[j] - hp[j]);
      next_carry[j] = g * (1.0 - zt[j]);
      daht[j] = dhc * (1.0 - hct[j] * hct[j]);
      dazt[j] = dz * zt[j] * (1.0 - zt[j]);
    }
    std::fill(drh.begin(), drh.end(), 0.0);
    k().matvec_t(params.data() + ref.uh, daht, drh.data(), u, u);
    for (std::size_t j = 0; j < u; ++j) {
      const double dr = drh[j] * hp[j];
      dart[j] = dr * rt[j] * (1.0 - rt[j]);
      next_carry[j] += drh[j] * rt[j];
    }
    k().matvec_t(params.data() + ref.uz, dazt, next_carry.data(), u, u);
    k().matvec_t(params.data() + ref.ur, dart, next_carry.data(), u, u);
    std::swap(carry, next_carry);
  }

  k().gemm_tn(daz, x.data(), grads.data() + ref.wz, u, ref.in, T);
  k().gemm_tn(dar, x.data(), grads.data() + ref.wr, u, ref.in, T);
  k().gemm_tn(dah, x.data(), grads.data() + ref.wh, u, ref.in, T);
  k().gemm_tn(daz, hm1, grads.data() + ref.uz, u, u, T);
  k().gemm_tn(dar, hm1, grads.data() + ref.ur, u, u, T);
  k().gemm_tn(dah, tape.rh.data(), grads.data() + ref.uh, u, u, T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < u; ++j) {
      grads[ref.bz + j] += daz[t * u + j];
      grads[ref.br + j] += dar[t * u + j];
      grads[ref.bh + j] += dah[t * u + j];
    }
  }

  Matrix dx;
  if (want_dx) {
    dx = Matrix(T, ref.in);
    k().gemm_nn(daz, params.data() + ref.wz, dx.data(), T, ref.in, u);
    k().gemm_nn(dar, params.data() + ref.wr, dx.data(), T, ref.in, u);
    k().gemm_nn(dah, params.data() + ref.wh, dx.data(), T, ref.in, u);
  }
  return dx;
}

TrunkRef add_trunk(ParamLayout& layout, const std::string& prefix,
                   std::size_t input_dim, std::size_t ff_units,
                   std::size_t gru_units, std::size_t n_gru) {
  TrunkRef ref;
  ref.ff = add_linear(layout, prefix + ".ff", ff_units, input_dim);
  std::size_t in = ff_units;
  for (std::size_t i = 0; i < n_gru; ++i) {
    ref.gru.push_back(
        add_gru(layout, prefix + ".gru" + std::to_string(i), gru_units, in));
    in = gru_units;
  }
  return ref;
}

Matrix trunk_forward(std::span<const double> params, const TrunkRef& ref,
                     const Matrix& x, TrunkTape* tape) {
  Matrix ff = linear_forward(params, ref.ff, x);
  for (std::size_t i = 0; i < ff.size(); ++i)
    ff.data()[i] = std::tanh(ff.data()[i]);
  if (tape) {
    tape->ff_out = ff;
    tape->gru.resize(ref.gru.size());
  }
  Matrix h = std::move(ff);
  const Matrix* cur = tape ? &tape->ff_out : &h;
  Matrix out;
  for (std::size_t i = 0; i < ref.gru.size(); ++i) {
    out = gru_forward(params, ref.gru[i], *cur, tape ? &tape->gru[i] : nullptr);
    if (tape) {
      cur = &tape->gru[i].h;
    } else {
      h = std::move(out);
      cur = &h;
    }
  }
  return tape ? tape->gru.back().h : h;
}

Matrix trunk_backward(std::span<const double> params, const TrunkRef& ref,
                      const Matrix& x, const TrunkTape& tape,
                      const Matrix& d_top, std::span<double> grads,
                      bool want_dx) {
  Matrix d = d_top;
  for (std::size_t i = ref.gru.size(); i-- > 0;) {
    const Matrix& input = i == 0 ? tape.ff_out : tape.gru[i - 1].h;
    d = gru_backward(params, ref.gru[i], input, tape.gru[i], d, grads, true);
  }
  // Through the tanh feedforward layer.
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double y = tape.ff_out.data()[i];
    d.data()[i] *= (1.0 - y * y);
  }
  return linear_backward(params, ref.ff, x, d, grads, want_dx);
}

}  // namespace intovar::net
