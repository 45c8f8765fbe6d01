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

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "intovar/kernels.hpp"

namespace intovar::kernels {

#if defined(INTOVAR_HAVE_AVX2)
const Ops& avx2_ops_impl();
#endif

bool avx2_available() {
#if defined(INTOVAR_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& avx2_ops() {
#if defined(INTOVAR_HAVE_AVX2)
  if (!avx2_available())
    throw std::runtime_error("avx2 kernels requested but CPU lacks AVX2/FMA");
  return avx2_ops_impl();
#else
  throw std::runtime_error("avx2 kernels not compiled into this build");
#endif
}

namespace {

struct Selection {
  const Ops* table;
  const char* name;
};

Selection select() {
  const char* env = std::getenv("INTOVAR_KERNELS");
  const std::string want = env ? env : "";
  if (want == "scalar") return {&scalar_ops(), "scalar"};
  if (want == "avx2") return {&avx2_ops(), "avx2"};
  if (!want.empty())
    throw std::runtime_error("INTOVAR_KERNELS must be 'scalar' or 'avx2', got '" +
                             want + "'");
  if (avx2_available()) return {&avx2_ops(), "avx2"};
  return {&scalar_ops(), "scalar"};
}

const Selection& selection() {
  static const Selection s = select();
  return s;
}

}  // namespace

const Ops& ops() { return *selection().table; }

const char* active_backend() { return selection().name; }

}  // namespace intovar::kernels
