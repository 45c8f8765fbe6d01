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

#include "intovar/fmat.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "intovar/errors.hpp"

namespace intovar {

namespace {

static_assert(std::endian::native == std::endian::little,
              "FMAT I/O assumes a little-endian host");

constexpr char kMagic[4] = {'F', 'M', 'A', 'T'};

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i]))
      throw DataError("write_matrix: non-finite value in " + path.string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("write_matrix: cannot open " + path.string());
  const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  std::vector<float> buf(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    buf[i] = static_cast<float>(m.data()[i]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw DataError("write_matrix: short write to " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("read_matrix: cannot open " + path.string());
  char magic[4];
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("read_matrix: bad FMAT header in " + path.string());
  Matrix m(rows, cols);
  std::vector<float> buf(m.size());
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)))
    throw DataError("read_matrix: truncated payload in " + path.string());
  for (std::size_t i = 0; i < m.size(); ++i)
    m.data()[i] = static_cast<double>(buf[i]);
  return m;
}

}  // namespace intovar
