// Copyright 2026 The objseq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "objseq/binary_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "objseq/error.h"

namespace objseq {
namespace {

std::uint32_t LoadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void StoreU32(std::uint32_t v, unsigned char* p) {
  p[0] = static_cast<unsigned char>(v & 0xff);
  p[1] = static_cast<unsigned char>((v >> 8) & 0xff);
  p[2] = static_cast<unsigned char>((v >> 16) & 0xff);
  p[3] = static_cast<unsigned char>((v >> 24) & 0xff);
}

}  // namespace

FeatureTable ReadFeatureTable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = path.filename().string();
  if (bytes.size() < 16) throw ValidationError(where + ":header", "file shorter than 16-byte header");
  if (std::memcmp(bytes.data(), kTableMagic, 4) != 0) {
    throw ValidationError(where + ":magic", "expected \"CSPP\"");
  }
  const std::uint32_t version = LoadU32(bytes.data() + 4);
  if (version != kTableVersion) {
    throw ValidationError(where + ":version", "unsupported version " + std::to_string(version));
  }
  const std::uint64_t rows = LoadU32(bytes.data() + 8);
  const std::uint64_t dim = LoadU32(bytes.data() + 12);
  const std::uint64_t expected = 16 + rows * dim * 4;
  if (bytes.size() != expected) {
    throw ValidationError(where + ":data", "payload is " + std::to_string(bytes.size() - 16) +
                                               " bytes, header implies " +
                                               std::to_string(rows * dim * 4));
  }
  std::vector<float> data(rows * dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(LoadU32(bytes.data() + 16 + 4 * i));
  }
  FeatureTable table(rows, dim, std::move(data));
  table.CheckFinite(where + ":data");
  return table;
}

void WriteFeatureTable(const std::filesystem::path& path, const FeatureTable& table) {
  std::vector<unsigned char> bytes(16 + table.data().size() * 4);
  std::memcpy(bytes.data(), kTableMagic, 4);
  StoreU32(kTableVersion, bytes.data() + 4);
  StoreU32(static_cast<std::uint32_t>(table.rows()), bytes.data() + 8);
  StoreU32(static_cast<std::uint32_t>(table.dim()), bytes.data() + 12);
  for (std::size_t i = 0; i < table.data().size(); ++i) {
    StoreU32(std::bit_cast<std::uint32_t>(table.data()[i]), bytes.data() + 16 + 4 * i);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace objseq
