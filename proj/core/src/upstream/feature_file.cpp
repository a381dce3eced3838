// Copyright 2026 The tsebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tse/upstream/feature_file.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "tse/common/error.hpp"

namespace tse {
namespace {

constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 5 * 4 + 8;

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void put_u64(std::vector<unsigned char>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
  return v;
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return v;
}

}  // namespace

void store_features(const std::filesystem::path& path, const FeatureStack& stack) {
  stack.validate();
  std::vector<unsigned char> b;
  const std::size_t count = stack.layers.size() * static_cast<std::size_t>(stack.frames() * stack.dim());
  b.reserve(kHeaderBytes + 4 * count);
  b.insert(b.end(), {'L', 'F', 'S', 'C'});
  put_u32(b, kVersion);
  put_u32(b, static_cast<std::uint32_t>(stack.num_layers()));
  put_u32(b, static_cast<std::uint32_t>(stack.frames()));
  put_u32(b, static_cast<std::uint32_t>(stack.dim()));
  put_u32(b, static_cast<std::uint32_t>(stack.frame_hop));
  put_u64(b, stack.source_length);
  for (const Mat& layer : stack.layers)
    for (Eigen::Index i = 0; i < layer.size(); ++i)
      put_u32(b, std::bit_cast<std::uint32_t>(static_cast<float>(layer.data()[i])));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

FeatureStack load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (b.size() < 4 || std::memcmp(b.data(), "LFSC", 4) != 0) throw FormatError(where + "bad magic");
  if (b.size() < kHeaderBytes) throw CorruptFileError(where + "truncated header");
  const std::uint32_t version = get_u32(b.data() + 4);
  if (version != kVersion) throw FormatError(where + "unsupported version " + std::to_string(version));
  const std::uint32_t layers = get_u32(b.data() + 8);
  const std::uint32_t frames = get_u32(b.data() + 12);
  const std::uint32_t dim = get_u32(b.data() + 16);
  FeatureStack stack;
  stack.frame_hop = static_cast<int>(get_u32(b.data() + 20));
  stack.source_length = get_u64(b.data() + 24);
  const std::uint64_t count = std::uint64_t(layers) * frames * dim;
  if (b.size() != kHeaderBytes + 4 * count)
    throw CorruptFileError(where + "header declares " + std::to_string(count) + " values, payload holds " +
                           std::to_string((b.size() - kHeaderBytes) / 4));
  const unsigned char* p = b.data() + kHeaderBytes;
  for (std::uint32_t l = 0; l < layers; ++l) {
    Mat m(frames, dim);
    for (Eigen::Index i = 0; i < m.size(); ++i, p += 4) m.data()[i] = std::bit_cast<float>(get_u32(p));
    stack.layers.push_back(std::move(m));
  }
  stack.validate();
  return stack;
}

}  // namespace tse
