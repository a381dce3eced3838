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

#include "tse/harness/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

#include "tse/common/error.hpp"
#include "tse/nn/params.hpp"

namespace tse {
namespace {

constexpr std::uint32_t kTnsrVersion = 1;

template <class T>
void put(std::vector<unsigned char>& b, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) b.push_back(static_cast<unsigned char>(std::uint64_t(v) >> (8 * i)));
}

class Reader {
 public:
  Reader(const std::vector<unsigned char>& b, std::string where) : b_(b), where_(std::move(where)) {}
  template <class T>
  T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t(b_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw CorruptFileError(where_ + "truncated tensor container");
  }
  const std::vector<unsigned char>& b_;
  std::string where_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_tensors(const std::filesystem::path& path, const TensorList& tensors) {
  std::vector<unsigned char> b{'T', 'N', 'S', 'R'};
  put<std::uint32_t>(b, kTnsrVersion);
  put<std::uint32_t>(b, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, m] : tensors) {
    if (name.size() > 0xffff) throw ValidationError("tensor name too long: " + name.substr(0, 32));
    put<std::uint16_t>(b, static_cast<std::uint16_t>(name.size()));
    b.insert(b.end(), name.begin(), name.end());
    put<std::uint8_t>(b, 2);
    put<std::uint32_t>(b, static_cast<std::uint32_t>(m.rows()));
    put<std::uint32_t>(b, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i)
      put<std::uint32_t>(b, std::bit_cast<std::uint32_t>(static_cast<float>(m.data()[i])));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

TensorList read_tensors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (b.size() < 4 || std::memcmp(b.data(), "TNSR", 4) != 0) throw FormatError(where + "bad magic");
  Reader r(b, where);
  r.bytes(4);
  const auto version = r.get<std::uint32_t>();
  if (version != kTnsrVersion) throw FormatError(where + "unsupported version " + std::to_string(version));
  const auto count = r.get<std::uint32_t>();
  TensorList out;
  for (std::uint32_t t = 0; t < count; ++t) {
    const auto len = r.get<std::uint16_t>();
    std::string name = r.bytes(len);
    const auto rank = r.get<std::uint8_t>();
    std::vector<std::uint32_t> dims(rank);
    for (auto& d : dims) d = r.get<std::uint32_t>();
    Eigen::Index rows = 1, cols = 1;
    if (rank == 1) {
      cols = dims[0];
    } else if (rank == 2) {
      rows = dims[0];
      cols = dims[1];
    } else if (rank != 0) {
      throw FormatError(where + "tensor " + name + " has unsupported rank " + std::to_string(rank));
    }
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::bit_cast<float>(r.get<std::uint32_t>());
    out.emplace_back(std::move(name), std::move(m));
  }
  if (!r.done()) throw CorruptFileError(where + "trailing bytes after the last tensor");
  return out;
}

void Checkpoint::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::json meta = {{"config", config.to_json()},
                         {"epoch", epoch},
                         {"best_valid_loss", std::isfinite(best_valid_loss) ? nlohmann::json(best_valid_loss) : nlohmann::json()},
                         {"train_loss", train_loss},
                         {"valid_loss", valid_loss},
                         {"wall_clock_s", wall_clock_s},
                         {"upstream_layers", model.config.upstream_layers},
                         {"upstream_dim", model.config.upstream_dim},
                         {"optimizer_steps", optimizer_steps}};
  if (upstream_checksum) meta["upstream_checksum"] = *upstream_checksum;
  {
    std::ofstream out(dir / "meta.json");
    if (!out) throw IoError("cannot write " + (dir / "meta.json").string());
    out << meta.dump(2) << "\n";
  }
  TensorList params;
  TseModel copy = model;
  copy.visit("", [&](const std::string& name, Mat& m) { params.emplace_back(name, m); });
  write_tensors(dir / "params.tnsr", params);
  if (!optimizer_state.empty()) write_tensors(dir / "optim.tnsr", optimizer_state);
}

Checkpoint Checkpoint::load(const std::filesystem::path& dir) {
  const auto meta_path = dir / "meta.json";
  std::ifstream in(meta_path);
  if (!in) throw IoError("cannot open " + meta_path.string());
  nlohmann::json meta;
  Checkpoint c;
  try {
    meta = nlohmann::json::parse(in);
    c.config = RunConfig::from_json(meta.at("config"));
    c.epoch = meta.at("epoch").get<int>();
    const auto& best = meta.at("best_valid_loss");
    c.best_valid_loss = best.is_null() ? std::numeric_limits<double>::infinity() : best.get<double>();
    c.train_loss = meta.value("train_loss", 0.0);
    c.valid_loss = meta.value("valid_loss", 0.0);
    c.wall_clock_s = meta.value("wall_clock_s", 0.0);
    c.optimizer_steps = meta.value("optimizer_steps", 0L);
    if (meta.contains("upstream_checksum")) c.upstream_checksum = meta.at("upstream_checksum").get<std::uint64_t>();
    const int layers = meta.at("upstream_layers").get<int>();
    const int dim = meta.at("upstream_dim").get<int>();
    c.model = TseModel::init(c.config.model_config(layers, dim), c.config.seed, false);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(meta_path.string() + ": " + e.what());
  }

  std::map<std::string, Mat> stored;
  for (auto& [name, m] : read_tensors(dir / "params.tnsr")) stored.emplace(name, std::move(m));
  std::size_t used = 0;
  c.model.visit("", [&](const std::string& name, Mat& m) {
    auto it = stored.find(name);
    if (it == stored.end()) throw CorruptFileError(dir.string() + ": checkpoint lacks tensor " + name);
    if (it->second.rows() != m.rows() || it->second.cols() != m.cols())
      throw CorruptFileError(dir.string() + ": shape mismatch for tensor " + name);
    m = it->second;
    ++used;
  });
  if (used != stored.size()) throw CorruptFileError(dir.string() + ": checkpoint holds tensors the model does not use");
  if (std::filesystem::exists(dir / "optim.tnsr")) c.optimizer_state = read_tensors(dir / "optim.tnsr");
  return c;
}

}  // namespace tse
