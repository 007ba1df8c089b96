// Copyright 2026 The sgdiff Authors
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

#include "sgdiff/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "sgdiff/config.hpp"
#include "sgdiff/error.hpp"

namespace sgdiff {

namespace {

template <typename U>
void put(std::ostream& out, U v) {
  unsigned char buf[sizeof(U)];
  for (std::size_t b = 0; b < sizeof(U); ++b) buf[b] = static_cast<unsigned char>(v >> (8 * b));
  out.write(reinterpret_cast<const char*>(buf), sizeof buf);
}

template <typename U>
U get(std::istream& in, const char* what) {
  unsigned char buf[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof buf))
    throw FormatError(std::string("checkpoint truncated while reading ") + what);
  U v = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) v |= static_cast<U>(buf[b]) << (8 * b);
  return v;
}

std::string get_bytes(std::istream& in, std::uint64_t size, const char* what) {
  // Guard against absurd lengths from corrupt files before allocating.
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 32;
  if (size > kLimit) throw FormatError(std::string("checkpoint: implausible length for ") + what);
  std::string s(static_cast<std::size_t>(size), '\0');
  if (size > 0 && !in.read(s.data(), static_cast<std::streamsize>(size)))
    throw FormatError(std::string("checkpoint truncated while reading ") + what);
  return s;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ck) {
  SGDIFF_REQUIRE(ck.metadata.contains("network") &&
                     network_config_from_json(ck.metadata["network"]) == ck.weights.config(),
                 "checkpoint: metadata 'network' must describe the weights");
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, ck.seed);
  put<std::uint64_t>(out, ck.config_hash);
  const std::string meta = ck.metadata.dump();
  put<std::uint64_t>(out, meta.size());
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  put<std::uint64_t>(out, ck.weights.size());
  for (std::size_t k = 0; k < ck.weights.size(); ++k) {
    const auto& name = ck.weights.name(k);
    const auto& t = ck.weights.tensor(k);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.cols()));
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c)
        put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(t(r, c)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof kCheckpointMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
    throw FormatError("checkpoint: bad magic (not an sgdiff checkpoint)");
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion)
    throw FormatError("checkpoint: unsupported version " + std::to_string(version));
  Checkpoint ck;
  ck.seed = get<std::uint64_t>(in, "seed");
  ck.config_hash = get<std::uint64_t>(in, "config hash");
  const auto meta = get_bytes(in, get<std::uint64_t>(in, "metadata length"), "metadata");
  NetworkConfig cfg;
  try {
    ck.metadata = nlohmann::ordered_json::parse(meta);
    cfg = network_config_from_json(ck.metadata.at("network"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint: bad metadata: ") + e.what());
  }
  const auto layout = network_layout(cfg);
  const auto count = get<std::uint64_t>(in, "tensor count");
  if (count != layout.size())
    throw FormatError("checkpoint: " + std::to_string(count) + " tensors, layout expects " +
                      std::to_string(layout.size()));
  ck.weights = NetworkWeights(cfg);
  for (const auto& shape : layout) {
    const auto name = get_bytes(in, get<std::uint32_t>(in, "name length"), "tensor name");
    if (name != shape.name)
      throw FormatError("checkpoint: found tensor '" + name + "', expected '" + shape.name + "'");
    if (get<std::uint32_t>(in, "rank") != 2)
      throw FormatError("checkpoint: tensor '" + name + "' is not rank 2");
    const auto rows = get<std::uint64_t>(in, "rows");
    const auto cols = get<std::uint64_t>(in, "cols");
    if (rows != static_cast<std::uint64_t>(shape.rows) ||
        cols != static_cast<std::uint64_t>(shape.cols))
      throw FormatError("checkpoint: tensor '" + name + "' has shape " + std::to_string(rows) +
                        "x" + std::to_string(cols) + ", expected " + std::to_string(shape.rows) +
                        "x" + std::to_string(shape.cols));
    Eigen::MatrixXd t(shape.rows, shape.cols);
    for (int r = 0; r < shape.rows; ++r)
      for (int c = 0; c < shape.cols; ++c)
        t(r, c) = std::bit_cast<double>(get<std::uint64_t>(in, "tensor data"));
    ck.weights.add(name, std::move(t));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw FormatError("checkpoint: trailing bytes after the last tensor");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, ck);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace sgdiff
