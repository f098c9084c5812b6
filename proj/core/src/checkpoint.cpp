/* Copyright 2026 The ugformer Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "ugformer/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "ugformer/error.hpp"

namespace ugformer {
namespace {

constexpr std::array<char, 8> kMagic = {'U', 'G', 'F', 'C', 'K', 'P', 'T', '\0'};

template <typename U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw FormatError(path.string() + ": truncated checkpoint");
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void save_checkpoint(const ParameterStore& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params.parameters()) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.tensor.rank()));
    for (auto d : p.tensor.shape()) put_le<std::uint64_t>(out, d);
    for (double v : p.tensor.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<CheckpointEntry> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError(path.string() + ": not a checkpoint file");
  }
  const auto version = get_le<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw VersionError(path.string() + ": checkpoint version " + std::to_string(version) +
                       ", expected " + std::to_string(kCheckpointVersion));
  }
  const auto count = get_le<std::uint32_t>(in, path);
  std::vector<CheckpointEntry> entries(count);
  for (auto& e : entries) {
    const auto len = get_le<std::uint32_t>(in, path);
    e.name.resize(len);
    if (!in.read(e.name.data(), len)) throw FormatError(path.string() + ": truncated checkpoint");
    const auto rank = get_le<std::uint32_t>(in, path);
    for (std::uint32_t i = 0; i < rank; ++i) e.shape.push_back(get_le<std::uint64_t>(in, path));
    e.values.resize(shape_numel(e.shape));
    for (auto& v : e.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in, path));
  }
  return entries;
}

void load_checkpoint(ParameterStore& params, const std::filesystem::path& path) {
  const auto entries = read_checkpoint(path);
  if (entries.size() != params.size()) {
    throw VersionError(path.string() + ": checkpoint has " + std::to_string(entries.size()) +
                       " parameters, model has " + std::to_string(params.size()));
  }
  auto& list = params.parameters();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].name != list[i].name || entries[i].shape != list[i].tensor.shape()) {
      throw VersionError(path.string() + ": checkpoint entry '" + entries[i].name + "' " +
                         shape_string(entries[i].shape) + " does not match model parameter '" +
                         list[i].name + "' " + shape_string(list[i].tensor.shape()));
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto dst = list[i].tensor.mutable_data();
    std::copy(entries[i].values.begin(), entries[i].values.end(), dst.begin());
  }
}

}  // namespace ugformer
