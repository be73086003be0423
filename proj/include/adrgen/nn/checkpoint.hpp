//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"
#include "adrgen/nn/optim.hpp"
#include "adrgen/nn/tensor.hpp"

namespace adrgen::nn {

// Checkpoint container, little-endian throughout:
//   magic "ADRC" | u32 version | u32 entry count
//   per entry: u32 name_len | name bytes | u8 dtype (0=f64, 1=f32)
//              | u32 ndim | u64 dims[ndim] | payload (row-major)
inline constexpr char kCheckpointMagic[4] = {'A', 'D', 'R', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <class T> void put_le(std::string &out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) &
                                    0xff));
}

template <class T> T get_le(const std::string &in, std::size_t &pos) {
  if (pos + sizeof(T) > in.size())
    throw Error(errc::format_error, "checkpoint truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i]))
         << (8 * i);
  pos += sizeof(T);
  return static_cast<T>(v);
}

inline void put_f64(std::string &out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_le(out, bits);
}

inline double get_f64(const std::string &in, std::size_t &pos) {
  std::uint64_t bits = get_le<std::uint64_t>(in, pos);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

inline void put_f32(std::string &out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_le(out, bits);
}

inline float get_f32(const std::string &in, std::size_t &pos) {
  std::uint32_t bits = get_le<std::uint32_t>(in, pos);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

} // namespace detail

template <class T>
std::string checkpoint_to_bytes(const ParameterStore<T> &params) {
  std::string out(kCheckpointMagic, 4);
  detail::put_le(out, kCheckpointVersion);
  detail::put_le(out, static_cast<std::uint32_t>(params.all().size()));
  for (const auto &[name, t] : params.all()) {
    detail::put_le(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    out.push_back(sizeof(T) == 8 ? 0 : 1);
    detail::put_le(out, static_cast<std::uint32_t>(t.shape().size()));
    for (std::size_t d : t.shape())
      detail::put_le(out, static_cast<std::uint64_t>(d));
    for (T v : t.values()) {
      if constexpr (sizeof(T) == 8)
        detail::put_f64(out, static_cast<double>(v));
      else
        detail::put_f32(out, static_cast<float>(v));
    }
  }
  return out;
}

struct CheckpointEntry {
  std::vector<std::size_t> shape;
  int dtype = 0; // 0=f64, 1=f32
  std::vector<double> values;
};

inline std::map<std::string, CheckpointEntry>
checkpoint_from_bytes(const std::string &bytes) {
  std::size_t pos = 0;
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0)
    throw Error(errc::format_error, "checkpoint: bad magic bytes");
  pos = 4;
  std::uint32_t version = detail::get_le<std::uint32_t>(bytes, pos);
  if (version != kCheckpointVersion)
    throw Error(errc::format_error, "checkpoint: unsupported version " +
                                        std::to_string(version));
  std::uint32_t count = detail::get_le<std::uint32_t>(bytes, pos);
  std::map<std::string, CheckpointEntry> out;
  for (std::uint32_t e = 0; e < count; ++e) {
    std::uint32_t name_len = detail::get_le<std::uint32_t>(bytes, pos);
    if (pos + name_len > bytes.size())
      throw Error(errc::format_error, "checkpoint truncated");
    std::string name = bytes.substr(pos, name_len);
    pos += name_len;
    if (pos >= bytes.size())
      throw Error(errc::format_error, "checkpoint truncated");
    int dtype = static_cast<unsigned char>(bytes[pos++]);
    std::uint32_t ndim = detail::get_le<std::uint32_t>(bytes, pos);
    CheckpointEntry entry;
    entry.dtype = dtype;
    std::size_t n = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      std::size_t dim = static_cast<std::size_t>(
          detail::get_le<std::uint64_t>(bytes, pos));
      entry.shape.push_back(dim);
      n *= dim;
    }
    entry.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      entry.values.push_back(dtype == 0 ? detail::get_f64(bytes, pos)
                                        : detail::get_f32(bytes, pos));
    out.emplace(std::move(name), std::move(entry));
  }
  return out;
}

template <class T>
void save_checkpoint(const ParameterStore<T> &params,
                     const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(errc::file_not_found, "cannot write " + path);
  std::string bytes = checkpoint_to_bytes(params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Loads values into an existing store; every parameter must be present
// with matching shape.
template <class T>
void load_checkpoint(ParameterStore<T> &params, const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(errc::file_not_found, path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  auto entries = checkpoint_from_bytes(bytes);
  for (auto &[name, t] : params.all()) {
    auto it = entries.find(name);
    if (it == entries.end())
      throw Error(errc::format_error, "checkpoint: missing " + name);
    if (it->second.shape != t.shape())
      throw Error(errc::shape_mismatch, "checkpoint: shape mismatch " + name);
    for (std::size_t i = 0; i < t.size(); ++i)
      t.values()[i] = static_cast<T>(it->second.values[i]);
  }
}

} // namespace adrgen::nn
