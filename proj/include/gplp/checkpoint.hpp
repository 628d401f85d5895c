#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gplp/error.hpp"
#include "gplp/model.hpp"

// Checkpoint layout, all integers little-endian:
//   "GPLP" 0x01
//   u32 manifest length K, then K x i32:
//     input_dim hidden_dim num_layers phi_depth head0 head1 head2 readout features
//   u32 array count, then per array: u32 length L, L x f32 (IEEE-754 bits)

namespace gplp {

inline constexpr std::string_view kCheckpointMagic{"GPLP\x01", 5};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::string_view take(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorKind::FormatError, "checkpoint truncated");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string encode_checkpoint(const ModelParams& params, const ModelConfig& cfg) {
  check_params(cfg, params);
  std::string out(kCheckpointMagic);
  const std::vector<std::int32_t> manifest{
      static_cast<std::int32_t>(cfg.input_dim),    static_cast<std::int32_t>(cfg.hidden_dim),
      static_cast<std::int32_t>(cfg.num_layers),   static_cast<std::int32_t>(cfg.phi_depth),
      static_cast<std::int32_t>(cfg.head_dims[0]), static_cast<std::int32_t>(cfg.head_dims[1]),
      static_cast<std::int32_t>(cfg.head_dims[2]), static_cast<std::int32_t>(cfg.readout),
      static_cast<std::int32_t>(cfg.features)};
  detail::put_u32(out, static_cast<std::uint32_t>(manifest.size()));
  for (auto v : manifest) detail::put_u32(out, static_cast<std::uint32_t>(v));
  detail::put_u32(out, static_cast<std::uint32_t>(params.tensors.size()));
  for (const auto& t : params.tensors) {
    detail::put_u32(out, static_cast<std::uint32_t>(t.size()));
    for (float v : t.values()) detail::put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

inline std::pair<ModelParams, ModelConfig> decode_checkpoint(std::string_view bytes) {
  detail::ByteReader in(bytes);
  if (bytes.size() < kCheckpointMagic.size() || in.take(kCheckpointMagic.size()) != kCheckpointMagic)
    throw Error(ErrorKind::FormatError, "bad checkpoint magic");
  const auto n_manifest = in.u32();
  if (n_manifest != 9) throw Error(ErrorKind::FormatError, "unexpected manifest length " + std::to_string(n_manifest));
  std::vector<std::int32_t> mf;
  for (std::uint32_t i = 0; i < n_manifest; ++i) mf.push_back(static_cast<std::int32_t>(in.u32()));
  for (auto v : mf)
    if (v < 0) throw Error(ErrorKind::FormatError, "negative manifest value");
  if (mf[7] > 1 || mf[8] > 2) throw Error(ErrorKind::FormatError, "unknown readout or feature mode");

  ModelConfig cfg;
  cfg.input_dim = static_cast<std::size_t>(mf[0]);
  cfg.hidden_dim = static_cast<std::size_t>(mf[1]);
  cfg.num_layers = static_cast<std::size_t>(mf[2]);
  cfg.phi_depth = static_cast<std::size_t>(mf[3]);
  cfg.head_dims = {static_cast<std::size_t>(mf[4]), static_cast<std::size_t>(mf[5]), static_cast<std::size_t>(mf[6])};
  cfg.readout = static_cast<Readout>(mf[7]);
  cfg.features = static_cast<FeatureMode>(mf[8]);
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  try {
    shapes = layer_shapes(cfg);
  } catch (const Error& e) {
    throw Error(ErrorKind::FormatError, std::string("invalid manifest: ") + e.what());
  }

  const auto n_arrays = in.u32();
  if (n_arrays != 2 * shapes.size()) throw Error(ErrorKind::FormatError, "array count does not match manifest");
  ModelParams params;
  for (std::uint32_t k = 0; k < n_arrays; ++k) {
    const auto [fan_in, fan_out] = shapes[k / 2];
    const std::size_t rows = k % 2 == 0 ? fan_in : 1;
    const auto len = in.u32();
    if (len != rows * fan_out) throw Error(ErrorKind::FormatError, "array " + std::to_string(k) + " has wrong length");
    std::vector<float> vals(len);
    for (auto& v : vals) v = std::bit_cast<float>(in.u32());
    params.tensors.emplace_back(rows, fan_out, std::move(vals));
  }
  if (!in.done()) throw Error(ErrorKind::FormatError, "trailing bytes after checkpoint");
  return {std::move(params), cfg};
}

inline void save_checkpoint(const ModelParams& params, const ModelConfig& cfg, const std::string& path) {
  auto bytes = encode_checkpoint(params, cfg);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

inline std::pair<ModelParams, ModelConfig> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace gplp
