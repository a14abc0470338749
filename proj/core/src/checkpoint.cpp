// SPDX-License-Identifier: Apache-2.0
#include "gbd/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "gbd/errors.hpp"

namespace gbd {

namespace {

constexpr char kMagic[8] = {'G', 'B', 'D', 'C', 'K', 'P', 'T', '1'};

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError("checkpoint: truncated file", 0);
  return v;
}

void write_tensor(std::ofstream& out, const std::string& name, const Eigen::MatrixXf& m) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_pod<std::int32_t>(out, static_cast<std::int32_t>(m.rows()));
  write_pod<std::int32_t>(out, static_cast<std::int32_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(float) * static_cast<std::size_t>(m.size())));
}

std::pair<std::string, Eigen::MatrixXf> read_tensor(std::ifstream& in) {
  const auto len = read_pod<std::uint32_t>(in);
  std::string name(len, '\0');
  in.read(name.data(), len);
  const auto rows = read_pod<std::int32_t>(in);
  const auto cols = read_pod<std::int32_t>(in);
  if (rows < 0 || cols < 0) throw ParseError("checkpoint: negative tensor shape", 0);
  Eigen::MatrixXf m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(float) * static_cast<std::size_t>(m.size())));
  if (!in) throw ParseError("checkpoint: truncated tensor data", 0);
  return {std::move(name), std::move(m)};
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("checkpoint: cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  const auto& cfg = ckpt.state.params.config;
  write_pod<std::int32_t>(out, cfg.layers);
  write_pod<std::int32_t>(out, cfg.hidden);
  write_pod<std::int32_t>(out, cfg.heads);
  write_pod<std::int32_t>(out, cfg.time_dim);
  write_pod<std::int32_t>(out, ckpt.state.params.feature_dim);
  write_pod<std::int32_t>(out, ckpt.T);
  write_pod<std::uint8_t>(out, ckpt.domain == Domain::kLogit ? 1 : 0);
  write_pod<std::uint8_t>(out, ckpt.precondition ? 1 : 0);
  write_pod<double>(out, ckpt.c0);
  write_pod<double>(out, ckpt.c1);
  write_pod<double>(out, ckpt.transform.w_A);
  write_pod<double>(out, ckpt.transform.b_A);
  write_pod<double>(out, ckpt.transform.w_X);
  write_pod<double>(out, ckpt.transform.b_X);
  write_pod<std::int64_t>(out, ckpt.state.step);
  write_pod<std::uint64_t>(out, ckpt.state.rng_key);
  write_pod<std::uint64_t>(out, ckpt.state.rng_counter);

  const auto& st = ckpt.state;
  const auto n_tensors = static_cast<std::uint32_t>(
      st.params.tensors.size() + st.adam_m.size() + st.adam_v.size() + st.ema.size());
  write_pod<std::uint32_t>(out, n_tensors);
  for (const auto& [name, m] : st.params.tensors) write_tensor(out, "p:" + name, m);
  for (const auto& [name, m] : st.adam_m) write_tensor(out, "m:" + name, m);
  for (const auto& [name, m] : st.adam_v) write_tensor(out, "v:" + name, m);
  for (const auto& [name, m] : st.ema) write_tensor(out, "e:" + name, m);
  if (!out) throw ConfigError("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("checkpoint: cannot open for reading: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("checkpoint: bad magic string", 0);
  }
  Checkpoint ckpt;
  auto& cfg = ckpt.state.params.config;
  cfg.layers = read_pod<std::int32_t>(in);
  cfg.hidden = read_pod<std::int32_t>(in);
  cfg.heads = read_pod<std::int32_t>(in);
  cfg.time_dim = read_pod<std::int32_t>(in);
  ckpt.state.params.feature_dim = read_pod<std::int32_t>(in);
  ckpt.T = read_pod<std::int32_t>(in);
  ckpt.domain = read_pod<std::uint8_t>(in) != 0 ? Domain::kLogit : Domain::kOriginal;
  ckpt.precondition = read_pod<std::uint8_t>(in) != 0;
  ckpt.c0 = read_pod<double>(in);
  ckpt.c1 = read_pod<double>(in);
  ckpt.transform.w_A = read_pod<double>(in);
  ckpt.transform.b_A = read_pod<double>(in);
  ckpt.transform.w_X = read_pod<double>(in);
  ckpt.transform.b_X = read_pod<double>(in);
  ckpt.state.step = read_pod<std::int64_t>(in);
  ckpt.state.rng_key = read_pod<std::uint64_t>(in);
  ckpt.state.rng_counter = read_pod<std::uint64_t>(in);
  cfg.validate();

  const auto n_tensors = read_pod<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    auto [name, m] = read_tensor(in);
    if (name.size() < 3 || name[1] != ':') throw ParseError("checkpoint: bad tensor tag", 0);
    const std::string key = name.substr(2);
    switch (name[0]) {
      case 'p': ckpt.state.params.tensors[key] = std::move(m); break;
      case 'm': ckpt.state.adam_m[key] = std::move(m); break;
      case 'v': ckpt.state.adam_v[key] = std::move(m); break;
      case 'e': ckpt.state.ema[key] = std::move(m); break;
      default: throw ParseError("checkpoint: unknown tensor tag", 0);
    }
  }

  // Shape audit against the declared config.
  RngStream probe(0);
  const int d = ckpt.state.params.feature_dim;
  DenoiserParameters ref = DenoiserParameters::init(
      cfg, d, 0.5, Eigen::VectorXd::Constant(d, 0.5), probe);
  for (const auto& [name, m] : ref.tensors) {
    auto it = ckpt.state.params.tensors.find(name);
    if (it == ckpt.state.params.tensors.end()) {
      throw ParseError("checkpoint: missing tensor " + name + " for the declared config", 0);
    }
    if (it->second.rows() != m.rows() || it->second.cols() != m.cols()) {
      throw ParseError("checkpoint: tensor " + name + " shape mismatch against config", 0);
    }
  }
  if (ckpt.state.params.tensors.size() != ref.tensors.size()) {
    throw ParseError("checkpoint: unexpected extra tensors for the declared config", 0);
  }
  return ckpt;
}

}  // namespace gbd
