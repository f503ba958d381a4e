// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "seqcl/errors.hpp"

namespace seqcl {

namespace {

constexpr char kMagic[4] = {'S', 'Q', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::filesystem::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated checkpoint: " + path.string());
  return v;
}

void write_tensor(std::ostream& out, const Tensor& t) {
  write_pod<std::uint64_t>(out, t.rows);
  write_pod<std::uint64_t>(out, t.cols);
  out.write(reinterpret_cast<const char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(double)));
}

void read_tensor(std::istream& in, Tensor& t,
                 const std::filesystem::path& path, const char* name) {
  const auto rows = read_pod<std::uint64_t>(in, path);
  const auto cols = read_pod<std::uint64_t>(in, path);
  if (rows != t.rows || cols != t.cols) {
    throw IncompatibilityError("checkpoint " + path.string() + ": tensor " +
                               name + " has shape " + std::to_string(rows) +
                               "x" + std::to_string(cols) + ", expected " +
                               std::to_string(t.rows) + "x" +
                               std::to_string(t.cols));
  }
  in.read(reinterpret_cast<char*>(t.data.data()),
          static_cast<std::streamsize>(t.data.size() * sizeof(double)));
  if (!in) throw IoError("truncated checkpoint: " + path.string());
}

void write_params(std::ostream& out, const ModelParameters& params) {
  params.for_each(
      [&](const char*, const Tensor& t) { write_tensor(out, t); });
}

void read_params(std::istream& in, ModelParameters& params,
                 const std::filesystem::path& path) {
  params.for_each([&](const char* name, Tensor& t) {
    read_tensor(in, t, path, name);
  });
}

}  // namespace

void save_checkpoint(const TrainState& state,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kVersion);
  write_pod(out, state.cfg.hash());
  write_pod(out, state.step);
  write_pod(out, state.lr_origin);
  write_pod(out, state.lr.peak);
  write_pod(out, state.lr.warmup_steps);
  write_pod(out, state.init_seed);
  std::ostringstream rng_text;
  rng_text << state.rng;
  const std::string blob = rng_text.str();
  write_pod<std::uint64_t>(out, blob.size());
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  write_params(out, state.params);
  write_params(out, state.adam_m);
  write_params(out, state.adam_v);
  if (!out) throw IoError("write failure on checkpoint: " + path.string());
}

TrainState load_checkpoint(const std::filesystem::path& path,
                           const ModelConfig& cfg) {
  cfg.validate();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a checkpoint file: " + path.string());
  }
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw IncompatibilityError("checkpoint " + path.string() +
                               ": unsupported version " +
                               std::to_string(version));
  }
  const auto stored_hash = read_pod<std::uint64_t>(in, path);
  if (stored_hash != cfg.hash()) {
    throw IncompatibilityError(
        "checkpoint " + path.string() +
        ": model config hash mismatch (checkpoint was produced under a "
        "different configuration)");
  }
  TrainState state;
  state.cfg = cfg;
  state.params = ModelParameters::zeros_like(cfg);
  state.adam_m = ModelParameters::zeros_like(cfg);
  state.adam_v = ModelParameters::zeros_like(cfg);
  state.step = read_pod<std::int64_t>(in, path);
  state.lr_origin = read_pod<std::int64_t>(in, path);
  state.lr.peak = read_pod<double>(in, path);
  state.lr.warmup_steps = read_pod<std::int64_t>(in, path);
  state.init_seed = read_pod<std::uint64_t>(in, path);
  const auto blob_len = read_pod<std::uint64_t>(in, path);
  std::string blob(blob_len, '\0');
  in.read(blob.data(), static_cast<std::streamsize>(blob_len));
  if (!in) throw IoError("truncated checkpoint: " + path.string());
  std::istringstream rng_text(blob);
  rng_text >> state.rng;
  read_params(in, state.params, path);
  read_params(in, state.adam_m, path);
  read_params(in, state.adam_v, path);
  return state;
}

ModelParameters average_checkpoints(
    const std::vector<std::filesystem::path>& paths, const ModelConfig& cfg) {
  if (paths.empty()) {
    throw std::invalid_argument("average_checkpoints: no paths");
  }
  std::vector<ModelParameters> sets;
  sets.reserve(paths.size());
  for (const auto& path : paths) {
    sets.push_back(load_checkpoint(path, cfg).params);
  }
  return average_parameters(sets);
}

}  // namespace seqcl
