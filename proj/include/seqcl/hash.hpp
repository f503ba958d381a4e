// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace seqcl {

constexpr std::uint64_t kFnv64Offset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnv64Prime = 0x100000001B3ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t seed = kFnv64Offset) {
  std::uint64_t h = seed;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnv64Prime;
  }
  return h;
}

// FNV-1a of a file's contents; throws IoError if unreadable.
std::uint64_t file_fnv1a64(const std::filesystem::path& path);

std::string hash_hex(std::uint64_t h);

}  // namespace seqcl
