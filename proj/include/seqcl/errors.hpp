// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace seqcl {

// Invalid configuration value (bad task spec, bad schedule knobs, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem problem; message always names the offending path.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parallel files whose line counts disagree.
struct AlignmentError : std::runtime_error {
  AlignmentError(std::size_t src_lines, std::size_t tgt_lines)
      : std::runtime_error("parallel files are misaligned: " +
                           std::to_string(src_lines) + " source lines vs " +
                           std::to_string(tgt_lines) + " target lines"),
        src_lines(src_lines),
        tgt_lines(tgt_lines) {}
  std::size_t src_lines;
  std::size_t tgt_lines;
};

// Malformed artifact file (score table, manifest, trace).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Artifact produced under a different configuration than the one in use.
struct IncompatibilityError : std::runtime_error {
  explicit IncompatibilityError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace seqcl
