// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// Time-memory trade-off password reversal: hash/reduce chain generation with
// position-indexed reduction functions, binary-searched online lookup, a
// plain dictionary attack and the salting counter-demonstration.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unattended/hashing.hpp"

namespace unattended::rainbow {

struct TableParams {
  hashing::HashAlg alg = hashing::HashAlg::kMd5;
  std::string charset = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::uint32_t min_len = 1;
  std::uint32_t max_len = 4;
  std::uint32_t chain_len = 100;    // plaintext nodes per chain (t >= 2)
  std::uint64_t chain_count = 2000; // m
  std::uint64_t seed = 1;

  void validate() const;        // throws std::invalid_argument
  std::uint64_t space_size() const;

  friend bool operator==(const TableParams&, const TableParams&) = default;
};

/// Mixed-radix decomposition of an index into the parameterized plaintext
/// space (all lengths min_len..max_len over the charset).
std::string index_to_plaintext(std::uint64_t index, const TableParams& params);

/// Position-indexed reduction: the first 8 digest bytes as a little-endian
/// integer, plus the column position, modulo the space size. Chains use
/// positions 0..chain_len-2.
std::string reduce(std::span<const std::uint8_t> digest, std::uint32_t position,
                   const TableParams& params);

struct RainbowTable {
  TableParams params;
  std::vector<std::pair<std::string, std::string>> rows;  // (start, end), sorted by end
  std::uint64_t duplicate_ends = 0;

  void save(const std::filesystem::path& path) const;  // "RTBL" binary format
  static RainbowTable load(const std::filesystem::path& path);
};

/// Generates chain_count chains of chain_len plaintext nodes from
/// counter-seeded start points; rows are sorted by end plaintext and
/// duplicate ends are deduplicated keeping the earliest chain.
RainbowTable build_table(const TableParams& params);

struct CrackResult {
  std::string hash_hex;
  std::optional<std::string> plaintext;  // verified: hash(plaintext) == hash_hex
  enum class Method { kDictionary, kRainbow } method = Method::kRainbow;
  std::uint64_t work = 0;  // hash invocations
};

/// Walks candidate columns from the last reduction position down to 0,
/// extends the target digest to a chain end, binary-searches the rows and
/// verifies any candidate by rebuilding the chain from its start. Only
/// verified plaintexts are returned.
CrackResult lookup(const RainbowTable& table, std::string_view hash_hex);

/// Linear scan; the first verified match wins. work == words hashed.
CrackResult dictionary_attack(const std::vector<std::string>& wordlist,
                              std::string_view hash_hex, hashing::HashAlg alg);
std::vector<std::string> load_wordlist(const std::filesystem::path& path);

/// Looks up hash(salt + plaintext) in a table built without salts. Expected
/// absent: the salted space is disjoint from the table's plaintext space.
/// Throws std::invalid_argument on an empty salt.
CrackResult salted_lookup_demo(const RainbowTable& table,
                               std::string_view plaintext,
                               std::string_view salt);

}  // namespace unattended::rainbow
