// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unattended::hashing {

enum class HashAlg { kMd5, kSha1 };

std::size_t digest_length(HashAlg alg);  // 16 / 20
const char* hash_alg_name(HashAlg alg);
HashAlg parse_hash_alg(std::string_view name);  // "md5" | "sha1"

std::vector<std::uint8_t> digest(HashAlg alg, std::span<const std::uint8_t> data);
std::string digest_hex(HashAlg alg, std::string_view text);

/// Case-file payload digests.
std::string sha256_hex(std::span<const std::uint8_t> data);

}  // namespace unattended::hashing
