// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "unattended/errors.hpp"

namespace unattended::des {

enum class Direction { kEncrypt, kDecrypt };

using Block = std::array<std::uint8_t, 8>;
using Key = std::array<std::uint8_t, 8>;

/// Single-block DES. Key parity bits are ignored (keys taken verbatim).
Block des_block(const Block& block, const Key& key, Direction dir);

/// Block-wise DES in ECB mode, no padding. Throws NotBlockAligned unless
/// the input length is a multiple of 8. Empty input yields empty output.
std::vector<std::uint8_t> des_ecb(std::span<const std::uint8_t> data,
                                  const Key& key, Direction dir);

}  // namespace unattended::des
