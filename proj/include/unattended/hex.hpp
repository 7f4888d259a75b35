// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unattended {

/// Lowercase hex, no separators.
std::string to_hex(std::span<const std::uint8_t> bytes);

/// Parses lowercase or uppercase hex; throws std::invalid_argument on odd
/// length or non-hex characters.
std::vector<std::uint8_t> from_hex(std::string_view hex);

/// Accepts "0x"-prefixed hex or decimal. Throws std::invalid_argument.
std::uint64_t parse_offset(std::string_view text);

}  // namespace unattended
