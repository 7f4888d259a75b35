// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference frame decoder for the 25-series command set, table-driven the
// way the datasheet presents it. Cross-checks the library codec.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace oracle {

struct RefDecoded {
  std::uint8_t opcode;
  std::optional<std::uint32_t> address;
  std::vector<std::uint8_t> response;
};

// opcode, address bytes, dummy bytes (3-byte addressing, 1 fast-read dummy)
struct RefEntry {
  std::uint8_t opcode;
  int addr_bytes;
  int dummy_bytes;
};

inline constexpr RefEntry kRefCommandTable[] = {
    {0x03, 3, 0},  // READ
    {0x0b, 3, 1},  // FAST_READ
    {0x9f, 0, 0},  // RDID
    {0x05, 0, 0},  // RDSR
    {0x35, 0, 0},  // RDSR2
    {0x06, 0, 0},  // WREN
};

inline std::optional<RefDecoded> ref_decode(std::span<const std::uint8_t> mosi,
                                            std::span<const std::uint8_t> miso) {
  if (mosi.empty() || mosi.size() != miso.size()) return std::nullopt;
  for (const auto& entry : kRefCommandTable) {
    if (entry.opcode != mosi[0]) continue;
    std::size_t header = 1 + static_cast<std::size_t>(entry.addr_bytes) +
                         static_cast<std::size_t>(entry.dummy_bytes);
    if (mosi.size() < header) return std::nullopt;
    RefDecoded d;
    d.opcode = entry.opcode;
    if (entry.addr_bytes > 0) {
      std::uint32_t addr = 0;
      for (int i = 0; i < entry.addr_bytes; ++i)
        addr = addr << 8 | mosi[1 + static_cast<std::size_t>(i)];
      d.address = addr;
    }
    d.response.assign(miso.begin() + static_cast<std::ptrdiff_t>(header),
                      miso.end());
    return d;
  }
  return std::nullopt;
}

}  // namespace oracle
