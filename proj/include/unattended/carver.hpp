// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// Structure discovery inside raw flash dumps: magic-number signature
// scanning, Shannon-entropy profiling for encrypted-partition detection,
// byte-string search and region carving.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "unattended/errors.hpp"

namespace unattended::carver {

struct Signature {
  enum class Validator { kNone, kZlibHeader };

  std::string name;
  std::vector<std::uint8_t> magic;
  std::vector<std::uint8_t> mask;  // empty = exact match; else same length as magic
  Validator validator = Validator::kNone;

  void validate() const;  // magic length >= 2, mask length matches
};

/// zlib, gzip, squashfs, uImage and JFFS2 magics.
const std::vector<Signature>& builtin_signatures();

/// JSON list of {name, magic_hex, mask_hex?, validator: "none"|"zlib-header"}.
std::vector<Signature> load_signatures(const std::filesystem::path& path);

struct Region {
  std::uint64_t start = 0;
  std::uint64_t end = 0;  // exclusive
  std::string kind;       // signature name, "high-entropy" or "unknown"
  double score = 0.0;     // [0, 1]

  std::uint64_t length() const { return end - start; }
  friend bool operator==(const Region&, const Region&) = default;
};

/// Every offset whose bytes match a magic (under its mask) and pass its
/// validator yields a region. Regions without intrinsic length run to the
/// next region start or the image end; results are sorted by start.
std::vector<Region> scan_signatures(std::span<const std::uint8_t> image,
                                    const std::vector<Signature>& signatures =
                                        builtin_signatures());

/// Shannon entropy (bits/byte, in [0,8]) of each window. Throws
/// WindowTooLarge when the window exceeds the image and
/// std::invalid_argument for window < 16 or stride == 0.
std::vector<std::pair<std::uint64_t, double>> entropy_profile(
    std::span<const std::uint8_t> image, std::size_t window,
    std::size_t stride);

/// Merges consecutive windows above `threshold` bits/byte into regions of
/// kind "high-entropy"; score is the mean entropy / 8.
std::vector<Region> high_entropy_regions(std::span<const std::uint8_t> image,
                                         std::size_t window = 4096,
                                         std::size_t stride = 2048,
                                         double threshold = 7.5);

/// All match offsets, ascending; overlapping matches included.
std::vector<std::uint64_t> find_string(std::span<const std::uint8_t> image,
                                       std::span<const std::uint8_t> needle);

/// Byte-exact copy of [start, end). Throws RegionOutOfBounds.
std::vector<std::uint8_t> carve(std::span<const std::uint8_t> image,
                                const Region& region);

}  // namespace unattended::carver
