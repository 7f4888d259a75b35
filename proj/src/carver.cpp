// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/carver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "unattended/hex.hpp"

namespace unattended::carver {

void Signature::validate() const {
  if (magic.size() < 2)
    throw std::invalid_argument("signature magic must be >= 2 bytes");
  if (!mask.empty() && mask.size() != magic.size())
    throw std::invalid_argument("signature mask length must match magic");
}

const std::vector<Signature>& builtin_signatures() {
  // zlib streams have no fixed second byte; the FCHECK validator does the
  // real work, the mask only widens the match window to two bytes.
  static const std::vector<Signature> sigs = {
      {"zlib", {0x78, 0x00}, {0xff, 0x00}, Signature::Validator::kZlibHeader},
      {"gzip", {0x1f, 0x8b}, {}, Signature::Validator::kNone},
      {"squashfs", {'h', 's', 'q', 's'}, {}, Signature::Validator::kNone},
      {"uimage", {0x27, 0x05, 0x19, 0x56}, {}, Signature::Validator::kNone},
      {"jffs2", {0x19, 0x85}, {}, Signature::Validator::kNone},
  };
  return sigs;
}

std::vector<Signature> load_signatures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open signature file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<Signature> sigs;
  for (const auto& item : j) {
    Signature s;
    s.name = item.at("name").get<std::string>();
    s.magic = from_hex(item.at("magic_hex").get<std::string>());
    if (item.contains("mask_hex"))
      s.mask = from_hex(item["mask_hex"].get<std::string>());
    std::string v = item.value("validator", "none");
    if (v == "zlib-header")
      s.validator = Signature::Validator::kZlibHeader;
    else if (v != "none")
      throw std::invalid_argument("unknown validator: " + v);
    s.validate();
    sigs.push_back(std::move(s));
  }
  return sigs;
}

static bool validator_passes(Signature::Validator v,
                             std::span<const std::uint8_t> at) {
  switch (v) {
    case Signature::Validator::kNone:
      return true;
    case Signature::Validator::kZlibHeader: {
      // RFC 1950: the 16-bit CMF|FLG header is a multiple of 31 (FCHECK).
      if (at.size() < 2) return false;
      unsigned header = static_cast<unsigned>(at[0]) << 8 | at[1];
      return header % 31 == 0;
    }
  }
  return false;
}

std::vector<Region> scan_signatures(std::span<const std::uint8_t> image,
                                    const std::vector<Signature>& signatures) {
  if (image.empty()) throw std::invalid_argument("empty image");
  for (const auto& s : signatures) s.validate();

  std::vector<Region> regions;
  for (const auto& sig : signatures) {
    const std::size_t n = sig.magic.size();
    if (image.size() < n) continue;
    for (std::size_t off = 0; off + n <= image.size(); ++off) {
      bool match = true;
      for (std::size_t i = 0; i < n && match; ++i) {
        std::uint8_t m = sig.mask.empty() ? 0xff : sig.mask[i];
        match = (image[off + i] & m) == (sig.magic[i] & m);
      }
      if (!match) continue;
      if (!validator_passes(sig.validator, image.subspan(off))) continue;
      regions.push_back(Region{off, 0, sig.name, 1.0});
    }
  }
  std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start, a.kind) < std::tie(b.start, b.kind);
  });
  // Without intrinsic length fields, a region runs to the next distinct
  // start or the image end.
  for (std::size_t i = 0; i < regions.size(); ++i) {
    std::uint64_t end = image.size();
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      if (regions[j].start > regions[i].start) {
        end = regions[j].start;
        break;
      }
    }
    regions[i].end = end;
  }
  return regions;
}

static double window_entropy(std::span<const std::uint8_t> window) {
  std::array<std::uint64_t, 256> counts{};
  for (std::uint8_t b : window) ++counts[b];
  double entropy = 0.0;
  const double total = static_cast<double>(window.size());
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / total;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

std::vector<std::pair<std::uint64_t, double>> entropy_profile(
    std::span<const std::uint8_t> image, std::size_t window,
    std::size_t stride) {
  if (window < 16) throw std::invalid_argument("window must be >= 16");
  if (stride == 0) throw std::invalid_argument("stride must be >= 1");
  if (window > image.size())
    throw WindowTooLarge("entropy window exceeds image length");

  std::vector<std::pair<std::uint64_t, double>> profile;
  for (std::size_t off = 0; off + window <= image.size(); off += stride)
    profile.emplace_back(off, window_entropy(image.subspan(off, window)));
  return profile;
}

std::vector<Region> high_entropy_regions(std::span<const std::uint8_t> image,
                                         std::size_t window,
                                         std::size_t stride,
                                         double threshold) {
  auto profile = entropy_profile(image, window, stride);
  std::vector<Region> regions;
  std::size_t i = 0;
  while (i < profile.size()) {
    if (profile[i].second < threshold) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double sum = 0.0;
    while (j < profile.size() && profile[j].second >= threshold)
      sum += profile[j++].second;
    Region r;
    r.start = profile[i].first;
    r.end = profile[j - 1].first + window;
    r.kind = "high-entropy";
    r.score = sum / static_cast<double>(j - i) / 8.0;
    regions.push_back(r);
    i = j;
  }
  return regions;
}

std::vector<std::uint64_t> find_string(std::span<const std::uint8_t> image,
                                       std::span<const std::uint8_t> needle) {
  if (needle.empty()) throw std::invalid_argument("needle must be non-empty");
  std::vector<std::uint64_t> offsets;
  auto it = image.begin();
  while (true) {
    it = std::search(it, image.end(), needle.begin(), needle.end());
    if (it == image.end()) break;
    offsets.push_back(static_cast<std::uint64_t>(it - image.begin()));
    ++it;  // overlapping matches included
  }
  return offsets;
}

std::vector<std::uint8_t> carve(std::span<const std::uint8_t> image,
                                const Region& region) {
  if (region.start >= region.end)
    throw RegionOutOfBounds("region is empty or inverted");
  if (region.end > image.size())
    throw RegionOutOfBounds("region end past image length");
  return {image.begin() + static_cast<std::ptrdiff_t>(region.start),
          image.begin() + static_cast<std::ptrdiff_t>(region.end)};
}

}  // namespace unattended::carver
