// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// The two simulated case-study devices: an electronic-lock MCU reachable
// over JTAG, and an IP-camera SPI flash image whose config partition is
// zlib-compressed then DES-ECB encrypted under a model-string-derived key.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unattended/jtag.hpp"
#include "unattended/secrets.hpp"
#include "unattended/spi_flash.hpp"

namespace unattended::fixtures {

struct CameraFixtureSpec {
  std::string model = "C100 2.0";
  std::string ip = "192.168.0.107";
  std::string protocols = "rtsp,http";
  std::string username = "share1";
  std::string password = "sunshine";  // stored as an md5 hex digest
  std::string ssid = "HomeWiFi24";
  std::uint64_t capacity = 0x800000;
  std::uint64_t partition_start = 0x40000;
  std::uint64_t partition_end = 0x50000;
  std::uint64_t model_offset = 0x700c0;
  std::uint64_t seed = 1;
};

/// The config plaintext planted in the camera partition (`key = value` lines).
std::string camera_config_text(const CameraFixtureSpec& spec);

/// Builds the camera flash image by the inverse pipeline: config text ->
/// zlib -> DES-ECB under the key derived from the model string -> placed at
/// the partition range; the model string is planted at model_offset. The
/// rest of the image is low-entropy firmware-like filler plus a few planted
/// file-type magics.
spi::FlashImage make_camera_image(const CameraFixtureSpec& spec,
                                  const secrets::KeyDerivation& derivation =
                                      secrets::LookupKeyDerivation{});

/// The lock target: info-memory segment 0x1000..0x10ff holding the
/// programming code and user codes as plaintext ASCII. `updated` switches to
/// the post-code-change content (new programming code, added user code).
jtag::TargetDefinition make_lock_target(bool updated = false);

/// The continuity measurement matrix for the lock's 7-pin debug header, as
/// CSV (what a multimeter survey of the header against the MCU pins yields).
std::string continuity_matrix_csv();

/// Deterministic pseudo-word list; `include` entries are inserted at
/// deterministic positions.
std::vector<std::string> make_wordlist(std::size_t count, std::uint64_t seed,
                                       const std::vector<std::string>& include);

}  // namespace unattended::fixtures
