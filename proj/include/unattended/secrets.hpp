// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// The cryptanalytic chain for the camera dump: model-string key derivation,
// DES-ECB decryption, zlib inflation and config-record extraction, plus the
// lock-code scanner for memory segments read over JTAG.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unattended/carver.hpp"
#include "unattended/des.hpp"
#include "unattended/errors.hpp"
#include "unattended/spi_flash.hpp"

namespace unattended::secrets {

/// Pluggable model-string -> 8-byte DES key derivation. The device firmware
/// owns the real derivation function; the toolkit ships known pairs as a
/// lookup table rather than inventing the algorithm.
class KeyDerivation {
 public:
  virtual ~KeyDerivation() = default;
  virtual std::string id() const = 0;
  /// Throws NoDerivation when no key can be produced for the model string.
  virtual des::Key derive(std::string_view model) const = 0;
};

class LookupKeyDerivation final : public KeyDerivation {
 public:
  /// Ships the known pair: "C100 2.0" -> key text "249c6923"
  /// (0x3234396336393233 on the wire).
  LookupKeyDerivation();
  explicit LookupKeyDerivation(std::map<std::string, std::string> entries);
  /// JSON map model-string -> 8-char key text, merged over the built-ins.
  static LookupKeyDerivation from_file(const std::filesystem::path& path);

  void add(std::string model, std::string key_text);
  std::string id() const override { return "lookup"; }
  des::Key derive(std::string_view model) const override;

 private:
  std::map<std::string, std::string> entries_;
};

/// Test-only derivation: the first eight bytes of the model string.
class TruncateKeyDerivation final : public KeyDerivation {
 public:
  std::string id() const override { return "truncate8"; }
  des::Key derive(std::string_view model) const override;
};

des::Key derive_des_key(std::string_view model, const KeyDerivation& derivation);

/// RFC 1950 stream helpers backed by zlib. inflate verifies the Adler-32
/// trailer; a bad header throws NotZlib and a failed checksum or truncated
/// deflate stream throws CorruptStream.
std::vector<std::uint8_t> inflate_zlib(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> deflate_zlib(std::span<const std::uint8_t> data,
                                       int level = 9);

/// carve -> DES-ECB decrypt -> inflate. NotZlib after decryption signals a
/// wrong key. The range length must be a multiple of 8.
std::vector<std::uint8_t> decrypt_partition(const spi::FlashImage& image,
                                            const carver::Region& range,
                                            const des::Key& key);

struct ConfigRecord {
  std::optional<std::string> ip;
  std::vector<std::string> protocols;
  std::optional<std::string> username;
  std::optional<std::string> password_hash;  // lowercase hex, 32 or 40 chars
  std::optional<std::string> ssid;
  std::map<std::string, std::string> extras;

  friend bool operator==(const ConfigRecord&, const ConfigRecord&) = default;
};

struct ConfigSchema {
  std::vector<std::string> ip_keys{"ip", "ip_address", "ipaddr"};
  std::vector<std::string> protocol_keys{"protocol", "protocols"};
  std::vector<std::string> username_keys{"username", "user", "account"};
  std::vector<std::string> password_keys{"password", "passwd", "pwd"};
  std::vector<std::string> ssid_keys{"ssid", "wifi_ssid"};
};

/// Line-oriented `key = value` parsing. Throws TextinessError unless the
/// input is at least 90% printable (wrong decryption output fed in).
ConfigRecord extract_config(std::span<const std::uint8_t> plaintext,
                            const ConfigSchema& schema = {});

struct CodeHit {
  std::string digits;
  std::uint64_t offset = 0;
  enum class Encoding { kAscii, kBcd } encoding = Encoding::kAscii;

  friend bool operator==(const CodeHit&, const CodeHit&) = default;
};

struct LockCodes {
  std::optional<CodeHit> programming;  // longest run of 6..8 digits
  std::vector<CodeHit> user_codes;
  std::vector<std::string> notes;
};

/// Finds maximal runs of ASCII digits and of packed-BCD nibbles, 4..8 digits
/// long. BCD runs overlapping an ASCII digit run are shadows of the same
/// bytes and are suppressed. Segment must be at least 4 bytes.
LockCodes scan_codes(std::span<const std::uint8_t> segment);

}  // namespace unattended::secrets
