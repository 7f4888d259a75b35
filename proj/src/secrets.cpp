// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/secrets.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <zlib.h>
#include <nlohmann/json.hpp>

namespace unattended::secrets {

LookupKeyDerivation::LookupKeyDerivation() {
  entries_["C100 2.0"] = "249c6923";
}

LookupKeyDerivation::LookupKeyDerivation(std::map<std::string, std::string> entries)
    : LookupKeyDerivation() {
  for (auto& [model, key] : entries) add(model, key);
}

LookupKeyDerivation LookupKeyDerivation::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open key registry: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  LookupKeyDerivation d;
  for (auto& [model, key] : j.items()) d.add(model, key.get<std::string>());
  return d;
}

void LookupKeyDerivation::add(std::string model, std::string key_text) {
  if (key_text.size() != 8)
    throw std::invalid_argument("key text must be exactly 8 characters");
  entries_[std::move(model)] = std::move(key_text);
}

des::Key LookupKeyDerivation::derive(std::string_view model) const {
  auto it = entries_.find(std::string(model));
  if (it == entries_.end())
    throw NoDerivation("no key known for model string \"" + std::string(model) +
                       "\"");
  des::Key key{};
  std::copy_n(it->second.begin(), 8, key.begin());
  return key;
}

des::Key TruncateKeyDerivation::derive(std::string_view model) const {
  if (model.size() < 8)
    throw NoDerivation("model string shorter than 8 bytes");
  des::Key key{};
  std::copy_n(model.begin(), 8, key.begin());
  return key;
}

des::Key derive_des_key(std::string_view model, const KeyDerivation& derivation) {
  return derivation.derive(model);
}

// RFC 1950 header: CM must be 8 (deflate), CINFO <= 7, the 16-bit CMF|FLG
// value a multiple of 31, and FDICT unset (preset dictionaries unsupported).
static bool valid_zlib_header(std::span<const std::uint8_t> data) {
  if (data.size() < 2) return false;
  std::uint8_t cmf = data[0], flg = data[1];
  if ((cmf & 0x0f) != 8) return false;
  if ((cmf >> 4) > 7) return false;
  if ((static_cast<unsigned>(cmf) << 8 | flg) % 31 != 0) return false;
  if (flg & 0x20) return false;  // FDICT
  return true;
}

std::vector<std::uint8_t> inflate_zlib(std::span<const std::uint8_t> data) {
  if (!valid_zlib_header(data))
    throw NotZlib("input does not start with a valid zlib header");

  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw CorruptStream("inflateInit failed");
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());

  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> buf(64 * 1024);
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = buf.data();
    zs.avail_out = static_cast<uInt>(buf.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      // Z_DATA_ERROR covers both corrupt deflate data and a failed Adler-32.
      throw CorruptStream(std::string("inflate failed: ") +
                          (zs.msg ? zs.msg : "data error"));
    }
    out.insert(out.end(), buf.begin(),
               buf.begin() + static_cast<std::ptrdiff_t>(buf.size() - zs.avail_out));
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw CorruptStream("truncated zlib stream");
    }
  }
  inflateEnd(&zs);
  return out;  // trailing bytes after Z_STREAM_END (partition padding) are ignored
}

std::vector<std::uint8_t> deflate_zlib(std::span<const std::uint8_t> data,
                                       int level) {
  uLongf bound = compressBound(static_cast<uLong>(data.size()));
  std::vector<std::uint8_t> out(bound);
  if (compress2(out.data(), &bound, data.data(), static_cast<uLong>(data.size()),
                level) != Z_OK)
    throw std::runtime_error("deflate failed");
  out.resize(bound);
  return out;
}

std::vector<std::uint8_t> decrypt_partition(const spi::FlashImage& image,
                                            const carver::Region& range,
                                            const des::Key& key) {
  auto ciphertext = carver::carve(image.bytes(), range);
  if (ciphertext.size() % 8 != 0)
    throw NotBlockAligned("partition length must be a multiple of 8");
  auto decrypted = des::des_ecb(ciphertext, key, des::Direction::kDecrypt);
  return inflate_zlib(decrypted);
}

static bool printable(std::uint8_t c) {
  return (c >= 0x20 && c <= 0x7e) || c == '\n' || c == '\r' || c == '\t';
}

static std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

static bool matches_key(const std::vector<std::string>& keys,
                        const std::string& key) {
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

static bool is_hex_digest(const std::string& s) {
  if (s.size() != 32 && s.size() != 40) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isxdigit(static_cast<unsigned char>(c));
  });
}

ConfigRecord extract_config(std::span<const std::uint8_t> plaintext,
                            const ConfigSchema& schema) {
  std::size_t ok = 0;
  for (std::uint8_t c : plaintext) ok += printable(c);
  if (!plaintext.empty() &&
      static_cast<double>(ok) < 0.9 * static_cast<double>(plaintext.size()))
    throw TextinessError("decrypted output is not text (wrong key or range?)");

  ConfigRecord record;
  std::string text(plaintext.begin(), plaintext.end());
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::transform(key.begin(), key.end(), key.begin(), ::tolower);
    if (key.empty() || value.empty()) continue;

    if (matches_key(schema.ip_keys, key)) {
      record.ip = value;
    } else if (matches_key(schema.protocol_keys, key)) {
      std::stringstream ps(value);
      std::string proto;
      while (std::getline(ps, proto, ','))
        if (!trim(proto).empty()) record.protocols.push_back(trim(proto));
    } else if (matches_key(schema.username_keys, key)) {
      record.username = value;
    } else if (matches_key(schema.password_keys, key)) {
      std::string lower = value;
      std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
      if (is_hex_digest(lower))
        record.password_hash = lower;
      else
        record.extras[key] = value;  // not a digest; keep raw
    } else if (matches_key(schema.ssid_keys, key)) {
      record.ssid = value;
    } else {
      record.extras[key] = value;
    }
  }
  return record;
}

namespace {

struct DigitRun {
  std::string digits;
  std::uint64_t offset;       // byte offset of the first byte
  std::uint64_t end_offset;   // one past the last byte
  CodeHit::Encoding encoding;
};

bool bcd_byte(std::uint8_t b) { return (b >> 4) <= 9 && (b & 0x0f) <= 9; }

}  // namespace

LockCodes scan_codes(std::span<const std::uint8_t> segment) {
  if (segment.size() < 4)
    throw std::invalid_argument("segment must be at least 4 bytes");

  std::vector<DigitRun> runs;

  // ASCII digit runs.
  std::size_t i = 0;
  while (i < segment.size()) {
    if (!std::isdigit(segment[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < segment.size() && std::isdigit(segment[j])) ++j;
    std::size_t len = j - i;
    if (len >= 4 && len <= 8)
      runs.push_back({std::string(segment.begin() + static_cast<std::ptrdiff_t>(i),
                                  segment.begin() + static_cast<std::ptrdiff_t>(j)),
                      i, j, CodeHit::Encoding::kAscii});
    i = j;
  }

  // Packed-BCD runs, skipping bytes already claimed by an ASCII run.
  auto inside_ascii = [&](std::size_t pos) {
    for (const auto& r : runs)
      if (r.encoding == CodeHit::Encoding::kAscii && pos >= r.offset &&
          pos < r.end_offset)
        return true;
    return false;
  };
  i = 0;
  while (i < segment.size()) {
    if (!bcd_byte(segment[i]) || inside_ascii(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < segment.size() && bcd_byte(segment[j]) && !inside_ascii(j)) ++j;
    std::size_t digits = 2 * (j - i);
    if (digits >= 4 && digits <= 8) {
      std::string text;
      for (std::size_t k = i; k < j; ++k) {
        text.push_back(static_cast<char>('0' + (segment[k] >> 4)));
        text.push_back(static_cast<char>('0' + (segment[k] & 0x0f)));
      }
      runs.push_back({std::move(text), i, j, CodeHit::Encoding::kBcd});
    }
    i = j;
  }

  std::sort(runs.begin(), runs.end(),
            [](const auto& a, const auto& b) { return a.offset < b.offset; });

  LockCodes codes;
  // The programming code is the longest 6..8 digit run; everything else is
  // a user code.
  const DigitRun* longest = nullptr;
  for (const auto& r : runs) {
    if (r.digits.size() < 6) continue;
    if (!longest || r.digits.size() > longest->digits.size()) longest = &r;
    else if (r.digits.size() == longest->digits.size() && &r != longest)
      codes.notes.push_back("programming-code candidate tie at offset " +
                            std::to_string(r.offset));
  }
  for (const auto& r : runs) {
    CodeHit hit{r.digits, r.offset, r.encoding};
    if (&r == longest)
      codes.programming = hit;
    else
      codes.user_codes.push_back(hit);
    if (r.encoding == CodeHit::Encoding::kBcd)
      codes.notes.push_back("code at offset " + std::to_string(r.offset) +
                            " matched as packed BCD");
  }
  return codes;
}

}  // namespace unattended::secrets
