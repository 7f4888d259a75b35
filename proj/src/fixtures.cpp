// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/fixtures.hpp"

#include <random>

#include "unattended/hashing.hpp"

namespace unattended::fixtures {

std::string camera_config_text(const CameraFixtureSpec& spec) {
  std::string hash = hashing::digest_hex(hashing::HashAlg::kMd5, spec.password);
  std::string text;
  text += "ip = " + spec.ip + "\n";
  text += "protocols = " + spec.protocols + "\n";
  text += "username = " + spec.username + "\n";
  text += "password = " + hash + "\n";
  text += "ssid = " + spec.ssid + "\n";
  text += "stream_port = 554\n";
  text += "onvif = enabled\n";
  return text;
}

// Firmware-like filler: repetitive boot strings and padding runs. Low
// entropy by construction and free of the scanner's magic bytes ('x' is
// avoided so no accidental zlib header prefix appears in text).
static void fill_background(std::vector<std::uint8_t>& data, std::uint64_t seed) {
  static const char* kPhrases[] = {
      "Boot loader v1.1.3 (build 20210507)",
      "dram init ok; ddr calibration done",
      "uart0 console ready; watchdog armed",
      "net: mac 00:17:4f:aa:bb:cc; phy link up 100M",
      "mounting rootfs... starting services",
      "rtsp server listening on 554; cloud agent idle",
  };
  std::mt19937_64 rng(seed);
  std::size_t pos = 0;
  while (pos < data.size()) {
    if ((rng() & 3) == 0) {
      // padding run
      std::size_t run = 64 + (rng() % 192);
      std::uint8_t fill = (rng() & 1) ? 0xff : 0x00;
      for (std::size_t i = 0; i < run && pos < data.size(); ++i)
        data[pos++] = fill;
    } else {
      const char* phrase = kPhrases[rng() % std::size(kPhrases)];
      std::size_t len = std::char_traits<char>::length(phrase);
      for (std::size_t i = 0; i < len && pos < data.size(); ++i)
        data[pos++] = static_cast<std::uint8_t>(phrase[i]);
      if (pos < data.size()) data[pos++] = 0x00;  // NUL separator
    }
  }
}

spi::FlashImage make_camera_image(const CameraFixtureSpec& spec,
                                  const secrets::KeyDerivation& derivation) {
  if ((spec.partition_end - spec.partition_start) % 8 != 0)
    throw std::invalid_argument("partition length must be a multiple of 8");

  spi::FlashGeometry geometry;
  geometry.capacity_bytes = spec.capacity;
  std::vector<std::uint8_t> data(spec.capacity);
  fill_background(data, spec.seed);

  // Inverse pipeline for the config partition: text -> zlib -> pad with
  // keyed pseudorandom bytes (unique blocks, so ECB output stays uniform)
  // -> DES-ECB encrypt.
  std::string config = camera_config_text(spec);
  auto compressed = secrets::deflate_zlib(
      {reinterpret_cast<const std::uint8_t*>(config.data()), config.size()});
  std::uint64_t part_len = spec.partition_end - spec.partition_start;
  if (compressed.size() > part_len)
    throw std::invalid_argument("config does not fit the partition");
  std::vector<std::uint8_t> plain(part_len);
  std::copy(compressed.begin(), compressed.end(), plain.begin());
  std::mt19937_64 pad_rng(spec.seed ^ 0x70617274ull);
  for (std::size_t i = compressed.size(); i < plain.size(); ++i)
    plain[i] = static_cast<std::uint8_t>(pad_rng());
  auto key = derivation.derive(spec.model);
  auto encrypted = des::des_ecb(plain, key, des::Direction::kEncrypt);
  std::copy(encrypted.begin(), encrypted.end(),
            data.begin() + static_cast<std::ptrdiff_t>(spec.partition_start));

  // The model string the key material derives from.
  if (spec.model_offset + spec.model.size() > data.size())
    throw std::invalid_argument("model offset outside the image");
  for (std::size_t i = 0; i < spec.model.size(); ++i)
    data[spec.model_offset + i] = static_cast<std::uint8_t>(spec.model[i]);

  // A few recognizable file-type magics elsewhere in the image.
  static const std::uint8_t uimage[] = {0x27, 0x05, 0x19, 0x56};
  static const std::uint8_t squashfs[] = {'h', 's', 'q', 's'};
  if (data.size() >= 0x10000 + sizeof uimage)
    std::copy(std::begin(uimage), std::end(uimage), data.begin() + 0x10000);
  if (data.size() >= 0x100000 + sizeof squashfs)
    std::copy(std::begin(squashfs), std::end(squashfs),
              data.begin() + 0x100000);

  return spi::FlashImage(geometry, std::move(data));
}

jtag::TargetDefinition make_lock_target(bool updated) {
  jtag::TargetDefinition def;
  def.config.ir_length = 8;
  def.config.idcode = 0x2a5b16e5;
  def.config.fuse_blown = false;
  def.pin_count = 7;
  def.wiring = {{jtag::Signal::kTck, 1},  {jtag::Signal::kTms, 2},
                {jtag::Signal::kTdi, 3},  {jtag::Signal::kTdo, 4},
                {jtag::Signal::kGnd, 5},  {jtag::Signal::kTrstN, 6},
                {jtag::Signal::kTest, 7}};

  // Info memory 0x1000..0x10ff: codes in plaintext ASCII with erased-flash
  // gaps between them.
  auto put = [&](std::uint16_t addr, const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i)
      def.config.memory[static_cast<std::uint16_t>(addr + i)] =
          static_cast<std::uint8_t>(text[i]);
  };
  if (!updated) {
    put(0x1000, "539348");
    put(0x1008, "5370");
    put(0x1010, "2865");
  } else {
    put(0x1000, "170712");
    put(0x1008, "5370");
    put(0x1010, "2865");
    put(0x1018, "5015");
  }
  return def;
}

std::string continuity_matrix_csv() {
  return "pin,GND,TRST_N,TDI,TDO,TMS,TCK,TEST\n"
         "JT1.1,687,OL,OL,OL,OL,0,OL\n"
         "JT1.2,714,OL,OL,OL,0,OL,OL\n"
         "JT1.3,711,OL,0,OL,OL,OL,OL\n"
         "JT1.4,714,OL,OL,0,OL,OL,OL\n"
         "JT1.5,0,715,OL,OL,478,450,430\n"
         "JT1.6,716,0,OL,OL,OL,OL,OL\n"
         "JT1.7,523,OL,OL,OL,OL,OL,0\n";
}

std::vector<std::string> make_wordlist(std::size_t count, std::uint64_t seed,
                                       const std::vector<std::string>& include) {
  static const char* kSyllables[] = {"an", "ba", "co", "da", "el", "fi",
                                     "go", "ha", "in", "jo", "ka", "lu",
                                     "mo", "ne", "or", "pa", "qi", "ro",
                                     "su", "ta", "ul", "vi", "wa", "ye"};
  std::mt19937_64 rng(seed);
  std::vector<std::string> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string w;
    std::size_t syllables = 2 + rng() % 3;
    for (std::size_t s = 0; s < syllables; ++s)
      w += kSyllables[rng() % std::size(kSyllables)];
    if (rng() % 3 == 0) w += static_cast<char>('0' + rng() % 10);
    words.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < include.size(); ++i) {
    std::size_t pos = (words.empty() ? 0 : (seed + 37 * (i + 1)) % words.size());
    if (pos < words.size())
      words[pos] = include[i];
    else
      words.push_back(include[i]);
  }
  return words;
}

}  // namespace unattended::fixtures
