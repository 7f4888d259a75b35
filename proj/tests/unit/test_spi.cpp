// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <random>

#include "unattended/fixtures.hpp"
#include "unattended/hex.hpp"
#include "unattended/spi_flash.hpp"

#include "../oracles/spi_reference.hpp"

using namespace unattended;
using spi::Opcode;

namespace {

spi::FlashImage random_image(std::uint64_t capacity, std::uint64_t seed) {
  spi::FlashGeometry g;
  g.capacity_bytes = capacity;
  std::vector<std::uint8_t> data(capacity);
  std::mt19937_64 rng(seed);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  return spi::FlashImage(g, std::move(data));
}

// Driver that fails on the nth transfer.
class FaultyDriver final : public spi::FlashBusDriver {
 public:
  FaultyDriver(spi::FlashDevice& device, std::size_t fail_at)
      : device_(&device), fail_at_(fail_at) {}
  std::vector<std::uint8_t> transfer(std::span<const std::uint8_t> mosi) override {
    if (++count_ == fail_at_) throw std::runtime_error("injected I/O failure");
    return device_->execute(mosi);
  }

 private:
  spi::FlashDevice* device_;
  std::size_t fail_at_;
  std::size_t count_ = 0;
};

}  // namespace

TEST_CASE("encode_command against the datasheet-style table") {
  SUBCASE("READ at 0 with a 4-byte window") {
    spi::SpiCommand cmd{0x03, 0x000000, 4};
    CHECK(to_hex(spi::encode_command(cmd)) == "0300000000000000");
  }
  SUBCASE("RDID with 3 response bytes") {
    spi::SpiCommand cmd{0x9f, std::nullopt, 3};
    CHECK(to_hex(spi::encode_command(cmd)) == "9f000000");
  }
  SUBCASE("READ header only") {
    spi::SpiCommand cmd{0x03, 0x0a0b0c, 0};
    CHECK(to_hex(spi::encode_command(cmd)) == "030a0b0c");
  }
  SUBCASE("unsupported opcode") {
    spi::SpiCommand cmd{0xd8, 0x0, 0};  // block erase is not modeled
    CHECK_THROWS_AS(spi::encode_command(cmd), UnsupportedCommand);
  }
  SUBCASE("address presence must match the opcode") {
    CHECK_THROWS_AS(spi::encode_command({0x9f, 0x1234, 0}), MalformedCommand);
    CHECK_THROWS_AS(spi::encode_command({0x03, std::nullopt, 4}), MalformedCommand);
  }
}

TEST_CASE("encode/decode are mutually inverse over the supported set") {
  std::mt19937_64 rng(11);
  const std::uint8_t opcodes[] = {0x03, 0x0b, 0x9f, 0x05, 0x35, 0x06};
  for (int i = 0; i < 300; ++i) {
    spi::SpiCommand cmd;
    cmd.opcode = opcodes[rng() % 6];
    if (spi::opcode_has_address(static_cast<Opcode>(cmd.opcode)))
      cmd.address = static_cast<std::uint32_t>(rng() & 0xffffff);
    cmd.payload_len = rng() % 32;
    auto frame = spi::encode_command(cmd);
    std::vector<std::uint8_t> miso(frame.size());
    for (auto& b : miso) b = static_cast<std::uint8_t>(rng());

    auto tx = spi::decode_transaction(0, frame, miso);
    REQUIRE(tx.decoded.has_value());
    CHECK(tx.decoded->opcode == cmd.opcode);
    CHECK(tx.decoded->address == cmd.address);
    CHECK(tx.decoded->payload_len == cmd.payload_len);

    // reference decoder agrees
    auto ref = oracle::ref_decode(frame, miso);
    REQUIRE(ref.has_value());
    CHECK(ref->opcode == tx.decoded->opcode);
    CHECK(ref->address == tx.decoded->address);
    CHECK(ref->response == tx.response);
  }
}

TEST_CASE("decode_transaction edge cases") {
  SUBCASE("READ response bytes come after the header") {
    std::vector<std::uint8_t> mosi{0x03, 0, 0, 0, 0, 0};
    std::vector<std::uint8_t> miso{0, 0, 0, 0, 0xaa, 0xbb};
    auto tx = spi::decode_transaction(1, mosi, miso);
    REQUIRE(tx.decoded.has_value());
    CHECK(*tx.decoded->address == 0);
    CHECK(tx.response == std::vector<std::uint8_t>{0xaa, 0xbb});
  }
  SUBCASE("unknown opcode retained with decoded absent") {
    std::vector<std::uint8_t> mosi{0xff};
    std::vector<std::uint8_t> miso{0x00};
    auto tx = spi::decode_transaction(2, mosi, miso);
    CHECK_FALSE(tx.decoded.has_value());
    CHECK(tx.mosi == mosi);
  }
  SUBCASE("zero-length frame") {
    CHECK_THROWS_AS(spi::decode_transaction(0, {}, {}), EmptyFrame);
  }
  SUBCASE("length mismatch") {
    std::vector<std::uint8_t> mosi{0x03, 0, 0, 0};
    std::vector<std::uint8_t> miso{0x00};
    CHECK_THROWS_AS(spi::decode_transaction(0, mosi, miso),
                    std::invalid_argument);
  }
}

TEST_CASE("flash device execute") {
  auto image = random_image(0x20000, 99);
  spi::FlashDevice device(image);

  SUBCASE("RDID echoes the configured JEDEC id") {
    auto frame = spi::encode_command({0x9f, std::nullopt, 3});
    auto miso = device.execute(frame);
    CHECK(miso[1] == image.geometry().jedec_id[0]);
    CHECK(miso[2] == image.geometry().jedec_id[1]);
    CHECK(miso[3] == image.geometry().jedec_id[2]);
  }
  SUBCASE("RDSR reads 0x00 on an idle device") {
    auto miso = device.execute(spi::encode_command({0x05, std::nullopt, 1}));
    CHECK(miso[1] == 0x00);
  }
  SUBCASE("READ wraps modulo capacity") {
    auto frame = spi::encode_command(
        {0x03, static_cast<std::uint32_t>(image.capacity() - 1), 2});
    auto miso = device.execute(frame);
    CHECK(miso[4] == image.bytes()[image.capacity() - 1]);
    CHECK(miso[5] == image.bytes()[0]);
  }
  SUBCASE("wrap-around equals modulo indexing for random reads") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      auto addr = static_cast<std::uint32_t>(rng() % image.capacity());
      std::size_t len = 1 + rng() % 64;
      auto got = device.execute(spi::encode_command({0x03, addr, len}));
      for (std::size_t k = 0; k < len; ++k)
        REQUIRE(got[4 + k] == image.bytes()[(addr + k) % image.capacity()]);
    }
  }
  SUBCASE("read-class commands are pure") {
    auto frame = spi::encode_command({0x03, 0x100u, 16});
    auto a = device.execute(frame);
    auto b = device.execute(frame);
    CHECK(a == b);
  }
  SUBCASE("malformed header") {
    std::vector<std::uint8_t> frame{0x03, 0x00};  // too short for the address
    CHECK_THROWS_AS(device.execute(frame), MalformedCommand);
  }
  SUBCASE("fast read consumes dummy bytes") {
    auto frame = spi::encode_command({0x0b, 0x10u, 2});
    auto miso = device.execute(frame);
    CHECK(miso[5] == image.bytes()[0x10]);
    CHECK(miso[6] == image.bytes()[0x11]);
  }
}

TEST_CASE("dump_image") {
  SUBCASE("round trip on a small device") {
    auto image = random_image(0x10000, 4);
    spi::FlashDevice device(image);
    spi::SimulatedFlashDriver driver(device);
    auto result = spi::dump_image(driver, image.geometry(), 4096);
    CHECK(result.image == image);
    CHECK(result.transcript.size() == 0x10000 / 4096);
  }
  SUBCASE("single transaction when chunk == capacity") {
    auto image = random_image(0x100000, 5);
    spi::FlashDevice device(image);
    spi::SimulatedFlashDriver driver(device);
    auto result = spi::dump_image(driver, image.geometry(), 0x100000);
    CHECK(result.transcript.size() == 1);
    CHECK(result.image == image);
  }
  SUBCASE("driver failure aborts with partial coverage") {
    auto image = random_image(0x10000, 6);
    spi::FlashDevice device(image);
    FaultyDriver driver(device, 5);
    try {
      spi::dump_image(driver, image.geometry(), 1024);
      FAIL("expected DumpAborted");
    } catch (const spi::DumpAborted& e) {
      CHECK(e.partial().coverage.covered_count() == 4 * 1024);
      CHECK(e.partial().transcript.size() == 4);
    }
  }
}

TEST_CASE("transcript persistence and reconstruction") {
  auto image = random_image(0x8000, 12);
  spi::FlashDevice device(image);
  spi::SimulatedFlashDriver driver(device);
  auto result = spi::dump_image(driver, image.geometry(), 1024);

  SUBCASE("full dump reconstructs identically with coverage 1.0") {
    auto recon = spi::reconstruct_from_transcript(result.transcript,
                                                  image.geometry());
    CHECK(recon.image == image);
    CHECK(recon.coverage.covered_fraction() == doctest::Approx(1.0));
    CHECK(recon.conflicts == 0);
  }
  SUBCASE("save/load round trip reproduces miso bytes exactly") {
    auto path = std::filesystem::temp_directory_path() / "tx_roundtrip.jsonl";
    result.transcript.save(path);
    auto loaded = spi::Transcript::load(path);
    REQUIRE(loaded.size() == result.transcript.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
      CHECK(loaded.transactions()[i].miso == result.transcript.transactions()[i].miso);
      CHECK(loaded.transactions()[i].seq == result.transcript.transactions()[i].seq);
    }
    std::filesystem::remove(path);
  }
  SUBCASE("sequence numbers must strictly increase") {
    spi::Transcript t;
    auto frame = spi::encode_command({0x03, 0x0u, 4});
    auto miso = device.execute(frame);
    t.append(spi::decode_transaction(5, frame, miso));
    CHECK_THROWS_AS(t.append(spi::decode_transaction(5, frame, miso)),
                    std::invalid_argument);
  }
  SUBCASE("single read covers only its range") {
    spi::Transcript t;
    auto frame = spi::encode_command({0x03, 0x100u, 4});
    t.append(spi::decode_transaction(0, frame, device.execute(frame)));
    auto recon = spi::reconstruct_from_transcript(t, image.geometry());
    CHECK(recon.coverage.covered_count() == 4);
    CHECK(recon.image.bytes()[0x100] == image.bytes()[0x100]);
  }
  SUBCASE("overlapping reads with differing bytes count conflicts") {
    spi::Transcript t;
    auto f1 = spi::encode_command({0x03, 0x0u, 4});
    auto tx1 = spi::decode_transaction(0, f1, device.execute(f1));
    // second read overlaps byte 3 with a forged differing value
    auto f2 = spi::encode_command({0x03, 0x3u, 4});
    auto tx2 = spi::decode_transaction(1, f2, device.execute(f2));
    tx2.response[0] = static_cast<std::uint8_t>(~tx2.response[0]);
    tx2.miso[4] = tx2.response[0];
    t.append(tx1);
    t.append(tx2);
    auto recon = spi::reconstruct_from_transcript(t, image.geometry());
    CHECK(recon.conflicts == 1);
    CHECK(recon.image.bytes()[3] == tx2.response[0]);  // last write wins
  }
  SUBCASE("no decodable reads") {
    spi::Transcript t;
    std::vector<std::uint8_t> mosi{0xff, 0xff};
    std::vector<std::uint8_t> miso{0x00, 0x00};
    t.append(spi::decode_transaction(0, mosi, miso));
    CHECK_THROWS_AS(spi::reconstruct_from_transcript(t, image.geometry()),
                    NothingToReconstruct);
  }
}

TEST_CASE("READ at the partition base returns the encrypted config bytes") {
  fixtures::CameraFixtureSpec spec;
  spec.capacity = 0x100000;
  auto image = fixtures::make_camera_image(spec);
  spi::FlashDevice device(image);
  auto frame = spi::encode_command(
      {0x03, static_cast<std::uint32_t>(spec.partition_start), 16});
  auto miso = device.execute(frame);
  auto expected = image.read(spec.partition_start, 16);
  CHECK(std::equal(miso.begin() + 4, miso.end(), expected.begin()));
  // encrypted bytes, not the zlib header of the plaintext pipeline
  CHECK(miso[4] != 0x78);
}

TEST_CASE("bus contention corrupts reads until the SoC is held in reset") {
  auto image = random_image(0x4000, 77);
  spi::FlashDevice device(image);
  device.set_bus_contention(true);
  auto frame = spi::encode_command({0x03, 0x0u, 64});
  auto contended = device.execute(frame);
  device.set_bus_contention(false);
  auto clean = device.execute(frame);
  CHECK(contended != clean);
  CHECK(std::equal(clean.begin() + 4, clean.end(), image.bytes().begin()));
}

TEST_CASE("replaying a transcript against the device reproduces miso bytes") {
  auto image = random_image(0x4000, 13);
  spi::FlashDevice device(image);
  spi::SimulatedFlashDriver driver(device);
  auto result = spi::dump_image(driver, image.geometry(), 512);
  for (const auto& tx : result.transcript.transactions())
    REQUIRE(device.execute(tx.mosi) == tx.miso);
}
