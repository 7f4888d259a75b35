// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "unattended/des.hpp"
#include "unattended/hex.hpp"

#include "../oracles/reference_des.hpp"

using namespace unattended;

namespace {

des::Block to_block(const std::vector<std::uint8_t>& v) {
  des::Block b{};
  std::copy_n(v.begin(), 8, b.begin());
  return b;
}

// Generated externally with `openssl enc -e -des-ecb -nopad` before this
// implementation existed: key, plaintext, ciphertext.
constexpr const char* kKnownAnswers[][3] = {
    {"133457799bbcdff1", "0123456789abcdef", "85e813540f0ab405"},
    {"2ec20e32fdfd3d69", "b2b662c635b54fa1", "ff53c4e1d4897984"},
    {"14598e86d66b236c", "6ca77cfbb6b97a6e", "f061639109af560b"},
    {"24102a017023e65f", "547f803efa6f5d14", "560eb168e0e37b8c"},
    {"61307fe51fd18070", "68d073a44ade0670", "0573db8414fb9344"},
    {"67a16f61a6a50cfe", "7c14589d4810f5c7", "9c35f171a3190e7b"},
    {"c6d869eb7de76a5e", "ac89266d880a1eed", "b6a1c33a486fed30"},
    {"ae8167733fc464fc", "36a9d5820fee3a69", "1c0ad65d82d6f0a2"},
    {"e618fc3f3bf067be", "b481b282a0eb94f3", "7595a3c2cb004f3a"},
    {"edc9472e4bd854a9", "f6aebd573aa5b83e", "90198ebac3a8a0a1"},
    {"1c944c16a46f117f", "702aa1985008f09e", "a11a8d74dc8c713e"},
    {"479d1b07c1e6eaa5", "42c00725f026e7ea", "44b146b73033b8f6"},
    {"f8b53b74b8561bad", "2a120cc0e3ed48ad", "509c3b87a8faa74e"},
};

}  // namespace

TEST_CASE("DES known-answer vectors (implementation and oracle)") {
  for (const auto& [key_hex, pt_hex, ct_hex] : kKnownAnswers) {
    auto key = to_block(from_hex(key_hex));
    auto pt = to_block(from_hex(pt_hex));
    auto ct = to_block(from_hex(ct_hex));
    CHECK(des::des_block(pt, key, des::Direction::kEncrypt) == ct);
    CHECK(des::des_block(ct, key, des::Direction::kDecrypt) == pt);
    CHECK(oracle::reference_des_encrypt(pt, key) == ct);
    CHECK(oracle::reference_des_decrypt(ct, key) == pt);
  }
}

TEST_CASE("DES matches the independent reference on random blocks") {
  std::mt19937_64 rng(0xdead5eed);
  for (int i = 0; i < 200; ++i) {
    des::Block block{}, key{};
    for (auto& b : block) b = static_cast<std::uint8_t>(rng());
    for (auto& b : key) b = static_cast<std::uint8_t>(rng());
    auto ours = des::des_block(block, key, des::Direction::kEncrypt);
    auto ref = oracle::reference_des_encrypt(block, key);
    REQUIRE(ours == ref);
    REQUIRE(des::des_block(ours, key, des::Direction::kDecrypt) == block);
  }
}

TEST_CASE("DES complementation property") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    des::Block block{}, key{}, nblock{}, nkey{};
    for (int j = 0; j < 8; ++j) {
      block[j] = static_cast<std::uint8_t>(rng());
      key[j] = static_cast<std::uint8_t>(rng());
      nblock[j] = static_cast<std::uint8_t>(~block[j]);
      nkey[j] = static_cast<std::uint8_t>(~key[j]);
    }
    auto ct = des::des_block(block, key, des::Direction::kEncrypt);
    auto nct = des::des_block(nblock, nkey, des::Direction::kEncrypt);
    for (int j = 0; j < 8; ++j)
      CHECK(nct[j] == static_cast<std::uint8_t>(~ct[j]));
  }
}

TEST_CASE("des_ecb block alignment and edge cases") {
  des::Key key = to_block(from_hex("0102030405060708"));

  SUBCASE("empty input gives empty output") {
    CHECK(des::des_ecb({}, key, des::Direction::kEncrypt).empty());
  }
  SUBCASE("non-multiple of 8 rejected") {
    std::vector<std::uint8_t> nine(9, 0);
    CHECK_THROWS_AS(des::des_ecb(nine, key, des::Direction::kEncrypt),
                    NotBlockAligned);
  }
  SUBCASE("multi-block round trip") {
    std::mt19937_64 rng(3);
    std::vector<std::uint8_t> data(8 * 64);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    auto ct = des::des_ecb(data, key, des::Direction::kEncrypt);
    CHECK(ct.size() == data.size());
    CHECK(des::des_ecb(ct, key, des::Direction::kDecrypt) == data);
  }
}
