// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/hashing.hpp"

#include <stdexcept>

#include <openssl/evp.h>

#include "unattended/hex.hpp"

namespace unattended::hashing {

std::size_t digest_length(HashAlg alg) {
  return alg == HashAlg::kMd5 ? 16 : 20;
}

const char* hash_alg_name(HashAlg alg) {
  return alg == HashAlg::kMd5 ? "md5" : "sha1";
}

HashAlg parse_hash_alg(std::string_view name) {
  if (name == "md5" || name == "MD5") return HashAlg::kMd5;
  if (name == "sha1" || name == "SHA1" || name == "sha-1") return HashAlg::kSha1;
  throw std::invalid_argument("unknown hash algorithm: " + std::string(name));
}

static std::vector<std::uint8_t> evp_digest(const EVP_MD* md,
                                            std::span<const std::uint8_t> data) {
  std::vector<std::uint8_t> out(EVP_MAX_MD_SIZE);
  unsigned len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1)
    throw std::runtime_error("EVP_Digest failed");
  out.resize(len);
  return out;
}

std::vector<std::uint8_t> digest(HashAlg alg, std::span<const std::uint8_t> data) {
  return evp_digest(alg == HashAlg::kMd5 ? EVP_md5() : EVP_sha1(), data);
}

std::string digest_hex(HashAlg alg, std::string_view text) {
  return to_hex(digest(alg, {reinterpret_cast<const std::uint8_t*>(text.data()),
                             text.size()}));
}

std::string sha256_hex(std::span<const std::uint8_t> data) {
  return to_hex(evp_digest(EVP_sha256(), data));
}

}  // namespace unattended::hashing
