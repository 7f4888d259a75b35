// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/rainbow.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "unattended/errors.hpp"
#include "unattended/hex.hpp"

namespace unattended::rainbow {

using hashing::HashAlg;

void TableParams::validate() const {
  if (chain_len < 2) throw std::invalid_argument("chain_len must be >= 2");
  if (chain_count < 1) throw std::invalid_argument("chain_count must be >= 1");
  if (charset.empty()) throw std::invalid_argument("charset must be non-empty");
  if (min_len < 1 || min_len > max_len)
    throw std::invalid_argument("need 1 <= min_len <= max_len");
  std::string sorted = charset;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("charset must not repeat characters");
  if (space_size() < chain_count)
    throw std::invalid_argument("plaintext space smaller than chain count");
}

std::uint64_t TableParams::space_size() const {
  const std::uint64_t c = charset.size();
  std::uint64_t total = 0, power = 1;
  for (std::uint32_t l = 1; l <= max_len; ++l) {
    if (power > (1ull << 62) / c)
      throw std::invalid_argument("plaintext space too large");
    power *= c;
    if (l >= min_len) total += power;
  }
  return total;
}

std::string index_to_plaintext(std::uint64_t index, const TableParams& params) {
  const std::uint64_t c = params.charset.size();
  std::uint64_t power = 1;
  for (std::uint32_t l = 1; l < params.min_len; ++l) power *= c;
  std::uint32_t len = params.min_len;
  std::uint64_t band = power * c;  // count of strings of length len
  std::uint64_t rest = index;
  while (rest >= band) {
    rest -= band;
    band *= c;
    ++len;
  }
  std::string out(len, params.charset[0]);
  for (std::uint32_t i = 0; i < len; ++i) {
    out[i] = params.charset[rest % c];
    rest /= c;
  }
  return out;
}

std::string reduce(std::span<const std::uint8_t> digest, std::uint32_t position,
                   const TableParams& params) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8 && i < digest.size(); ++i)
    v |= static_cast<std::uint64_t>(digest[i]) << (8 * i);
  return index_to_plaintext((v + position) % params.space_size(), params);
}

static std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

static std::vector<std::uint8_t> hash_text(HashAlg alg, const std::string& text) {
  return hashing::digest(
      alg, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

/// Chain walk: t plaintext nodes use reduction positions 0..t-2.
static std::string chain_end(std::string start, const TableParams& params) {
  std::string p = std::move(start);
  for (std::uint32_t pos = 0; pos + 1 < params.chain_len; ++pos)
    p = reduce(hash_text(params.alg, p), pos, params);
  return p;
}

RainbowTable build_table(const TableParams& params) {
  params.validate();
  const std::uint64_t space = params.space_size();

  // Counter-mode start points keep chain i identical when chain_count grows,
  // so extending a table never loses coverage.
  std::vector<std::pair<std::string, std::string>> rows;
  rows.reserve(params.chain_count);
  for (std::uint64_t i = 0; i < params.chain_count; ++i) {
    std::string start =
        index_to_plaintext(splitmix64(params.seed + i) % space, params);
    std::string end = chain_end(start, params);
    rows.emplace_back(std::move(start), std::move(end));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second, a.first) < std::tie(b.second, b.first);
  });
  // Chains that merged before their start diverged are exact duplicates and
  // carry no extra coverage; merged chains with distinct starts stay, since
  // their pre-merge columns remain reachable.
  auto last = std::unique(rows.begin(), rows.end());
  std::uint64_t duplicates =
      static_cast<std::uint64_t>(std::distance(last, rows.end()));
  rows.erase(last, rows.end());

  RainbowTable table;
  table.params = params;
  table.duplicate_ends = duplicates;
  table.rows = std::move(rows);
  return table;
}

CrackResult lookup(const RainbowTable& table, std::string_view hash_hex) {
  const TableParams& params = table.params;
  if (hash_hex.size() != 2 * hashing::digest_length(params.alg))
    throw std::invalid_argument("hash length does not match table algorithm");
  auto target = from_hex(hash_hex);

  CrackResult result;
  result.hash_hex = std::string(hash_hex);
  result.method = CrackResult::Method::kRainbow;

  // Assume the target sits at column i (digest of node i); chase it to a
  // chain end through reductions i..t-2, then verify every row sharing that
  // end by rebuilding from its start.
  for (std::int64_t i = params.chain_len - 2; i >= 0; --i) {
    std::string x = reduce(target, static_cast<std::uint32_t>(i), params);
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1;
         j + 1 < params.chain_len; ++j) {
      ++result.work;
      x = reduce(hash_text(params.alg, x), j, params);
    }
    auto [lo, hi] = std::equal_range(
        table.rows.begin(), table.rows.end(), std::pair(std::string(), x),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    for (auto it = lo; it != hi; ++it) {
      std::string p = it->first;
      for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(i); ++j) {
        ++result.work;
        p = reduce(hash_text(params.alg, p), j, params);
      }
      ++result.work;
      if (hash_text(params.alg, p) == target) {
        result.plaintext = p;
        return result;
      }
      // endpoint collision without true membership: keep searching
    }
  }
  return result;
}

CrackResult dictionary_attack(const std::vector<std::string>& wordlist,
                              std::string_view hash_hex, HashAlg alg) {
  if (wordlist.empty()) throw std::invalid_argument("wordlist must be non-empty");
  std::string want(hash_hex);
  std::transform(want.begin(), want.end(), want.begin(), ::tolower);

  CrackResult result;
  result.hash_hex = want;
  result.method = CrackResult::Method::kDictionary;
  for (const auto& word : wordlist) {
    ++result.work;
    if (to_hex(hash_text(alg, word)) == want) {
      result.plaintext = word;
      return result;
    }
  }
  return result;
}

std::vector<std::string> load_wordlist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open wordlist: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    words.push_back(line);
  }
  // a trailing newline is not an extra empty word
  if (!words.empty() && words.back().empty()) words.pop_back();
  return words;
}

CrackResult salted_lookup_demo(const RainbowTable& table,
                               std::string_view plaintext,
                               std::string_view salt) {
  if (salt.empty()) throw std::invalid_argument("salt must be non-empty");
  std::string salted = std::string(salt) + std::string(plaintext);
  auto digest = hash_text(table.params.alg, salted);
  auto result = lookup(table, to_hex(digest));
  ++result.work;
  return result;
}

namespace {

template <typename T>
void put_le(std::ofstream& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.put(static_cast<char>(value >> (8 * i)));
}

template <typename T>
T get_le(std::ifstream& in) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    int c = in.get();
    if (c == EOF) throw IoError("truncated table file");
    value |= static_cast<T>(static_cast<std::uint8_t>(c)) << (8 * i);
  }
  return value;
}

void put_string(std::ofstream& out, const std::string& s) {
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::ifstream& in) {
  auto len = get_le<std::uint16_t>(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw IoError("truncated table file");
  return s;
}

}  // namespace

void RainbowTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write table: " + path.string());
  out.write("RTBL", 4);
  put_le<std::uint32_t>(out, 1);  // version
  out.put(params.alg == HashAlg::kMd5 ? 0 : 1);
  put_le<std::uint32_t>(out, params.min_len);
  put_le<std::uint32_t>(out, params.max_len);
  put_le<std::uint32_t>(out, params.chain_len);
  put_le<std::uint64_t>(out, params.chain_count);
  put_le<std::uint64_t>(out, params.seed);
  put_le<std::uint64_t>(out, duplicate_ends);
  put_string(out, params.charset);
  put_le<std::uint64_t>(out, rows.size());
  for (const auto& [start, end] : rows) {
    put_string(out, start);
    put_string(out, end);
  }
}

RainbowTable RainbowTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open table: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != "RTBL")
    throw IoError("not a rainbow table file (bad magic)");
  if (get_le<std::uint32_t>(in) != 1)
    throw IoError("unsupported table version");
  RainbowTable table;
  table.params.alg = in.get() == 0 ? HashAlg::kMd5 : HashAlg::kSha1;
  table.params.min_len = get_le<std::uint32_t>(in);
  table.params.max_len = get_le<std::uint32_t>(in);
  table.params.chain_len = get_le<std::uint32_t>(in);
  table.params.chain_count = get_le<std::uint64_t>(in);
  table.params.seed = get_le<std::uint64_t>(in);
  table.duplicate_ends = get_le<std::uint64_t>(in);
  table.params.charset = get_string(in);
  auto n = get_le<std::uint64_t>(in);
  table.rows.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto start = get_string(in);
    auto end = get_string(in);
    table.rows.emplace_back(std::move(start), std::move(end));
  }
  table.params.validate();
  return table;
}

}  // namespace unattended::rainbow
