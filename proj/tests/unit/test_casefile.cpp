// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "unattended/casefile.hpp"
#include "unattended/json_io.hpp"

using namespace unattended;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<std::uint8_t> bytes_of(const std::string& s) {
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("record, reload, verify") {
  TempDir tmp("case_roundtrip");
  auto c = casefile::CaseFile::create(tmp.path, "lock-1", "electronic lock", true);
  auto payload = bytes_of("segment contents");
  const auto& rec = c.record("image", "jtag", payload, "info memory read");
  CHECK(rec.id == "ev-0001");
  CHECK(rec.payload_path.starts_with("blobs/"));

  auto reloaded = casefile::CaseFile::open(tmp.path);
  REQUIRE(reloaded.records().size() == 1);
  CHECK(reloaded.records()[0] == rec);
  reloaded.verify();
  CHECK(reloaded.payload(reloaded.records()[0]) == payload);
}

TEST_CASE("tampered payload fails verification") {
  TempDir tmp("case_tamper");
  auto c = casefile::CaseFile::create(tmp.path, "x", "d");
  const auto& rec = c.record("image", "jtag", bytes_of("data"), "s");
  {
    std::ofstream out(tmp.path / rec.payload_path, std::ios::binary);
    out << "tampered";
  }
  CHECK_THROWS_AS(casefile::CaseFile::open(tmp.path).verify(), PersistError);
}

TEST_CASE("duplicate evidence id rejected") {
  TempDir tmp("case_dup");
  auto c = casefile::CaseFile::create(tmp.path, "x", "d");
  c.record("image", "jtag", bytes_of("a"), "s", "dup");
  CHECK_THROWS_AS(c.record("image", "jtag", bytes_of("b"), "s", "dup"),
                  PersistError);
}

TEST_CASE("empty case cannot report") {
  TempDir tmp("case_empty");
  auto c = casefile::CaseFile::create(tmp.path, "x", "d");
  CHECK_THROWS_AS(casefile::generate_report(c, casefile::ReportFormat::kText),
                  NothingToReport);
}

TEST_CASE("report content and determinism") {
  auto build_case = [&](const fs::path& dir) {
    auto c = casefile::CaseFile::create(dir, "lock-1", "electronic lock", true);
    secrets::LockCodes codes;
    codes.programming = secrets::CodeHit{"539348", 0,
                                         secrets::CodeHit::Encoding::kAscii};
    codes.user_codes = {
        secrets::CodeHit{"5370", 8, secrets::CodeHit::Encoding::kAscii},
        secrets::CodeHit{"2865", 16, secrets::CodeHit::Encoding::kAscii}};
    nlohmann::json j = codes;
    auto text = j.dump();
    c.record("codes", "jtag", bytes_of(text), "code scan");
    return casefile::generate_report(c, casefile::ReportFormat::kText, true);
  };
  TempDir a("case_det_a"), b("case_det_b");
  auto report_a = build_case(a.path);
  auto report_b = build_case(b.path);
  CHECK(report_a == report_b);  // byte-identical
  CHECK(report_a.find("539348") != std::string::npos);
  CHECK(report_a.find("Debug port: OPEN") != std::string::npos);
  CHECK(report_a.find("security fuse") != std::string::npos);
}

TEST_CASE("camera case report lists the recovered credential") {
  TempDir tmp("case_cam");
  auto c = casefile::CaseFile::create(tmp.path, "cam-1", "ip camera", true);
  secrets::ConfigRecord config;
  config.username = "share1";
  config.password_hash = "0571749e2ac330a7455809c6b0e7af90";
  nlohmann::json cj = config;
  c.record("config", "pipeline", bytes_of(cj.dump()), "decrypted config");
  rainbow::CrackResult crack;
  crack.hash_hex = *config.password_hash;
  crack.plaintext = "sunshine";
  crack.method = rainbow::CrackResult::Method::kDictionary;
  crack.work = 42;
  nlohmann::json kj = crack;
  c.record("crack", "pipeline", bytes_of(kj.dump()), "hash reversed");

  auto report = casefile::generate_report(c, casefile::ReportFormat::kMarkdown);
  CHECK(report.find("share1") != std::string::npos);
  CHECK(report.find("sunshine") != std::string::npos);
  CHECK(report.find("UNSALTED") != std::string::npos);
  CHECK(report.find("# Case report") == 0);
}
