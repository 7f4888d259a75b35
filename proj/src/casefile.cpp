// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/casefile.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "unattended/hashing.hpp"
#include "unattended/json_io.hpp"

namespace unattended::casefile {

namespace fs = std::filesystem;

static std::string now_iso8601(bool reproducible) {
  if (reproducible) return "1970-01-01T00:00:00Z";
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CaseFile CaseFile::create(const fs::path& dir, std::string case_id,
                          std::string device_description, bool reproducible) {
  std::error_code ec;
  fs::create_directories(dir / "blobs", ec);
  if (ec) throw PersistError("cannot create case directory: " + ec.message());
  if (fs::exists(dir / "case.json"))
    throw PersistError("case already exists in " + dir.string());
  CaseFile c;
  c.dir_ = dir;
  c.case_id_ = std::move(case_id);
  c.device_ = std::move(device_description);
  c.reproducible_ = reproducible;
  c.save();
  return c;
}

CaseFile CaseFile::open(const fs::path& dir) {
  std::ifstream in(dir / "case.json");
  if (!in) throw PersistError("no case.json in " + dir.string());
  nlohmann::json j = nlohmann::json::parse(in);
  CaseFile c;
  c.dir_ = dir;
  c.case_id_ = j.at("case_id").get<std::string>();
  c.device_ = j.value("device", "");
  c.reproducible_ = j.value("reproducible", false);
  for (const auto& rj : j.at("records")) {
    EvidenceRecord r;
    r.id = rj.at("id").get<std::string>();
    r.created_at = rj.at("created_at").get<std::string>();
    r.source = rj.at("source").get<std::string>();
    r.kind = rj.at("kind").get<std::string>();
    r.payload_digest = rj.at("payload_digest").get<std::string>();
    r.summary = rj.at("summary").get<std::string>();
    r.payload_path = rj.at("payload_path").get<std::string>();
    c.records_.push_back(std::move(r));
  }
  return c;
}

CaseFile CaseFile::open_or_create(const fs::path& dir, std::string case_id,
                                  std::string device_description,
                                  bool reproducible) {
  if (fs::exists(dir / "case.json")) return open(dir);
  return create(dir, std::move(case_id), std::move(device_description),
                reproducible);
}

void CaseFile::save() const {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : records_) {
    records.push_back({{"id", r.id},
                       {"created_at", r.created_at},
                       {"source", r.source},
                       {"kind", r.kind},
                       {"payload_digest", r.payload_digest},
                       {"summary", r.summary},
                       {"payload_path", r.payload_path}});
  }
  nlohmann::json j{{"case_id", case_id_},
                   {"device", device_},
                   {"reproducible", reproducible_},
                   {"records", records}};
  std::ofstream out(dir_ / "case.json");
  if (!out) throw PersistError("cannot write case.json in " + dir_.string());
  out << j.dump(2) << '\n';
}

const EvidenceRecord& CaseFile::record(const std::string& kind,
                                       const std::string& source,
                                       std::span<const std::uint8_t> payload,
                                       const std::string& summary,
                                       std::optional<std::string> id) {
  std::string digest = hashing::sha256_hex(payload);
  std::string rid = id.value_or("");
  if (rid.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ev-%04zu", records_.size() + 1);
    rid = buf;
  }
  for (const auto& r : records_)
    if (r.id == rid) throw PersistError("duplicate evidence id: " + rid);

  fs::path blob = fs::path("blobs") / digest;
  std::ofstream out(dir_ / blob, std::ios::binary);
  if (!out) throw PersistError("cannot write payload blob");
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  out.close();

  EvidenceRecord r;
  r.id = rid;
  r.created_at = now_iso8601(reproducible_);
  r.source = source;
  r.kind = kind;
  r.payload_digest = digest;
  r.summary = summary;
  r.payload_path = blob.string();
  records_.push_back(std::move(r));
  save();
  return records_.back();
}

std::vector<std::uint8_t> CaseFile::payload(const EvidenceRecord& record) const {
  std::ifstream in(dir_ / record.payload_path, std::ios::binary);
  if (!in) throw PersistError("missing payload blob: " + record.payload_path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void CaseFile::verify() const {
  for (const auto& r : records_) {
    auto bytes = payload(r);
    if (hashing::sha256_hex(bytes) != r.payload_digest)
      throw PersistError("payload digest mismatch for record " + r.id);
  }
}

namespace {

struct Findings {
  std::vector<std::string> lines;
  bool jtag_seen = false;
  bool jtag_access = false;     // pin-out recovered or memory read
  bool codes_recovered = false;
  bool config_decrypted = false;
  bool hash_reversed = false;
};

Findings collect_findings(const CaseFile& c) {
  Findings f;
  for (const auto& r : c.records()) {
    if (r.source == "jtag") f.jtag_seen = true;
    try {
      if (r.kind == "pinmap") {
        auto j = nlohmann::json::parse(c.payload(r));
        if (j.contains("assignment")) {  // continuity inference
          auto map = j.get<pinout::PinMap>();
          if (!map.assignment.empty()) {
            std::string line = "Debug header pin-out: ";
            bool first = true;
            for (const auto& [pin, sig] : map.assignment) {
              line += (first ? "" : ", ") + pin + "=" + sig;
              first = false;
            }
            f.lines.push_back(line);
            if (r.source == "jtag") f.jtag_access = true;
          }
        } else if (j.is_array()) {  // enumeration results
          if (!j.empty()) {
            f.jtag_access = true;
            for (const auto& a : j)
              f.lines.push_back("JTAG pins verified: TCK=" +
                                a.at("TCK").dump() + " TMS=" + a.at("TMS").dump() +
                                " TDI=" + a.at("TDI").dump() + " TDO=" +
                                a.at("TDO").dump() + " (idcode " +
                                a.value("idcode", "?") + ")");
          } else {
            f.lines.push_back("JTAG enumeration found no responding pin set");
          }
        }
      } else if (r.kind == "codes") {
        auto codes = nlohmann::json::parse(c.payload(r)).get<secrets::LockCodes>();
        if (codes.programming) {
          f.lines.push_back("Programming code recovered: " +
                            codes.programming->digits);
          f.codes_recovered = true;
        }
        for (const auto& u : codes.user_codes) {
          f.lines.push_back("User code recovered: " + u.digits);
          f.codes_recovered = true;
        }
        if (r.source == "jtag") f.jtag_access = true;
      } else if (r.kind == "config") {
        auto j = nlohmann::json::parse(c.payload(r));
        if (j.is_object()) {
          auto rec = j.get<secrets::ConfigRecord>();
          f.config_decrypted = true;
          if (rec.username)
            f.lines.push_back("Config username: " + *rec.username);
          if (rec.password_hash)
            f.lines.push_back("Config password hash: " + *rec.password_hash);
          if (rec.ssid) f.lines.push_back("Config WiFi SSID: " + *rec.ssid);
          if (rec.ip) f.lines.push_back("Config IP address: " + *rec.ip);
        }
      } else if (r.kind == "crack") {
        auto res = nlohmann::json::parse(c.payload(r)).get<rainbow::CrackResult>();
        if (res.plaintext) {
          f.lines.push_back("Password recovered from hash " + res.hash_hex +
                            ": \"" + *res.plaintext + "\"");
          f.hash_reversed = true;
        } else {
          f.lines.push_back("Hash " + res.hash_hex + " not reversed");
        }
      }
    } catch (const nlohmann::json::exception&) {
      // raw payloads (images, carved bytes) carry no structured findings
    }
  }
  return f;
}

}  // namespace

std::string generate_report(const CaseFile& c, ReportFormat format,
                            bool reproducible) {
  if (c.records().empty())
    throw NothingToReport("case has no evidence records");

  const bool md = format == ReportFormat::kMarkdown;
  auto h1 = [&](const std::string& s) {
    return md ? "# " + s + "\n\n" : s + "\n" + std::string(s.size(), '=') + "\n\n";
  };
  auto h2 = [&](const std::string& s) {
    return md ? "## " + s + "\n\n" : s + "\n" + std::string(s.size(), '-') + "\n\n";
  };
  auto bullet = [&](const std::string& s) {
    return (md ? "- " : "  * ") + s + "\n";
  };

  std::string out = h1("Case report: " + c.case_id());
  out += h2("Device");
  out += (c.device_description().empty() ? "(no device description)"
                                         : c.device_description()) +
         "\n\n";

  out += h2("Timeline");
  for (const auto& r : c.records()) {
    std::string when = reproducible ? "1970-01-01T00:00:00Z" : r.created_at;
    out += bullet(when + "  [" + r.id + "] " + r.kind + " via " + r.source +
                  ": " + r.summary);
  }
  out += "\n";

  Findings f = collect_findings(c);
  out += h2("Findings");
  if (f.lines.empty()) out += "No structured findings recorded.\n";
  for (const auto& line : f.lines) out += bullet(line);
  out += "\n";

  out += h2("Mitigations");
  if (f.jtag_seen) {
    if (f.jtag_access) {
      out += bullet(
          "Debug port: OPEN. The JTAG interface answered and memory was "
          "read out. Blow the security fuse (6 V, 100 mA pulse on the TEST "
          "pin) after production programming and change default codes.");
    } else {
      out += bullet(
          "Debug port: no JTAG response (fuse blown or interface absent). "
          "Keep the fuse blown on production units.");
    }
  }
  if (f.config_decrypted) {
    out += bullet(
        "Partition encryption: BROKEN. The config partition key derives from "
        "a public model string; use per-device keys from a secure element or "
        "key-derivation fused at manufacture.");
  } else {
    out += bullet(
        "Partition encryption: not defeated in this case. Encrypting "
        "sensitive partitions raises the bar for bus snooping.");
  }
  if (f.hash_reversed) {
    out += bullet(
        "Password hashing: UNSALTED. A precomputed table reversed a stored "
        "hash; salt every credential hash with a per-user random value.");
  } else {
    out += bullet(
        "Password hashing: no stored hash was reversed. Salting still "
        "recommended to defeat precomputed tables.");
  }
  if (f.codes_recovered) {
    out += bullet(
        "Secrets at rest: lock codes were stored in plaintext; store "
        "verification digests instead of raw codes.");
  }
  return out;
}

}  // namespace unattended::casefile
