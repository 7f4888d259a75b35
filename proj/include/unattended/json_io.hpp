// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// nlohmann::json adapters for the domain types that cross the CLI surface
// or get persisted as case-file payloads.

#pragma once

#include <nlohmann/json.hpp>

#include "unattended/carver.hpp"
#include "unattended/hex.hpp"
#include "unattended/jtag.hpp"
#include "unattended/pinout.hpp"
#include "unattended/rainbow.hpp"
#include "unattended/secrets.hpp"

namespace unattended::pinout {

inline void to_json(nlohmann::json& j, const PinMap& map) {
  j = nlohmann::json{{"assignment", map.assignment},
                     {"unassigned", map.unassigned},
                     {"notes", map.notes}};
}

inline void from_json(const nlohmann::json& j, PinMap& map) {
  j.at("assignment").get_to(map.assignment);
  j.at("unassigned").get_to(map.unassigned);
  j.at("notes").get_to(map.notes);
}

}  // namespace unattended::pinout

namespace unattended::jtag {

inline void to_json(nlohmann::json& j, const PinAssignment& a) {
  char idcode[16];
  std::snprintf(idcode, sizeof idcode, "0x%08x", a.idcode);
  j = nlohmann::json{{"TCK", a.tck}, {"TMS", a.tms}, {"TDI", a.tdi},
                     {"TDO", a.tdo}, {"idcode", idcode}};
}

}  // namespace unattended::jtag

namespace unattended::carver {

inline void to_json(nlohmann::json& j, const Region& r) {
  j = nlohmann::json{{"start", r.start},
                     {"end", r.end},
                     {"kind", r.kind},
                     {"score", r.score}};
}

inline void from_json(const nlohmann::json& j, Region& r) {
  j.at("start").get_to(r.start);
  j.at("end").get_to(r.end);
  j.at("kind").get_to(r.kind);
  r.score = j.value("score", 0.0);
}

}  // namespace unattended::carver

namespace unattended::secrets {

inline void to_json(nlohmann::json& j, const ConfigRecord& r) {
  j = nlohmann::json::object();
  if (r.ip) j["ip"] = *r.ip;
  if (!r.protocols.empty()) j["protocols"] = r.protocols;
  if (r.username) j["username"] = *r.username;
  if (r.password_hash) j["password_hash"] = *r.password_hash;
  if (r.ssid) j["ssid"] = *r.ssid;
  if (!r.extras.empty()) j["extras"] = r.extras;
}

inline void from_json(const nlohmann::json& j, ConfigRecord& r) {
  if (j.contains("ip")) r.ip = j["ip"].get<std::string>();
  if (j.contains("protocols")) j["protocols"].get_to(r.protocols);
  if (j.contains("username")) r.username = j["username"].get<std::string>();
  if (j.contains("password_hash"))
    r.password_hash = j["password_hash"].get<std::string>();
  if (j.contains("ssid")) r.ssid = j["ssid"].get<std::string>();
  if (j.contains("extras")) j["extras"].get_to(r.extras);
}

inline void to_json(nlohmann::json& j, const CodeHit& hit) {
  j = nlohmann::json{{"digits", hit.digits},
                     {"offset", hit.offset},
                     {"encoding",
                      hit.encoding == CodeHit::Encoding::kAscii ? "ascii" : "bcd"}};
}

inline void from_json(const nlohmann::json& j, CodeHit& hit) {
  j.at("digits").get_to(hit.digits);
  j.at("offset").get_to(hit.offset);
  hit.encoding = j.value("encoding", "ascii") == "bcd"
                     ? CodeHit::Encoding::kBcd
                     : CodeHit::Encoding::kAscii;
}

inline void to_json(nlohmann::json& j, const LockCodes& codes) {
  j = nlohmann::json::object();
  if (codes.programming) j["programming"] = *codes.programming;
  j["user_codes"] = codes.user_codes;
  if (!codes.notes.empty()) j["notes"] = codes.notes;
}

inline void from_json(const nlohmann::json& j, LockCodes& codes) {
  if (j.contains("programming"))
    codes.programming = j["programming"].get<CodeHit>();
  if (j.contains("user_codes")) j["user_codes"].get_to(codes.user_codes);
  if (j.contains("notes")) j["notes"].get_to(codes.notes);
}

}  // namespace unattended::secrets

namespace unattended::rainbow {

inline void to_json(nlohmann::json& j, const CrackResult& r) {
  j = nlohmann::json{
      {"hash", r.hash_hex},
      {"found", r.plaintext.has_value()},
      {"method",
       r.method == CrackResult::Method::kDictionary ? "dictionary" : "rainbow"},
      {"work", r.work}};
  if (r.plaintext) j["plaintext"] = *r.plaintext;
}

inline void from_json(const nlohmann::json& j, CrackResult& r) {
  j.at("hash").get_to(r.hash_hex);
  if (j.value("found", false)) r.plaintext = j.at("plaintext").get<std::string>();
  r.method = j.value("method", "rainbow") == "dictionary"
                 ? CrackResult::Method::kDictionary
                 : CrackResult::Method::kRainbow;
  r.work = j.value("work", 0ull);
}

}  // namespace unattended::rainbow
