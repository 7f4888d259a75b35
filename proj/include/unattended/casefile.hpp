// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// Evidence persistence and attack-report generation. A case is a directory:
// case.json holds the record list, blobs/ stores payloads named by their
// SHA-256 digest. The record list is append-only.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unattended/errors.hpp"

namespace unattended::casefile {

struct EvidenceRecord {
  std::string id;
  std::string created_at;      // ISO 8601 UTC
  std::string source;          // jtag | spi-dump | transcript | pipeline
  std::string kind;            // image | region | pinmap | config | codes | crack
  std::string payload_digest;  // sha256 hex
  std::string summary;
  std::string payload_path;    // relative to the case directory

  friend bool operator==(const EvidenceRecord&, const EvidenceRecord&) = default;
};

class CaseFile {
 public:
  /// Creates <dir>/case.json (and blobs/). Fails if a case already exists.
  static CaseFile create(const std::filesystem::path& dir, std::string case_id,
                         std::string device_description,
                         bool reproducible = false);
  static CaseFile open(const std::filesystem::path& dir);
  static CaseFile open_or_create(const std::filesystem::path& dir,
                                 std::string case_id,
                                 std::string device_description,
                                 bool reproducible = false);

  /// Persists the payload blob, appends a record and saves the case.
  /// With an explicit id, a duplicate is rejected (PersistError).
  const EvidenceRecord& record(const std::string& kind, const std::string& source,
                               std::span<const std::uint8_t> payload,
                               const std::string& summary,
                               std::optional<std::string> id = {});

  /// Re-hashes every stored payload against its record. Throws PersistError
  /// on any mismatch or missing blob.
  void verify() const;

  std::vector<std::uint8_t> payload(const EvidenceRecord& record) const;

  const std::vector<EvidenceRecord>& records() const { return records_; }
  const std::string& case_id() const { return case_id_; }
  const std::string& device_description() const { return device_; }
  const std::filesystem::path& directory() const { return dir_; }
  bool reproducible() const { return reproducible_; }

 private:
  void save() const;

  std::filesystem::path dir_;
  std::string case_id_;
  std::string device_;
  bool reproducible_ = false;
  std::vector<EvidenceRecord> records_;
};

enum class ReportFormat { kText, kMarkdown };

/// Deterministic report: device, timeline, findings and mitigation status
/// derived from the evidence. Throws NothingToReport on an empty case. With
/// `reproducible`, record timestamps are normalized in the output.
std::string generate_report(const CaseFile& c, ReportFormat format,
                            bool reproducible = false);

}  // namespace unattended::casefile
