// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace unattended {

/// Base class for operational errors. `code()` is the stable identifier
/// surfaced in machine-readable CLI output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define UNATTENDED_DEFINE_ERROR(NAME, CODE)                                   \
  class NAME : public ::unattended::Error {                                   \
   public:                                                                    \
    explicit NAME(const std::string& message) : Error(CODE, message) {}       \
  }

// bus codec / flash device
UNATTENDED_DEFINE_ERROR(UnsupportedCommand, "unsupported-command");
UNATTENDED_DEFINE_ERROR(EmptyFrame, "empty-frame");
UNATTENDED_DEFINE_ERROR(MalformedCommand, "malformed-command");
UNATTENDED_DEFINE_ERROR(NothingToReconstruct, "nothing-to-reconstruct");
UNATTENDED_DEFINE_ERROR(BusContention, "bus-contention");

// jtag
UNATTENDED_DEFINE_ERROR(NoDevice, "no-device");
UNATTENDED_DEFINE_ERROR(NotConnected, "not-connected");

// pinout inference
UNATTENDED_DEFINE_ERROR(AmbiguousSignal, "ambiguous-signal");
UNATTENDED_DEFINE_ERROR(ConflictingPin, "conflicting-pin");
UNATTENDED_DEFINE_ERROR(InvalidMatrix, "invalid-matrix");

// carver
UNATTENDED_DEFINE_ERROR(WindowTooLarge, "window-too-large");
UNATTENDED_DEFINE_ERROR(RegionOutOfBounds, "region-out-of-bounds");

// secret pipeline
UNATTENDED_DEFINE_ERROR(NoDerivation, "no-derivation");
UNATTENDED_DEFINE_ERROR(NotBlockAligned, "not-block-aligned");
UNATTENDED_DEFINE_ERROR(NotZlib, "not-zlib");
UNATTENDED_DEFINE_ERROR(CorruptStream, "corrupt-stream");
UNATTENDED_DEFINE_ERROR(TextinessError, "not-text");

// case file
UNATTENDED_DEFINE_ERROR(PersistError, "persist-error");
UNATTENDED_DEFINE_ERROR(NothingToReport, "nothing-to-report");

// generic I/O
UNATTENDED_DEFINE_ERROR(IoError, "io-error");

#undef UNATTENDED_DEFINE_ERROR

}  // namespace unattended
