// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// Infers debug-header pin definitions from a multimeter continuity/diode
// measurement matrix: a short (0 mV within tolerance) between a header pin
// and a known MCU signal pin identifies the header pin.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unattended/errors.hpp"

namespace unattended::pinout {

/// One multimeter reading: open loop, or a forward-bias drop in millivolts
/// (0 for a direct wire).
struct Measurement {
  bool open_loop = false;
  double millivolts = 0.0;

  static Measurement ol() { return {true, 0.0}; }
  static Measurement mv(double value) { return {false, value}; }

  bool is_short(double tolerance_mv) const {
    return !open_loop && millivolts <= tolerance_mv;
  }
};

struct MeasurementMatrix {
  std::vector<std::string> header_pins;        // row labels, e.g. JT1.1..JT1.7
  std::vector<std::string> reference_signals;  // column labels
  std::string ground_signal = "GND";           // designated ground column
  std::vector<std::vector<Measurement>> cells; // [row][column]

  void validate() const;  // complete matrix + exactly one ground column
};

struct PinMap {
  std::map<std::string, std::string> assignment;  // header pin -> signal
  std::vector<std::string> unassigned;
  std::vector<std::string> notes;

  friend bool operator==(const PinMap&, const PinMap&) = default;
};

/// Assigns pin p to signal s iff cell(p, s) is a short. Diode drops and open
/// loops never produce assignments. Throws AmbiguousSignal when two pins
/// short to one signal and ConflictingPin when one pin shorts to two.
PinMap infer_pinout(const MeasurementMatrix& matrix,
                    double short_tolerance_mv = 5.0);

/// Flags rows with no shorts, columns with no shorts, and diode drops below
/// 100 mV (suspicious near-shorts).
std::vector<std::string> validate_matrix(const MeasurementMatrix& matrix,
                                         double short_tolerance_mv = 5.0);

/// CSV: header row of signal labels, first column pin labels, cells `0`,
/// `OL`, or mV numbers.
MeasurementMatrix parse_matrix_csv(const std::string& text);
MeasurementMatrix load_matrix_csv(const std::filesystem::path& path);

}  // namespace unattended::pinout
