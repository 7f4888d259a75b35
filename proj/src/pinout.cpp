// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/pinout.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace unattended::pinout {

void MeasurementMatrix::validate() const {
  if (header_pins.empty() || reference_signals.empty())
    throw InvalidMatrix("matrix must have at least one pin and one signal");
  if (cells.size() != header_pins.size())
    throw InvalidMatrix("row count does not match header pin labels");
  for (const auto& row : cells)
    if (row.size() != reference_signals.size())
      throw InvalidMatrix("incomplete matrix row");
  auto n = std::count(reference_signals.begin(), reference_signals.end(),
                      ground_signal);
  if (n != 1)
    throw InvalidMatrix("matrix needs exactly one ground reference column");
}

PinMap infer_pinout(const MeasurementMatrix& matrix, double short_tolerance_mv) {
  if (short_tolerance_mv < 0)
    throw std::invalid_argument("tolerance must be >= 0");
  matrix.validate();

  PinMap map;
  std::map<std::string, std::vector<std::string>> pins_for_signal;
  for (std::size_t r = 0; r < matrix.header_pins.size(); ++r) {
    std::vector<std::size_t> shorts;
    std::vector<std::string> drops;
    for (std::size_t c = 0; c < matrix.reference_signals.size(); ++c) {
      const Measurement& m = matrix.cells[r][c];
      if (m.is_short(short_tolerance_mv))
        shorts.push_back(c);
      else if (!m.open_loop)
        drops.push_back(matrix.reference_signals[c] + "(" +
                        std::to_string(static_cast<int>(m.millivolts)) + " mV)");
    }
    const std::string& pin = matrix.header_pins[r];
    if (shorts.size() > 1) {
      std::string joined;
      for (auto c : shorts) {
        if (!joined.empty()) joined += ", ";
        joined += matrix.reference_signals[c];
      }
      throw ConflictingPin("pin " + pin + " shorts to multiple signals: " + joined);
    }
    if (shorts.empty()) {
      map.unassigned.push_back(pin);
      continue;
    }
    const std::string& signal = matrix.reference_signals[shorts[0]];
    map.assignment[pin] = signal;
    pins_for_signal[signal].push_back(pin);
    if (drops.size() > 1) {
      // Pull-up diode artifacts toward other signals are expected on ground
      // pins; record them so the report can show why they were ignored.
      std::string note = pin + " -> " + signal + "; diode drops ignored: ";
      for (std::size_t i = 0; i < drops.size(); ++i)
        note += (i ? ", " : "") + drops[i];
      map.notes.push_back(note);
    }
  }
  for (const auto& [signal, pins] : pins_for_signal) {
    if (pins.size() > 1) {
      std::string joined;
      for (const auto& p : pins) joined += (joined.empty() ? "" : ", ") + p;
      throw AmbiguousSignal("signal " + signal +
                            " shorts to multiple pins: " + joined);
    }
  }
  return map;
}

std::vector<std::string> validate_matrix(const MeasurementMatrix& matrix,
                                         double short_tolerance_mv) {
  matrix.validate();
  std::vector<std::string> warnings;
  std::vector<bool> column_has_short(matrix.reference_signals.size(), false);
  for (std::size_t r = 0; r < matrix.header_pins.size(); ++r) {
    bool row_has_short = false;
    for (std::size_t c = 0; c < matrix.reference_signals.size(); ++c) {
      const Measurement& m = matrix.cells[r][c];
      if (m.is_short(short_tolerance_mv)) {
        row_has_short = true;
        column_has_short[c] = true;
      } else if (!m.open_loop && m.millivolts < 100.0) {
        warnings.push_back("suspicious near-short: " + matrix.header_pins[r] +
                           " / " + matrix.reference_signals[c] + " at " +
                           std::to_string(static_cast<int>(m.millivolts)) +
                           " mV");
      }
    }
    if (!row_has_short)
      warnings.push_back("pin unidentifiable (no short in row): " +
                         matrix.header_pins[r]);
  }
  for (std::size_t c = 0; c < matrix.reference_signals.size(); ++c)
    if (!column_has_short[c])
      warnings.push_back("signal not on header (no short in column): " +
                         matrix.reference_signals[c]);
  return warnings;
}

static std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    auto b = field.find_first_not_of(" \t\r");
    auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

MeasurementMatrix parse_matrix_csv(const std::string& text) {
  MeasurementMatrix m;
  std::stringstream ss(text);
  std::string line;
  bool header_done = false;
  while (std::getline(ss, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (!header_done) {
      if (fields.size() < 2) throw InvalidMatrix("CSV header needs signal columns");
      m.reference_signals.assign(fields.begin() + 1, fields.end());
      header_done = true;
      continue;
    }
    if (fields.size() != m.reference_signals.size() + 1)
      throw InvalidMatrix("CSV row width does not match header: " + line);
    m.header_pins.push_back(fields[0]);
    std::vector<Measurement> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      std::string v = fields[i];
      std::transform(v.begin(), v.end(), v.begin(), ::toupper);
      if (v == "OL") {
        row.push_back(Measurement::ol());
      } else {
        double mv = 0;
        try {
          mv = std::stod(fields[i]);
        } catch (const std::exception&) {
          throw InvalidMatrix("bad cell value: " + fields[i]);
        }
        // forward-bias drops above ~3 V are meter artifacts, not readings
        if (mv < 0 || mv >= 3000)
          throw InvalidMatrix("cell out of range (0..3000 mV): " + fields[i]);
        row.push_back(Measurement::mv(mv));
      }
    }
    m.cells.push_back(std::move(row));
  }
  m.validate();
  return m;
}

MeasurementMatrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix CSV: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_matrix_csv(text);
}

}  // namespace unattended::pinout
