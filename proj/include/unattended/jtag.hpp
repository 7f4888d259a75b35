// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// IEEE 1149.1 TAP controller, a simulated scan-chain target with a small
// two-instruction debug mailbox (MEM_ADDR/MEM_DATA), a pin harness that
// models the physical wiring between a bit-bang probe and the target, and
// brute-force pin-out enumeration.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unattended/errors.hpp"

namespace unattended::jtag {

enum class TapState : std::uint8_t {
  kTestLogicReset,
  kRunTestIdle,
  kSelectDrScan,
  kCaptureDr,
  kShiftDr,
  kExit1Dr,
  kPauseDr,
  kExit2Dr,
  kUpdateDr,
  kSelectIrScan,
  kCaptureIr,
  kShiftIr,
  kExit1Ir,
  kPauseIr,
  kExit2Ir,
  kUpdateIr,
};

/// Standard TAP transition; pure and total.
TapState tap_next(TapState state, bool tms);

const char* tap_state_name(TapState state);

// Instruction opcodes of the simulated target. BYPASS is all-ones per the
// standard; unknown opcodes fall back to BYPASS.
inline constexpr std::uint32_t kInstrIdcode = 0x01;
inline constexpr std::uint32_t kInstrMemAddr = 0x02;
inline constexpr std::uint32_t kInstrMemData = 0x03;

struct JtagTargetConfig {
  std::uint32_t ir_length = 8;  // 4..32
  std::uint32_t idcode = 0x2a5b16e5;
  std::map<std::uint16_t, std::uint8_t> memory;
  bool fuse_blown = false;

  void validate() const;  // throws std::invalid_argument
};

/// Simulated device on the scan chain. One instance is single-threaded;
/// independent instances are safe to use from different threads.
class JtagTarget {
 public:
  explicit JtagTarget(JtagTargetConfig config);

  /// One TCK rising edge. Shifts TDI through the active register when in a
  /// shift state and returns the bit presented on TDO. With the security
  /// fuse blown the scan logic is dead and TDO reads all-ones.
  bool clock(bool tms, bool tdi);

  /// Asynchronous reset (TRST_N low or power-up).
  void reset_state();

  TapState state() const { return state_; }
  const JtagTargetConfig& config() const { return config_; }

 private:
  void capture_dr();
  void update_dr();
  void latch_ir();

  JtagTargetConfig config_;
  TapState state_ = TapState::kTestLogicReset;
  std::uint64_t ir_shift_ = 0;
  std::uint64_t dr_shift_ = 0;
  std::uint32_t dr_length_ = 32;
  std::uint32_t instruction_ = kInstrIdcode;
  std::uint16_t mem_address_ = 0;
};

enum class Signal { kTck, kTms, kTdi, kTdo, kGnd, kTrstN, kTest };

const char* signal_name(Signal s);
std::optional<Signal> parse_signal(const std::string& name);

using Wiring = std::map<Signal, int>;  // role -> 1-based header pin

struct PinAssignment {
  int tck = 0;
  int tms = 0;
  int tdi = 0;
  int tdo = 0;
  std::uint32_t idcode = 0;  // evidence from the verifying read

  friend bool operator==(const PinAssignment&, const PinAssignment&) = default;
  auto pins() const { return std::array{tck, tms, tdi, tdo}; }
};

/// N header pins with zero or more targets attached behind them. Pins are
/// 1-based. Undriven pins float high (pull-up); a target's TDO is the only
/// target-driven pin, and GND always samples low.
class PinHarness {
 public:
  explicit PinHarness(int pin_count);

  /// Attaches a target; wiring must be injective and within range.
  void attach(JtagTarget target, Wiring wiring);

  void drive(int pin, bool level);
  bool sample(int pin) const;
  void release_all();  // probe lets every pin float back high

  int pin_count() const { return pin_count_; }
  std::size_t target_count() const { return targets_.size(); }
  const Wiring& wiring(std::size_t idx = 0) const;
  const JtagTarget& target(std::size_t idx = 0) const;

  /// The attachment's true TCK/TMS/TDI/TDO pins as a probe assignment.
  /// Throws NotConnected when one of the four roles is unwired.
  PinAssignment true_assignment(std::size_t idx = 0) const;

 private:
  struct Attachment {
    JtagTarget target;
    Wiring wiring;
    bool tdo_level = true;
    bool last_tck = true;
  };
  bool role_level(const Attachment& a, Signal s) const;
  void check_pin(int pin) const;

  int pin_count_;
  std::vector<Attachment> targets_;
  std::vector<bool> driven_;  // 1-based; true = high
};

/// Bit-bang programmer over a candidate pin assignment. All higher-level
/// operations (IDCODE reads, memory readout, enumeration probes) go through
/// this, so a wrong candidate fails the same way it would on real hardware.
class JtagProbe {
 public:
  JtagProbe(PinHarness& harness, PinAssignment pins);

  bool clock(bool tms, bool tdi);
  void tms_reset();        // five TMS=1 clocks, then settle in Run-Test/Idle
  void goto_shift_dr();    // from Run-Test/Idle
  void goto_shift_ir();

  /// Shifts `count` bits LSB-first through the current shift state; the last
  /// bit is clocked with TMS=1 (exit to Exit1), then the probe returns to
  /// Run-Test/Idle through Update. Returns the bits captured on TDO.
  std::uint64_t shift_bits(std::uint64_t bits_out, unsigned count);

  /// Loads an instruction of `ir_length` bits.
  void load_instruction(std::uint32_t opcode, unsigned ir_length);

  const PinAssignment& pins() const { return pins_; }

 private:
  PinHarness* harness_;
  PinAssignment pins_;
};

/// Resets the TAP, shifts 32 bits from the post-reset DR and returns the
/// assembled value. Throws NoDevice on an all-ones or all-zeros capture.
std::uint32_t read_idcode(JtagProbe& probe);

/// True when a pattern shifted through BYPASS comes back delayed by exactly
/// one cycle. BYPASS is selected by flooding the IR with ones, so the test
/// needs no knowledge of the IR length.
bool bypass_delay_ok(JtagProbe& probe, std::uint64_t pattern = 0x6d2b90f1,
                     unsigned pattern_bits = 32);

/// Tries every ordered selection of four distinct candidate pins as
/// (TCK, TMS, TDI, TDO). An assignment is reported iff read_idcode succeeds
/// with a plausible value (bit0 set, not all-ones/zeros) and the BYPASS
/// delay test passes. Results are sorted by pin indices.
std::vector<PinAssignment> enumerate_pins(PinHarness& harness,
                                          const std::vector<int>& candidate_pins);

/// Reads `len` bytes starting at `addr` through the MEM_ADDR/MEM_DATA
/// mailbox. Absent addresses read as 0xff (erased flash convention).
std::vector<std::uint8_t> read_memory(JtagProbe& probe, unsigned ir_length,
                                      std::uint16_t addr, std::size_t len);

/// Target definition file: {ir_length, idcode, pin_count, wiring,
/// fuse_blown, memory: {"0x1000": "hexbytes", ...}}.
struct TargetDefinition {
  JtagTargetConfig config;
  int pin_count = 7;
  Wiring wiring;

  PinHarness make_harness() const;
  std::string to_json() const;
  static TargetDefinition from_json(const std::string& text);
  static TargetDefinition load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

}  // namespace unattended::jtag
