// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/jtag.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "unattended/hex.hpp"

namespace unattended::jtag {

TapState tap_next(TapState state, bool tms) {
  using S = TapState;
  switch (state) {
    case S::kTestLogicReset: return tms ? S::kTestLogicReset : S::kRunTestIdle;
    case S::kRunTestIdle:    return tms ? S::kSelectDrScan : S::kRunTestIdle;
    case S::kSelectDrScan:   return tms ? S::kSelectIrScan : S::kCaptureDr;
    case S::kCaptureDr:      return tms ? S::kExit1Dr : S::kShiftDr;
    case S::kShiftDr:        return tms ? S::kExit1Dr : S::kShiftDr;
    case S::kExit1Dr:        return tms ? S::kUpdateDr : S::kPauseDr;
    case S::kPauseDr:        return tms ? S::kExit2Dr : S::kPauseDr;
    case S::kExit2Dr:        return tms ? S::kUpdateDr : S::kShiftDr;
    case S::kUpdateDr:       return tms ? S::kSelectDrScan : S::kRunTestIdle;
    case S::kSelectIrScan:   return tms ? S::kTestLogicReset : S::kCaptureIr;
    case S::kCaptureIr:      return tms ? S::kExit1Ir : S::kShiftIr;
    case S::kShiftIr:        return tms ? S::kExit1Ir : S::kShiftIr;
    case S::kExit1Ir:        return tms ? S::kUpdateIr : S::kPauseIr;
    case S::kPauseIr:        return tms ? S::kExit2Ir : S::kPauseIr;
    case S::kExit2Ir:        return tms ? S::kUpdateIr : S::kShiftIr;
    case S::kUpdateIr:       return tms ? S::kSelectDrScan : S::kRunTestIdle;
  }
  return S::kTestLogicReset;  // unreachable
}

const char* tap_state_name(TapState state) {
  static const char* names[] = {
      "Test-Logic-Reset", "Run-Test/Idle", "Select-DR-Scan", "Capture-DR",
      "Shift-DR",         "Exit1-DR",      "Pause-DR",       "Exit2-DR",
      "Update-DR",        "Select-IR-Scan", "Capture-IR",    "Shift-IR",
      "Exit1-IR",         "Pause-IR",      "Exit2-IR",       "Update-IR"};
  return names[static_cast<std::uint8_t>(state)];
}

void JtagTargetConfig::validate() const {
  if (ir_length < 4 || ir_length > 32)
    throw std::invalid_argument("ir_length must be between 4 and 32");
  if ((idcode & 1u) == 0)
    throw std::invalid_argument("idcode bit 0 must be 1");
}

JtagTarget::JtagTarget(JtagTargetConfig config) : config_(std::move(config)) {
  config_.validate();
  reset_state();
}

void JtagTarget::reset_state() {
  state_ = TapState::kTestLogicReset;
  instruction_ = kInstrIdcode;
  ir_shift_ = 0;
  dr_shift_ = 0;
  dr_length_ = 32;
}

void JtagTarget::capture_dr() {
  switch (instruction_) {
    case kInstrIdcode:
      dr_shift_ = config_.idcode;
      dr_length_ = 32;
      break;
    case kInstrMemAddr:
      dr_shift_ = mem_address_;
      dr_length_ = 16;
      break;
    case kInstrMemData: {
      auto it = config_.memory.find(mem_address_);
      dr_shift_ = it != config_.memory.end() ? it->second : 0xff;
      dr_length_ = 8;
      break;
    }
    default:  // BYPASS
      dr_shift_ = 0;
      dr_length_ = 1;
      break;
  }
}

void JtagTarget::update_dr() {
  if (instruction_ == kInstrMemAddr)
    mem_address_ = static_cast<std::uint16_t>(dr_shift_);
  // MEM_DATA updates are ignored: the target is read-only by design.
}

void JtagTarget::latch_ir() {
  std::uint64_t mask = (config_.ir_length >= 64)
                           ? ~0ull
                           : ((1ull << config_.ir_length) - 1);
  std::uint64_t value = ir_shift_ & mask;
  if (value == kInstrIdcode || value == kInstrMemAddr || value == kInstrMemData)
    instruction_ = static_cast<std::uint32_t>(value);
  else
    instruction_ = static_cast<std::uint32_t>(mask);  // BYPASS, incl. unknowns
}

bool JtagTarget::clock(bool tms, bool tdi) {
  if (config_.fuse_blown) return true;  // scan logic disabled, TDO stuck high

  bool tdo = false;
  if (state_ == TapState::kShiftDr) {
    tdo = dr_shift_ & 1;
    dr_shift_ = (dr_shift_ >> 1) |
                (static_cast<std::uint64_t>(tdi) << (dr_length_ - 1));
  } else if (state_ == TapState::kShiftIr) {
    tdo = ir_shift_ & 1;
    ir_shift_ = (ir_shift_ >> 1) |
                (static_cast<std::uint64_t>(tdi) << (config_.ir_length - 1));
  }

  state_ = tap_next(state_, tms);
  switch (state_) {
    case TapState::kTestLogicReset: instruction_ = kInstrIdcode; break;
    case TapState::kCaptureIr: ir_shift_ = 0x01; break;  // standard xx...01
    case TapState::kCaptureDr: capture_dr(); break;
    case TapState::kUpdateIr: latch_ir(); break;
    case TapState::kUpdateDr: update_dr(); break;
    default: break;
  }
  return tdo;
}

const char* signal_name(Signal s) {
  switch (s) {
    case Signal::kTck: return "TCK";
    case Signal::kTms: return "TMS";
    case Signal::kTdi: return "TDI";
    case Signal::kTdo: return "TDO";
    case Signal::kGnd: return "GND";
    case Signal::kTrstN: return "TRST_N";
    case Signal::kTest: return "TEST";
  }
  return "?";
}

std::optional<Signal> parse_signal(const std::string& name) {
  static const std::map<std::string, Signal> table = {
      {"TCK", Signal::kTck},   {"TMS", Signal::kTms},
      {"TDI", Signal::kTdi},   {"TDO", Signal::kTdo},
      {"GND", Signal::kGnd},   {"TRST_N", Signal::kTrstN},
      {"TEST", Signal::kTest}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

PinHarness::PinHarness(int pin_count)
    : pin_count_(pin_count),
      driven_(static_cast<std::size_t>(pin_count) + 1, true) {
  if (pin_count < 1) throw std::invalid_argument("pin_count must be >= 1");
}

void PinHarness::check_pin(int pin) const {
  if (pin < 1 || pin > pin_count_)
    throw std::invalid_argument("pin index out of range");
}

void PinHarness::attach(JtagTarget target, Wiring wiring) {
  std::vector<int> used;
  for (const auto& [role, pin] : wiring) {
    check_pin(pin);
    used.push_back(pin);
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end())
    throw std::invalid_argument("wiring must be injective");
  targets_.push_back(Attachment{std::move(target), std::move(wiring)});
}

bool PinHarness::role_level(const Attachment& a, Signal s) const {
  auto it = a.wiring.find(s);
  if (it == a.wiring.end()) return true;  // unwired input floats high
  if (s == Signal::kGnd) return false;
  return driven_[static_cast<std::size_t>(it->second)];
}

void PinHarness::drive(int pin, bool level) {
  check_pin(pin);
  driven_[static_cast<std::size_t>(pin)] = level;
  for (auto& a : targets_) {
    bool trst_low = !role_level(a, Signal::kTrstN);
    if (trst_low) a.target.reset_state();
    auto tck_it = a.wiring.find(Signal::kTck);
    if (tck_it == a.wiring.end()) continue;
    bool tck = driven_[static_cast<std::size_t>(tck_it->second)];
    if (tck && !a.last_tck) {  // rising edge
      if (trst_low) {
        a.target.reset_state();
      } else {
        a.tdo_level = a.target.clock(role_level(a, Signal::kTms),
                                     role_level(a, Signal::kTdi));
      }
    }
    a.last_tck = tck;
  }
}

bool PinHarness::sample(int pin) const {
  check_pin(pin);
  for (const auto& a : targets_) {
    auto tdo_it = a.wiring.find(Signal::kTdo);
    if (tdo_it != a.wiring.end() && tdo_it->second == pin) return a.tdo_level;
    auto gnd_it = a.wiring.find(Signal::kGnd);
    if (gnd_it != a.wiring.end() && gnd_it->second == pin) return false;
  }
  return driven_[static_cast<std::size_t>(pin)];
}

void PinHarness::release_all() {
  std::fill(driven_.begin(), driven_.end(), true);
}

const Wiring& PinHarness::wiring(std::size_t idx) const {
  return targets_.at(idx).wiring;
}

const JtagTarget& PinHarness::target(std::size_t idx) const {
  return targets_.at(idx).target;
}

PinAssignment PinHarness::true_assignment(std::size_t idx) const {
  const Wiring& w = targets_.at(idx).wiring;
  PinAssignment a;
  for (auto [role, member] : {std::pair{Signal::kTck, &PinAssignment::tck},
                              {Signal::kTms, &PinAssignment::tms},
                              {Signal::kTdi, &PinAssignment::tdi},
                              {Signal::kTdo, &PinAssignment::tdo}}) {
    auto it = w.find(role);
    if (it == w.end())
      throw NotConnected(std::string("role not wired: ") + signal_name(role));
    a.*member = it->second;
  }
  return a;
}

JtagProbe::JtagProbe(PinHarness& harness, PinAssignment pins)
    : harness_(&harness), pins_(pins) {
  auto p = pins_.pins();
  std::sort(p.begin(), p.end());
  if (std::adjacent_find(p.begin(), p.end()) != p.end() || p.front() < 1)
    throw NotConnected("probe roles must map to distinct pins");
  harness_->release_all();
  harness_->drive(pins_.tck, false);  // idle clock low
}

bool JtagProbe::clock(bool tms, bool tdi) {
  harness_->drive(pins_.tms, tms);
  harness_->drive(pins_.tdi, tdi);
  harness_->drive(pins_.tck, true);
  bool tdo = harness_->sample(pins_.tdo);
  harness_->drive(pins_.tck, false);
  return tdo;
}

void JtagProbe::tms_reset() {
  for (int i = 0; i < 5; ++i) clock(true, false);
  clock(false, false);  // Test-Logic-Reset -> Run-Test/Idle
}

void JtagProbe::goto_shift_dr() {
  clock(true, false);   // Select-DR-Scan
  clock(false, false);  // Capture-DR
  clock(false, false);  // Shift-DR
}

void JtagProbe::goto_shift_ir() {
  clock(true, false);   // Select-DR-Scan
  clock(true, false);   // Select-IR-Scan
  clock(false, false);  // Capture-IR
  clock(false, false);  // Shift-IR
}

std::uint64_t JtagProbe::shift_bits(std::uint64_t bits_out, unsigned count) {
  std::uint64_t captured = 0;
  for (unsigned i = 0; i < count; ++i) {
    bool last = i + 1 == count;
    bool tdo = clock(last, (bits_out >> i) & 1);
    captured |= static_cast<std::uint64_t>(tdo) << i;
  }
  clock(true, false);   // Exit1 -> Update
  clock(false, false);  // Update -> Run-Test/Idle
  return captured;
}

void JtagProbe::load_instruction(std::uint32_t opcode, unsigned ir_length) {
  goto_shift_ir();
  shift_bits(opcode, ir_length);
}

std::uint32_t read_idcode(JtagProbe& probe) {
  probe.tms_reset();  // post-reset instruction is IDCODE
  probe.goto_shift_dr();
  auto value = static_cast<std::uint32_t>(probe.shift_bits(0, 32));
  if (value == 0)
    throw NoDevice("IDCODE capture is all zeros (line stuck low)");
  if (value == 0xffffffffu)
    throw NoDevice("IDCODE capture is all ones (line floating)");
  return value;
}

bool bypass_delay_ok(JtagProbe& probe, std::uint64_t pattern,
                     unsigned pattern_bits) {
  probe.tms_reset();
  // Flood the IR with ones: selects BYPASS whatever the IR length is.
  probe.goto_shift_ir();
  probe.shift_bits(~0ull, 64);
  probe.goto_shift_dr();
  std::uint64_t captured = probe.shift_bits(pattern, pattern_bits + 1);
  // BYPASS captures 0, then echoes the pattern one cycle late.
  std::uint64_t expected = pattern << 1;
  std::uint64_t mask = (pattern_bits + 1 >= 64)
                           ? ~0ull
                           : ((1ull << (pattern_bits + 1)) - 1);
  return (captured & mask) == (expected & mask);
}

static bool plausible_idcode(std::uint32_t idcode) {
  return (idcode & 1u) == 1 && idcode != 0 && idcode != 0xffffffffu;
}

std::vector<PinAssignment> enumerate_pins(PinHarness& harness,
                                          const std::vector<int>& candidate_pins) {
  if (candidate_pins.size() < 4)
    throw std::invalid_argument("need at least 4 candidate pins");

  std::vector<PinAssignment> found;
  for (int tck : candidate_pins)
    for (int tms : candidate_pins)
      for (int tdi : candidate_pins)
        for (int tdo : candidate_pins) {
          std::array pins{tck, tms, tdi, tdo};
          std::array sorted = pins;
          std::sort(sorted.begin(), sorted.end());
          if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            continue;
          PinAssignment candidate{tck, tms, tdi, tdo, 0};
          JtagProbe probe(harness, candidate);
          std::uint32_t idcode;
          try {
            idcode = read_idcode(probe);
          } catch (const NoDevice&) {
            continue;
          }
          if (!plausible_idcode(idcode)) continue;
          if (!bypass_delay_ok(probe)) continue;
          std::uint32_t confirm;
          try {
            confirm = read_idcode(probe);
          } catch (const NoDevice&) {
            continue;
          }
          if (confirm != idcode) continue;
          candidate.idcode = idcode;
          found.push_back(candidate);
        }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.pins() < b.pins();
  });
  return found;
}

std::vector<std::uint8_t> read_memory(JtagProbe& probe, unsigned ir_length,
                                      std::uint16_t addr, std::size_t len) {
  std::vector<std::uint8_t> out;
  out.reserve(len);
  if (len == 0) return out;
  probe.tms_reset();
  for (std::size_t i = 0; i < len; ++i) {
    auto a = static_cast<std::uint16_t>(addr + i);
    probe.load_instruction(kInstrMemAddr, ir_length);
    probe.goto_shift_dr();
    probe.shift_bits(a, 16);  // Update-DR latches the address
    probe.load_instruction(kInstrMemData, ir_length);
    probe.goto_shift_dr();
    out.push_back(static_cast<std::uint8_t>(probe.shift_bits(0, 8)));
  }
  return out;
}

PinHarness TargetDefinition::make_harness() const {
  PinHarness h(pin_count);
  h.attach(JtagTarget(config), wiring);
  return h;
}

std::string TargetDefinition::to_json() const {
  nlohmann::json mem;
  // Coalesce consecutive addresses into one hex run per start address.
  auto it = config.memory.begin();
  while (it != config.memory.end()) {
    std::uint16_t start = it->first;
    std::vector<std::uint8_t> run{it->second};
    auto next = std::next(it);
    while (next != config.memory.end() &&
           next->first == static_cast<std::uint16_t>(start + run.size())) {
      run.push_back(next->second);
      ++next;
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%04x", start);
    mem[buf] = to_hex(run);
    it = next;
  }
  nlohmann::json w;
  for (const auto& [role, pin] : wiring) w[signal_name(role)] = pin;
  nlohmann::json j{{"ir_length", config.ir_length},
                   {"idcode", config.idcode},
                   {"fuse_blown", config.fuse_blown},
                   {"pin_count", pin_count},
                   {"wiring", w},
                   {"memory", mem}};
  return j.dump(2);
}

TargetDefinition TargetDefinition::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TargetDefinition def;
  def.config.ir_length = j.value("ir_length", 8u);
  if (j.contains("idcode")) {
    if (j["idcode"].is_string())
      def.config.idcode =
          static_cast<std::uint32_t>(parse_offset(j["idcode"].get<std::string>()));
    else
      def.config.idcode = j["idcode"].get<std::uint32_t>();
  }
  def.config.fuse_blown = j.value("fuse_blown", false);
  def.pin_count = j.value("pin_count", 7);
  if (j.contains("wiring")) {
    for (auto& [name, pin] : j["wiring"].items()) {
      auto role = parse_signal(name);
      if (!role)
        throw std::invalid_argument("unknown signal in wiring: " + name);
      def.wiring[*role] = pin.get<int>();
    }
  }
  if (j.contains("memory")) {
    for (auto& [addr_text, hex] : j["memory"].items()) {
      auto base = static_cast<std::uint16_t>(parse_offset(addr_text));
      auto bytes = from_hex(hex.get<std::string>());
      for (std::size_t i = 0; i < bytes.size(); ++i)
        def.config.memory[static_cast<std::uint16_t>(base + i)] = bytes[i];
    }
  }
  def.config.validate();
  return def;
}

TargetDefinition TargetDefinition::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open target definition: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

void TargetDefinition::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write target definition: " + path.string());
  out << to_json() << '\n';
}

}  // namespace unattended::jtag
