// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// Byte-level model of a 25-series serial NOR flash bus: command codec,
// behavioral device simulator, active dump driver and passive transcript
// reconstruction. SPI mode-0 is modeled per chip-select frame; one frame is
// one full-duplex byte exchange (mosi and miso always have equal length).

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "unattended/errors.hpp"

namespace unattended::spi {

enum class Opcode : std::uint8_t {
  kRead = 0x03,
  kReadStatus = 0x05,
  kWriteEnable = 0x06,
  kFastRead = 0x0b,
  kReadStatus2 = 0x35,
  kReadId = 0x9f,
};

bool opcode_supported(std::uint8_t opcode);
bool opcode_has_address(Opcode opcode);

/// Protocol parameters that are not part of the chip geometry proper.
/// Fast-read dummy cycles vary per part and are configuration, not constants.
struct BusParams {
  std::uint32_t address_width = 3;        // address bytes on the wire
  std::uint32_t fast_read_dummy_bytes = 1;
};

struct FlashGeometry {
  std::uint64_t capacity_bytes = 0x800000;  // 8 MiB
  std::uint32_t page_size = 256;
  std::uint32_t address_width = 3;  // 3 for parts <= 16 MiB
  std::array<std::uint8_t, 3> jedec_id{0x20, 0x40, 0x17};

  void validate() const;  // throws std::invalid_argument
  BusParams bus(std::uint32_t fast_read_dummy_bytes = 1) const {
    return BusParams{address_width, fast_read_dummy_bytes};
  }
};

struct SpiCommand {
  std::uint8_t opcode = 0;
  std::optional<std::uint32_t> address;
  std::size_t payload_len = 0;
};

/// Opcode byte, big-endian address bytes (if the opcode takes one), dummy
/// bytes for fast reads, then payload_len zero placeholder bytes for the
/// response window.
std::vector<std::uint8_t> encode_command(const SpiCommand& cmd,
                                         const BusParams& params = {});

/// Command header length on the wire (opcode + address + dummies).
std::size_t header_length(Opcode opcode, const BusParams& params);

struct SpiTransaction {
  std::uint64_t seq = 0;
  std::vector<std::uint8_t> mosi;
  std::vector<std::uint8_t> miso;
  std::optional<SpiCommand> decoded;
  std::vector<std::uint8_t> response;  // miso bytes after the header, when decoded
};

/// Decodes one chip-select frame. Unrecognized opcodes are retained with
/// `decoded` absent. Throws EmptyFrame on zero-length input and
/// std::invalid_argument on mismatched lengths.
SpiTransaction decode_transaction(std::uint64_t seq,
                                  std::span<const std::uint8_t> mosi,
                                  std::span<const std::uint8_t> miso,
                                  const BusParams& params = {});

class FlashImage {
 public:
  FlashImage(FlashGeometry geometry, std::vector<std::uint8_t> data);
  static FlashImage filled(FlashGeometry geometry, std::uint8_t fill);
  static FlashImage load(const std::filesystem::path& path,
                         std::optional<FlashGeometry> geometry = {});
  void save(const std::filesystem::path& path) const;

  const FlashGeometry& geometry() const { return geometry_; }
  std::span<const std::uint8_t> bytes() const { return data_; }
  std::uint64_t capacity() const { return geometry_.capacity_bytes; }

  /// Sequential read wrapping modulo capacity.
  std::vector<std::uint8_t> read(std::uint64_t addr, std::size_t len) const;
  void write(std::uint64_t addr, std::span<const std::uint8_t> bytes);

  bool operator==(const FlashImage& other) const {
    return data_ == other.data_;
  }

 private:
  FlashGeometry geometry_;
  std::vector<std::uint8_t> data_;
};

/// Behavioral flash device. Read-class commands never change device state.
/// When `bus_contention` is set (the host SoC was left running and fights
/// for the bus), read responses are corrupted with a deterministic noise
/// pattern keyed by flash address.
class FlashDevice {
 public:
  explicit FlashDevice(FlashImage image, BusParams bus = {});

  /// Executes one chip-select frame and returns the miso bytes (same length
  /// as the frame). Throws MalformedCommand when the frame is too short for
  /// the opcode's header, EmptyFrame on empty input.
  std::vector<std::uint8_t> execute(std::span<const std::uint8_t> frame);

  const FlashImage& image() const { return image_; }
  const BusParams& bus() const { return bus_; }
  std::uint8_t status() const { return status_; }

  bool bus_contention() const { return contention_; }
  void set_bus_contention(bool on) { contention_ = on; }

 private:
  FlashImage image_;
  BusParams bus_;
  std::uint8_t status_ = 0x00;
  std::uint8_t status2_ = 0x00;
  bool contention_ = false;
};

class Transcript {
 public:
  /// Appends a transaction; sequence numbers must be strictly increasing.
  void append(SpiTransaction tx);
  const std::vector<SpiTransaction>& transactions() const { return txs_; }
  bool empty() const { return txs_.empty(); }
  std::size_t size() const { return txs_.size(); }

  /// Line-delimited records {"seq":n,"mosi_hex":"..","miso_hex":".."}.
  void save(const std::filesystem::path& path) const;
  static Transcript load(const std::filesystem::path& path,
                         const BusParams& params = {});

 private:
  std::vector<SpiTransaction> txs_;
};

class CoverageMap {
 public:
  explicit CoverageMap(std::uint64_t capacity);
  void mark(std::uint64_t addr, std::size_t len);  // wraps modulo capacity
  bool covered(std::uint64_t addr) const { return flags_[addr]; }
  std::uint64_t covered_count() const;
  double covered_fraction() const;
  std::uint64_t capacity() const { return flags_.size(); }

 private:
  std::vector<bool> flags_;
};

/// Driver boundary for the bus master. The simulator backend stands in for
/// a USB programmer; hardware backends can implement the same interface.
class FlashBusDriver {
 public:
  virtual ~FlashBusDriver() = default;
  /// One chip-select frame; returns miso bytes of equal length.
  virtual std::vector<std::uint8_t> transfer(std::span<const std::uint8_t> mosi) = 0;
};

class SimulatedFlashDriver final : public FlashBusDriver {
 public:
  explicit SimulatedFlashDriver(FlashDevice& device) : device_(&device) {}
  std::vector<std::uint8_t> transfer(std::span<const std::uint8_t> mosi) override;

 private:
  FlashDevice* device_;
};

struct DumpResult {
  FlashImage image;
  Transcript transcript;
};

/// Thrown when the driver fails mid-dump; carries everything captured so far.
class DumpAborted : public Error {
 public:
  struct Partial {
    FlashImage image;
    CoverageMap coverage;
    Transcript transcript;
  };
  DumpAborted(const std::string& message, std::shared_ptr<Partial> partial)
      : Error("dump-aborted", message), partial_(std::move(partial)) {}
  const Partial& partial() const { return *partial_; }

 private:
  std::shared_ptr<Partial> partial_;
};

/// Dumps [0, capacity) with sequential READ commands of `chunk_len` bytes.
DumpResult dump_image(FlashBusDriver& driver, const FlashGeometry& geometry,
                      std::size_t chunk_len,
                      const BusParams& params = {});

struct ReconstructResult {
  FlashImage image;
  CoverageMap coverage;
  std::uint64_t conflicts = 0;  // covered bytes later overwritten with a different value
  std::uint64_t decoded_reads = 0;
};

/// Rebuilds an image from passively captured bus traffic. Bytes never read
/// on the wire stay at the erased-flash fill (0xff) and are flagged
/// uncovered. Throws NothingToReconstruct if no READ/FAST_READ decodes.
ReconstructResult reconstruct_from_transcript(const Transcript& transcript,
                                              const FlashGeometry& geometry);

}  // namespace unattended::spi
