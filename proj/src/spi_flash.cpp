// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/spi_flash.hpp"

#include <bit>
#include <fstream>

#include <nlohmann/json.hpp>

#include "unattended/hex.hpp"

namespace unattended::spi {

bool opcode_supported(std::uint8_t opcode) {
  switch (static_cast<Opcode>(opcode)) {
    case Opcode::kRead:
    case Opcode::kReadStatus:
    case Opcode::kWriteEnable:
    case Opcode::kFastRead:
    case Opcode::kReadStatus2:
    case Opcode::kReadId:
      return true;
  }
  return false;
}

bool opcode_has_address(Opcode opcode) {
  return opcode == Opcode::kRead || opcode == Opcode::kFastRead;
}

void FlashGeometry::validate() const {
  if (capacity_bytes == 0 || !std::has_single_bit(capacity_bytes))
    throw std::invalid_argument("flash capacity must be a power of two");
  if (page_size == 0 || capacity_bytes % page_size != 0)
    throw std::invalid_argument("flash capacity must be a multiple of the page size");
  if (address_width != 3 && address_width != 4)
    throw std::invalid_argument("address width must be 3 or 4 bytes");
}

std::size_t header_length(Opcode opcode, const BusParams& params) {
  std::size_t len = 1;
  if (opcode_has_address(opcode)) len += params.address_width;
  if (opcode == Opcode::kFastRead) len += params.fast_read_dummy_bytes;
  return len;
}

std::vector<std::uint8_t> encode_command(const SpiCommand& cmd,
                                         const BusParams& params) {
  if (!opcode_supported(cmd.opcode))
    throw UnsupportedCommand("unsupported opcode 0x" +
                             to_hex(std::array<std::uint8_t, 1>{cmd.opcode}));
  auto op = static_cast<Opcode>(cmd.opcode);
  if (cmd.address.has_value() != opcode_has_address(op))
    throw MalformedCommand("address presence does not match opcode");

  std::vector<std::uint8_t> frame;
  frame.reserve(header_length(op, params) + cmd.payload_len);
  frame.push_back(cmd.opcode);
  if (cmd.address) {
    for (int i = static_cast<int>(params.address_width) - 1; i >= 0; --i)
      frame.push_back(static_cast<std::uint8_t>(*cmd.address >> (8 * i)));
  }
  if (op == Opcode::kFastRead)
    frame.insert(frame.end(), params.fast_read_dummy_bytes, 0x00);
  frame.insert(frame.end(), cmd.payload_len, 0x00);
  return frame;
}

SpiTransaction decode_transaction(std::uint64_t seq,
                                  std::span<const std::uint8_t> mosi,
                                  std::span<const std::uint8_t> miso,
                                  const BusParams& params) {
  if (mosi.empty()) throw EmptyFrame("zero-length frame");
  if (mosi.size() != miso.size())
    throw std::invalid_argument("mosi/miso length mismatch");

  SpiTransaction tx;
  tx.seq = seq;
  tx.mosi.assign(mosi.begin(), mosi.end());
  tx.miso.assign(miso.begin(), miso.end());

  if (!opcode_supported(mosi[0])) return tx;  // retained, decoded absent
  auto op = static_cast<Opcode>(mosi[0]);
  std::size_t header = header_length(op, params);
  if (mosi.size() < header) return tx;  // truncated frame, keep raw

  SpiCommand cmd;
  cmd.opcode = mosi[0];
  if (opcode_has_address(op)) {
    std::uint32_t addr = 0;
    for (std::uint32_t i = 0; i < params.address_width; ++i)
      addr = addr << 8 | mosi[1 + i];
    cmd.address = addr;
  }
  cmd.payload_len = mosi.size() - header;
  tx.decoded = cmd;
  tx.response.assign(miso.begin() + static_cast<std::ptrdiff_t>(header), miso.end());
  return tx;
}

FlashImage::FlashImage(FlashGeometry geometry, std::vector<std::uint8_t> data)
    : geometry_(geometry), data_(std::move(data)) {
  geometry_.validate();
  if (data_.size() != geometry_.capacity_bytes)
    throw std::invalid_argument("image length does not match geometry capacity");
}

FlashImage FlashImage::filled(FlashGeometry geometry, std::uint8_t fill) {
  return FlashImage(geometry,
                    std::vector<std::uint8_t>(geometry.capacity_bytes, fill));
}

FlashImage FlashImage::load(const std::filesystem::path& path,
                            std::optional<FlashGeometry> geometry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file: " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  FlashGeometry g = geometry.value_or(FlashGeometry{});
  if (!geometry) g.capacity_bytes = data.size();
  return FlashImage(g, std::move(data));
}

void FlashImage::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image file: " + path.string());
  out.write(reinterpret_cast<const char*>(data_.data()),
            static_cast<std::streamsize>(data_.size()));
}

std::vector<std::uint8_t> FlashImage::read(std::uint64_t addr, std::size_t len) const {
  std::vector<std::uint8_t> out(len);
  for (std::size_t i = 0; i < len; ++i)
    out[i] = data_[(addr + i) % capacity()];
  return out;
}

void FlashImage::write(std::uint64_t addr, std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < bytes.size(); ++i)
    data_[(addr + i) % capacity()] = bytes[i];
}

FlashDevice::FlashDevice(FlashImage image, BusParams bus)
    : image_(std::move(image)), bus_(bus) {
  if (bus_.address_width != image_.geometry().address_width)
    bus_.address_width = image_.geometry().address_width;
}

// Deterministic per-address noise for the contention model.
static std::uint8_t contention_noise(std::uint64_t addr) {
  std::uint64_t z = addr + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return static_cast<std::uint8_t>(z ^ (z >> 31));
}

std::vector<std::uint8_t> FlashDevice::execute(std::span<const std::uint8_t> frame) {
  if (frame.empty()) throw EmptyFrame("zero-length frame");
  std::vector<std::uint8_t> miso(frame.size(), 0x00);
  if (!opcode_supported(frame[0])) {
    std::fill(miso.begin(), miso.end(), 0xff);  // chip ignores, line floats
    return miso;
  }
  auto op = static_cast<Opcode>(frame[0]);
  std::size_t header = header_length(op, bus_);
  if (frame.size() < header)
    throw MalformedCommand("frame too short for opcode header");

  switch (op) {
    case Opcode::kRead:
    case Opcode::kFastRead: {
      std::uint32_t addr = 0;
      for (std::uint32_t i = 0; i < bus_.address_width; ++i)
        addr = addr << 8 | frame[1 + i];
      for (std::size_t i = header; i < frame.size(); ++i) {
        std::uint64_t a = (addr + (i - header)) % image_.capacity();
        std::uint8_t b = image_.bytes()[a];
        if (contention_) b ^= contention_noise(a);
        miso[i] = b;
      }
      break;
    }
    case Opcode::kReadId:
      for (std::size_t i = header; i < frame.size(); ++i)
        miso[i] = image_.geometry().jedec_id[(i - header) % 3];
      break;
    case Opcode::kReadStatus:
      for (std::size_t i = header; i < frame.size(); ++i) miso[i] = status_;
      break;
    case Opcode::kReadStatus2:
      for (std::size_t i = header; i < frame.size(); ++i) miso[i] = status2_;
      break;
    case Opcode::kWriteEnable:
      status_ |= 0x02;  // WEL latch
      break;
  }
  return miso;
}

void Transcript::append(SpiTransaction tx) {
  if (!txs_.empty() && tx.seq <= txs_.back().seq)
    throw std::invalid_argument("transcript sequence numbers must be strictly increasing");
  txs_.push_back(std::move(tx));
}

void Transcript::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write transcript: " + path.string());
  for (const auto& tx : txs_) {
    nlohmann::ordered_json j{{"seq", tx.seq},
                             {"mosi_hex", to_hex(tx.mosi)},
                             {"miso_hex", to_hex(tx.miso)}};
    out << j.dump() << '\n';
  }
}

Transcript Transcript::load(const std::filesystem::path& path,
                            const BusParams& params) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transcript: " + path.string());
  Transcript t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    auto mosi = from_hex(j.at("mosi_hex").get<std::string>());
    auto miso = from_hex(j.at("miso_hex").get<std::string>());
    t.append(decode_transaction(j.at("seq").get<std::uint64_t>(), mosi, miso, params));
  }
  return t;
}

CoverageMap::CoverageMap(std::uint64_t capacity) : flags_(capacity, false) {}

void CoverageMap::mark(std::uint64_t addr, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    flags_[(addr + i) % flags_.size()] = true;
}

std::uint64_t CoverageMap::covered_count() const {
  std::uint64_t n = 0;
  for (bool f : flags_) n += f;
  return n;
}

double CoverageMap::covered_fraction() const {
  if (flags_.empty()) return 0.0;
  return static_cast<double>(covered_count()) / static_cast<double>(flags_.size());
}

std::vector<std::uint8_t> SimulatedFlashDriver::transfer(
    std::span<const std::uint8_t> mosi) {
  return device_->execute(mosi);
}

DumpResult dump_image(FlashBusDriver& driver, const FlashGeometry& geometry,
                      std::size_t chunk_len, const BusParams& params) {
  geometry.validate();
  if (chunk_len == 0) throw std::invalid_argument("chunk_len must be >= 1");

  auto partial = std::make_shared<DumpAborted::Partial>(DumpAborted::Partial{
      FlashImage::filled(geometry, 0xff), CoverageMap(geometry.capacity_bytes),
      Transcript{}});

  std::uint64_t seq = 0;
  for (std::uint64_t addr = 0; addr < geometry.capacity_bytes;
       addr += chunk_len) {
    std::size_t len = static_cast<std::size_t>(
        std::min<std::uint64_t>(chunk_len, geometry.capacity_bytes - addr));
    SpiCommand cmd{static_cast<std::uint8_t>(Opcode::kRead),
                   static_cast<std::uint32_t>(addr), len};
    auto mosi = encode_command(cmd, params);
    std::vector<std::uint8_t> miso;
    try {
      miso = driver.transfer(mosi);
    } catch (const std::exception& e) {
      throw DumpAborted(std::string("driver failure: ") + e.what(), partial);
    }
    auto tx = decode_transaction(seq++, mosi, miso, params);
    partial->image.write(addr, tx.response);
    partial->coverage.mark(addr, tx.response.size());
    partial->transcript.append(std::move(tx));
  }
  return DumpResult{std::move(partial->image), std::move(partial->transcript)};
}

ReconstructResult reconstruct_from_transcript(const Transcript& transcript,
                                              const FlashGeometry& geometry) {
  geometry.validate();
  ReconstructResult result{FlashImage::filled(geometry, 0xff),
                           CoverageMap(geometry.capacity_bytes), 0, 0};
  for (const auto& tx : transcript.transactions()) {
    if (!tx.decoded || !tx.decoded->address) continue;
    auto op = static_cast<Opcode>(tx.decoded->opcode);
    if (op != Opcode::kRead && op != Opcode::kFastRead) continue;
    ++result.decoded_reads;
    std::uint64_t addr = *tx.decoded->address;
    for (std::size_t i = 0; i < tx.response.size(); ++i) {
      std::uint64_t a = (addr + i) % geometry.capacity_bytes;
      if (result.coverage.covered(a) &&
          result.image.bytes()[a] != tx.response[i])
        ++result.conflicts;  // last write wins
      result.image.write(a, std::span(&tx.response[i], 1));
      result.coverage.mark(a, 1);
    }
  }
  if (result.decoded_reads == 0)
    throw NothingToReconstruct("transcript contains no decodable reads");
  return result;
}

}  // namespace unattended::spi
