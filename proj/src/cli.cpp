// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#include "unattended/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "unattended/casefile.hpp"
#include "unattended/fixtures.hpp"
#include "unattended/hex.hpp"
#include "unattended/json_io.hpp"

namespace unattended::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

carver::Region parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("range", "expected start:end (end exclusive)");
  carver::Region r;
  r.start = parse_offset(text.substr(0, colon));
  r.end = parse_offset(text.substr(colon + 1));
  if (r.end <= r.start)
    throw CLI::ValidationError("range", "end must be greater than start");
  return r;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Shared per-subcommand state for evidence recording.
struct CaseOpts {
  std::string case_dir;
  bool reproducible = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--case", case_dir,
                    "Record evidence into this case directory (relative paths "
                    "resolve under $UNATTENDED_CASE_DIR)");
    cmd->add_flag("--reproducible", reproducible,
                  "Pin timestamps for byte-identical output");
  }

  std::optional<casefile::CaseFile> open(const std::string& device = "") const {
    if (case_dir.empty()) return std::nullopt;
    fs::path dir(case_dir);
    if (dir.is_relative()) {
      if (const char* root = std::getenv("UNATTENDED_CASE_DIR"))
        dir = fs::path(root) / dir;
    }
    return casefile::CaseFile::open_or_create(dir, dir.filename().string(),
                                              device, reproducible);
  }
};

std::unique_ptr<secrets::KeyDerivation> make_derivation(
    const std::string& name, const std::string& registry) {
  if (name == "lookup") {
    if (registry.empty())
      return std::make_unique<secrets::LookupKeyDerivation>();
    return std::make_unique<secrets::LookupKeyDerivation>(
        secrets::LookupKeyDerivation::from_file(registry));
  }
  if (name == "truncate8")
    return std::make_unique<secrets::TruncateKeyDerivation>();
  throw std::invalid_argument("unknown derivation: " + name);
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Firmware extraction and analysis toolkit for unattended-device "
               "assessments: JTAG pin-out discovery and memory readout, SPI "
               "flash dumping, carving and the decrypt/crack pipeline"};
  app.name("unattended");
  app.require_subcommand(1);

  // ---------------------------------------------------------------- dump
  struct {
    std::string device_image, out, transcript, jedec = "204017";
    std::uint64_t capacity = 0;
    std::size_t chunk = 4096;
    bool contended = false;
    bool json_out = false;
    CaseOpts c;
  } dump;
  {
    auto* cmd = app.add_subcommand(
        "dump", "Dump a simulated SPI flash device to an image file");
    cmd->add_option("--device-image", dump.device_image,
                    "Backing image for the simulated device")
        ->required();
    cmd->add_option("--out", dump.out, "Output image path")->required();
    cmd->add_option("--transcript", dump.transcript,
                    "Also record the bus transcript (JSON lines)");
    cmd->add_option("--capacity", dump.capacity,
                    "Device capacity (defaults to the image size)");
    cmd->add_option("--chunk", dump.chunk, "Read chunk length")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--jedec", dump.jedec, "JEDEC id hex (3 bytes)");
    cmd->add_flag("--contended", dump.contended,
                  "Leave the host SoC running (bus contention)");
    cmd->add_flag("--json", dump.json_out, "Machine-readable summary");
    dump.c.attach(cmd);
    cmd->callback([&] {
      auto data = read_file(dump.device_image);
      spi::FlashGeometry geometry;
      geometry.capacity_bytes = dump.capacity ? dump.capacity : data.size();
      auto jedec = from_hex(dump.jedec);
      if (jedec.size() != 3) throw IoError("JEDEC id must be 3 bytes of hex");
      std::copy(jedec.begin(), jedec.end(), geometry.jedec_id.begin());
      spi::FlashDevice device(spi::FlashImage(geometry, std::move(data)));
      device.set_bus_contention(dump.contended);
      if (device.bus_contention())
        throw BusContention(
            "the host SoC is driving the flash bus; hold it in reset before "
            "dumping (clear --contended)");
      spi::SimulatedFlashDriver driver(device);
      auto result = spi::dump_image(driver, device.image().geometry(), dump.chunk);
      result.image.save(dump.out);
      if (!dump.transcript.empty()) result.transcript.save(dump.transcript);
      if (auto c = dump.c.open()) {
        c->record("image", "spi-dump", result.image.bytes(),
                  "flash dump of " + dump.device_image + " (" +
                      std::to_string(result.image.capacity()) + " bytes)");
      }
      if (dump.json_out) {
        out << json{{"bytes", result.image.capacity()},
                    {"transactions", result.transcript.size()},
                    {"out", dump.out}}
                   .dump()
            << '\n';
      } else {
        out << "dumped " << result.image.capacity() << " bytes in "
            << result.transcript.size() << " transactions -> " << dump.out
            << '\n';
      }
    });
  }

  // --------------------------------------------------- decode-transcript
  struct {
    std::string transcript, out;
    std::uint64_t capacity = 0x800000;
    bool json_out = false;
    CaseOpts c;
  } dec;
  {
    auto* cmd = app.add_subcommand(
        "decode-transcript",
        "Rebuild a flash image from passively captured bus traffic");
    cmd->add_option("--transcript", dec.transcript, "Transcript file (JSON lines)")
        ->required();
    cmd->add_option("--out", dec.out, "Reconstructed image path");
    cmd->add_option("--capacity", dec.capacity, "Device capacity");
    cmd->add_flag("--json", dec.json_out, "Machine-readable summary");
    dec.c.attach(cmd);
    cmd->callback([&] {
      auto transcript = spi::Transcript::load(dec.transcript);
      spi::FlashGeometry geometry;
      geometry.capacity_bytes = dec.capacity;
      auto result = spi::reconstruct_from_transcript(transcript, geometry);
      if (!dec.out.empty()) result.image.save(dec.out);
      if (auto c = dec.c.open())
        c->record("image", "transcript", result.image.bytes(),
                  "reconstruction from " + dec.transcript);
      json j{{"coverage", result.coverage.covered_fraction()},
             {"covered_bytes", result.coverage.covered_count()},
             {"conflicts", result.conflicts},
             {"decoded_reads", result.decoded_reads}};
      if (dec.json_out)
        out << j.dump() << '\n';
      else
        out << "coverage " << result.coverage.covered_fraction() << " ("
            << result.coverage.covered_count() << " bytes), conflicts "
            << result.conflicts << ", decoded reads " << result.decoded_reads
            << '\n';
    });
  }

  // --------------------------------------------------------------- pinout
  struct {
    std::string matrix;
    double tolerance = 5.0;
    bool json_out = false;
    CaseOpts c;
  } pin;
  {
    auto* cmd = app.add_subcommand(
        "pinout", "Infer debug-header pin definitions from a continuity matrix");
    cmd->add_option("--matrix", pin.matrix, "Measurement matrix CSV")->required();
    cmd->add_option("--tolerance", pin.tolerance, "Short threshold in mV");
    cmd->add_flag("--json", pin.json_out, "Machine-readable output");
    pin.c.attach(cmd);
    cmd->callback([&] {
      auto matrix = pinout::load_matrix_csv(pin.matrix);
      auto map = pinout::infer_pinout(matrix, pin.tolerance);
      if (auto c = pin.c.open()) {
        json j = map;
        c->record("pinmap", "jtag", as_bytes(j.dump()),
                  "pin-out inferred from " + pin.matrix);
      }
      if (pin.json_out) {
        out << json(map).dump() << '\n';
      } else {
        for (const auto& p : matrix.header_pins)
          if (map.assignment.count(p))
            out << p << " -> " << map.assignment.at(p) << '\n';
        for (const auto& p : map.unassigned) out << p << " -> (unassigned)\n";
        for (const auto& n : map.notes) out << "note: " << n << '\n';
      }
    });
  }

  // ------------------------------------------------------------ jtag-enum
  struct {
    std::string target, pins;
    bool json_out = false;
    CaseOpts c;
  } je;
  {
    auto* cmd = app.add_subcommand(
        "jtag-enum", "Brute-force the JTAG pin assignment on a simulated target");
    cmd->add_option("--target", je.target, "Target definition JSON")->required();
    cmd->add_option("--pins", je.pins,
                    "Comma-separated candidate pins (default: all)");
    cmd->add_flag("--json", je.json_out, "Machine-readable output");
    je.c.attach(cmd);
    cmd->callback([&] {
      auto def = jtag::TargetDefinition::load(je.target);
      auto harness = def.make_harness();
      std::vector<int> candidates;
      if (je.pins.empty()) {
        for (int p = 1; p <= def.pin_count; ++p) candidates.push_back(p);
      } else {
        std::stringstream ss(je.pins);
        std::string tok;
        while (std::getline(ss, tok, ','))
          candidates.push_back(static_cast<int>(parse_offset(tok)));
      }
      auto found = jtag::enumerate_pins(harness, candidates);
      if (auto c = je.c.open()) {
        json j = found;
        c->record("pinmap", "jtag", as_bytes(j.dump()),
                  "enumeration over " + std::to_string(candidates.size()) +
                      " pins: " + std::to_string(found.size()) + " assignment(s)");
      }
      if (je.json_out) {
        out << json(found).dump() << '\n';
      } else if (found.empty()) {
        out << "no responding pin assignment found\n";
      } else {
        for (const auto& a : found) {
          char buf[16];
          std::snprintf(buf, sizeof buf, "0x%08x", a.idcode);
          out << "TCK=" << a.tck << " TMS=" << a.tms << " TDI=" << a.tdi
              << " TDO=" << a.tdo << " idcode=" << buf << '\n';
        }
      }
    });
  }

  // ------------------------------------------------------------ jtag-read
  struct {
    std::string target, out_path, addr = "0x1000";
    std::size_t len = 256;
    bool json_out = false;
    CaseOpts c;
  } jr;
  {
    auto* cmd = app.add_subcommand(
        "jtag-read", "Read target memory through the debug mailbox");
    cmd->add_option("--target", jr.target, "Target definition JSON")->required();
    cmd->add_option("--addr", jr.addr, "Start address (hex or decimal)");
    cmd->add_option("--len", jr.len, "Byte count");
    cmd->add_option("--out", jr.out_path, "Write the segment to this file");
    cmd->add_flag("--json", jr.json_out, "Machine-readable output");
    jr.c.attach(cmd);
    cmd->callback([&] {
      auto def = jtag::TargetDefinition::load(jr.target);
      auto harness = def.make_harness();
      jtag::JtagProbe probe(harness, harness.true_assignment());
      auto addr = static_cast<std::uint16_t>(parse_offset(jr.addr));
      auto bytes = jtag::read_memory(probe, def.config.ir_length, addr, jr.len);
      if (!jr.out_path.empty()) write_file(jr.out_path, bytes);
      if (auto c = jr.c.open())
        c->record("image", "jtag", bytes,
                  "memory read " + jr.addr + "+" + std::to_string(jr.len));
      if (jr.json_out)
        out << json{{"addr", addr}, {"len", bytes.size()}, {"hex", to_hex(bytes)}}
                   .dump()
            << '\n';
      else if (jr.out_path.empty())
        out << to_hex(bytes) << '\n';
      else
        out << "read " << bytes.size() << " bytes -> " << jr.out_path << '\n';
    });
  }

  // ----------------------------------------------------------------- carve
  struct {
    std::string image, range, out_path;
    CaseOpts c;
  } cv;
  {
    auto* cmd = app.add_subcommand("carve", "Extract a byte range from an image");
    cmd->add_option("--image", cv.image, "Image file")->required();
    cmd->add_option("--range", cv.range, "start:end (end exclusive, 0x ok)")
        ->required();
    cmd->add_option("--out", cv.out_path, "Output file")->required();
    cv.c.attach(cmd);
    cmd->callback([&] {
      auto data = read_file(cv.image);
      auto region = parse_range(cv.range);
      region.kind = "carved";
      auto bytes = carver::carve(data, region);
      write_file(cv.out_path, bytes);
      if (auto c = cv.c.open())
        c->record("region", "pipeline", bytes,
                  "carved " + cv.range + " from " + cv.image);
      out << "carved " << bytes.size() << " bytes -> " << cv.out_path << '\n';
    });
  }

  // ------------------------------------------------------------------ scan
  struct {
    std::string image, signatures, needle;
    bool entropy = false;
    std::size_t window = 4096, stride = 0;
    double threshold = 7.5;
    bool json_out = false;
    CaseOpts c;
  } sc;
  {
    auto* cmd = app.add_subcommand(
        "scan", "Scan an image for file-type magics, high-entropy regions or "
                "a byte string");
    cmd->add_option("--image", sc.image, "Image file")->required();
    cmd->add_option("--signatures", sc.signatures,
                    "Signature JSON (default: built-ins)");
    cmd->add_option("--string", sc.needle, "Report offsets of this string");
    cmd->add_flag("--entropy", sc.entropy, "Add high-entropy regions");
    cmd->add_option("--window", sc.window, "Entropy window");
    cmd->add_option("--stride", sc.stride, "Entropy stride (default window/2)");
    cmd->add_option("--threshold", sc.threshold, "High-entropy threshold");
    cmd->add_flag("--json", sc.json_out, "Machine-readable output");
    sc.c.attach(cmd);
    cmd->callback([&] {
      auto data = read_file(sc.image);
      json j = json::object();
      std::vector<carver::Region> regions;
      if (sc.needle.empty() || sc.entropy || !sc.signatures.empty()) {
        auto sigs = sc.signatures.empty()
                        ? carver::builtin_signatures()
                        : carver::load_signatures(sc.signatures);
        regions = carver::scan_signatures(data, sigs);
      }
      if (sc.entropy) {
        std::size_t stride = sc.stride ? sc.stride : sc.window / 2;
        auto he = carver::high_entropy_regions(data, sc.window, stride,
                                               sc.threshold);
        regions.insert(regions.end(), he.begin(), he.end());
        std::sort(regions.begin(), regions.end(),
                  [](const auto& a, const auto& b) { return a.start < b.start; });
      }
      j["regions"] = regions;
      if (!sc.needle.empty())
        j["string_offsets"] = carver::find_string(data, as_bytes(sc.needle));
      if (auto c = sc.c.open())
        c->record("region", "pipeline", as_bytes(j.dump()),
                  "scan of " + sc.image);
      if (sc.json_out) {
        out << j.dump() << '\n';
      } else {
        for (const auto& r : regions) {
          char line[128];
          std::snprintf(line, sizeof line, "0x%08llx..0x%08llx  %-12s %.3f",
                        static_cast<unsigned long long>(r.start),
                        static_cast<unsigned long long>(r.end), r.kind.c_str(),
                        r.score);
          out << line << '\n';
        }
        if (!sc.needle.empty()) {
          out << "string \"" << sc.needle << "\" at:";
          for (auto o : j["string_offsets"]) {
            char buf[24];
            std::snprintf(buf, sizeof buf, " 0x%llx",
                          static_cast<unsigned long long>(o.get<std::uint64_t>()));
            out << buf;
          }
          out << '\n';
        }
      }
    });
  }

  // ------------------------------------------------------------ derive-key
  struct {
    std::string model, registry, derivation = "lookup";
    bool json_out = false;
  } dk;
  {
    auto* cmd = app.add_subcommand(
        "derive-key", "Derive the partition DES key from a model string");
    cmd->add_option("--model", dk.model, "Model string, e.g. \"C100 2.0\"")
        ->required();
    cmd->add_option("--registry", dk.registry, "Key registry JSON");
    cmd->add_option("--derivation", dk.derivation, "lookup | truncate8");
    cmd->add_flag("--json", dk.json_out, "Machine-readable output");
    cmd->callback([&] {
      auto derivation = make_derivation(dk.derivation, dk.registry);
      auto key = derivation->derive(dk.model);
      if (dk.json_out)
        out << json{{"model", dk.model}, {"key_hex", to_hex(key)}}.dump() << '\n';
      else
        out << to_hex(key) << '\n';
    });
  }

  // --------------------------------------------------------------- decrypt
  struct {
    std::string image, range, model, key_hex, registry, out_path;
    std::string derivation = "lookup";
    CaseOpts c;
  } dc;
  {
    auto* cmd = app.add_subcommand(
        "decrypt", "Decrypt and inflate an encrypted partition");
    cmd->add_option("--image", dc.image, "Dumped image file")->required();
    cmd->add_option("--range", dc.range, "start:end of the partition")->required();
    auto* model = cmd->add_option("--model", dc.model, "Model string for key derivation");
    auto* key = cmd->add_option("--key", dc.key_hex, "DES key as 16 hex digits");
    model->excludes(key);
    cmd->add_option("--registry", dc.registry, "Key registry JSON");
    cmd->add_option("--derivation", dc.derivation, "lookup | truncate8");
    cmd->add_option("--out", dc.out_path, "Output file for the plaintext")
        ->required();
    dc.c.attach(cmd);
    cmd->callback([&] {
      if (dc.model.empty() && dc.key_hex.empty())
        throw CLI::RequiredError("--model or --key");
      des::Key key{};
      if (!dc.model.empty()) {
        key = make_derivation(dc.derivation, dc.registry)->derive(dc.model);
      } else {
        auto bytes = from_hex(dc.key_hex);
        if (bytes.size() != 8) throw IoError("DES key must be 8 bytes of hex");
        std::copy(bytes.begin(), bytes.end(), key.begin());
      }
      auto image = spi::FlashImage::load(dc.image);
      auto region = parse_range(dc.range);
      auto plain = secrets::decrypt_partition(image, region, key);
      write_file(dc.out_path, plain);
      if (auto c = dc.c.open())
        c->record("config", "pipeline", plain,
                  "decrypted partition " + dc.range + " of " + dc.image);
      out << "decrypted " << plain.size() << " bytes -> " << dc.out_path << '\n';
    });
  }

  // -------------------------------------------------------- extract-config
  struct {
    std::string in_path;
    bool json_out = false;
    CaseOpts c;
  } ec;
  {
    auto* cmd = app.add_subcommand(
        "extract-config", "Parse a decrypted config into a structured record");
    cmd->add_option("--in", ec.in_path, "Decrypted config file")->required();
    cmd->add_flag("--json", ec.json_out, "Machine-readable output");
    ec.c.attach(cmd);
    cmd->callback([&] {
      auto data = read_file(ec.in_path);
      auto record = secrets::extract_config(data);
      json j = record;
      if (auto c = ec.c.open())
        c->record("config", "pipeline", as_bytes(j.dump()),
                  "config record from " + ec.in_path);
      if (ec.json_out) {
        out << j.dump() << '\n';
      } else {
        if (record.ip) out << "ip: " << *record.ip << '\n';
        if (!record.protocols.empty()) {
          out << "protocols:";
          for (const auto& p : record.protocols) out << ' ' << p;
          out << '\n';
        }
        if (record.username) out << "username: " << *record.username << '\n';
        if (record.password_hash)
          out << "password hash: " << *record.password_hash << '\n';
        if (record.ssid) out << "ssid: " << *record.ssid << '\n';
        for (const auto& [k, v] : record.extras)
          out << k << " (extra): " << v << '\n';
      }
    });
  }

  // ------------------------------------------------------------ scan-codes
  struct {
    std::string in_path, image, range;
    bool json_out = false;
    CaseOpts c;
  } scod;
  {
    auto* cmd = app.add_subcommand(
        "scan-codes", "Find lock codes (ASCII or BCD digit runs) in a segment");
    auto* in = cmd->add_option("--in", scod.in_path, "Segment file");
    auto* img = cmd->add_option("--image", scod.image, "Image file (with --range)");
    cmd->add_option("--range", scod.range, "start:end within --image");
    in->excludes(img);
    cmd->add_flag("--json", scod.json_out, "Machine-readable output");
    scod.c.attach(cmd);
    cmd->callback([&] {
      std::vector<std::uint8_t> segment;
      if (!scod.in_path.empty()) {
        segment = read_file(scod.in_path);
      } else if (!scod.image.empty() && !scod.range.empty()) {
        auto data = read_file(scod.image);
        segment = carver::carve(data, parse_range(scod.range));
      } else {
        throw CLI::RequiredError("--in or --image/--range");
      }
      auto codes = secrets::scan_codes(segment);
      json j = codes;
      if (auto c = scod.c.open())
        c->record("codes", "jtag", as_bytes(j.dump()),
                  "code scan of " +
                      (scod.in_path.empty() ? scod.image : scod.in_path));
      if (scod.json_out) {
        out << j.dump() << '\n';
      } else {
        if (codes.programming)
          out << "programming code: " << codes.programming->digits << " @"
              << codes.programming->offset << '\n';
        for (const auto& u : codes.user_codes)
          out << "user code: " << u.digits << " @" << u.offset << '\n';
        if (!codes.programming && codes.user_codes.empty())
          out << "no codes found\n";
      }
    });
  }

  // ------------------------------------------------------------ table-build
  struct {
    std::string out_path, alg = "md5", charset = "abcdefghijklmnopqrstuvwxyz";
    std::uint32_t min_len = 1, max_len = 3, length = 100;
    std::uint64_t chains = 2000, seed = 1;
    bool json_out = false;
  } tb;
  {
    auto* cmd = app.add_subcommand("table-build", "Precompute a rainbow table");
    cmd->add_option("--out", tb.out_path, "Table file")->required();
    cmd->add_option("--alg", tb.alg, "md5 | sha1");
    cmd->add_option("--charset", tb.charset, "Plaintext character set");
    cmd->add_option("--min", tb.min_len, "Minimum plaintext length");
    cmd->add_option("--max", tb.max_len, "Maximum plaintext length");
    cmd->add_option("--chains", tb.chains, "Chain count (m)");
    cmd->add_option("--length", tb.length, "Chain length (t)");
    cmd->add_option("--seed", tb.seed, "Start-point seed");
    cmd->add_flag("--json", tb.json_out, "Machine-readable summary");
    cmd->callback([&] {
      rainbow::TableParams params;
      params.alg = hashing::parse_hash_alg(tb.alg);
      params.charset = tb.charset;
      params.min_len = tb.min_len;
      params.max_len = tb.max_len;
      params.chain_len = tb.length;
      params.chain_count = tb.chains;
      params.seed = tb.seed;
      auto table = rainbow::build_table(params);
      table.save(tb.out_path);
      json j{{"rows", table.rows.size()},
             {"duplicate_ends", table.duplicate_ends},
             {"space", params.space_size()},
             {"out", tb.out_path}};
      if (tb.json_out)
        out << j.dump() << '\n';
      else
        out << "built " << table.rows.size() << " rows ("
            << table.duplicate_ends << " duplicate ends) over a space of "
            << params.space_size() << " -> " << tb.out_path << '\n';
    });
  }

  // ------------------------------------------------------------------ crack
  struct {
    std::string hash, table, wordlist, alg = "md5";
    bool json_out = false;
    CaseOpts c;
  } cr;
  {
    auto* cmd = app.add_subcommand(
        "crack", "Reverse a password hash via rainbow table or wordlist");
    cmd->add_option("--hash", cr.hash, "Target hash (hex)")->required();
    auto* table = cmd->add_option("--table", cr.table, "Rainbow table file");
    auto* wl = cmd->add_option("--wordlist", cr.wordlist, "Wordlist file");
    table->excludes(wl);
    cmd->add_option("--alg", cr.alg, "md5 | sha1 (wordlist route)");
    cmd->add_flag("--json", cr.json_out, "Machine-readable output");
    cr.c.attach(cmd);
    cmd->callback([&] {
      rainbow::CrackResult result;
      if (!cr.table.empty()) {
        auto t = rainbow::RainbowTable::load(cr.table);
        result = rainbow::lookup(t, cr.hash);
      } else if (!cr.wordlist.empty()) {
        auto words = rainbow::load_wordlist(cr.wordlist);
        result = rainbow::dictionary_attack(words, cr.hash,
                                            hashing::parse_hash_alg(cr.alg));
      } else {
        throw CLI::RequiredError("--table or --wordlist");
      }
      json j = result;
      if (auto c = cr.c.open())
        c->record("crack", "pipeline", as_bytes(j.dump()),
                  result.plaintext ? "hash reversed" : "hash not reversed");
      if (cr.json_out)
        out << j.dump() << '\n';
      else if (result.plaintext)
        out << "found: " << *result.plaintext << " (work " << result.work
            << ")\n";
      else
        out << "not found (work " << result.work << ")\n";
    });
  }

  // ----------------------------------------------------------------- report
  struct {
    std::string case_dir, format = "text", out_path;
    bool reproducible = false;
  } rp;
  {
    auto* cmd = app.add_subcommand("report", "Generate the case report");
    cmd->add_option("--case", rp.case_dir, "Case directory")->required();
    cmd->add_option("--format", rp.format, "text | markdown");
    cmd->add_option("--out", rp.out_path, "Write report to file");
    cmd->add_flag("--reproducible", rp.reproducible,
                  "Normalize timestamps for byte-identical output");
    cmd->callback([&] {
      fs::path dir(rp.case_dir);
      if (dir.is_relative()) {
        if (const char* root = std::getenv("UNATTENDED_CASE_DIR"))
          dir = fs::path(root) / dir;
      }
      auto c = casefile::CaseFile::open(dir);
      c.verify();
      casefile::ReportFormat fmt;
      if (rp.format == "text") fmt = casefile::ReportFormat::kText;
      else if (rp.format == "markdown") fmt = casefile::ReportFormat::kMarkdown;
      else throw CLI::ValidationError("--format", "text or markdown");
      auto report = casefile::generate_report(c, fmt, rp.reproducible);
      if (rp.out_path.empty())
        out << report;
      else
        write_file(rp.out_path, as_bytes(report));
    });
  }

  // ---------------------------------------------------------- make-fixtures
  struct {
    std::string out_dir;
    std::size_t words = 10000;
  } mf;
  {
    auto* cmd = app.add_subcommand(
        "make-fixtures",
        "Generate the simulated case-study inputs (camera image, lock "
        "target, continuity matrix, wordlist)");
    cmd->add_option("--out-dir", mf.out_dir, "Output directory")->required();
    cmd->add_option("--words", mf.words, "Wordlist size");
    cmd->callback([&] {
      fs::create_directories(mf.out_dir);
      fs::path dir(mf.out_dir);
      fixtures::CameraFixtureSpec spec;
      auto camera = fixtures::make_camera_image(spec);
      camera.save(dir / "camera.bin");
      fixtures::make_lock_target(false).save(dir / "lock.json");
      fixtures::make_lock_target(true).save(dir / "lock_updated.json");
      std::ofstream csv(dir / "continuity.csv");
      csv << fixtures::continuity_matrix_csv();
      auto words = fixtures::make_wordlist(mf.words, 7, {spec.password});
      std::ofstream wl(dir / "wordlist.txt");
      for (const auto& w : words) wl << w << '\n';
      out << "wrote camera.bin, lock.json, lock_updated.json, continuity.csv, "
             "wordlist.txt to "
          << mf.out_dir << '\n';
    });
  }

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);  // CLI11's vector overload takes reversed arguments
    return 0;
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace unattended::cli
