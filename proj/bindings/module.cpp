// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the main toolkit operations. Buffers cross as bytes;
// structured results cross as bound structs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "unattended/carver.hpp"
#include "unattended/des.hpp"
#include "unattended/fixtures.hpp"
#include "unattended/hex.hpp"
#include "unattended/jtag.hpp"
#include "unattended/pinout.hpp"
#include "unattended/rainbow.hpp"
#include "unattended/secrets.hpp"
#include "unattended/spi_flash.hpp"

namespace py = pybind11;
using namespace unattended;

namespace {

std::vector<std::uint8_t> to_vec(const py::bytes& b) {
  std::string_view view = b;
  return {view.begin(), view.end()};
}

py::bytes to_bytes(std::span<const std::uint8_t> data) {
  return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

des::Key to_key(const py::bytes& b) {
  auto v = to_vec(b);
  if (v.size() != 8) throw std::invalid_argument("DES key must be 8 bytes");
  des::Key k{};
  std::copy(v.begin(), v.end(), k.begin());
  return k;
}

spi::FlashImage image_from_bytes(const py::bytes& data) {
  auto vec = to_vec(data);
  spi::FlashGeometry g;
  g.capacity_bytes = vec.size();
  return spi::FlashImage(g, std::move(vec));
}

}  // namespace

PYBIND11_MODULE(_unattended, m) {
  m.doc() = "Firmware extraction and analysis toolkit (native core)";

  py::register_exception<Error>(m, "ToolkitError");

  // ----------------------------------------------------------------- spi
  py::class_<spi::FlashGeometry>(m, "FlashGeometry")
      .def(py::init<>())
      .def_readwrite("capacity_bytes", &spi::FlashGeometry::capacity_bytes)
      .def_readwrite("page_size", &spi::FlashGeometry::page_size)
      .def_readwrite("address_width", &spi::FlashGeometry::address_width);

  m.def(
      "dump_simulated_flash",
      [](const py::bytes& device_image, std::size_t chunk, bool contended) {
        auto image = image_from_bytes(device_image);
        spi::FlashDevice device(std::move(image));
        device.set_bus_contention(contended);
        spi::SimulatedFlashDriver driver(device);
        auto result =
            spi::dump_image(driver, device.image().geometry(), chunk);
        py::list txs;
        for (const auto& tx : result.transcript.transactions())
          txs.append(py::make_tuple(tx.seq, to_bytes(tx.mosi), to_bytes(tx.miso)));
        return py::make_tuple(to_bytes(result.image.bytes()), txs);
      },
      py::arg("device_image"), py::arg("chunk") = 4096,
      py::arg("contended") = false,
      "Dump a simulated flash device; returns (image, [(seq, mosi, miso)]).");

  m.def(
      "reconstruct_from_transcript",
      [](const py::list& transactions, std::uint64_t capacity) {
        spi::Transcript t;
        for (const auto& item : transactions) {
          auto tup = item.cast<py::tuple>();
          t.append(spi::decode_transaction(tup[0].cast<std::uint64_t>(),
                                           to_vec(tup[1].cast<py::bytes>()),
                                           to_vec(tup[2].cast<py::bytes>())));
        }
        spi::FlashGeometry g;
        g.capacity_bytes = capacity;
        auto r = spi::reconstruct_from_transcript(t, g);
        return py::make_tuple(to_bytes(r.image.bytes()),
                              r.coverage.covered_fraction(), r.conflicts);
      },
      py::arg("transactions"), py::arg("capacity"),
      "Rebuild an image from (seq, mosi, miso) tuples; returns "
      "(image, coverage, conflicts).");

  // ---------------------------------------------------------------- jtag
  py::class_<jtag::PinAssignment>(m, "PinAssignment")
      .def_readonly("tck", &jtag::PinAssignment::tck)
      .def_readonly("tms", &jtag::PinAssignment::tms)
      .def_readonly("tdi", &jtag::PinAssignment::tdi)
      .def_readonly("tdo", &jtag::PinAssignment::tdo)
      .def_readonly("idcode", &jtag::PinAssignment::idcode)
      .def("__repr__", [](const jtag::PinAssignment& a) {
        char buf[80];
        std::snprintf(buf, sizeof buf,
                      "PinAssignment(tck=%d, tms=%d, tdi=%d, tdo=%d, "
                      "idcode=0x%08x)",
                      a.tck, a.tms, a.tdi, a.tdo, a.idcode);
        return std::string(buf);
      });

  m.def(
      "enumerate_pins",
      [](const std::string& target_json) {
        auto def = jtag::TargetDefinition::from_json(target_json);
        auto harness = def.make_harness();
        std::vector<int> pins;
        for (int p = 1; p <= def.pin_count; ++p) pins.push_back(p);
        return jtag::enumerate_pins(harness, pins);
      },
      py::arg("target_json"),
      "Brute-force TCK/TMS/TDI/TDO over all pins of a target definition.");

  m.def(
      "jtag_read_memory",
      [](const std::string& target_json, std::uint16_t addr, std::size_t len) {
        auto def = jtag::TargetDefinition::from_json(target_json);
        auto harness = def.make_harness();
        jtag::JtagProbe probe(harness, harness.true_assignment());
        return to_bytes(jtag::read_memory(probe, def.config.ir_length, addr, len));
      },
      py::arg("target_json"), py::arg("addr"), py::arg("len"),
      "Read target memory through the debug mailbox.");

  // -------------------------------------------------------------- pinout
  py::class_<pinout::PinMap>(m, "PinMap")
      .def_readonly("assignment", &pinout::PinMap::assignment)
      .def_readonly("unassigned", &pinout::PinMap::unassigned)
      .def_readonly("notes", &pinout::PinMap::notes);

  m.def(
      "infer_pinout",
      [](const std::string& csv_text, double tolerance) {
        return pinout::infer_pinout(pinout::parse_matrix_csv(csv_text), tolerance);
      },
      py::arg("csv_text"), py::arg("tolerance_mv") = 5.0,
      "Infer header pin roles from a continuity matrix CSV.");

  m.def("validate_matrix", [](const std::string& csv_text) {
    return pinout::validate_matrix(pinout::parse_matrix_csv(csv_text));
  });

  // -------------------------------------------------------------- carver
  py::class_<carver::Region>(m, "Region")
      .def(py::init([](std::uint64_t start, std::uint64_t end, std::string kind) {
             return carver::Region{start, end, std::move(kind), 0.0};
           }),
           py::arg("start"), py::arg("end"), py::arg("kind") = "unknown")
      .def_readonly("start", &carver::Region::start)
      .def_readonly("end", &carver::Region::end)
      .def_readonly("kind", &carver::Region::kind)
      .def_readonly("score", &carver::Region::score)
      .def("__repr__", [](const carver::Region& r) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "Region(0x%llx..0x%llx, %s, %.3f)",
                      static_cast<unsigned long long>(r.start),
                      static_cast<unsigned long long>(r.end), r.kind.c_str(),
                      r.score);
        return std::string(buf);
      });

  m.def("scan_signatures", [](const py::bytes& image) {
    return carver::scan_signatures(to_vec(image));
  });
  m.def(
      "entropy_profile",
      [](const py::bytes& image, std::size_t window, std::size_t stride) {
        return carver::entropy_profile(to_vec(image), window, stride);
      },
      py::arg("image"), py::arg("window") = 4096, py::arg("stride") = 2048);
  m.def(
      "high_entropy_regions",
      [](const py::bytes& image, std::size_t window, std::size_t stride,
         double threshold) {
        return carver::high_entropy_regions(to_vec(image), window, stride,
                                            threshold);
      },
      py::arg("image"), py::arg("window") = 4096, py::arg("stride") = 2048,
      py::arg("threshold") = 7.5);
  m.def("find_string", [](const py::bytes& image, const py::bytes& needle) {
    return carver::find_string(to_vec(image), to_vec(needle));
  });
  m.def("carve",
        [](const py::bytes& image, std::uint64_t start, std::uint64_t end) {
          return to_bytes(
              carver::carve(to_vec(image), carver::Region{start, end, "", 0}));
        });

  // ------------------------------------------------------------- secrets
  m.def(
      "derive_des_key",
      [](const std::string& model, const std::string& derivation) {
        auto key = derivation == "truncate8"
                       ? secrets::TruncateKeyDerivation{}.derive(model)
                       : secrets::LookupKeyDerivation{}.derive(model);
        return to_bytes(key);
      },
      py::arg("model"), py::arg("derivation") = "lookup");

  m.def(
      "des_ecb",
      [](const py::bytes& data, const py::bytes& key, bool decrypt) {
        return to_bytes(des::des_ecb(
            to_vec(data), to_key(key),
            decrypt ? des::Direction::kDecrypt : des::Direction::kEncrypt));
      },
      py::arg("data"), py::arg("key"), py::arg("decrypt") = false);

  m.def("inflate_zlib", [](const py::bytes& data) {
    return to_bytes(secrets::inflate_zlib(to_vec(data)));
  });
  m.def("deflate_zlib", [](const py::bytes& data) {
    return to_bytes(secrets::deflate_zlib(to_vec(data)));
  });

  m.def(
      "decrypt_partition",
      [](const py::bytes& image, std::uint64_t start, std::uint64_t end,
         const py::bytes& key) {
        auto img = image_from_bytes(image);
        return to_bytes(secrets::decrypt_partition(
            img, carver::Region{start, end, "", 0}, to_key(key)));
      },
      py::arg("image"), py::arg("start"), py::arg("end"), py::arg("key"));

  py::class_<secrets::ConfigRecord>(m, "ConfigRecord")
      .def_readonly("ip", &secrets::ConfigRecord::ip)
      .def_readonly("protocols", &secrets::ConfigRecord::protocols)
      .def_readonly("username", &secrets::ConfigRecord::username)
      .def_readonly("password_hash", &secrets::ConfigRecord::password_hash)
      .def_readonly("ssid", &secrets::ConfigRecord::ssid)
      .def_readonly("extras", &secrets::ConfigRecord::extras);

  m.def("extract_config", [](const py::bytes& plaintext) {
    return secrets::extract_config(to_vec(plaintext));
  });

  py::class_<secrets::CodeHit>(m, "CodeHit")
      .def_readonly("digits", &secrets::CodeHit::digits)
      .def_readonly("offset", &secrets::CodeHit::offset)
      .def_property_readonly("encoding", [](const secrets::CodeHit& h) {
        return h.encoding == secrets::CodeHit::Encoding::kAscii ? "ascii" : "bcd";
      });

  py::class_<secrets::LockCodes>(m, "LockCodes")
      .def_readonly("programming", &secrets::LockCodes::programming)
      .def_readonly("user_codes", &secrets::LockCodes::user_codes)
      .def_readonly("notes", &secrets::LockCodes::notes);

  m.def("scan_codes", [](const py::bytes& segment) {
    return secrets::scan_codes(to_vec(segment));
  });

  // -------------------------------------------------------------- rainbow
  py::enum_<hashing::HashAlg>(m, "HashAlg")
      .value("MD5", hashing::HashAlg::kMd5)
      .value("SHA1", hashing::HashAlg::kSha1);

  py::class_<rainbow::TableParams>(m, "TableParams")
      .def(py::init<>())
      .def_readwrite("alg", &rainbow::TableParams::alg)
      .def_readwrite("charset", &rainbow::TableParams::charset)
      .def_readwrite("min_len", &rainbow::TableParams::min_len)
      .def_readwrite("max_len", &rainbow::TableParams::max_len)
      .def_readwrite("chain_len", &rainbow::TableParams::chain_len)
      .def_readwrite("chain_count", &rainbow::TableParams::chain_count)
      .def_readwrite("seed", &rainbow::TableParams::seed)
      .def("space_size", &rainbow::TableParams::space_size);

  py::class_<rainbow::RainbowTable>(m, "RainbowTable")
      .def_readonly("params", &rainbow::RainbowTable::params)
      .def_readonly("duplicate_ends", &rainbow::RainbowTable::duplicate_ends)
      .def_property_readonly(
          "row_count",
          [](const rainbow::RainbowTable& t) { return t.rows.size(); })
      .def("save", &rainbow::RainbowTable::save)
      .def_static("load", &rainbow::RainbowTable::load);

  py::class_<rainbow::CrackResult>(m, "CrackResult")
      .def_readonly("hash_hex", &rainbow::CrackResult::hash_hex)
      .def_readonly("plaintext", &rainbow::CrackResult::plaintext)
      .def_readonly("work", &rainbow::CrackResult::work)
      .def_property_readonly("method", [](const rainbow::CrackResult& r) {
        return r.method == rainbow::CrackResult::Method::kDictionary
                   ? "dictionary"
                   : "rainbow";
      });

  m.def("build_table", &rainbow::build_table);
  m.def("rainbow_lookup", &rainbow::lookup, py::arg("table"), py::arg("hash_hex"));
  m.def("dictionary_attack", &rainbow::dictionary_attack, py::arg("wordlist"),
        py::arg("hash_hex"), py::arg("alg") = hashing::HashAlg::kMd5);
  m.def("salted_lookup_demo", &rainbow::salted_lookup_demo, py::arg("table"),
        py::arg("plaintext"), py::arg("salt"));

  m.def("hash_hex", [](const std::string& text, hashing::HashAlg alg) {
    return hashing::digest_hex(alg, text);
  }, py::arg("text"), py::arg("alg") = hashing::HashAlg::kMd5);

  // ------------------------------------------------------------- fixtures
  m.def(
      "make_camera_fixture",
      [](const std::string& password) {
        fixtures::CameraFixtureSpec spec;
        if (!password.empty()) spec.password = password;
        auto image = fixtures::make_camera_image(spec);
        return to_bytes(image.bytes());
      },
      py::arg("password") = "",
      "Camera flash image with an encrypted config partition.");
  m.def("lock_target_json", [](bool updated) {
    return fixtures::make_lock_target(updated).to_json();
  }, py::arg("updated") = false);
  m.def("continuity_matrix_csv", &fixtures::continuity_matrix_csv);
}
