# Copyright (c) 2026 The Unattended Authors
# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the python bindings: one pass over each major operation."""

import hashlib

import pytest

import unattended as u


@pytest.fixture(scope="module")
def camera():
    return u.make_camera_fixture()


def test_pinout_inference():
    pinmap = u.infer_pinout(u.continuity_matrix_csv())
    assert pinmap.assignment == {
        "JT1.1": "TCK",
        "JT1.2": "TMS",
        "JT1.3": "TDI",
        "JT1.4": "TDO",
        "JT1.5": "GND",
        "JT1.6": "TRST_N",
        "JT1.7": "TEST",
    }
    assert u.validate_matrix(u.continuity_matrix_csv()) == []


def test_jtag_enumeration_and_memory_read():
    target = u.lock_target_json()
    found = u.enumerate_pins(target)
    assert len(found) == 1
    assert (found[0].tck, found[0].tms, found[0].tdi, found[0].tdo) == (1, 2, 3, 4)
    segment = u.jtag_read_memory(target, 0x1000, 256)
    assert segment[0:6] == b"539348"
    codes = u.scan_codes(segment)
    assert codes.programming.digits == "539348"
    assert [c.digits for c in codes.user_codes] == ["5370", "2865"]


def test_flash_dump_and_reconstruction(camera):
    image, transcript = u.dump_simulated_flash(camera, chunk=65536)
    assert image == camera
    rebuilt, coverage, conflicts = u.reconstruct_from_transcript(
        transcript, len(camera)
    )
    assert rebuilt == camera
    assert coverage == 1.0
    assert conflicts == 0


def test_camera_pipeline(camera):
    offsets = u.find_string(camera, b"C100 2.0")
    assert offsets == [0x700C0]
    key = u.derive_des_key("C100 2.0")
    assert key == b"249c6923"
    plain = u.decrypt_partition(camera, 0x40000, 0x50000, key)
    record = u.extract_config(plain)
    assert record.username == "share1"
    assert record.password_hash == hashlib.md5(b"sunshine").hexdigest()
    regions = u.high_entropy_regions(camera)
    assert any(
        r.start <= 0x40000 and r.end >= 0x50000 and r.kind == "high-entropy"
        for r in regions
    )


def test_des_round_trip():
    data = bytes(range(64))
    key = b"12345678"
    ct = u.des_ecb(data, key)
    assert ct != data
    assert u.des_ecb(ct, key, decrypt=True) == data
    with pytest.raises(u.ToolkitError):
        u.des_ecb(b"123456789", key)


def test_zlib_round_trip():
    payload = b"snooped configuration" * 100
    assert u.inflate_zlib(u.deflate_zlib(payload)) == payload


def test_signature_scan():
    image = bytearray(b"A" * 4096)
    image[256:258] = b"\x1f\x8b"
    regions = u.scan_signatures(bytes(image))
    assert any(r.start == 256 and r.kind == "gzip" for r in regions)


def test_rainbow_and_dictionary():
    params = u.TableParams()
    params.charset = "abcdefghijklmnopqrstuvwxyz"
    params.min_len = 1
    params.max_len = 2
    params.chain_len = 20
    params.chain_count = 400
    table = u.build_table(params)
    assert table.row_count > 0

    target = hashlib.md5(b"hi").hexdigest()
    result = u.rainbow_lookup(table, target)
    if result.plaintext is not None:
        assert hashlib.md5(result.plaintext.encode()).hexdigest() == target

    words = ["alpha", "beta", "sunshine"]
    hit = u.dictionary_attack(words, hashlib.md5(b"sunshine").hexdigest())
    assert hit.plaintext == "sunshine"
    assert hit.work == 3

    salted = u.salted_lookup_demo(table, "aa", "LONGSALT")
    assert salted.plaintext is None
