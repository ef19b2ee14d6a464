"""Byte encoding tests: forced values, round-trips, self-delimitation,
and malformed input rejection."""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import holosim as hs
from support import random_configuration, random_machine, random_summary


def test_uvarint_forced_bytes():
    assert hs.encode_uvarint(0) == b"\x00"
    assert hs.encode_uvarint(1) == b"\x01"
    assert hs.encode_uvarint(127) == b"\x7f"
    assert hs.encode_uvarint(128) == b"\x80\x01"
    assert hs.encode_uvarint(300) == b"\xac\x02"


def test_svarint_zigzag_order():
    # 0,-1,1,-2,2 fold onto 0,1,2,3,4
    encoded = [hs.encode_svarint(v) for v in (0, -1, 1, -2, 2)]
    assert encoded == [hs.encode_uvarint(n) for n in range(5)]


@given(st.integers(0, 2**80))
def test_uvarint_round_trip(v):
    data = hs.encode_uvarint(v)
    got, end = hs.decode_uvarint(data)
    assert got == v
    assert end == len(data)


@given(st.integers(-(2**70), 2**70))
def test_svarint_round_trip(v):
    data = hs.encode_svarint(v)
    got, end = hs.decode_svarint(data)
    assert got == v
    assert end == len(data)


def test_uvarint_rejects_negative():
    with pytest.raises(ValueError):
        hs.encode_uvarint(-1)


def test_uvarint_truncation():
    with pytest.raises(hs.CodecError, match="truncated"):
        hs.decode_uvarint(b"\x80")
    with pytest.raises(hs.CodecError, match="truncated"):
        hs.decode_uvarint(b"")


def test_summary_round_trip_oracle(counter_run):
    d = hs.decompose(counter_run.t, 16)
    for k in (1, 5, d.T):
        s = hs.leaf_summary(counter_run, d.block(k), 4, 16)
        blob = hs.encode_summary(s)
        again = hs.decode_summary_exact(blob, counter_run.machine)
        assert again == s
        assert again.policy == s.policy
        assert hs.encode_summary(again) == blob


def test_summary_round_trip_random():
    rng = random.Random(2024)
    for _ in range(60):
        m = random_machine(rng)
        for _ in range(5):
            s = random_summary(rng, m)
            again = hs.decode_summary_exact(hs.encode_summary(s), m)
            assert again == s and again.policy == s.policy


def test_configuration_round_trip_random():
    rng = random.Random(2025)
    for _ in range(60):
        m = random_machine(rng)
        for _ in range(5):
            c = random_configuration(rng, m)
            again = hs.decode_configuration_exact(hs.encode_configuration(c), m)
            assert again == c


def test_history_round_trip_writer2(machines):
    rec = hs.run(machines["writer2"], "", max_steps=10)
    configs = tuple(rec.history.configurations())
    blob = hs.encode_history(configs)
    again = hs.decode_history_exact(blob, machines["writer2"])
    assert again == configs


def test_empty_history():
    blob = hs.encode_history(())
    # magic, version, then count 0
    assert blob[2:] == b"\x00"
    assert len(blob) == 3


def test_concatenated_summaries_decode_in_order(counter_run):
    d = hs.decompose(counter_run.t, 16)
    s1 = hs.leaf_summary(counter_run, d.block(1), 4, 16)
    s2 = hs.leaf_summary(counter_run, d.block(2), 4, 16)
    blob = hs.encode_summary(s1) + hs.encode_summary(s2)
    got1, offset = hs.decode_summary(blob, counter_run.machine)
    got2, end = hs.decode_summary(blob, counter_run.machine, offset)
    assert (got1, got2) == (s1, s2)
    assert end == len(blob)


def test_concatenated_mixed_records(counter_run):
    cfg = counter_run.history[37]
    s = hs.interval_summary(counter_run, 33, 48)
    blob = hs.encode_configuration(cfg) + hs.encode_summary(s) + hs.encode_configuration(cfg)
    m = counter_run.machine
    c1, off = hs.decode_configuration(blob, m)
    s1, off = hs.decode_summary(blob, m, off)
    c2, off = hs.decode_configuration(blob, m, off)
    assert (c1, s1, c2) == (cfg, s, cfg)
    assert off == len(blob)


def test_exact_decoders_reject_trailing_bytes(counter_run):
    s = hs.interval_summary(counter_run, 1, 16)
    with pytest.raises(hs.CodecError, match="trailing"):
        hs.decode_summary_exact(hs.encode_summary(s) + b"\x00", counter_run.machine)
    cfg = counter_run.history[3]
    with pytest.raises(hs.CodecError, match="trailing"):
        hs.decode_configuration_exact(
            hs.encode_configuration(cfg) + b"\xff", counter_run.machine
        )


def test_bad_magic_and_version(counter_run):
    s = hs.interval_summary(counter_run, 1, 16)
    blob = bytearray(hs.encode_summary(s))
    m = counter_run.machine
    with pytest.raises(hs.CodecError, match="magic"):
        hs.decode_summary(bytes([blob[0] ^ 0xFF]) + bytes(blob[1:]), m)
    with pytest.raises(hs.CodecError, match="version"):
        hs.decode_summary(bytes([blob[0], 99]) + bytes(blob[2:]), m)


def test_truncated_summary_rejected(counter_run):
    s = hs.interval_summary(counter_run, 1, 16)
    blob = hs.encode_summary(s)
    for cut in (1, 2, len(blob) // 2, len(blob) - 1):
        with pytest.raises(hs.CodecError):
            hs.decode_summary_exact(blob[:cut], counter_run.machine)


def test_out_of_range_indices_rejected(counter_run):
    m = counter_run.machine
    cfg = counter_run.history[2]
    blob = bytearray(hs.encode_configuration(cfg))
    # state index sits right after magic+version+time varint; force it huge
    time_len = len(hs.encode_uvarint(cfg.time))
    blob[2 + time_len] = 0x7F
    with pytest.raises(hs.CodecError):
        hs.decode_configuration_exact(bytes(blob), m)


def test_encoding_injective_over_corpus():
    rng = random.Random(909)
    seen = {}
    for _ in range(40):
        m = random_machine(rng)
        for _ in range(10):
            s = random_summary(rng, m)
            blob = hs.encode_summary(s)
            key = (s, s.policy, tuple(w.span for w in s.entry))
            if blob in seen:
                assert seen[blob] == key
            seen[blob] = key
    assert len(seen) > 350
