"""Self-delimiting byte encodings for summaries, configurations and
histories.

Integers use unsigned little-endian base-128 varints (seven payload
bits per byte, high bit flags continuation); signed values go through
the zigzag map first.  Records open with one magic byte and one
version byte, then their fields in declared order.  States and symbols
are encoded as indices into the machine's canonical state order and
declared work alphabet, so decoding needs the machine at hand.

Record layouts (version 1):

  summary        0x53 | L | R | q_in | q_out |
                 per tape: head_in± head_out± entry_lo± entry_len
                 entry_syms* exit_lo± exit_len exit_syms* | policy
  configuration  0x43 | time | state | per tape: head± lo± len syms*
  history        0x48 | count | per entry: byte_length config_bytes
  witness        0x57 | kind | machine_blob_len machine_blob

A configuration's tape contents are encoded over the hull of its
non-blank cells; an empty tape is (lo=0, len=0).  Concatenated records
parse back unambiguously because every field is length-driven.
"""

from __future__ import annotations

from typing import Sequence

from .blocks import EMPTY_WINDOW, POLICY_BOUNDARY, POLICY_FULL, IntervalSummary, TapeWindow
from .errors import CodecError
from .machine import Configuration, MachineSpec

MAGIC_SUMMARY = 0x53
MAGIC_CONFIGURATION = 0x43
MAGIC_HISTORY = 0x48
MAGIC_WITNESS = 0x57
VERSION = 1

_POLICY_TAGS = {POLICY_FULL: 0x00, POLICY_BOUNDARY: 0x01}
_TAG_POLICIES = {v: k for k, v in _POLICY_TAGS.items()}


def encode_uvarint(value: int) -> bytes:
    if value < 0:
        raise ValueError(f"uvarint cannot encode negative value {value}")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_uvarint(data: bytes, offset: int = 0) -> tuple[int, int]:
    value = 0
    shift = 0
    while True:
        if offset >= len(data):
            raise CodecError("truncated varint")
        byte = data[offset]
        offset += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, offset
        shift += 7


def zigzag(value: int) -> int:
    """Fold signed integers onto the non-negatives: 0,-1,1,-2,2 ... map
    to 0,1,2,3,4 ..."""
    return 2 * value if value >= 0 else -2 * value - 1


def encode_svarint(value: int) -> bytes:
    return encode_uvarint(zigzag(value))


def decode_svarint(data: bytes, offset: int = 0) -> tuple[int, int]:
    raw, offset = decode_uvarint(data, offset)
    return (raw >> 1) if raw % 2 == 0 else -(raw >> 1) - 1, offset


def _expect(data: bytes, offset: int, magic: int, what: str) -> int:
    if offset + 2 > len(data):
        raise CodecError(f"truncated {what} header")
    if data[offset] != magic:
        raise CodecError(
            f"bad {what} magic byte 0x{data[offset]:02X}, expected 0x{magic:02X}"
        )
    if data[offset + 1] != VERSION:
        raise CodecError(f"unsupported {what} version {data[offset + 1]}")
    return offset + 2


def _symbol_indices(machine: MachineSpec, symbols: Sequence[str]) -> bytes:
    gidx = machine.symbol_index
    return b"".join(encode_uvarint(gidx[s]) for s in symbols)


def _decode_symbols(data: bytes, offset: int, machine: MachineSpec, count: int):
    syms = []
    for _ in range(count):
        idx, offset = decode_uvarint(data, offset)
        if idx >= len(machine.work_alphabet):
            raise CodecError(f"symbol index {idx} out of range")
        syms.append(machine.work_alphabet[idx])
    return tuple(syms), offset


def _decode_state(data: bytes, offset: int, machine: MachineSpec):
    idx, offset = decode_uvarint(data, offset)
    if idx >= len(machine.states):
        raise CodecError(f"state index {idx} out of range")
    return machine.states[idx], offset


# ---------------------------------------------------------------------------
# summaries


def _encode_window(machine: MachineSpec, w: TapeWindow) -> bytes:
    lo = 0 if len(w) == 0 else w.lo
    return encode_svarint(lo) + encode_uvarint(len(w)) + _symbol_indices(machine, w.symbols)


def _decode_window(data: bytes, offset: int, machine: MachineSpec):
    lo, offset = decode_svarint(data, offset)
    length, offset = decode_uvarint(data, offset)
    syms, offset = _decode_symbols(data, offset, machine, length)
    if length == 0:
        return EMPTY_WINDOW, offset
    return TapeWindow(lo, lo + length - 1, syms), offset


def encode_summary(s: IntervalSummary) -> bytes:
    m = s.machine
    out = bytearray((MAGIC_SUMMARY, VERSION))
    out += encode_uvarint(s.L)
    out += encode_uvarint(s.R)
    out += encode_uvarint(m.state_index[s.q_in])
    out += encode_uvarint(m.state_index[s.q_out])
    for i in range(m.k):
        out += encode_svarint(s.heads_in[i])
        out += encode_svarint(s.heads_out[i])
        out += _encode_window(m, s.entry[i])
        out += _encode_window(m, s.exit[i])
    out.append(_POLICY_TAGS[s.policy])
    return bytes(out)


def decode_summary(
    data: bytes, machine: MachineSpec, offset: int = 0
) -> tuple[IntervalSummary, int]:
    offset = _expect(data, offset, MAGIC_SUMMARY, "summary")
    L, offset = decode_uvarint(data, offset)
    R, offset = decode_uvarint(data, offset)
    q_in, offset = _decode_state(data, offset, machine)
    q_out, offset = _decode_state(data, offset, machine)
    heads_in = []
    heads_out = []
    entry = []
    exit_ = []
    for _ in range(machine.k):
        h_in, offset = decode_svarint(data, offset)
        h_out, offset = decode_svarint(data, offset)
        ew, offset = _decode_window(data, offset, machine)
        xw, offset = _decode_window(data, offset, machine)
        heads_in.append(h_in)
        heads_out.append(h_out)
        entry.append(ew)
        exit_.append(xw)
    if offset >= len(data):
        raise CodecError("truncated summary: missing policy tag")
    tag = data[offset]
    offset += 1
    if tag not in _TAG_POLICIES:
        raise CodecError(f"unknown policy tag 0x{tag:02X}")
    try:
        summary = IntervalSummary(
            machine=machine,
            L=L,
            R=R,
            q_in=q_in,
            q_out=q_out,
            heads_in=tuple(heads_in),
            heads_out=tuple(heads_out),
            entry=tuple(entry),
            exit=tuple(exit_),
            policy=_TAG_POLICIES[tag],
        )
    except ValueError as e:
        raise CodecError(f"decoded summary is malformed: {e}") from e
    return summary, offset


def decode_summary_exact(data: bytes, machine: MachineSpec) -> IntervalSummary:
    s, offset = decode_summary(data, machine)
    if offset != len(data):
        raise CodecError(f"{len(data) - offset} trailing bytes after summary")
    return s


# ---------------------------------------------------------------------------
# configurations and histories


def encode_configuration(c: Configuration) -> bytes:
    m = c.machine
    out = bytearray((MAGIC_CONFIGURATION, VERSION))
    out += encode_uvarint(c.time)
    out += encode_uvarint(m.state_index[c.state])
    for i in range(m.k):
        out += encode_svarint(c.heads[i])
        tape = c.cells[i]
        if tape:
            lo = min(tape)
            hi = max(tape)
            out += encode_svarint(lo)
            out += encode_uvarint(hi - lo + 1)
            out += _symbol_indices(
                m, tuple(tape.get(cell, m.blank) for cell in range(lo, hi + 1))
            )
        else:
            out += encode_svarint(0)
            out += encode_uvarint(0)
    return bytes(out)


def decode_configuration(
    data: bytes, machine: MachineSpec, offset: int = 0
) -> tuple[Configuration, int]:
    offset = _expect(data, offset, MAGIC_CONFIGURATION, "configuration")
    time, offset = decode_uvarint(data, offset)
    state, offset = _decode_state(data, offset, machine)
    heads = []
    cells = []
    spans = []
    for _ in range(machine.k):
        head, offset = decode_svarint(data, offset)
        lo, offset = decode_svarint(data, offset)
        length, offset = decode_uvarint(data, offset)
        syms, offset = _decode_symbols(data, offset, machine, length)
        tape = {lo + j: s for j, s in enumerate(syms) if s != machine.blank}
        heads.append(head)
        cells.append(tape)
        if length:
            spans.append((min(lo, head), max(lo + length - 1, head)))
        else:
            spans.append((head, head))
    return (
        Configuration(
            machine=machine,
            time=time,
            state=state,
            heads=tuple(heads),
            cells=tuple(cells),
            spans=tuple(spans),
        ),
        offset,
    )


def decode_configuration_exact(data: bytes, machine: MachineSpec) -> Configuration:
    c, offset = decode_configuration(data, machine)
    if offset != len(data):
        raise CodecError(f"{len(data) - offset} trailing bytes after configuration")
    return c


def encode_history(configs: Sequence[Configuration]) -> bytes:
    out = bytearray((MAGIC_HISTORY, VERSION))
    out += encode_uvarint(len(configs))
    for c in configs:
        blob = encode_configuration(c)
        out += encode_uvarint(len(blob))
        out += blob
    return bytes(out)


def decode_history(
    data: bytes, machine: MachineSpec, offset: int = 0
) -> tuple[tuple[Configuration, ...], int]:
    offset = _expect(data, offset, MAGIC_HISTORY, "history")
    count, offset = decode_uvarint(data, offset)
    configs = []
    for _ in range(count):
        length, offset = decode_uvarint(data, offset)
        if offset + length > len(data):
            raise CodecError("truncated history entry")
        c, end = decode_configuration(data, machine, offset)
        if end != offset + length:
            raise CodecError("history entry length does not match its payload")
        configs.append(c)
        offset += length
    return tuple(configs), offset


def decode_history_exact(data: bytes, machine: MachineSpec) -> tuple[Configuration, ...]:
    h, offset = decode_history(data, machine)
    if offset != len(data):
        raise CodecError(f"{len(data) - offset} trailing bytes after history")
    return h
