"""Witness programs: fixed byte strings that expand interval summaries.

A witness is built from a machine alone.  Its bytes never depend on
the run, the interval, or t, so for a fixed machine every witness of a
given kind is the identical constant-length string.  Fed a summary as
conditional input, the witness interpreter replays the summarized
interval and emits encoded configurations:

* pointwise (tag 0x2A): conditional input is (encoded full-policy
  summary, uvarint tau); output is the encoded configuration at tau,
  restricted to the summary's windows.
* history (tag 0x2B): conditional input is (encoded full-policy
  summary,); output is the encoded configuration sequence from entry
  (time L-1) through exit (time R), each element produced by a fresh
  replay from the entry data.

Program layout: magic 0x57, version, kind tag, then the machine's
canonical text serialization as a length-prefixed UTF-8 blob.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .codec import (
    MAGIC_WITNESS,
    VERSION,
    decode_summary_exact,
    decode_uvarint,
    encode_configuration,
    encode_history,
    encode_uvarint,
)
from .errors import CodecError
from .machine import MachineSpec, parse_machine, serialize_machine
from .replay import replay_all, replay_from_summary

KIND_POINTWISE = "pointwise"
KIND_HISTORY = "history"
_TAGS = {KIND_POINTWISE: 0x2A, KIND_HISTORY: 0x2B}
_KINDS = {tag: kind for kind, tag in _TAGS.items()}


@dataclass(frozen=True)
class WitnessProgram:
    kind: str
    data: bytes

    def __len__(self) -> int:
        return len(self.data)


def build_witness(machine: MachineSpec, kind: str) -> WitnessProgram:
    if kind not in _TAGS:
        raise ValueError(f"unknown witness kind {kind!r}; expected one of {sorted(_TAGS)}")
    blob = serialize_machine(machine).encode("utf-8")
    data = bytes([MAGIC_WITNESS, VERSION, _TAGS[kind]]) + encode_uvarint(len(blob)) + blob
    return WitnessProgram(kind=kind, data=data)


def parse_witness(data: bytes) -> tuple[str, MachineSpec]:
    if len(data) < 3:
        raise CodecError("witness too short")
    if data[0] != MAGIC_WITNESS:
        raise CodecError(f"bad witness magic 0x{data[0]:02X}, expected 0x{MAGIC_WITNESS:02X}")
    if data[1] != VERSION:
        raise CodecError(f"unsupported witness version {data[1]}")
    tag = data[2]
    if tag not in _KINDS:
        raise CodecError(f"unknown witness kind tag 0x{tag:02X}")
    blob_len, offset = decode_uvarint(data, 3)
    blob = data[offset : offset + blob_len]
    if len(blob) != blob_len:
        raise CodecError("truncated witness machine blob")
    if offset + blob_len != len(data):
        raise CodecError(f"{len(data) - offset - blob_len} trailing bytes after witness")
    machine = parse_machine(blob.decode("utf-8"))
    return _KINDS[tag], machine


def run_witness(
    witness: WitnessProgram | bytes, conditional: Sequence[bytes]
) -> bytes:
    """Execute a witness on its conditional input; returns encoded
    output bytes."""
    data = witness.data if isinstance(witness, WitnessProgram) else witness
    kind, machine = parse_witness(data)
    if kind == KIND_POINTWISE:
        if len(conditional) != 2:
            raise ValueError(
                f"pointwise witness takes (summary, tau), got {len(conditional)} items"
            )
        summary = decode_summary_exact(conditional[0], machine)
        tau, end = decode_uvarint(conditional[1], 0)
        if end != len(conditional[1]):
            raise CodecError(f"{len(conditional[1]) - end} trailing bytes after tau")
        config = replay_from_summary(machine, summary, tau)
        return encode_configuration(config)
    if len(conditional) != 1:
        raise ValueError(
            f"history witness takes (summary,), got {len(conditional)} items"
        )
    summary = decode_summary_exact(conditional[0], machine)
    return encode_history(replay_all(machine, summary))
