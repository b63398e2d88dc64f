"""Binary cache of an enumeration horizon (little-endian, ``AITC`` v1).

Layout::

    "AITC" | version u8 = 1 | machine hash u64 | k_max u8 | t_max u32 | halted u64
    per halted record, canonical order:
        program length u16 | program bits, MSB-first, padded to bytes
        halt step u32 | output length u32 | output bits, padded
    per k = 1..k_max: out_of_gas u64 | diverged_static u64 | malformed u64
"""
from __future__ import annotations

import io
import struct
from pathlib import Path

from .enumerator import ComplexityTable, HaltRecord, Horizon, NonHaltCounts
from .upm import MACHINE_HASH

MAGIC = b"AITC"
VERSION = 1
_HEADER = struct.Struct("<4sBQBIQ")


class CacheError(ValueError):
    """Unreadable cache or a cache built for a different machine."""


def _pack_bits(bits: str) -> bytes:
    if not bits:
        return b""
    nbytes = (len(bits) + 7) // 8
    return int(bits.ljust(nbytes * 8, "0"), 2).to_bytes(nbytes, "big")


def _unpack_bits(data: bytes, length: int) -> str:
    if not length:
        return ""
    return format(int.from_bytes(data, "big"), f"0{len(data) * 8}b")[:length]


def dumps(table: ComplexityTable) -> bytes:
    out = io.BytesIO()
    h = table.horizon
    out.write(_HEADER.pack(MAGIC, VERSION, table.machine_hash, h.k_max, h.t_max, len(table.records)))
    for r in table.records:
        out.write(struct.pack("<H", r.program_length))
        out.write(_pack_bits(r.program))
        out.write(struct.pack("<II", r.halt_step, len(r.output)))
        out.write(_pack_bits(r.output))
    for c in table.non_halt:
        out.write(struct.pack("<QQQ", *c))
    return out.getvalue()


def loads(data: bytes, expected_hash: int = MACHINE_HASH) -> ComplexityTable:
    try:
        magic, version, mhash, k_max, t_max, halted = _HEADER.unpack_from(data, 0)
    except struct.error as exc:
        raise CacheError(f"truncated cache header: {exc}") from None
    if magic != MAGIC or version != VERSION:
        raise CacheError(f"not an AITC v{VERSION} cache")
    if mhash != expected_hash:
        raise CacheError(f"cache machine hash {mhash:#018x} != current {expected_hash:#018x}")
    pos = _HEADER.size
    records = []
    try:
        for _ in range(halted):
            (plen,) = struct.unpack_from("<H", data, pos)
            pos += 2
            nb = (plen + 7) // 8
            program = _unpack_bits(data[pos:pos + nb], plen)
            pos += nb
            step, olen = struct.unpack_from("<II", data, pos)
            pos += 8
            nb = (olen + 7) // 8
            output = _unpack_bits(data[pos:pos + nb], olen)
            pos += nb
            records.append(HaltRecord(plen, step, output, program))
        non_halt = []
        for _ in range(k_max):
            non_halt.append(NonHaltCounts(*struct.unpack_from("<QQQ", data, pos)))
            pos += 24
    except struct.error as exc:
        raise CacheError(f"truncated cache body: {exc}") from None
    if pos != len(data):
        raise CacheError(f"{len(data) - pos} trailing bytes in cache")
    return ComplexityTable(Horizon(k_max, t_max), records, non_halt, machine_hash=mhash)


def save(table: ComplexityTable, path: str | Path) -> None:
    Path(path).write_bytes(dumps(table))


def load(path: str | Path) -> ComplexityTable:
    return loads(Path(path).read_bytes())
