"""On-disk divisor tables in the DKLB format.

Layout, all little-endian:

    offset 0   magic   4 bytes  b"DKLB"
    offset 4   version u16      currently 1
    offset 6   k       u8
    offset 7   limit   u64
    offset 15  values  limit * u32   d_k(n) for n = 1..limit
    trailer    crc32   u32      over header + values

Every load reads the whole file and verifies the checksum before any
value is used; a mismatch or malformed header raises, and rebuilding
over a corrupt file happens only when explicitly requested.  Writers
hold a sibling ``.lock`` file and publish atomically via rename, so
concurrent readers never observe a partial file.
"""

from __future__ import annotations

import os
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from filelock import FileLock

from .divisor_core import DivisorTable, sieve_dk
from .errors import CacheCorruptionError, DomainError

MAGIC = b"DKLB"
VERSION = 1
_HEADER = struct.Struct("<4sHBQ")


@dataclass(frozen=True)
class CacheHandle:
    """A verified on-disk table and its in-memory form."""

    path: Path
    k: int
    limit: int
    size_bytes: int
    checksum: int
    table: DivisorTable


def cache_path(directory, k: int, limit: int) -> Path:
    return Path(directory) / f"dk{k}-{limit}.dklb"


def _encode(table: DivisorTable) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, table.k, table.limit)
    values = table.values[1:].astype("<u4").tobytes()
    body = header + values
    return body + struct.pack("<I", zlib.crc32(body))


def _decode(raw: bytes, path: Path) -> DivisorTable:
    if len(raw) < _HEADER.size + 4:
        raise CacheCorruptionError(f"{path}: file shorter than a header")
    magic, version, k, limit = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CacheCorruptionError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheCorruptionError(
            f"{path}: unsupported version {version} (expected {VERSION})"
        )
    expected = _HEADER.size + 4 * limit + 4
    if len(raw) != expected:
        raise CacheCorruptionError(
            f"{path}: size {len(raw)} does not match limit={limit} "
            f"(expected {expected})"
        )
    stored = struct.unpack_from("<I", raw, expected - 4)[0]
    actual = zlib.crc32(raw[: expected - 4])
    if stored != actual:
        raise CacheCorruptionError(
            f"{path}: checksum mismatch (stored {stored:#010x}, "
            f"computed {actual:#010x})"
        )
    values = np.empty(limit + 1, dtype=np.int32)
    values[0] = 0
    values[1:] = np.frombuffer(raw, dtype="<u4", count=limit,
                               offset=_HEADER.size)
    return DivisorTable(k=k, limit=limit, values=values)


def write_table(table: DivisorTable, directory) -> Path:
    """Store a table, atomically and under a writer lock."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_path(directory, table.k, table.limit)
    with FileLock(str(path) + ".lock"):
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(_encode(table))
        os.replace(tmp, path)
    return path


def load_table(path) -> DivisorTable:
    """Read and checksum-verify a stored table."""
    path = Path(path)
    if not path.exists():
        raise CacheCorruptionError(f"{path}: no such cache file")
    return _decode(path.read_bytes(), path)


def cache_table(k: int, limit: int, directory,
                rebuild_corrupt: bool = False) -> CacheHandle:
    """Load the (k, limit) table from the cache, building it on a miss.

    A corrupt existing file is never overwritten silently: the error
    propagates unless ``rebuild_corrupt`` asks for a fresh build.
    """
    if limit < 1:
        raise DomainError(f"limit must be positive, got {limit}")
    directory = Path(directory)
    path = cache_path(directory, k, limit)
    if path.exists():
        try:
            table = load_table(path)
        except CacheCorruptionError:
            if not rebuild_corrupt:
                raise
            table = sieve_dk(k, limit)
            write_table(table, directory)
        else:
            if table.k != k or table.limit != limit:
                raise CacheCorruptionError(
                    f"{path}: header (k={table.k}, limit={table.limit}) "
                    f"disagrees with file name"
                )
    else:
        table = sieve_dk(k, limit)
        write_table(table, directory)
    raw_size = path.stat().st_size
    with open(path, "rb") as fh:
        fh.seek(-4, os.SEEK_END)
        stored = struct.unpack("<I", fh.read(4))[0]
    return CacheHandle(
        path=path,
        k=k,
        limit=limit,
        size_bytes=raw_size,
        checksum=stored,
        table=table,
    )
