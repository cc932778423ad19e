"""DKLB cache files: round trips, verification, corruption handling."""

import os
import shutil
import struct
import zlib

import numpy as np
import pytest

from divisorlab import cache
from divisorlab.divisor_core import sieve_dk
from divisorlab.errors import CacheCorruptionError, DomainError


@pytest.fixture
def stored(tmp_path):
    table = sieve_dk(2, 500)
    path = cache.write_table(table, tmp_path)
    return table, path


def test_round_trip(stored):
    table, path = stored
    loaded = cache.load_table(path)
    assert loaded.k == 2 and loaded.limit == 500
    assert np.array_equal(loaded.values, table.values)


def test_file_layout(stored):
    table, path = stored
    raw = path.read_bytes()
    assert raw[:15] == struct.pack("<4sHBQ", b"DKLB", 1, 2, 500)
    assert len(raw) == 15 + 4 * 500 + 4
    assert np.array_equal(
        np.frombuffer(raw, dtype="<u4", count=500, offset=15),
        table.values[1:].astype(np.uint32),
    )
    stored_crc = struct.unpack("<I", raw[-4:])[0]
    assert stored_crc == zlib.crc32(raw[:-4])


def test_writes_are_deterministic(tmp_path, stored):
    _, path = stored
    other = tmp_path / "again"
    cache.write_table(sieve_dk(2, 500), other)
    assert path.read_bytes() == (other / path.name).read_bytes()


def test_publish_leaves_no_partial_files(stored):
    # the staging file must be gone once the rename has published
    _, path = stored
    leftovers = [p for p in path.parent.iterdir() if p.suffix == ".tmp"]
    assert leftovers == []
    assert path.exists()


def _flip_byte(path, offset):
    raw = bytearray(path.read_bytes())
    raw[offset] ^= 0xFF
    path.write_bytes(bytes(raw))


def test_flipped_payload_byte_detected(stored):
    _, path = stored
    _flip_byte(path, 15 + 40)
    with pytest.raises(CacheCorruptionError, match="checksum"):
        cache.load_table(path)


def test_truncation_detected(stored):
    _, path = stored
    raw = path.read_bytes()
    path.write_bytes(raw[:-100])
    with pytest.raises(CacheCorruptionError, match="size"):
        cache.load_table(path)
    path.write_bytes(raw[:10])
    with pytest.raises(CacheCorruptionError, match="shorter"):
        cache.load_table(path)


def test_bad_magic_detected(stored):
    _, path = stored
    _flip_byte(path, 0)
    with pytest.raises(CacheCorruptionError, match="magic"):
        cache.load_table(path)


def test_bad_version_detected(stored):
    _, path = stored
    raw = bytearray(path.read_bytes())
    raw[4:6] = struct.pack("<H", 9)
    path.write_bytes(bytes(raw))
    with pytest.raises(CacheCorruptionError, match="version"):
        cache.load_table(path)


def test_missing_file(tmp_path):
    with pytest.raises(CacheCorruptionError, match="no such"):
        cache.load_table(tmp_path / "dk2-10.dklb")


def test_renamed_file_rejected(tmp_path, stored):
    # a self-consistent file under the wrong name must not be served
    _, path = stored
    shutil.copy(path, cache.cache_path(tmp_path, 2, 600))
    with pytest.raises(CacheCorruptionError, match="file name"):
        cache.cache_table(2, 600, tmp_path)


def test_cache_table_miss_builds_and_hit_loads(tmp_path):
    handle = cache.cache_table(3, 300, tmp_path)
    assert handle.path.exists()
    assert handle.k == 3 and handle.limit == 300
    assert handle.size_bytes == 15 + 4 * 300 + 4
    raw = handle.path.read_bytes()
    assert handle.checksum == zlib.crc32(raw[:-4])
    assert np.array_equal(handle.table.values, sieve_dk(3, 300).values)

    os.utime(handle.path, (1000000000, 1000000000))
    again = cache.cache_table(3, 300, tmp_path)
    assert handle.path.stat().st_mtime == 1000000000
    assert np.array_equal(again.table.values, handle.table.values)


def test_corrupt_file_blocks_unless_rebuild_requested(tmp_path, stored):
    table, path = stored
    _flip_byte(path, 15 + 8)
    with pytest.raises(CacheCorruptionError):
        cache.cache_table(2, 500, tmp_path)
    handle = cache.cache_table(2, 500, tmp_path, rebuild_corrupt=True)
    assert np.array_equal(handle.table.values, table.values)
    assert np.array_equal(cache.load_table(path).values, table.values)


def test_cache_table_rejects_bad_limit(tmp_path):
    with pytest.raises(DomainError):
        cache.cache_table(2, 0, tmp_path)
