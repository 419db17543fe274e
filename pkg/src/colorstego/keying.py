"""Secret key generation, persistence, and controlled corruption.

A key is a flat byte stream covering both decimated chroma planes
(U region first). Keys are persisted as raw bytes in a small binary
container that also carries the embedding parameters, so the extractor
never has to guess them; reproducibility comes from the file, never from
reusing RNG seeds.

Keyfile layout (little-endian):

    magic  "CGBK"          4 bytes
    format version          1 byte  (= 1)
    modulus                 2 bytes
    chroma width  Wc        4 bytes
    chroma height Hc        4 bytes
    planes                  1 byte
    block size              1 byte
    decimation              1 byte
    layout version          1 byte
    reserved                4 bytes (zero)
    key bytes               2 * Wc * Hc bytes
    CRC-32 of all above     4 bytes
"""

from __future__ import annotations

import math
import os
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .codec import StegoParams
from .errors import KeyfileError, ParameterError

KEYFILE_MAGIC = b"CGBK"
KEYFILE_VERSION = 1
_HEADER = struct.Struct("<4sBHIIBBBB4s")


@dataclass(frozen=True, eq=False)
class KeyMatrix:
    """Random byte matrix masking the chroma stream, plus its parameters."""

    data: NDArray[np.uint8]
    chroma_width: int
    chroma_height: int
    params: StegoParams = field(default_factory=StegoParams)

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.uint8, copy=True).ravel()
        if self.chroma_width < 1 or self.chroma_height < 1:
            raise ParameterError(
                f"chroma dimensions must be positive, got "
                f"{self.chroma_width}x{self.chroma_height}"
            )
        expect = 2 * self.chroma_width * self.chroma_height
        if arr.size != expect:
            raise ParameterError(f"key holds {arr.size} bytes, expected {expect}")
        if self.params.modulus == 255 and int(arr.max(initial=0)) >= 255:
            raise ParameterError("modulus-255 keys must not contain byte value 255")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def modulus(self) -> int:
        return self.params.modulus

    def __len__(self) -> int:
        return int(self.data.size)

    def same_bytes(self, other: "KeyMatrix") -> bool:
        return (
            self.chroma_width == other.chroma_width
            and self.chroma_height == other.chroma_height
            and self.params == other.params
            and np.array_equal(self.data, other.data)
        )


def keygen(
    chroma_dims: tuple[int, int],
    params: StegoParams | None = None,
    entropy=os.urandom,
) -> KeyMatrix:
    """Draw a fresh uniform key for the given decimated chroma dimensions.

    ``entropy`` must return cryptographically strong random bytes; byte
    values >= modulus are rejection-sampled away in modulus-255 mode.
    """
    params = params or StegoParams()
    wc, hc = chroma_dims
    if wc < 1 or hc < 1:
        raise ParameterError(f"chroma dimensions must be positive, got {chroma_dims!r}")
    need = 2 * wc * hc
    if params.modulus == 256:
        raw = entropy(need)
        if len(raw) != need:
            raise ParameterError(f"entropy source returned {len(raw)} bytes, wanted {need}")
        data = np.frombuffer(raw, dtype=np.uint8)
    else:
        collected: list[np.ndarray] = []
        remaining = need
        while remaining > 0:
            chunk = np.frombuffer(entropy(remaining + 16), dtype=np.uint8)
            chunk = chunk[chunk < params.modulus][:remaining]
            collected.append(chunk)
            remaining -= chunk.size
        data = np.concatenate(collected)
    return KeyMatrix(data=data, chroma_width=wc, chroma_height=hc, params=params)


def corrupt_key(key: KeyMatrix, fraction: float, seed: int) -> KeyMatrix:
    """Flip one random bit in a ``fraction`` of the key's byte positions.

    Positions are distinct and chosen by a seeded deterministic generator,
    so the same (key, fraction, seed) always yields the same corrupted
    key. The touched count is round-half-away-from-zero of
    fraction * len(key). In modulus-255 mode a corrupted byte of 255 is
    remapped to 254 to stay in range.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ParameterError(f"fraction must lie in [0, 1], got {fraction!r}")
    total = len(key)
    count = int(math.floor(fraction * total + 0.5))
    data = np.array(key.data, dtype=np.uint8, copy=True)
    if count > 0:
        rng = np.random.default_rng(seed)
        positions = rng.choice(total, size=count, replace=False)
        bit_indices = rng.integers(0, 8, size=count)
        data[positions] ^= (np.uint8(1) << bit_indices).astype(np.uint8)
        if key.modulus == 255:
            data[data == 255] = 254
    return KeyMatrix(
        data=data,
        chroma_width=key.chroma_width,
        chroma_height=key.chroma_height,
        params=key.params,
    )


def serialize_key(key: KeyMatrix) -> bytes:
    """Canonical byte representation of a key, as written by :func:`save_key`."""
    header = _HEADER.pack(
        KEYFILE_MAGIC,
        KEYFILE_VERSION,
        key.params.modulus,
        key.chroma_width,
        key.chroma_height,
        key.params.planes,
        key.params.block_size,
        key.params.decimation,
        key.params.layout_version,
        b"\x00\x00\x00\x00",
    )
    body = header + key.data.tobytes()
    return body + struct.pack("<I", zlib.crc32(body))


def save_key(key: KeyMatrix, path) -> None:
    with open(path, "wb") as handle:
        handle.write(serialize_key(key))


def load_key(path) -> KeyMatrix:
    """Parse a keyfile, verifying magic, version, length, and CRC."""
    with open(path, "rb") as handle:
        blob = handle.read()
    return deserialize_key(blob)


def deserialize_key(blob: bytes) -> KeyMatrix:
    if len(blob) < _HEADER.size + 4:
        raise KeyfileError(f"keyfile truncated: {len(blob)} bytes is shorter than any valid key")
    magic, version, modulus, wc, hc, planes, block_size, decimation, layout, _ = _HEADER.unpack(
        blob[: _HEADER.size]
    )
    if magic != KEYFILE_MAGIC:
        raise KeyfileError(f"bad magic {magic!r}, expected {KEYFILE_MAGIC!r}")
    if version != KEYFILE_VERSION:
        raise KeyfileError(f"unsupported keyfile version {version}")
    expected = _HEADER.size + 2 * wc * hc + 4
    if len(blob) != expected:
        raise KeyfileError(f"keyfile length {len(blob)} does not match expected {expected}")
    stored_crc = struct.unpack("<I", blob[-4:])[0]
    actual_crc = zlib.crc32(blob[:-4])
    if stored_crc != actual_crc:
        raise KeyfileError(f"CRC mismatch: stored {stored_crc:#010x}, computed {actual_crc:#010x}")
    try:
        params = StegoParams(
            planes=planes,
            block_size=block_size,
            decimation=decimation,
            modulus=modulus,
            layout_version=layout,
        )
        return KeyMatrix(
            data=np.frombuffer(blob[_HEADER.size:-4], dtype=np.uint8),
            chroma_width=wc,
            chroma_height=hc,
            params=params,
        )
    except ParameterError as exc:
        raise KeyfileError(f"keyfile carries invalid parameters: {exc}") from exc
