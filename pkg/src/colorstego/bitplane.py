"""Bit-plane access and the brightness-preserving block-parity code.

A message bit is carried by the parity (XOR) of a block's anti-diagonal
cells. Writing a bit flips at most two cells: one anti-diagonal cell plus,
whenever one exists, an off-diagonal compensator flipped in the opposite
direction so the block's bit count (and therefore its contribution to
image brightness) is unchanged. Reading is blind: the bit is just the
anti-diagonal parity of the received block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import ParameterError

MIN_BLOCK_SIZE = 2  # a 1x1 block has no off-diagonal cell to compensate with


@dataclass(frozen=True)
class BitBlock:
    """One h x h tile of a bit plane; ``bits`` is a view into the parent."""

    bits: NDArray[np.uint8]
    origin: tuple[int, int]

    @property
    def size(self) -> int:
        return self.bits.shape[0]


def _check_plane_index(plane_index: int) -> None:
    if not isinstance(plane_index, int) or not 1 <= plane_index <= 8:
        raise ParameterError(f"bit plane index must be in 1..8, got {plane_index!r}")


def _as_bits(block) -> NDArray[np.uint8]:
    arr = np.asarray(block, dtype=np.uint8)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ParameterError(f"expected a square bit block, got shape {arr.shape}")
    if arr.max(initial=0) > 1:
        raise ParameterError("bit block entries must be 0 or 1")
    return arr


def plane_weight(plane_index: int) -> int:
    """Luminance contribution of one set bit in the given plane (2^(V-1))."""
    _check_plane_index(plane_index)
    return 1 << (plane_index - 1)


def extract_plane(luma, plane_index: int) -> NDArray[np.uint8]:
    """Return bit ``plane_index - 1`` of every luma sample as a 0/1 plane."""
    _check_plane_index(plane_index)
    arr = np.asarray(luma, dtype=np.uint8)
    return ((arr >> (plane_index - 1)) & 1).astype(np.uint8)


def insert_plane(luma, plane_index: int, bits) -> NDArray[np.uint8]:
    """Replace bit ``plane_index - 1`` of every sample; other bits untouched."""
    _check_plane_index(plane_index)
    arr = np.asarray(luma, dtype=np.uint8)
    bit_arr = np.asarray(bits, dtype=np.uint8)
    if bit_arr.shape != arr.shape:
        raise ParameterError(f"bit plane shape {bit_arr.shape} != luma shape {arr.shape}")
    if bit_arr.max(initial=0) > 1:
        raise ParameterError("bit plane entries must be 0 or 1")
    shift = plane_index - 1
    keep = np.uint8(0xFF ^ (1 << shift))
    return ((arr & keep) | (bit_arr << shift)).astype(np.uint8)


def block_parity(block) -> int:
    """XOR of the anti-diagonal cells ``block[i, h-1-i]``."""
    bits = block.bits if isinstance(block, BitBlock) else _as_bits(block)
    h = bits.shape[0]
    parity = 0
    for i in range(h):
        parity ^= int(bits[i, h - 1 - i])
    return parity


def decode_block(block) -> int:
    """Read the carried message bit; identical to :func:`block_parity`."""
    return block_parity(block)


def _fix_parity(bits: NDArray[np.uint8]) -> None:
    """Flip the block parity in place with the smallest brightness change.

    Anti-diagonal cells are scanned bottom row first. For each, a
    compensator is an off-diagonal cell already holding the value the
    diagonal cell would take after flipping; flipping both leaves the bit
    count unchanged. The first diagonal cell that admits a compensator is
    used (compensator chosen in row-major order). If none exists the
    block is uniform, and only the top anti-diagonal cell is flipped at a
    bit-count cost of one.
    """
    h = bits.shape[0]
    for i in range(h - 1, -1, -1):
        j = h - 1 - i
        target = 1 - int(bits[i, j])
        for r in range(h):
            for c in range(h):
                if c == h - 1 - r:
                    continue
                if int(bits[r, c]) == target:
                    bits[i, j] = target
                    bits[r, c] = 1 - target
                    return
    bits[0, h - 1] ^= 1


def encode_block(block, message_bit: int) -> NDArray[np.uint8]:
    """Return a copy of ``block`` whose anti-diagonal parity equals the bit.

    A block already carrying the right parity is returned unchanged;
    otherwise the parity fix flips one or two cells as described in
    :func:`_fix_parity`.
    """
    if message_bit not in (0, 1):
        raise ParameterError(f"message bit must be 0 or 1, got {message_bit!r}")
    bits = block.bits if isinstance(block, BitBlock) else _as_bits(block)
    out = np.array(bits, dtype=np.uint8, copy=True)
    if block_parity(out) != message_bit:
        _fix_parity(out)
    return out


def partition_blocks(plane, block_size: int) -> list[BitBlock]:
    """Split a bit plane into full non-overlapping blocks, row-major.

    Trailing rows/columns that do not fill a whole block are excluded;
    they carry no payload and are never modified.
    """
    if not isinstance(block_size, int) or block_size < MIN_BLOCK_SIZE:
        raise ParameterError(f"block size must be an integer >= {MIN_BLOCK_SIZE}, got {block_size!r}")
    arr = np.asarray(plane, dtype=np.uint8)
    if arr.ndim != 2:
        raise ParameterError(f"expected an (H, W) bit plane, got shape {arr.shape}")
    rows = arr.shape[0] // block_size
    cols = arr.shape[1] // block_size
    blocks = []
    for i in range(rows):
        for j in range(cols):
            top, left = i * block_size, j * block_size
            view = arr[top:top + block_size, left:left + block_size]
            blocks.append(BitBlock(bits=view, origin=(top, left)))
    return blocks


def block_parities(plane, block_size: int) -> NDArray[np.uint8]:
    """Anti-diagonal parities of every full block, as a (rows, cols) grid.

    Equivalent to mapping :func:`block_parity` over :func:`partition_blocks`
    but vectorized across the whole plane.
    """
    if not isinstance(block_size, int) or block_size < MIN_BLOCK_SIZE:
        raise ParameterError(f"block size must be an integer >= {MIN_BLOCK_SIZE}, got {block_size!r}")
    arr = np.asarray(plane, dtype=np.uint8)
    if arr.ndim != 2:
        raise ParameterError(f"expected an (H, W) bit plane, got shape {arr.shape}")
    rows = arr.shape[0] // block_size
    cols = arr.shape[1] // block_size
    parities = np.zeros((rows, cols), dtype=np.uint8)
    for k in range(block_size):
        col0 = block_size - 1 - k
        parities ^= arr[k:rows * block_size:block_size, col0:cols * block_size:block_size]
    return parities
