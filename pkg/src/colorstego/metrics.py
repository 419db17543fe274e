"""Fidelity measurements: PSNR, channel difference images, brightness deltas.

Reports serialize to line-oriented ``key: value`` text so external
harnesses can scrape them without a parser.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import bitplane
from .codec import StegoParams
from .errors import ParameterError

CHANNEL_INDEX = {"red": 0, "green": 1, "blue": 2}
DEFAULT_DIFF_GAIN = 32  # raw per-pixel differences of 1..3 are invisible at 8 bits


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB against a 255 peak; inf if identical."""
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    if a_arr.shape != b_arr.shape:
        raise ParameterError(f"image shapes differ: {a_arr.shape} vs {b_arr.shape}")
    mse = float(np.mean((a_arr - b_arr) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


@dataclass(frozen=True)
class ChannelStats:
    name: str
    psnr_db: float
    max_abs_error: int
    mean_abs_error: float


@dataclass(frozen=True)
class FidelityReport:
    psnr_db: float
    max_abs_error: int
    mean_abs_error: float
    channels: tuple[ChannelStats, ...] = ()

    def as_text(self) -> str:
        lines = [
            f"psnr-db: {self.psnr_db}",
            f"max-abs-error: {self.max_abs_error}",
            f"mean-abs-error: {self.mean_abs_error:.6f}",
        ]
        for ch in self.channels:
            lines.append(f"psnr-{ch.name}-db: {ch.psnr_db}")
            lines.append(f"max-abs-error-{ch.name}: {ch.max_abs_error}")
            lines.append(f"mean-abs-error-{ch.name}: {ch.mean_abs_error:.6f}")
        return "\n".join(lines) + "\n"


def compare_images(a, b) -> FidelityReport:
    """Overall and (for color inputs) per-channel error statistics."""
    a_arr = np.asarray(a)
    b_arr = np.asarray(b)
    if a_arr.shape != b_arr.shape:
        raise ParameterError(f"image shapes differ: {a_arr.shape} vs {b_arr.shape}")
    diff = np.abs(a_arr.astype(np.int32) - b_arr.astype(np.int32))
    channels: tuple[ChannelStats, ...] = ()
    if a_arr.ndim == 3 and a_arr.shape[2] == 3:
        channels = tuple(
            ChannelStats(
                name=name,
                psnr_db=psnr(a_arr[..., idx], b_arr[..., idx]),
                max_abs_error=int(diff[..., idx].max()),
                mean_abs_error=float(diff[..., idx].mean()),
            )
            for name, idx in CHANNEL_INDEX.items()
        )
    return FidelityReport(
        psnr_db=psnr(a_arr, b_arr),
        max_abs_error=int(diff.max()),
        mean_abs_error=float(diff.mean()),
        channels=channels,
    )


def channel_diff(a, b, channel: str = "blue", gain: int = 1) -> NDArray[np.uint8]:
    """Absolute per-pixel difference of one channel, amplified for viewing.

    The result saturates at 255; callers that persist it should record the
    gain alongside (the CLI stores it in the PNG metadata).
    """
    if channel not in CHANNEL_INDEX:
        raise ParameterError(f"channel must be one of {sorted(CHANNEL_INDEX)}, got {channel!r}")
    if gain < 1:
        raise ParameterError(f"gain must be >= 1, got {gain!r}")
    a_arr = np.asarray(a)
    b_arr = np.asarray(b)
    if a_arr.shape != b_arr.shape:
        raise ParameterError(f"image shapes differ: {a_arr.shape} vs {b_arr.shape}")
    if a_arr.ndim != 3 or a_arr.shape[2] != 3:
        raise ParameterError(f"expected (H, W, 3) color images, got shape {a_arr.shape}")
    idx = CHANNEL_INDEX[channel]
    diff = np.abs(a_arr[..., idx].astype(np.int32) - b_arr[..., idx].astype(np.int32))
    return np.clip(diff * int(gain), 0, 255).astype(np.uint8)


@dataclass(frozen=True)
class PlaneDeltaStats:
    """Per-block bit-count deltas for one bit plane, in luma units."""

    plane_index: int
    weight: int
    total_blocks: int
    changed_blocks: int
    zero_delta: int   # changed blocks whose bit count is preserved
    plus_delta: int   # blocks with delta = +weight
    minus_delta: int  # blocks with delta = -weight


@dataclass(frozen=True)
class BrightnessReport:
    block_size: int
    planes: tuple[PlaneDeltaStats, ...]

    @property
    def changed_blocks(self) -> int:
        return sum(p.changed_blocks for p in self.planes)

    @property
    def zero_delta_fraction(self) -> float:
        """Fraction of modified blocks with zero net brightness change (1.0 if none changed)."""
        changed = self.changed_blocks
        if changed == 0:
            return 1.0
        return sum(p.zero_delta for p in self.planes) / changed

    def as_text(self) -> str:
        lines = [
            f"block-size: {self.block_size}",
            f"changed-blocks: {self.changed_blocks}",
            f"zero-delta-fraction: {self.zero_delta_fraction:.6f}",
        ]
        for p in self.planes:
            lines.append(
                f"plane-{p.plane_index}: weight={p.weight} blocks={p.total_blocks} "
                f"changed={p.changed_blocks} zero={p.zero_delta} "
                f"plus={p.plus_delta} minus={p.minus_delta}"
            )
        return "\n".join(lines) + "\n"


def brightness_delta_stats(cover, stego, params: StegoParams) -> BrightnessReport:
    """Per-plane, per-block brightness deltas between a cover and its stego.

    For planes 1..params.planes, each full block contributes a bit-count
    delta; the parity code guarantees every delta lies in
    {-weight, 0, +weight} where weight = 2^(plane-1).
    """
    cover_arr = np.asarray(cover, dtype=np.uint8)
    stego_arr = np.asarray(stego, dtype=np.uint8)
    if cover_arr.shape != stego_arr.shape or cover_arr.ndim != 2:
        raise ParameterError(
            f"cover and stego must be equal-shaped planes, got {cover_arr.shape} vs {stego_arr.shape}"
        )
    size = params.block_size
    rows = cover_arr.shape[0] // size
    cols = cover_arr.shape[1] // size
    stats = []
    for plane_index in range(1, params.planes + 1):
        cover_bits = bitplane.extract_plane(cover_arr, plane_index)
        stego_bits = bitplane.extract_plane(stego_arr, plane_index)
        crop_h, crop_w = rows * size, cols * size
        cb = cover_bits[:crop_h, :crop_w].reshape(rows, size, cols, size)
        sb = stego_bits[:crop_h, :crop_w].reshape(rows, size, cols, size)
        deltas = sb.sum(axis=(1, 3), dtype=np.int64) - cb.sum(axis=(1, 3), dtype=np.int64)
        changed = (sb != cb).any(axis=(1, 3))
        stats.append(
            PlaneDeltaStats(
                plane_index=plane_index,
                weight=bitplane.plane_weight(plane_index),
                total_blocks=rows * cols,
                changed_blocks=int(changed.sum()),
                zero_delta=int((changed & (deltas == 0)).sum()),
                plus_delta=int((deltas > 0).sum()),
                minus_delta=int((deltas < 0).sum()),
            )
        )
    return BrightnessReport(block_size=size, planes=tuple(stats))
