"""RGB <-> YUV conversion and chrominance decimation.

The luminance/chrominance split uses the full-range BT.601 weights
(0.299, 0.587, 0.114) with offset-128 scaled difference channels, so a
neutral gray pixel maps to U = V = 128 exactly. All conversions quantize
with round-half-away-from-zero followed by clamping to 0..255, which keeps
results identical across platforms.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .errors import ParameterError

LUMA_RED = 0.299
LUMA_GREEN = 0.587
LUMA_BLUE = 0.114

# Scale factors that map the B-Y / R-Y differences onto 0..255 around 128.
_U_SCALE = 0.5 / (1.0 - LUMA_BLUE)
_V_SCALE = 0.5 / (1.0 - LUMA_RED)


def _quantize(values: NDArray[np.floating]) -> NDArray[np.uint8]:
    rounded = np.sign(values) * np.floor(np.abs(values) + 0.5)
    return np.clip(rounded, 0.0, 255.0).astype(np.uint8)


def _as_color(img) -> NDArray[np.uint8]:
    arr = np.asarray(img, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ParameterError(f"expected an (H, W, 3) color image, got shape {arr.shape}")
    return arr


def _as_plane(plane) -> NDArray[np.uint8]:
    arr = np.asarray(plane, dtype=np.uint8)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ParameterError(f"expected an (H, W) sample plane, got shape {arr.shape}")
    return arr


def rgb_to_yuv(img) -> tuple[NDArray[np.uint8], NDArray[np.uint8], NDArray[np.uint8]]:
    """Split an 8-bit RGB image into luma Y and offset-128 chroma planes U, V.

    Gray pixels (R = G = B = c) map exactly to Y = c, U = V = 128.
    """
    arr = _as_color(img)
    r = arr[..., 0].astype(np.float64)
    g = arr[..., 1].astype(np.float64)
    b = arr[..., 2].astype(np.float64)
    y = LUMA_RED * r + LUMA_GREEN * g + LUMA_BLUE * b
    u = (b - y) * _U_SCALE + 128.0
    v = (r - y) * _V_SCALE + 128.0
    return _quantize(y), _quantize(u), _quantize(v)


def yuv_to_rgb(y, u, v) -> NDArray[np.uint8]:
    """Inverse of :func:`rgb_to_yuv`; all three planes must share dimensions."""
    y_arr = _as_plane(y)
    u_arr = _as_plane(u)
    v_arr = _as_plane(v)
    if not (y_arr.shape == u_arr.shape == v_arr.shape):
        raise ParameterError(
            f"plane dimensions differ: Y {y_arr.shape}, U {u_arr.shape}, V {v_arr.shape}"
        )
    yf = y_arr.astype(np.float64)
    ud = u_arr.astype(np.float64) - 128.0
    vd = v_arr.astype(np.float64) - 128.0
    r = yf + (2.0 - 2.0 * LUMA_RED) * vd
    b = yf + (2.0 - 2.0 * LUMA_BLUE) * ud
    g = (yf - LUMA_RED * r - LUMA_BLUE * b) / LUMA_GREEN
    return np.stack([_quantize(r), _quantize(g), _quantize(b)], axis=-1)


def decimate_chroma(plane, factor: int) -> NDArray[np.uint8]:
    """Downsample a chroma plane by averaging each ``factor`` x ``factor`` tile.

    Output dimensions are ceil(W/factor) x ceil(H/factor). Tiles that run
    past the right/bottom edge are completed by edge replication before
    averaging, so border means are unbiased. Averages are computed in
    integer arithmetic and rounded half away from zero.
    """
    arr = _as_plane(plane)
    if not isinstance(factor, int) or factor < 1:
        raise ParameterError(f"decimation factor must be a positive integer, got {factor!r}")
    if factor == 1:
        return arr.copy()
    height, width = arr.shape
    out_h = -(-height // factor)
    out_w = -(-width // factor)
    padded = np.pad(arr, ((0, out_h * factor - height), (0, out_w * factor - width)), mode="edge")
    sums = padded.reshape(out_h, factor, out_w, factor).sum(axis=(1, 3), dtype=np.int64)
    denom = factor * factor
    return ((2 * sums + denom) // (2 * denom)).astype(np.uint8)


def upsample_chroma(plane, factor: int, target_width: int, target_height: int) -> NDArray[np.uint8]:
    """Expand a decimated plane back to full size by nearest-neighbor replication.

    ``output[y, x] = plane[y // factor, x // factor]``. Replication (rather
    than interpolation) makes decimate(upsample(p)) the exact identity.
    """
    arr = _as_plane(plane)
    if not isinstance(factor, int) or factor < 1:
        raise ParameterError(f"decimation factor must be a positive integer, got {factor!r}")
    if target_width < 1 or target_height < 1:
        raise ParameterError("target dimensions must be at least 1x1")
    expect = (-(-target_height // factor), -(-target_width // factor))
    if arr.shape != expect:
        raise ParameterError(
            f"plane shape {arr.shape} does not match ceil({target_height}/{factor}) x "
            f"ceil({target_width}/{factor}) = {expect}"
        )
    up = np.repeat(np.repeat(arr, factor, axis=0), factor, axis=1)
    return up[:target_height, :target_width].copy()
