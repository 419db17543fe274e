"""Image file reading and writing.

Reads PNG and binary PPM/PGM; always writes PNG. The stego image must
travel through a lossless channel: any lossy re-encode (JPEG, WebP lossy,
resizing) destroys the bit planes and with them the hidden color.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from PIL import Image
from PIL.PngImagePlugin import PngInfo

from .errors import ParameterError

_ALLOWED_SUFFIXES = (".png", ".ppm", ".pgm", ".pnm")


def _open(path) -> Image.Image:
    try:
        return Image.open(path)
    except Image.UnidentifiedImageError as exc:
        raise ParameterError(f"{path}: not a recognized PNG/PPM/PGM image") from exc


def load_color(path) -> NDArray[np.uint8]:
    """Read an image file as an (H, W, 3) uint8 RGB array."""
    with _open(path) as img:
        rgb = img.convert("RGB")
        return np.asarray(rgb, dtype=np.uint8)


def load_gray(path) -> NDArray[np.uint8]:
    """Read a grayscale image file as an (H, W) uint8 array.

    Color files are accepted only when all three channels are identical;
    anything else would silently re-derive luma and corrupt the payload.
    """
    with _open(path) as img:
        if img.mode in ("L", "1", "I", "I;16", "P"):
            return np.asarray(img.convert("L"), dtype=np.uint8)
        if img.mode in ("RGB", "RGBA"):
            arr = np.asarray(img.convert("RGB"), dtype=np.uint8)
            if np.array_equal(arr[..., 0], arr[..., 1]) and np.array_equal(arr[..., 0], arr[..., 2]):
                return arr[..., 0].copy()
            raise ParameterError(f"{path}: color image where a grayscale stego image is required")
        raise ParameterError(f"{path}: unsupported image mode {img.mode!r}")


def save_gray_png(arr, path, metadata: dict[str, str] | None = None) -> None:
    data = np.asarray(arr, dtype=np.uint8)
    if data.ndim != 2:
        raise ParameterError(f"expected an (H, W) grayscale array, got shape {data.shape}")
    info = None
    if metadata:
        info = PngInfo()
        for key, value in metadata.items():
            info.add_text(key, value)
    Image.fromarray(data, mode="L").save(path, format="PNG", pnginfo=info)


def save_color_png(arr, path) -> None:
    data = np.asarray(arr, dtype=np.uint8)
    if data.ndim != 3 or data.shape[2] != 3:
        raise ParameterError(f"expected an (H, W, 3) color array, got shape {data.shape}")
    Image.fromarray(data, mode="RGB").save(path, format="PNG")


def png_text(path) -> dict[str, str]:
    """Text metadata stored in a PNG file (empty for other formats)."""
    with _open(path) as img:
        return dict(getattr(img, "text", {}) or {})
