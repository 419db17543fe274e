"""End-to-end embed/extract pipelines and capacity accounting.

The payload is the image's own chrominance: both decimated chroma planes
are serialized row-major (U first, then V), masked byte-wise with the
secret key, and the resulting message bits are written MSB-first into the
block parities of the luma bit planes, lowest plane first. Extraction is
blind: it reads parities from the stego image alone, unmasks with the key,
and rebuilds the color image from the stego luma plus the recovered
chroma.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import bitplane, colorspace
from .errors import CapacityError, ParameterError

DEFAULT_PLANES = 4
DEFAULT_BLOCK_SIZE = 2
DEFAULT_DECIMATION = 4
DEFAULT_MODULUS = 256
LAYOUT_VERSION = 1

VALID_MODULI = (255, 256)


@dataclass(frozen=True)
class StegoParams:
    """Embedding configuration.

    planes: how many luma bit planes carry payload, lowest first (1..8).
    block_size: side length of the parity blocks (>= 2).
    decimation: chroma downsampling factor (>= 1).
    modulus: 256 for a lossless byte mask; 255 for compatibility with the
        original formulation, where chroma value 255 aliases to 0.
    layout_version: serialization order identifier.
    """

    planes: int = DEFAULT_PLANES
    block_size: int = DEFAULT_BLOCK_SIZE
    decimation: int = DEFAULT_DECIMATION
    modulus: int = DEFAULT_MODULUS
    layout_version: int = LAYOUT_VERSION

    def __post_init__(self):
        if not isinstance(self.planes, int) or not 1 <= self.planes <= 8:
            raise ParameterError(f"planes must be in 1..8, got {self.planes!r}")
        if not isinstance(self.block_size, int) or self.block_size < bitplane.MIN_BLOCK_SIZE:
            raise ParameterError(
                f"block size must be an integer >= {bitplane.MIN_BLOCK_SIZE}, got {self.block_size!r}"
            )
        if not isinstance(self.decimation, int) or self.decimation < 1:
            raise ParameterError(f"decimation must be a positive integer, got {self.decimation!r}")
        if self.modulus not in VALID_MODULI:
            raise ParameterError(f"modulus must be one of {VALID_MODULI}, got {self.modulus!r}")
        if self.layout_version != LAYOUT_VERSION:
            raise ParameterError(f"unsupported layout version {self.layout_version!r}")


def chroma_dims(width: int, height: int, decimation: int) -> tuple[int, int]:
    """Decimated chroma dimensions (Wc, Hc) for a carrier of the given size."""
    if width < 1 or height < 1 or decimation < 1:
        raise ParameterError("dimensions and decimation must be positive")
    return -(-width // decimation), -(-height // decimation)


def payload_bits(width: int, height: int, decimation: int, bit_depth: int = 8) -> int:
    """Message size in bits: two decimated chroma planes at ``bit_depth``."""
    wc, hc = chroma_dims(width, height, decimation)
    return 2 * wc * hc * bit_depth


def capacity(width: int, height: int, planes: int, block_size: int) -> int:
    """Bits embeddable in ``planes`` bit planes of a width x height carrier.

    Only full blocks carry payload, so each plane holds
    floor(width / block_size) * floor(height / block_size) bits.
    """
    if not 1 <= planes <= 8:
        raise ParameterError(f"planes must be in 1..8, got {planes!r}")
    if block_size < bitplane.MIN_BLOCK_SIZE:
        raise ParameterError(f"block size must be >= {bitplane.MIN_BLOCK_SIZE}")
    if width < 1 or height < 1:
        raise ParameterError("image dimensions must be positive")
    return (width // block_size) * (height // block_size) * planes


def required_planes(
    width: int, height: int, block_size: int, decimation: int, bit_depth: int = 8
) -> int | None:
    """Smallest plane count whose capacity fits the chroma payload.

    Returns None when even eight planes are insufficient.
    """
    needed = payload_bits(width, height, decimation, bit_depth)
    per_plane = capacity(width, height, 1, block_size)
    if per_plane == 0:
        return None
    minimum = -(-needed // per_plane)
    return minimum if minimum <= 8 else None


def build_message(u_plane, v_plane, key) -> NDArray[np.uint8]:
    """Mask the serialized chroma stream with the key: M = (K + X) mod modulus.

    X is the U plane row-major followed by the V plane row-major. In
    modulus-255 mode chroma samples are first reduced mod 255 (255 -> 0).
    """
    u_arr = np.asarray(u_plane, dtype=np.uint8)
    v_arr = np.asarray(v_plane, dtype=np.uint8)
    stream = np.concatenate([u_arr.ravel(), v_arr.ravel()]).astype(np.uint16)
    key_bytes = np.asarray(key.data, dtype=np.uint16)
    if key_bytes.size != stream.size:
        raise ParameterError(
            f"key holds {key_bytes.size} bytes but the chroma stream needs {stream.size}"
        )
    modulus = key.modulus
    if modulus == 255:
        stream %= 255
    return ((key_bytes + stream) % modulus).astype(np.uint8)


def recover_chroma(message, key, dims: tuple[int, int]) -> tuple[NDArray[np.uint8], NDArray[np.uint8]]:
    """Invert :func:`build_message`: X' = (M - K + modulus) mod modulus.

    ``dims`` is (Wc, Hc); the unmasked stream is split back into the U and
    V planes. With modulus 256 this recovers the chroma bytes exactly;
    with modulus 255, an original sample of 255 comes back as 0.
    """
    msg = np.asarray(message, dtype=np.int32).ravel()
    key_bytes = np.asarray(key.data, dtype=np.int32)
    wc, hc = dims
    if wc < 1 or hc < 1:
        raise ParameterError(f"chroma dimensions must be positive, got {dims!r}")
    if msg.size != 2 * wc * hc:
        raise ParameterError(f"message holds {msg.size} bytes, expected {2 * wc * hc}")
    if key_bytes.size != msg.size:
        raise ParameterError(f"key holds {key_bytes.size} bytes, expected {msg.size}")
    modulus = key.modulus
    stream = ((msg - key_bytes + modulus) % modulus).astype(np.uint8)
    u_plane = stream[: wc * hc].reshape(hc, wc)
    v_plane = stream[wc * hc:].reshape(hc, wc)
    return u_plane, v_plane


def _resolve_params(key, params: StegoParams | None) -> StegoParams:
    if params is None:
        return key.params
    if params != key.params:
        raise ParameterError(
            f"explicit params {params} disagree with the key's params {key.params}"
        )
    return params


def _check_key_fits_image(width: int, height: int, key, params: StegoParams) -> None:
    expect = chroma_dims(width, height, params.decimation)
    actual = (key.chroma_width, key.chroma_height)
    if actual != expect:
        raise ParameterError(
            f"key is sized for chroma {actual[0]}x{actual[1]} but a {width}x{height} image "
            f"at decimation {params.decimation} needs {expect[0]}x{expect[1]}"
        )


def _write_plane_payload(plane_bits: NDArray[np.uint8], block_size: int, payload: NDArray[np.uint8]) -> None:
    """Set the parities of the first len(payload) blocks, row-major, in place."""
    parities = bitplane.block_parities(plane_bits, block_size)
    cols = parities.shape[1]
    mismatched = np.nonzero(parities.ravel()[: payload.size] != payload)[0]
    for flat in mismatched:
        top = (flat // cols) * block_size
        left = (flat % cols) * block_size
        bitplane._fix_parity(plane_bits[top:top + block_size, left:left + block_size])


def embed(img, key, params: StegoParams | None = None) -> NDArray[np.uint8]:
    """Produce the stego grayscale: luma of ``img`` with its color hidden inside.

    Message bits are consumed MSB-first, filling every block of plane 1
    row-major, then plane 2, and so on; trailing blocks of the last used
    plane stay untouched, as do all planes above ``params.planes``.
    """
    params = _resolve_params(key, params)
    arr = np.asarray(img, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ParameterError(f"expected an (H, W, 3) color image, got shape {arr.shape}")
    height, width = arr.shape[:2]
    _check_key_fits_image(width, height, key, params)

    luma, u_full, v_full = colorspace.rgb_to_yuv(arr)
    u_dec = colorspace.decimate_chroma(u_full, params.decimation)
    v_dec = colorspace.decimate_chroma(v_full, params.decimation)
    message = build_message(u_dec, v_dec, key)
    bits = np.unpackbits(message)

    available = capacity(width, height, params.planes, params.block_size)
    if bits.size > available:
        fit = required_planes(width, height, params.block_size, params.decimation)
        hint = f"; the payload fits at planes={fit}" if fit is not None else \
            "; the payload does not fit even at planes=8"
        raise CapacityError(
            f"payload of {bits.size} bits exceeds capacity {available} at "
            f"planes={params.planes}, block_size={params.block_size}{hint}",
            required_planes=fit,
        )

    stego = luma.copy()
    per_plane = capacity(width, height, 1, params.block_size)
    consumed = 0
    plane_index = 1
    while consumed < bits.size:
        take = min(per_plane, bits.size - consumed)
        plane = bitplane.extract_plane(stego, plane_index)
        _write_plane_payload(plane, params.block_size, bits[consumed:consumed + take])
        stego = bitplane.insert_plane(stego, plane_index, plane)
        consumed += take
        plane_index += 1
    return stego


def _checked_gray(gray, key, params: StegoParams) -> NDArray[np.uint8]:
    arr = np.asarray(gray, dtype=np.uint8)
    if arr.ndim != 2:
        raise ParameterError(f"expected an (H, W) grayscale image, got shape {arr.shape}")
    height, width = arr.shape
    _check_key_fits_image(width, height, key, params)
    total_bits = payload_bits(width, height, params.decimation)
    available = capacity(width, height, params.planes, params.block_size)
    if total_bits > available:
        raise CapacityError(
            f"a {width}x{height} carrier cannot hold {total_bits} payload bits at "
            f"planes={params.planes}, block_size={params.block_size}",
            required_planes=required_planes(width, height, params.block_size, params.decimation),
        )
    return arr


def _read_message(arr: NDArray[np.uint8], params: StegoParams) -> NDArray[np.uint8]:
    height, width = arr.shape
    total_bits = payload_bits(width, height, params.decimation)
    per_plane = capacity(width, height, 1, params.block_size)
    chunks = []
    consumed = 0
    plane_index = 1
    while consumed < total_bits:
        take = min(per_plane, total_bits - consumed)
        parities = bitplane.block_parities(
            bitplane.extract_plane(arr, plane_index), params.block_size
        )
        chunks.append(parities.ravel()[:take])
        consumed += take
        plane_index += 1
    return np.packbits(np.concatenate(chunks))


def extract_message(gray, key, params: StegoParams | None = None) -> NDArray[np.uint8]:
    """Read back the raw masked message bytes from a stego grayscale."""
    params = _resolve_params(key, params)
    arr = _checked_gray(gray, key, params)
    return _read_message(arr, params)


def extract(gray, key, params: StegoParams | None = None) -> NDArray[np.uint8]:
    """Blindly recover the color image from a stego grayscale and the key.

    Reads block parities in embed order, unmasks the chroma stream,
    upsamples it, and recombines it with the stego luma. Needs only the
    stego image, the key, and the parameters; never the original.
    """
    params = _resolve_params(key, params)
    arr = _checked_gray(gray, key, params)
    height, width = arr.shape
    message = _read_message(arr, params)
    wc, hc = chroma_dims(width, height, params.decimation)
    u_dec, v_dec = recover_chroma(message, key, (wc, hc))
    u_full = colorspace.upsample_chroma(u_dec, params.decimation, width, height)
    v_full = colorspace.upsample_chroma(v_dec, params.decimation, width, height)
    return colorspace.yuv_to_rgb(arr, u_full, v_full)
