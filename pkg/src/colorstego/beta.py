"""Distribution packaging: ship a grayscale preview whose color is locked.

A package directory holds exactly two files: the stego PNG and a manifest.
The manifest pins the stego pixel bytes (so tampering is detectable) and
commits to the keyfile via its digest (so the key delivered later can be
authenticated against the package already in hand). The color original and
the keyfile themselves never enter the package.
"""

from __future__ import annotations

import hashlib
import os

import numpy as np
from numpy.typing import NDArray

from . import codec, images, keying
from .errors import KeyMismatchError, ParameterError, TamperedImageError

MANIFEST_NAME = "manifest.txt"
STEGO_NAME = "stego.png"
MANIFEST_VERSION = 1

# Field order is fixed; manifests must serialize byte-identically for the
# same contents.
_MANIFEST_FIELDS = ("version", "image", "image-sha256", "width", "height", "layout", "key-sha256")


def pixel_digest(gray: NDArray[np.uint8]) -> str:
    """SHA-256 of the raw stego pixel buffer (not of the PNG encoding)."""
    arr = np.ascontiguousarray(np.asarray(gray, dtype=np.uint8))
    return hashlib.sha256(arr.tobytes()).hexdigest()


def key_digest(keyfile_bytes: bytes) -> str:
    return hashlib.sha256(keyfile_bytes).hexdigest()


def format_manifest(fields: dict[str, str]) -> str:
    missing = [name for name in _MANIFEST_FIELDS if name not in fields]
    if missing:
        raise ParameterError(f"manifest is missing fields: {missing}")
    return "".join(f"{name}: {fields[name]}\n" for name in _MANIFEST_FIELDS)


def parse_manifest(text: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if ": " not in line:
            raise ParameterError(f"manifest line {lineno} is not a 'key: value' pair: {line!r}")
        name, value = line.split(": ", 1)
        fields[name] = value
    missing = [name for name in _MANIFEST_FIELDS if name not in fields]
    if missing:
        raise ParameterError(f"manifest is missing fields: {missing}")
    return fields


def write_package(img, key: keying.KeyMatrix, outdir) -> str:
    """Embed the color image and emit stego + manifest into ``outdir``.

    Returns the path of the stego PNG. The output directory receives only
    the stego image and the manifest.
    """
    stego = codec.embed(img, key)
    os.makedirs(outdir, exist_ok=True)
    stego_path = os.path.join(outdir, STEGO_NAME)
    images.save_gray_png(stego, stego_path)
    manifest = format_manifest(
        {
            "version": str(MANIFEST_VERSION),
            "image": STEGO_NAME,
            "image-sha256": pixel_digest(stego),
            "width": str(stego.shape[1]),
            "height": str(stego.shape[0]),
            "layout": str(key.params.layout_version),
            "key-sha256": key_digest(keying.serialize_key(key)),
        }
    )
    with open(os.path.join(outdir, MANIFEST_NAME), "w", encoding="utf-8", newline="\n") as handle:
        handle.write(manifest)
    return stego_path


def verify_package(package_dir, keyfile_path) -> NDArray[np.uint8]:
    """Check manifest digests, then extract and return the color image.

    Raises TamperedImageError when the stego pixels do not match the
    manifest, and KeyMismatchError when the candidate keyfile does not
    match the key commitment; in the latter case extraction is never
    attempted.
    """
    manifest_path = os.path.join(package_dir, MANIFEST_NAME)
    with open(manifest_path, "r", encoding="utf-8") as handle:
        fields = parse_manifest(handle.read())
    if fields["version"] != str(MANIFEST_VERSION):
        raise ParameterError(f"unsupported manifest version {fields['version']!r}")

    image_name = os.path.basename(fields["image"])
    stego = images.load_gray(os.path.join(package_dir, image_name))
    if (str(stego.shape[1]), str(stego.shape[0])) != (fields["width"], fields["height"]):
        raise TamperedImageError(
            f"stego image is {stego.shape[1]}x{stego.shape[0]} but the manifest says "
            f"{fields['width']}x{fields['height']}"
        )
    actual_pixels = pixel_digest(stego)
    if actual_pixels != fields["image-sha256"]:
        raise TamperedImageError("stego pixels do not match the manifest digest")

    with open(keyfile_path, "rb") as handle:
        candidate = handle.read()
    if key_digest(candidate) != fields["key-sha256"]:
        raise KeyMismatchError("keyfile does not match the package's key commitment")

    key = keying.deserialize_key(candidate)
    if str(key.params.layout_version) != fields["layout"]:
        raise ParameterError(
            f"manifest layout {fields['layout']!r} disagrees with keyfile layout "
            f"{key.params.layout_version}"
        )
    return codec.extract(stego, key)
