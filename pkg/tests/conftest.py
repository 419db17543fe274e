import numpy as np
import pytest

from colorstego import StegoParams, KeyMatrix, chroma_dims


def make_natural_image(width=256, height=256):
    """Deterministic synthetic photo stand-in: gradients, bands, and disks."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    r = 255.0 * xx / max(width - 1, 1)
    g = 127.5 + 127.5 * np.sin(2 * np.pi * (xx + yy) / 96.0)
    b = 255.0 * yy / max(height - 1, 1)
    img = np.stack([r, g, b], axis=-1)
    cx, cy = width * 0.35, height * 0.4
    disk = (xx - cx) ** 2 + (yy - cy) ** 2 < (min(width, height) * 0.18) ** 2
    img[disk] = [220.0, 60.0, 40.0]
    cx2, cy2 = width * 0.7, height * 0.65
    disk2 = (xx - cx2) ** 2 + (yy - cy2) ** 2 < (min(width, height) * 0.12) ** 2
    img[disk2] = [30.0, 160.0, 210.0]
    return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def make_key(width, height, params=None, rng=None, data=None):
    """Key sized for an image, with test-controlled (seeded) bytes."""
    params = params or StegoParams()
    wc, hc = chroma_dims(width, height, params.decimation)
    n = 2 * wc * hc
    if data is None:
        rng = rng or np.random.default_rng(0)
        data = rng.integers(0, params.modulus, size=n, dtype=np.int64).astype(np.uint8)
    else:
        data = np.asarray(data, dtype=np.uint8)
    return KeyMatrix(data=data, chroma_width=wc, chroma_height=hc, params=params)


def zero_key(width, height, params=None):
    params = params or StegoParams()
    wc, hc = chroma_dims(width, height, params.decimation)
    return make_key(width, height, params, data=np.zeros(2 * wc * hc, dtype=np.uint8))


@pytest.fixture
def natural_image():
    return make_natural_image()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
