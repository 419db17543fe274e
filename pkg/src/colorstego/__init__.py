"""colorstego: reversible color-to-grayscale steganography with a secret key.

Embed an image's own chrominance, masked by a random key, into the bit
planes of its luminance via a brightness-preserving block-parity code;
recover the color blindly from the grayscale alone given the key.
"""

__version__ = "0.1.0"

from .bitplane import (
    BitBlock,
    block_parities,
    block_parity,
    decode_block,
    encode_block,
    extract_plane,
    insert_plane,
    partition_blocks,
    plane_weight,
)
from .codec import (
    StegoParams,
    build_message,
    capacity,
    chroma_dims,
    embed,
    extract,
    extract_message,
    payload_bits,
    recover_chroma,
    required_planes,
)
from .colorspace import decimate_chroma, rgb_to_yuv, upsample_chroma, yuv_to_rgb
from .errors import (
    CapacityError,
    KeyfileError,
    KeyMismatchError,
    ParameterError,
    StegoError,
    TamperedImageError,
)
from .keying import KeyMatrix, corrupt_key, keygen, load_key, save_key, serialize_key
from .metrics import (
    BrightnessReport,
    FidelityReport,
    brightness_delta_stats,
    channel_diff,
    compare_images,
    psnr,
)

__all__ = [
    "BitBlock",
    "BrightnessReport",
    "CapacityError",
    "FidelityReport",
    "KeyMatrix",
    "KeyfileError",
    "KeyMismatchError",
    "ParameterError",
    "StegoError",
    "StegoParams",
    "TamperedImageError",
    "block_parities",
    "block_parity",
    "brightness_delta_stats",
    "build_message",
    "capacity",
    "channel_diff",
    "chroma_dims",
    "compare_images",
    "corrupt_key",
    "decimate_chroma",
    "decode_block",
    "embed",
    "encode_block",
    "extract",
    "extract_message",
    "extract_plane",
    "insert_plane",
    "keygen",
    "load_key",
    "partition_blocks",
    "payload_bits",
    "plane_weight",
    "psnr",
    "recover_chroma",
    "required_planes",
    "rgb_to_yuv",
    "save_key",
    "serialize_key",
    "upsample_chroma",
    "yuv_to_rgb",
]
