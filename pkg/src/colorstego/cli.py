"""Command-line interface.

Subcommands cover the whole workflow: keygen, embed, extract, corrupt-key,
metrics, package-beta, verify-beta. Every command exits 0 on success and
with a code from errors.py on failure, so scripts can tell parameter
errors, capacity shortfalls, digest mismatches, and I/O problems apart.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, beta, codec, colorspace, images, keying, metrics
from .errors import (
    EXIT_CAPACITY,
    EXIT_FAILURE,
    EXIT_IO,
    EXIT_KEY_MISMATCH,
    EXIT_OK,
    EXIT_PARAMETER,
    EXIT_TAMPERED_IMAGE,
    CapacityError,
    KeyfileError,
    KeyMismatchError,
    ParameterError,
    StegoError,
    TamperedImageError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colorstego",
        description="Hide an image's color inside its grayscale version and recover it with a key.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a keyfile sized for an image")
    p.add_argument("--width", type=int, required=True, help="carrier image width in pixels")
    p.add_argument("--height", type=int, required=True, help="carrier image height in pixels")
    p.add_argument("--u", type=int, default=codec.DEFAULT_DECIMATION, help="chroma decimation factor")
    p.add_argument("--h", type=int, default=codec.DEFAULT_BLOCK_SIZE, help="parity block size")
    p.add_argument("--planes", type=int, default=codec.DEFAULT_PLANES, help="bit planes used, lowest first")
    p.add_argument("--modulus", type=int, default=codec.DEFAULT_MODULUS, choices=codec.VALID_MODULI,
                   help="mask modulus (256 lossless, 255 legacy)")
    p.add_argument("--out", required=True, help="keyfile path to write")
    p.set_defaults(handler=cmd_keygen)

    p = sub.add_parser("embed", help="hide an image's color inside its grayscale version")
    p.add_argument("--in", dest="input", required=True, help="color input image (PNG/PPM)")
    p.add_argument("--key", required=True, help="keyfile path")
    p.add_argument("--out", required=True, help="stego grayscale PNG to write")
    p.set_defaults(handler=cmd_embed)

    p = sub.add_parser("extract", help="recover the color image from a stego grayscale")
    p.add_argument("--in", dest="input", required=True, help="stego grayscale image (PNG/PGM)")
    p.add_argument("--key", required=True, help="keyfile path")
    p.add_argument("--out", required=True, help="recovered color PNG to write")
    p.set_defaults(handler=cmd_extract)

    p = sub.add_parser("corrupt-key", help="flip random key bits for robustness experiments")
    p.add_argument("--key", required=True, help="keyfile to read")
    p.add_argument("--out", required=True, help="corrupted keyfile to write")
    p.add_argument("--fraction", type=float, required=True, help="fraction of byte positions to touch")
    p.add_argument("--seed", type=int, default=0, help="deterministic corruption seed")
    p.set_defaults(handler=cmd_corrupt_key)

    p = sub.add_parser("metrics", help="compare two images")
    p.add_argument("--a", required=True, help="first image")
    p.add_argument("--b", required=True, help="second image")
    p.add_argument("--channel", default="blue", choices=sorted(metrics.CHANNEL_INDEX),
                   help="channel for the difference image")
    p.add_argument("--diff-out", dest="diff_out", help="write an amplified channel difference PNG")
    p.add_argument("--gain", type=int, default=metrics.DEFAULT_DIFF_GAIN,
                   help="amplification for the difference image")
    p.set_defaults(handler=cmd_metrics)

    p = sub.add_parser("package-beta", help="build a distributable stego package")
    p.add_argument("--in", dest="input", required=True, help="color input image")
    p.add_argument("--key", required=True, help="keyfile path")
    p.add_argument("--outdir", required=True, help="package directory to create")
    p.set_defaults(handler=cmd_package_beta)

    p = sub.add_parser("verify-beta", help="verify a package and recover the color image")
    p.add_argument("--package", required=True, help="package directory")
    p.add_argument("--key", required=True, help="candidate keyfile")
    p.add_argument("--out", default="recovered.png",
                   help="where to write the recovered color image (default: ./recovered.png)")
    p.set_defaults(handler=cmd_verify_beta)

    return parser


def _print_capacity_summary(width: int, height: int, params: codec.StegoParams) -> None:
    wc, hc = codec.chroma_dims(width, height, params.decimation)
    payload = codec.payload_bits(width, height, params.decimation)
    cap = codec.capacity(width, height, params.planes, params.block_size)
    minimum = codec.required_planes(width, height, params.block_size, params.decimation)
    print(f"chroma: {wc}x{hc} samples (decimation {params.decimation})")
    print(f"payload-bits: {payload}")
    print(f"capacity-bits: {cap} (planes={params.planes}, block={params.block_size})")
    print(f"min-planes: {minimum if minimum is not None else 'none (payload never fits)'}")
    if payload > cap:
        if minimum is not None:
            print(f"warning: capacity at planes={params.planes} is insufficient; "
                  f"use --planes {minimum}")
        else:
            print("warning: payload does not fit even with all 8 planes; increase --u")


def cmd_keygen(args) -> int:
    params = codec.StegoParams(
        planes=args.planes, block_size=args.h, decimation=args.u, modulus=args.modulus
    )
    if args.width < 1 or args.height < 1:
        raise ParameterError("image dimensions must be positive")
    dims = codec.chroma_dims(args.width, args.height, params.decimation)
    key = keying.keygen(dims, params)
    keying.save_key(key, args.out)
    print(f"keyfile: {args.out} ({2 * dims[0] * dims[1]} key bytes)")
    _print_capacity_summary(args.width, args.height, params)
    return EXIT_OK


def cmd_embed(args) -> int:
    key = keying.load_key(args.key)
    img = images.load_color(args.input)
    stego = codec.embed(img, key)
    cover_luma = colorspace.rgb_to_yuv(img)[0]
    images.save_gray_png(stego, args.out)
    print(f"stego: {args.out}")
    print(f"psnr-luma-db: {metrics.psnr(cover_luma, stego)}")
    return EXIT_OK


def cmd_extract(args) -> int:
    key = keying.load_key(args.key)
    gray = images.load_gray(args.input)
    recovered = codec.extract(gray, key)
    images.save_color_png(recovered, args.out)
    print(f"recovered: {args.out}")
    return EXIT_OK


def cmd_corrupt_key(args) -> int:
    key = keying.load_key(args.key)
    corrupted = keying.corrupt_key(key, args.fraction, args.seed)
    keying.save_key(corrupted, args.out)
    touched = int((corrupted.data != key.data).sum())
    print(f"corrupted-key: {args.out} (changed {touched} of {len(key)} bytes)")
    return EXIT_OK


def cmd_metrics(args) -> int:
    a = images.load_color(args.a)
    b = images.load_color(args.b)
    report = metrics.compare_images(a, b)
    sys.stdout.write(report.as_text())
    if args.diff_out:
        diff = metrics.channel_diff(a, b, channel=args.channel, gain=args.gain)
        images.save_gray_png(
            diff, args.diff_out,
            metadata={"diff-channel": args.channel, "diff-gain": str(args.gain)},
        )
        print(f"diff-image: {args.diff_out}")
        print(f"diff-channel: {args.channel}")
        print(f"diff-gain: {args.gain}")
    return EXIT_OK


def cmd_package_beta(args) -> int:
    key = keying.load_key(args.key)
    img = images.load_color(args.input)
    stego_path = beta.write_package(img, key, args.outdir)
    print(f"package: {args.outdir}")
    print(f"stego: {stego_path}")
    print(f"manifest: {beta.MANIFEST_NAME}")
    return EXIT_OK


def cmd_verify_beta(args) -> int:
    recovered = beta.verify_package(args.package, args.key)
    images.save_color_png(recovered, args.out)
    print("verify: ok")
    print(f"recovered: {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except TamperedImageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TAMPERED_IMAGE
    except KeyMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_KEY_MISMATCH
    except (ParameterError, KeyfileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except StegoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
