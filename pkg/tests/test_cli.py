import os

import numpy as np
import pytest

from colorstego import StegoParams, extract, load_key, save_key
from colorstego.cli import build_parser, main
from colorstego.errors import (
    EXIT_CAPACITY,
    EXIT_IO,
    EXIT_KEY_MISMATCH,
    EXIT_OK,
    EXIT_PARAMETER,
    EXIT_TAMPERED_IMAGE,
)
from colorstego.images import load_color, load_gray, png_text, save_color_png, save_gray_png

from conftest import make_key, make_natural_image


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def workspace(tmp_path):
    img = make_natural_image(64, 64)
    color_path = tmp_path / "color.png"
    save_color_png(img, color_path)
    key_path = tmp_path / "key.bin"
    assert run("keygen", "--width", 64, "--height", 64, "--out", key_path) == EXIT_OK
    return tmp_path, img, color_path, key_path


class TestKeygen:
    def test_writes_keyfile_with_expected_size(self, tmp_path):
        out = tmp_path / "k.key"
        assert run("keygen", "--width", 512, "--height", 512, "--u", 4, "--h", 2,
                   "--planes", 4, "--out", out) == EXIT_OK
        key = load_key(out)
        assert len(key) == 2 * 128 * 128
        assert key.params == StegoParams(planes=4, block_size=2, decimation=4)

    def test_summary_shows_capacity_equality(self, tmp_path, capsys):
        run("keygen", "--width", 512, "--height", 512, "--out", tmp_path / "k.key")
        out = capsys.readouterr().out
        assert "payload-bits: 262144" in out
        assert "capacity-bits: 262144" in out
        assert "min-planes: 4" in out

    def test_insufficient_planes_warns_with_suggestion(self, tmp_path, capsys):
        code = run("keygen", "--width", 512, "--height", 512, "--planes", 3,
                   "--out", tmp_path / "k.key")
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "warning" in out
        assert "--planes 4" in out

    def test_block_size_one_is_a_parameter_error(self, tmp_path):
        assert run("keygen", "--width", 64, "--height", 64, "--h", 1,
                   "--out", tmp_path / "k.key") == EXIT_PARAMETER


class TestEmbedExtract:
    def test_round_trip_through_files(self, workspace, capsys):
        tmp_path, img, color_path, key_path = workspace
        stego_path = tmp_path / "stego.png"
        out_path = tmp_path / "back.png"
        assert run("embed", "--in", color_path, "--key", key_path, "--out", stego_path) == EXIT_OK
        assert "psnr-luma-db:" in capsys.readouterr().out
        assert run("extract", "--in", stego_path, "--key", key_path, "--out", out_path) == EXIT_OK
        recovered = load_color(out_path)
        expected = extract(load_gray(stego_path), load_key(key_path))
        assert np.array_equal(recovered, expected)

    def test_mismatched_key_dims_leaves_no_output(self, workspace, tmp_path):
        _, _, color_path, _ = workspace
        wrong_key = tmp_path / "wrong.key"
        run("keygen", "--width", 128, "--height", 128, "--out", wrong_key)
        stego_path = tmp_path / "never.png"
        assert run("embed", "--in", color_path, "--key", wrong_key,
                   "--out", stego_path) == EXIT_PARAMETER
        assert not stego_path.exists()

    def test_capacity_error_exit_code(self, tmp_path):
        img = make_natural_image(64, 64)
        color_path = tmp_path / "c.png"
        save_color_png(img, color_path)
        key_path = tmp_path / "k3.key"
        run("keygen", "--width", 64, "--height", 64, "--planes", 3, "--out", key_path)
        assert run("embed", "--in", color_path, "--key", key_path,
                   "--out", tmp_path / "s.png") == EXIT_CAPACITY

    def test_missing_input_is_io_error(self, workspace, tmp_path):
        _, _, _, key_path = workspace
        assert run("embed", "--in", tmp_path / "absent.png", "--key", key_path,
                   "--out", tmp_path / "s.png") == EXIT_IO


class TestCorruptKey:
    def test_zero_fraction_keeps_bytes(self, workspace, tmp_path):
        _, _, _, key_path = workspace
        out = tmp_path / "same.key"
        assert run("corrupt-key", "--key", key_path, "--out", out,
                   "--fraction", 0, "--seed", 5) == EXIT_OK
        assert np.array_equal(load_key(out).data, load_key(key_path).data)

    def test_full_fraction_touches_all(self, workspace, tmp_path):
        _, _, _, key_path = workspace
        out = tmp_path / "diff.key"
        assert run("corrupt-key", "--key", key_path, "--out", out,
                   "--fraction", 1, "--seed", 5) == EXIT_OK
        assert np.all(load_key(out).data != load_key(key_path).data)

    def test_deterministic(self, workspace, tmp_path):
        _, _, _, key_path = workspace
        a, b = tmp_path / "a.key", tmp_path / "b.key"
        run("corrupt-key", "--key", key_path, "--out", a, "--fraction", 0.2, "--seed", 9)
        run("corrupt-key", "--key", key_path, "--out", b, "--fraction", 0.2, "--seed", 9)
        assert a.read_bytes() == b.read_bytes()


class TestMetrics:
    def test_identical_images(self, workspace, capsys):
        _, _, color_path, _ = workspace
        assert run("metrics", "--a", color_path, "--b", color_path) == EXIT_OK
        assert "psnr-db: inf" in capsys.readouterr().out

    def test_diff_image_records_gain(self, workspace, tmp_path, capsys):
        tmp, img, color_path, _ = workspace
        other = img.copy()
        other[..., 2] ^= 2
        other_path = tmp_path / "other.png"
        save_color_png(other, other_path)
        diff_path = tmp_path / "diff.png"
        assert run("metrics", "--a", color_path, "--b", other_path,
                   "--channel", "blue", "--diff-out", diff_path) == EXIT_OK
        out = capsys.readouterr().out
        assert "diff-gain: 32" in out
        meta = png_text(diff_path)
        assert meta["diff-gain"] == "32"
        assert meta["diff-channel"] == "blue"

    def test_dimension_mismatch(self, workspace, tmp_path):
        _, _, color_path, _ = workspace
        small = tmp_path / "small.png"
        save_color_png(make_natural_image(32, 32), small)
        assert run("metrics", "--a", color_path, "--b", small) == EXIT_PARAMETER


class TestBetaWorkflow:
    def test_package_then_verify(self, workspace, tmp_path):
        _, img, color_path, key_path = workspace
        pkg = tmp_path / "pkg"
        assert run("package-beta", "--in", color_path, "--key", key_path,
                   "--outdir", pkg) == EXIT_OK
        assert sorted(os.listdir(pkg)) == ["manifest.txt", "stego.png"]
        recovered_path = tmp_path / "rec.png"
        assert run("verify-beta", "--package", pkg, "--key", key_path,
                   "--out", recovered_path) == EXIT_OK
        assert recovered_path.exists()
        # the recovered file lands outside the package directory
        assert sorted(os.listdir(pkg)) == ["manifest.txt", "stego.png"]

    def test_wrong_key_exit_code(self, workspace, tmp_path):
        _, _, color_path, key_path = workspace
        pkg = tmp_path / "pkg"
        run("package-beta", "--in", color_path, "--key", key_path, "--outdir", pkg)
        other = tmp_path / "other.key"
        save_key(make_key(64, 64, rng=np.random.default_rng(42)), other)
        assert run("verify-beta", "--package", pkg, "--key", other,
                   "--out", tmp_path / "r.png") == EXIT_KEY_MISMATCH

    def test_tampered_image_exit_code(self, workspace, tmp_path):
        _, _, color_path, key_path = workspace
        pkg = tmp_path / "pkg"
        run("package-beta", "--in", color_path, "--key", key_path, "--outdir", pkg)
        stego = load_gray(pkg / "stego.png").copy()
        stego[5, 5] ^= 4
        save_gray_png(stego, pkg / "stego.png")
        assert run("verify-beta", "--package", pkg, "--key", key_path,
                   "--out", tmp_path / "r.png") == EXIT_TAMPERED_IMAGE


class TestParserSurface:
    def test_extract_takes_no_original_image_flag(self):
        parser = build_parser()
        sub = next(
            a for a in parser._actions
            if getattr(a, "choices", None) and "extract" in a.choices
        )
        extract_parser = sub.choices["extract"]
        flags = {s for action in extract_parser._actions for s in action.option_strings}
        assert flags == {"-h", "--help", "--in", "--key", "--out"}

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0
        assert "colorstego" in capsys.readouterr().out
