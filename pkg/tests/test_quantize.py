import numpy as np
import pytest

from imbaclust.quantize import (Divisive, Flat, count_colors, flatten, quantize, read_image,
                                read_ppm, strip_border, unflatten, write_image, write_ppm)


def two_color(h=64, w=64, seed=0):
    rng = np.random.default_rng(seed)
    img = np.empty((h, w, 3), dtype=np.uint8)
    img[:] = (200, 30, 40)
    img[rng.random((h, w)) < 0.3] = (10, 220, 90)
    return img


def test_flatten_round_trip():
    img = np.random.default_rng(0).integers(0, 256, (2, 3, 3), dtype=np.uint8)
    pts = flatten(img)
    assert pts.shape == (6, 3)
    assert pts[1].tolist() == img[0, 1].tolist()
    assert np.array_equal(unflatten(pts, 2, 3), img)
    assert np.all(flatten(np.zeros((2, 2, 3), np.uint8)) == 0)
    with pytest.raises(ValueError):
        flatten(np.zeros((2, 2)))


def test_two_colors_exact():
    img = two_color()
    for method in ("approx-on-coreset", "kmeans"):
        assert np.array_equal(quantize(img, Flat(2, method), rng=0), img)


def test_flat_k1_is_mean_color():
    img = two_color(16, 16)
    out = quantize(img, Flat(1, "kmeans"), rng=0)
    mean = np.clip(np.rint(flatten(img).mean(axis=0)), 0, 255)
    assert count_colors(out) == 1 and out[0, 0].tolist() == mean.tolist()


def test_divisive_palette_and_border():
    img = np.random.default_rng(1).integers(0, 256, (40, 50, 3), dtype=np.uint8)
    out = quantize(img, Divisive(4), border_strip=2, rng=0)
    assert out.shape == (36, 46, 3)
    assert count_colors(out) <= 16
    flat = quantize(img, Flat(5, "kmeans"), rng=0)
    assert count_colors(flat) <= 5


def test_requantizing_is_stable():
    img = np.random.default_rng(2).integers(0, 256, (30, 30, 3), dtype=np.uint8)
    once = quantize(img, Flat(4, "kmeans"), rng=0)
    twice = quantize(once, Flat(4, "kmeans"), rng=0)
    assert np.array_equal(once, twice)


def test_border_errors():
    img = two_color(4, 4)
    assert strip_border(img, 0).shape == (4, 4, 3)
    with pytest.raises(ValueError):
        strip_border(img, 2)
    with pytest.raises(ValueError):
        strip_border(img, -1)


def test_image_io(tmp_path):
    img = np.random.default_rng(3).integers(0, 256, (7, 5, 3), dtype=np.uint8)
    for name in ("a.png", "a.ppm"):
        write_image(tmp_path / name, img)
        assert np.array_equal(read_image(tmp_path / name), img)
    write_ppm(tmp_path / "b.ppm", img)
    assert np.array_equal(read_ppm(tmp_path / "b.ppm"), img)
    (tmp_path / "c.ppm").write_bytes(b"P6\n# comment\n2 1\n15\n" + bytes([15, 0, 0, 0, 15, 0]))
    assert read_ppm(tmp_path / "c.ppm").tolist() == [[[255, 0, 0], [0, 255, 0]]]
    (tmp_path / "bad.ppm").write_bytes(b"P3\n1 1\n255\n0 0 0\n")
    with pytest.raises(ValueError):
        read_ppm(tmp_path / "bad.ppm")
