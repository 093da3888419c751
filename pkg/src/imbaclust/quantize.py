"""Image color quantization by clustering RGB pixels.

Pixels are treated as raw 0-255 points in R^3 (no gamma, no scaling). After
clustering, every pixel is repainted with its cluster's mean color, rounded
and clamped to [0, 255].
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import as_points, nearest
from .pipeline import SPLITTERS, divisive_tree, run_method
from .rng import make_rng


def check_image(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (height, width, 3) RGB array, got shape {arr.shape}")
    if arr.shape[0] * arr.shape[1] < 1:
        raise ValueError("image has no pixels")
    return arr.astype(np.uint8, copy=False)


def flatten(img) -> np.ndarray:
    """(h, w, 3) image -> (h*w, 3) float points, row-major."""
    img = check_image(img)
    return img.reshape(-1, 3).astype(np.float64)


def unflatten(points, height: int, width: int) -> np.ndarray:
    pts = np.clip(np.rint(np.asarray(points, dtype=np.float64)), 0, 255)
    return pts.reshape(height, width, 3).astype(np.uint8)


def strip_border(img, border: int) -> np.ndarray:
    img = check_image(img)
    if border < 0:
        raise ValueError("border_strip must be >= 0")
    h, w = img.shape[:2]
    if 2 * border >= h or 2 * border >= w:
        raise ValueError(f"stripping {border} pixels per edge leaves an empty {h}x{w} image")
    return img[border:h - border, border:w - border] if border else img


@dataclass(frozen=True)
class Flat:
    """Cluster all pixels into `k` groups with one of the pipeline methods."""

    k: int
    method: str = "approx-on-coreset"


@dataclass(frozen=True)
class Divisive:
    """Divisive binary tree of the given depth (at most 2**depth colors)."""

    depth: int
    splitter: str = "approx-on-coreset"


def _recolor(points: np.ndarray, labels: np.ndarray) -> np.ndarray:
    uniq, inv = np.unique(labels, return_inverse=True)
    counts = np.bincount(inv).astype(np.float64)
    sums = np.zeros((uniq.shape[0], points.shape[1]))
    np.add.at(sums, inv, points)
    palette = np.clip(np.rint(sums / counts[:, None]), 0, 255)
    return palette[inv]


def cluster_pixels(points: np.ndarray, method, rng=None) -> np.ndarray:
    """Cluster labels for flattened pixels."""
    points = as_points(points)
    rng = make_rng(rng)
    if isinstance(method, Flat):
        if method.k < 1:
            raise ValueError("k must be >= 1")
        distinct = np.unique(points, axis=0)
        if distinct.shape[0] <= method.k:
            # no more colors than clusters: each color is its own cluster
            return np.unique(points, axis=0, return_inverse=True)[1].reshape(-1)
        centers = run_method(method.method, points, method.k, rng)
        labels, _ = nearest(points, centers)
        return labels
    if isinstance(method, Divisive):
        if method.splitter not in SPLITTERS:
            raise ValueError(f"unknown splitter {method.splitter!r}")
        return divisive_tree(points, method.depth, method.splitter, rng).labels
    raise TypeError(f"unknown quantization method {method!r}")


def quantize(img, method, border_strip: int = 0, rng=None) -> np.ndarray:
    """Quantized copy of `img` (after removing `border_strip` pixels per edge)."""
    img = strip_border(img, border_strip)
    h, w = img.shape[:2]
    pts = flatten(img)
    labels = cluster_pixels(pts, method, rng)
    return unflatten(_recolor(pts, labels), h, w)


def count_colors(img) -> int:
    return int(np.unique(check_image(img).reshape(-1, 3), axis=0).shape[0])


# ------------------------------------------------------------------ image I/O

def _ppm_tokens(data: bytes, count: int):
    tokens, pos = [], 2
    while len(tokens) < count:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while data[pos:pos + 1] not in (b"\n", b"\r", b""):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(int(data[start:pos]))
    return tokens, pos + 1


def read_ppm(path) -> np.ndarray:
    """Binary PPM (P6), maxval <= 255."""
    data = Path(path).read_bytes()
    if data[:2] != b"P6":
        raise ValueError(f"{path}: not a binary PPM (P6) file")
    (width, height, maxval), start = _ppm_tokens(data, 3)
    if maxval > 255:
        raise ValueError(f"{path}: 16-bit PPM is not supported")
    raw = np.frombuffer(data, dtype=np.uint8, count=width * height * 3, offset=start)
    img = raw.reshape(height, width, 3)
    if maxval != 255:
        img = np.rint(img.astype(np.float64) * (255.0 / maxval)).astype(np.uint8)
    return img.copy()


def write_ppm(path, img) -> None:
    img = check_image(img)
    h, w = img.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())


def _is_ppm(path) -> bool:
    return Path(path).suffix.lower() in (".ppm", ".pnm")


def read_image(path) -> np.ndarray:
    """Read PNG (or anything Pillow opens) or binary PPM as (h, w, 3) uint8."""
    if _is_ppm(path):
        return read_ppm(path)
    from PIL import Image

    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8).copy()


def write_image(path, img) -> None:
    if _is_ppm(path):
        write_ppm(path, img)
        return
    from PIL import Image

    Image.fromarray(check_image(img), mode="RGB").save(path)
