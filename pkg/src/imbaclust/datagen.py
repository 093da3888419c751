"""Synthetic uniform-disc mixtures used by the experiments."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import make_rng

INLIER, OUTLIER, OUTLIER2 = 0, 1, 2


@dataclass(frozen=True)
class DiscSpec:
    center: tuple
    radius: float
    count: int
    class_label: int = 0

    def __post_init__(self):
        if len(self.center) != 2:
            raise ValueError("disc center must be 2-D")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.count < 1:
            raise ValueError("count must be >= 1")


def sample_disc(spec: DiscSpec, rng=None) -> np.ndarray:
    """`spec.count` points uniform over the disc area (polar, sqrt radius)."""
    rng = make_rng(rng)
    r = spec.radius * np.sqrt(rng.random(spec.count))
    theta = rng.random(spec.count) * (2.0 * np.pi)
    pts = np.empty((spec.count, 2))
    pts[:, 0] = spec.center[0] + r * np.cos(theta)
    pts[:, 1] = spec.center[1] + r * np.sin(theta)
    return pts


def sample_mixture(specs, rng=None):
    """Concatenate disc samples; returns ``(points, labels)``."""
    rng = make_rng(rng)
    parts = [sample_disc(s, rng) for s in specs]
    labels = np.concatenate([np.full(s.count, s.class_label, dtype=np.int64) for s in specs])
    return np.vstack(parts), labels


def preset_specs(name: str, n: int | None = None) -> list[DiscSpec]:
    """Disc layout of a named experiment.

    ``fig1``        1250 unit-disc inliers + 25 outliers (r=0.1) at (2, 0)
    ``fig2``        n inliers (default 1250) + 25 outliers at (2, 0)
    ``appendixG1``  25n inliers + n outliers at (2.25, 0), default n=5
    ``appendixG2``  250n + 10n at (2.25, 0) + 10n at (2.25, 2.25), default n=1
    ``scaled``      fig1 proportions scaled to n points in total
    """
    unit = (0.0, 0.0)
    if name == "fig1":
        return [DiscSpec(unit, 1.0, 1250, INLIER), DiscSpec((2.0, 0.0), 0.1, 25, OUTLIER)]
    if name == "fig2":
        return [DiscSpec(unit, 1.0, n or 1250, INLIER), DiscSpec((2.0, 0.0), 0.1, 25, OUTLIER)]
    if name == "appendixG1":
        n = n or 5
        return [DiscSpec(unit, 1.0, 25 * n, INLIER), DiscSpec((2.25, 0.0), 0.1, n, OUTLIER)]
    if name == "appendixG2":
        n = n or 1
        return [DiscSpec(unit, 1.0, 250 * n, INLIER), DiscSpec((2.25, 0.0), 0.1, 10 * n, OUTLIER),
                DiscSpec((2.25, 2.25), 0.1, 10 * n, OUTLIER2)]
    if name == "scaled":
        n = n or 1275
        outliers = max(1, round(n * 25 / 1275))
        return [DiscSpec(unit, 1.0, n - outliers, INLIER), DiscSpec((2.0, 0.0), 0.1, outliers, OUTLIER)]
    raise ValueError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")


PRESETS = ("fig1", "fig2", "appendixG1", "appendixG2", "scaled")


def make_preset(name: str, n: int | None = None, rng=None):
    return sample_mixture(preset_specs(name, n), rng)
