"""Complex-plane boxes, square grids, projection, and good random shifts.

The recovery loop rounds noisy coefficient estimates to a square lattice.
Rounding is safe only when the whole uncertainty box around an estimate
lands in a single rounding cell, so this module provides the projection,
the O(1) predicate for "the box rounds unambiguously", and the rejection
sampler that keeps drawing a small complex shift until every box of
interest rounds unambiguously. For a single box the acceptance chance of
one draw is at least (1 - r_b/r_s)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Box",
    "GridSpec",
    "ShiftParams",
    "GoodShiftError",
    "project",
    "box_projects_uniquely",
    "draw_good_shift",
]


@dataclass(frozen=True)
class Box:
    """Axis-aligned square |Re z - Re center| <= radius, same for Im."""

    center: complex
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"box radius must be nonnegative, got {self.radius}")


@dataclass(frozen=True)
class GridSpec:
    """Square lattice { (m + m' i) * side : m, m' integers }."""

    side: float

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError(f"grid side must be positive, got {self.side}")


@dataclass(frozen=True)
class ShiftParams:
    """Radii for the random-shift argument: r_g/2 >= r_s >= r_b > 0."""

    r_s: float
    r_b: float
    r_g: float

    def __post_init__(self):
        if not (self.r_g / 2 >= self.r_s >= self.r_b > 0):
            raise ValueError(
                f"need r_g/2 >= r_s >= r_b > 0, got r_g={self.r_g}, r_s={self.r_s}, r_b={self.r_b}"
            )


def _snap(v: np.ndarray, side: float) -> np.ndarray:
    """Round v/side to the nearest integer, half-integers toward zero.

    The lattice tie rule (nearest point, ties by minimum modulus, then
    lexicographic) separates over the two coordinates, and within one
    coordinate |m| = |m+1| has no integer solution, so rounding the tied
    half-integer toward zero realizes the whole rule and the lexicographic
    fallback can never fire.
    """
    q = v / side
    lower = np.floor(q)
    frac = q - lower
    upper_wins = frac > 0.5
    tie = frac == 0.5
    m = np.where(upper_wins, lower + 1, lower)
    m = np.where(tie & (lower < 0), lower + 1, m)
    return m * side


def project(c, grid: GridSpec):
    """Nearest grid point to c; deterministic on decision boundaries.

    Accepts a complex scalar or array, returns the same shape. The result
    is always within r_g/sqrt(2) of c (half a cell diagonal).
    """
    arr = np.asarray(c, dtype=np.complex128)
    out = _snap(arr.real, grid.side) + 1j * _snap(arr.imag, grid.side)
    if arr.ndim == 0:
        return complex(out)
    return out


def _interval_crosses_boundary(lo: float, hi: float, side: float) -> bool:
    # smallest decision line (m + 1/2) * side at or above lo, compared in
    # units of the side so no products with large m are formed
    m = math.ceil(lo / side - 0.5)
    return m + 0.5 <= hi / side


def box_projects_uniquely(box: Box, grid: GridSpec) -> bool:
    """True iff every point of the box projects to the same grid point.

    Equivalent O(1) test: neither the Re nor the Im interval of the box
    contains a half-cell decision line (m + 1/2) * side. An endpoint lying
    exactly on a line counts as crossing, so the predicate is robust to
    the tie-break direction.
    """
    c, r = box.center, box.radius
    return not (
        _interval_crosses_boundary(c.real - r, c.real + r, grid.side)
        or _interval_crosses_boundary(c.imag - r, c.imag + r, grid.side)
    )


class GoodShiftError(RuntimeError):
    """No accepted shift within the attempt budget.

    `misconfigured` separates "the parameters make acceptance impossible"
    (boxes at least as wide as a rounding cell) from plain bad luck.
    """

    def __init__(self, message: str, attempts: int, misconfigured: bool):
        super().__init__(message)
        self.attempts = attempts
        self.misconfigured = misconfigured


def draw_good_shift(
    centers,
    params: ShiftParams,
    rng: np.random.Generator,
    max_attempts: int,
) -> tuple[complex, int]:
    """Rejection-sample a shift making every shifted box round uniquely.

    Draws s uniform in the square of half-side r_s (two independent
    uniforms) until box_projects_uniquely holds for B(c + s, r_b) at every
    center. Returns (shift, attempts). Callers size max_attempts as
    10 * log2(n); with that budget a failure is overwhelmingly a parameter
    problem, not bad luck.
    """
    if max_attempts < 1:
        raise ValueError(f"max_attempts must be at least 1, got {max_attempts}")
    centers = list(centers)
    grid = GridSpec(params.r_g)
    if centers and 2 * params.r_b >= params.r_g:
        raise GoodShiftError(
            f"boxes of radius r_b={params.r_b} span a full cell of side r_g={params.r_g};"
            " no shift can make them round uniquely",
            attempts=0,
            misconfigured=True,
        )
    for attempt in range(1, max_attempts + 1):
        s = complex(rng.uniform(-params.r_s, params.r_s), rng.uniform(-params.r_s, params.r_s))
        if all(box_projects_uniquely(Box(c + s, params.r_b), grid) for c in centers):
            return s, attempt
    raise GoodShiftError(
        f"no good shift in {max_attempts} attempts for {len(centers)} boxes"
        f" (r_b={params.r_b}, r_s={params.r_s}, r_g={params.r_g});"
        " each box alone accepts most shifts, so suspect bad luck or centers"
        " whose exclusion zones jointly cover the shift square",
        attempts=max_attempts,
        misconfigured=False,
    )
