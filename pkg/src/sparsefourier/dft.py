"""Normalized d-dimensional DFT over [p]^d and index arithmetic.

Sign convention (fixed throughout the package, opposite of numpy's default):

    forward:  xhat_f = (1/sqrt(n)) * sum_t x_t * omega^( f.t)
    inverse:  x_t    = (1/sqrt(n)) * sum_f xhat_f * omega^(-f.t)

with omega = exp(2j*pi/p) and n = p^d. Both transforms are unitary. numpy's
ifftn uses the positive exponent, so forward == sqrt(n)*ifftn and
inverse == fftn/sqrt(n).

A frequency or time vector (f_0, ..., f_{d-1}) maps to the flat index
sum_i f_i * p^i, i.e. coordinate 0 varies fastest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Universe",
    "flat_index",
    "unflat_index",
    "forward",
    "inverse",
    "sparse_eval_time",
    "densify",
]


@dataclass(frozen=True)
class Universe:
    """Shape descriptor for signals on [p]^d, with n = p^d cached."""

    p: int
    d: int
    n: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.p < 1 or self.d < 1:
            raise ValueError(f"need p >= 1 and d >= 1, got p={self.p}, d={self.d}")
        object.__setattr__(self, "n", self.p**self.d)

    @property
    def shape(self) -> tuple[int, ...]:
        # numpy axis order: axis 0 is the slowest, so it carries coordinate d-1
        return (self.p,) * self.d


def flat_index(u: Universe, coords) -> int | np.ndarray:
    """Map coordinate vectors to flat indices (sum_i c_i * p^i).

    `coords` may be a single length-d vector or an (m, d) array; out-of-range
    coordinates raise ValueError.
    """
    c = np.asarray(coords, dtype=np.int64)
    if c.shape[-1] != u.d:
        raise ValueError(f"expected {u.d} coordinates, got shape {c.shape}")
    if np.any(c < 0) or np.any(c >= u.p):
        raise ValueError(f"coordinate out of range [0, {u.p})")
    weights = u.p ** np.arange(u.d, dtype=np.int64)
    out = c @ weights
    return int(out) if out.ndim == 0 else out


def unflat_index(u: Universe, flat) -> np.ndarray:
    """Inverse of flat_index: flat indices to coordinate vectors."""
    idx = np.asarray(flat, dtype=np.int64)
    if np.any(idx < 0) or np.any(idx >= u.n):
        raise ValueError(f"flat index out of range [0, {u.n})")
    coords = np.empty(idx.shape + (u.d,), dtype=np.int64)
    rest = idx
    for i in range(u.d):
        coords[..., i] = rest % u.p
        rest = rest // u.p
    return coords


def forward(u: Universe, x: np.ndarray) -> np.ndarray:
    """Forward transform, positive exponent, unitary normalization."""
    x = np.asarray(x)
    if x.shape != (u.n,):
        raise ValueError(f"expected flat array of length {u.n}, got {x.shape}")
    out = np.fft.ifftn(x.reshape(u.shape)) * np.sqrt(u.n)
    return out.ravel()


def inverse(u: Universe, xhat: np.ndarray) -> np.ndarray:
    """Inverse transform, negative exponent, unitary normalization."""
    xhat = np.asarray(xhat)
    if xhat.shape != (u.n,):
        raise ValueError(f"expected flat array of length {u.n}, got {xhat.shape}")
    out = np.fft.fftn(xhat.reshape(u.shape)) / np.sqrt(u.n)
    return out.ravel()


def sparse_eval_time(u: Universe, y: dict[int, complex], points: np.ndarray) -> np.ndarray:
    """Evaluate the inverse transform of a sparse spectrum at selected points.

    y maps flat frequency index -> complex value. `points` is an (m, d) array
    of time vectors. Returns the length-m array

        w_t = (1/sqrt(n)) * sum_{f in supp(y)} y_f * omega^(-f.t)

    identical to inverse(densify(y)) sampled at the points, but at cost
    O(m * |supp(y)| * d) and without touching any other time coordinate.
    """
    pts = np.asarray(points, dtype=np.int64)
    if pts.ndim != 2 or pts.shape[1] != u.d:
        raise ValueError(f"expected (m, {u.d}) points array, got {pts.shape}")
    if not y:
        return np.zeros(len(pts), dtype=np.complex128)
    freqs = unflat_index(u, np.fromiter(y.keys(), dtype=np.int64, count=len(y)))
    vals = np.fromiter(y.values(), dtype=np.complex128, count=len(y))
    # phases (m, k): f.t mod p keeps the integers small before the exp
    phase = (pts @ freqs.T) % u.p
    kernel = np.exp(-2j * np.pi * phase / u.p)
    return (kernel @ vals) / np.sqrt(u.n)


def densify(u: Universe, y: dict[int, complex]) -> np.ndarray:
    """Expand a sparse spectrum (flat index -> value) to a dense length-n array."""
    out = np.zeros(u.n, dtype=np.complex128)
    for f, v in y.items():
        if not 0 <= f < u.n:
            raise ValueError(f"flat frequency {f} out of range [0, {u.n})")
        out[f] = v
    return out
