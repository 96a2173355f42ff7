"""Uniform time-domain sampling and the subset-sample Fourier estimator.

A sample list T is an ordered list of B i.i.d. uniform points of [p]^d,
duplicates kept. The estimator built from it,

    xhat^[T]_f = (sqrt(n)/|T|) * sum_{t in T} omega^(f.t) * x_t,

decomposes exactly as sum_{f'} c^[T]_{f-f'} * xhat_{f'} where

    c^[T]_f = (1/|T|) * sum_{t in T} omega^(f.t)

is the measurement coefficient: c_0 = 1 always, and for f != 0 the
coefficient is a mean of B random unit phasors, so E|c_f|^2 = 1/B and
distinct coefficients are uncorrelated. Those three moments are what every
downstream error bound rests on, and the test suite checks them by Monte
Carlo.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dft import Universe, flat_index, forward

__all__ = [
    "SampleList",
    "SampleBundle",
    "AuditedSignal",
    "AuditViolation",
    "stream_rng",
    "draw_sample_list",
    "coefficient",
    "subset_transform_single",
    "subset_transform_dense",
    "noise_bound_check",
]


def stream_rng(entropy, *path) -> np.random.Generator:
    """Deterministic RNG stream addressed by (entropy, path).

    Streams with distinct paths are independent regardless of creation
    order, so sampling is reproducible under any execution schedule.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy, spawn_key=tuple(path)))


# spawn-key domain tags, one per kind of randomness in the package
DOMAIN_SAMPLES = 0
DOMAIN_SHIFT = 1
DOMAIN_SIGNAL = 2


@dataclass(eq=False)
class SampleList:
    """Ordered list of time points (with multiplicity) in one universe."""

    universe: Universe
    points: np.ndarray  # (B, d) integer array
    flats: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[1] != self.universe.d:
            raise ValueError(f"points must be (B, {self.universe.d}), got {pts.shape}")
        if len(pts) == 0:
            raise ValueError("sample list must be non-empty")
        self.points = pts
        self.flats = flat_index(self.universe, pts)  # validates the range too

    def __len__(self) -> int:
        return len(self.points)


def draw_sample_list(u: Universe, b: int, rng: np.random.Generator) -> SampleList:
    """Draw B points with every coordinate i.i.d. uniform in [0, p)."""
    if b < 1:
        raise ValueError(f"need at least one sample point, got b={b}")
    return SampleList(u, rng.integers(0, u.p, size=(b, u.d), dtype=np.int64))


@dataclass(eq=False)
class SampleBundle:
    """H x R grid of independent sample lists, all of size B."""

    universe: Universe
    lists: tuple  # tuple of H tuples of R SampleLists

    @classmethod
    def draw(cls, u: Universe, h: int, r: int, b: int, entropy) -> "SampleBundle":
        """Draw the full bundle; list (i, j) comes from stream (entropy, i, j)."""
        if h < 1 or r < 1:
            raise ValueError(f"need h >= 1 and r >= 1, got h={h}, r={r}")
        rows = tuple(
            tuple(draw_sample_list(u, b, stream_rng(entropy, DOMAIN_SAMPLES, i, j)) for j in range(r))
            for i in range(h)
        )
        return cls(u, rows)

    @property
    def h(self) -> int:
        return len(self.lists)

    @property
    def r(self) -> int:
        return len(self.lists[0])

    @property
    def b(self) -> int:
        return len(self.lists[0][0])

    def total_points(self) -> int:
        """Declared sample budget: points counted with multiplicity."""
        return sum(len(t) for row in self.lists for t in row)

    def all_flats(self) -> np.ndarray:
        return np.concatenate([t.flats for row in self.lists for t in row])


class AuditViolation(RuntimeError):
    """A time coordinate outside the declared sample set was read."""


class AuditedSignal:
    """Signal accessor that only serves declared (granted) time points.

    Recovery declares its sample bundle up front via grant(); any read at an
    undeclared flat index raises AuditViolation. The distinct-read counter
    makes the sample-budget claim checkable after a run. Reads are plain
    array lookups guarded by the interpreter lock; external synchronization
    is only needed if grant() races with reads.
    """

    def __init__(self, u: Universe, values: np.ndarray):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (u.n,):
            raise ValueError(f"expected flat array of length {u.n}, got {values.shape}")
        self.universe = u
        self._values = values.copy()
        self._allowed = np.zeros(u.n, dtype=bool)
        self._touched = np.zeros(u.n, dtype=bool)
        self._granted_total = 0

    def grant(self, flats: np.ndarray) -> None:
        """Declare flat time indices (with multiplicity) as readable."""
        idx = np.asarray(flats, dtype=np.int64)
        self._allowed[idx] = True  # IndexError on out-of-range is fine
        self._granted_total += len(idx)

    def grant_bundle(self, bundle: SampleBundle) -> None:
        self.grant(bundle.all_flats())

    def read(self, flats: np.ndarray) -> np.ndarray:
        idx = np.asarray(flats, dtype=np.int64)
        bad = ~self._allowed[idx]
        if bad.any():
            offenders = np.unique(idx[bad])[:8]
            raise AuditViolation(
                f"read of undeclared time indices {offenders.tolist()}"
                f" ({int(bad.sum())} of {idx.size} reads outside the granted set)"
            )
        self._touched[idx] = True
        return self._values[idx]

    @property
    def granted_total(self) -> int:
        return self._granted_total

    @property
    def granted_distinct(self) -> int:
        return int(self._allowed.sum())

    @property
    def distinct_reads(self) -> int:
        return int(self._touched.sum())

    def all_granted_read(self) -> bool:
        """True when every declared point was actually consumed."""
        return bool(np.array_equal(self._touched, self._allowed))


def _as_coords(u: Universe, f) -> np.ndarray:
    if np.isscalar(f):
        from .dft import unflat_index

        return unflat_index(u, int(f))
    fv = np.asarray(f, dtype=np.int64)
    if fv.shape != (u.d,):
        raise ValueError(f"frequency must be a flat index or {u.d} coordinates")
    if np.any(fv < 0) or np.any(fv >= u.p):
        raise ValueError(f"frequency coordinate out of range [0, {u.p})")
    return fv


def coefficient(f, t: SampleList) -> complex:
    """Measurement coefficient c^[T]_f = (1/|T|) sum_t omega^(f.t).

    The defining property (and the reason for the exact formula) is the
    decomposition xhat^[T]_f = sum_{f'} c^[T]_{f-f'} xhat_{f'}: the subset
    estimator reads the true spectrum through this leakage kernel.
    """
    u = t.universe
    fv = _as_coords(u, f)
    phase = (t.points @ fv) % u.p
    return complex(np.exp(2j * np.pi * phase / u.p).mean())


def subset_transform_single(samples, t: SampleList, f) -> complex:
    """Estimate one spectrum entry from samples taken at the points of T."""
    vals = np.asarray(samples, dtype=np.complex128)
    if vals.shape != (len(t),):
        raise ValueError(f"got {vals.shape[0] if vals.ndim else 0} samples for {len(t)} points")
    u = t.universe
    fv = _as_coords(u, f)
    phase = (t.points @ fv) % u.p
    est = np.exp(2j * np.pi * phase / u.p) @ vals
    return complex(est * np.sqrt(u.n) / len(t))


def subset_transform_dense(samples, t: SampleList) -> np.ndarray:
    """Estimate all n spectrum entries at once.

    Scatter the samples onto a dense time vector (summing duplicates), then
    one forward transform gives (n/|T|) * forward(v), which matches the
    per-frequency estimator entrywise.
    """
    vals = np.asarray(samples, dtype=np.complex128)
    if vals.shape != (len(t),):
        raise ValueError(f"got {vals.shape[0] if vals.ndim else 0} samples for {len(t)} points")
    u = t.universe
    v = np.zeros(u.n, dtype=np.complex128)
    np.add.at(v, t.flats, vals)
    return forward(u, v) * (u.n / len(t))


def noise_bound_check(
    u: Universe,
    xhat: np.ndarray,
    f,
    v_set,
    b: int,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Empirical exceedance rate of the estimator's leakage tail bound.

    Over `trials` fresh sample lists of size `b`, measures how often

        | sum_{f' in V} c_{f-f'} xhat_{f'} |  >  (10/sqrt(B)) * ||xhat_V||_2

    The second-moment bound puts the true rate at most 1/100.
    """
    f_flat = int(flat_index(u, _as_coords(u, f)))
    v_idx = np.asarray(list(v_set), dtype=np.int64)
    if f_flat in set(v_idx.tolist()):
        raise ValueError("f must not belong to V")
    if trials < 1 or b < 1:
        raise ValueError("need trials >= 1 and b >= 1")
    if len(v_idx) == 0:
        return 0.0

    mask = np.zeros(u.n, dtype=np.complex128)
    mask[v_idx] = np.asarray(xhat)[v_idx]
    threshold = 10.0 / np.sqrt(b) * np.linalg.norm(mask)

    # g_t = sum_{f' in V} xhat_{f'} omega^(-f'.t), dense via one inverse;
    # phase_f[t] = omega^(f.t); then each trial is a B-point average.
    from .dft import inverse, unflat_index

    g = inverse(u, mask) * np.sqrt(u.n)
    tcoords = unflat_index(u, np.arange(u.n))
    phase_f = np.exp(2j * np.pi * ((tcoords @ _as_coords(u, f)) % u.p) / u.p)

    idx = rng.integers(0, u.n, size=(trials, b))
    sums = (phase_f[idx] * g[idx]).mean(axis=1)
    return float(np.mean(np.abs(sums) > threshold))
