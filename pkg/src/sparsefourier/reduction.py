"""Median-of-estimates shrinking of the residual spectrum's sup norm.

One call takes the sparse approximation y built so far, R independent
sample lists, and a radius nu with the promise that the residual spectrum
xhat - y has sup norm at most 2*nu. For every frequency it forms R subset
estimates of the residual, takes the coordinate-wise lower median over
repetitions, and keeps the medians of magnitude at least nu/2. Adding the
kept values to y halves the promise: the new residual has sup norm at most
nu (with high probability in the sample draws).

Running H such rounds against the rows of a SampleBundle walks the radius
down from nu to 2^(1-H)*nu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dft import densify, inverse, sparse_eval_time
from .sampling import AuditedSignal, SampleBundle

__all__ = ["ReduceInput", "ReduceOutput", "linfinity_reduce", "reduce_h_rounds"]


@dataclass
class ReduceInput:
    """Inputs for one shrinking round.

    The caller promises sup|xhat - y| <= 2*nu; that cannot be checked here
    without the true spectrum, so tests verify it through an oracle.
    """

    signal: AuditedSignal
    y: dict
    lists: tuple
    nu: float
    keep_medians: bool = False
    dense_time_eval: bool = False


@dataclass
class ReduceOutput:
    z: dict
    eta: Optional[np.ndarray] = field(default=None, repr=False)


def _batched_subset_transforms(u, lists, residuals) -> np.ndarray:
    """All R dense subset estimates at once, one batched transform.

    Row r is subset_transform_dense(residuals[r], lists[r]): the per-list
    scale n/|T_r| is folded into the scattered values, so a single
    ifft over the trailing axes finishes every row.
    """
    r_count = len(lists)
    mat = np.zeros((r_count, u.n), dtype=np.complex128)
    rows = np.concatenate([np.full(len(t), i) for i, t in enumerate(lists)])
    cols = np.concatenate([t.flats for t in lists])
    vals = np.concatenate([res * (u.n / len(t)) for t, res in zip(lists, residuals)])
    np.add.at(mat, (rows, cols), vals)
    cube = np.fft.ifftn(mat.reshape((r_count,) + u.shape), axes=tuple(range(1, u.d + 1)))
    return cube.reshape(r_count, u.n) * np.sqrt(u.n)


def _lower_median(arr: np.ndarray) -> np.ndarray:
    """Order statistic at index floor((R-1)/2) along axis 0."""
    return np.sort(arr, axis=0)[(arr.shape[0] - 1) // 2]


def linfinity_reduce(inp: ReduceInput) -> ReduceOutput:
    """One shrinking round: median estimates, then threshold at nu/2.

    Every sample list is read in full through the audited accessor. The
    current approximation y is evaluated only at the sampled time points
    (sparse evaluation); dense_time_eval switches to evaluating y by a full
    inverse transform instead, which costs O(n log n) but must produce the
    same output, and the tests hold it to that.
    """
    lists = tuple(inp.lists)
    if len(lists) == 0:
        raise ValueError("need at least one sample list")
    u = inp.signal.universe
    for t in lists:
        if t.universe != u:
            raise ValueError(f"sample list universe {t.universe} != signal universe {u}")
    if inp.nu <= 0:
        raise ValueError(f"radius nu must be positive, got {inp.nu}")

    if inp.dense_time_eval:
        w_dense = inverse(u, densify(u, inp.y))
        residuals = [inp.signal.read(t.flats) - w_dense[t.flats] for t in lists]
    else:
        residuals = [
            inp.signal.read(t.flats) - sparse_eval_time(u, inp.y, t.points) for t in lists
        ]

    estimates = _batched_subset_transforms(u, lists, residuals)
    eta = _lower_median(estimates.real) + 1j * _lower_median(estimates.imag)

    keep = np.abs(eta) >= inp.nu / 2
    z = {int(f): complex(eta[f]) for f in np.nonzero(keep)[0]}
    return ReduceOutput(z=z, eta=eta if inp.keep_medians else None)


def reduce_h_rounds(
    signal: AuditedSignal,
    y: dict,
    bundle: SampleBundle,
    nu: float,
    h: int,
    dense_time_eval: bool = False,
) -> dict:
    """Run H rounds with geometrically shrinking radius, accumulating z.

    Round i uses bundle row i with radius 2^(1-i) * nu, so on success the
    residual against y + z ends below 2^(1-H) * nu.
    """
    if not (1 <= h <= bundle.h):
        raise ValueError(f"need 1 <= h <= {bundle.h}, got {h}")
    z: dict = {}
    for i in range(1, h + 1):
        combined = dict(y)
        for f, v in z.items():
            combined[f] = combined.get(f, 0) + v
        out = linfinity_reduce(
            ReduceInput(
                signal=signal,
                y=combined,
                lists=bundle.lists[i - 1],
                nu=(2.0 ** (1 - i)) * nu,
                dense_time_eval=dense_time_eval,
            )
        )
        for f, v in out.z.items():
            z[f] = z.get(f, 0) + v
    return z
