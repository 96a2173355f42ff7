"""Shared brute-force oracles for the test suite."""

import numpy as np

from sparsefourier.dft import Universe, unflat_index


def direct_dft(u: Universe, x: np.ndarray, chunk: int = 512) -> np.ndarray:
    """O(n^2) direct double sum: xhat_f = (1/sqrt(n)) sum_t x_t omega^(f.t).

    Deliberately naive (no row-column factorization); chunked over frequency
    rows so the phase matrix never exceeds chunk*n entries.
    """
    coords = unflat_index(u, np.arange(u.n))
    out = np.empty(u.n, dtype=np.complex128)
    for lo in range(0, u.n, chunk):
        hi = min(lo + chunk, u.n)
        phase = np.zeros((hi - lo, u.n), dtype=np.int64)
        for i in range(u.d):
            phase += np.outer(coords[lo:hi, i], coords[:, i])
        phase %= u.p
        out[lo:hi] = np.exp(2j * np.pi * phase / u.p) @ x
    return out / np.sqrt(u.n)


def direct_inverse_dft(u: Universe, xhat: np.ndarray) -> np.ndarray:
    """O(n^2) direct inverse (negative exponent)."""
    return np.conj(direct_dft(u, np.conj(xhat)))
