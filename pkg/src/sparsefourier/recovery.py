"""Top-level sparse recovery drivers and their constants schedule.

The main driver alternates two moves on a shrinking radius ladder
nu_l = 2^(-l) * mu * R*:

  1. H median-and-threshold rounds push the residual sup norm from
     2*nu_l down to 2^(1-H)*nu_l (reduction module);
  2. a random complex shift s_l is drawn so that every coefficient's
     uncertainty box rounds unambiguously, and y is replaced by the grid
     projection of y + z + s_l on a lattice of side beta*nu_l (grids
     module). Projection collapses the accumulated estimation noise back
     to a clean lattice value, which is what lets the ladder keep halving
     without the support drifting.

After the last rung the residual bound is 2^(1-H)*nu_L = mu, the noise
level, and y is returned as-is. The warm-up variant skips the shift and
uses a fixed small H; it is only meant for k = O(log n).

All sample positions are drawn up front as one SampleBundle and declared
to the audited signal, so a completed run has read exactly B*R*H points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .grids import GoodShiftError, GridSpec, ShiftParams, draw_good_shift, project
from .reduction import reduce_h_rounds
from .sampling import DOMAIN_SHIFT, AuditedSignal, SampleBundle, stream_rng

__all__ = [
    "RecoveryConfig",
    "PAPER_PROFILE",
    "DESK_PROFILE",
    "Schedule",
    "IterationDiag",
    "RecoveryResult",
    "ShiftFailure",
    "build_schedule",
    "sample_budget",
    "fourier_sparse_recovery",
    "fourier_sparse_recovery_by_projection",
]


@dataclass(frozen=True)
class RecoveryConfig:
    """Constant profile driving the schedule.

    c_b, c_r, c_h scale the list size B = c_b*k, the repetition count
    R = c_r*ceil(log2 n), and the per-rung round count H. alpha and beta
    set the shift radius (alpha*nu) and grid side (beta*nu); the shift
    argument needs alpha <= beta/2 and beta < 0.1.

    mu_min is a floor on the noise level relative to the signal's l2 norm;
    it is applied by the harness when it computes mu from ground truth
    (the driver itself just requires mu > 0). warmup_h and warmup_grid
    only affect the projection-only variant.
    """

    c_b: int = 8
    c_r: int = 4
    c_h: int = 3
    alpha: float = 0.02
    beta: float = 0.08
    c_s: int = 26
    mu_min: float = 1e-12
    max_shift_attempts_factor: int = 10
    warmup_h: int = 5
    warmup_grid: float = 0.6

    def __post_init__(self):
        for name in ("c_b", "c_r", "c_h", "c_s"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if not (0 < self.alpha < self.beta < 0.1):
            raise ValueError(
                f"need 0 < alpha < beta < 0.1, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.alpha > self.beta / 2:
            raise ValueError(
                f"shift radius must leave rounding room: alpha <= beta/2,"
                f" got alpha={self.alpha}, beta={self.beta}"
            )
        if self.mu_min <= 0:
            raise ValueError(f"mu_min must be positive, got {self.mu_min}")
        if self.max_shift_attempts_factor < 1:
            raise ValueError("max_shift_attempts_factor must be at least 1")
        if self.warmup_h < 1:
            raise ValueError(f"warmup_h must be at least 1, got {self.warmup_h}")
        if not (0 < self.warmup_grid < 1):
            raise ValueError(f"warmup_grid must lie in (0, 1), got {self.warmup_grid}")


PAPER_PROFILE = RecoveryConfig(c_b=10**6, c_r=10**3, c_h=20, alpha=1e-3, beta=0.04, c_s=26)
DESK_PROFILE = RecoveryConfig(c_b=8, c_r=4, c_h=3, alpha=0.02, beta=0.08, c_s=26)


def _ceil_log2_int(m: int) -> int:
    if m < 1:
        raise ValueError(f"need a positive integer, got {m}")
    return (m - 1).bit_length() if m > 1 else 0


def _ceil_log2_real(x: float) -> int:
    """Smallest integer e with 2^e >= x, exact on powers of two."""
    if x <= 0:
        raise ValueError(f"need a positive value, got {x}")
    mant, exp = math.frexp(x)  # x = mant * 2^exp with mant in [0.5, 1)
    return exp - 1 if mant == 0.5 else exp


@dataclass(frozen=True)
class Schedule:
    """Resolved per-run parameters: list size, repetitions, rungs."""

    b: int
    r: int
    h: int
    l: int
    log2_rstar: int
    rstar_pow: float
    mu: float
    nus: tuple
    h_base: int
    h_floor: int

    @property
    def budget(self) -> int:
        return self.b * self.r * self.h

    @property
    def final_target(self) -> float:
        """Residual bound after the last rung, 2^(1-H) * nu_L."""
        return 2.0 ** (1 - self.h) * self.nus[-1]


def build_schedule(
    config: RecoveryConfig,
    n: int,
    k: int,
    mu: float,
    rstar: float,
    warmup: bool = False,
) -> Schedule:
    """Resolve (B, R, H, L) and the radius ladder for one run.

    R* is rounded up to a power of two, so the ladder ends exactly at
    2^(1-H) * nu_L = mu for the main driver. H takes the larger of the
    nominal value ceil(log2 k) + c_h and a floor that keeps the shift
    rejection loop fast: with at most c_s*k occupied coefficients, a
    per-attempt failure chance of at most 1/2 needs the box radius
    2^(1-H)*nu below alpha*nu / (4*c_s*k). Small-constant profiles would
    otherwise make good shifts astronomically rare for k beyond a handful.
    The cap at log2 R* always wins when the ladder is short.
    """
    if k < 1:
        raise ValueError(f"sparsity k must be at least 1, got {k}")
    if n < 2:
        raise ValueError(f"universe size must be at least 2, got {n}")
    if mu <= 0:
        raise ValueError(f"noise level mu must be positive, got {mu}")
    if rstar < 2:
        raise ValueError(f"dynamic range bound rstar must be at least 2, got {rstar}")

    log2_rstar = _ceil_log2_real(rstar)
    b = config.c_b * k
    r = config.c_r * _ceil_log2_int(n)
    h_base = _ceil_log2_int(k) + config.c_h
    h_floor = math.ceil(3 + math.log2(config.c_s * k / config.alpha))
    if warmup:
        h = config.warmup_h
        ell = max(1, log2_rstar - h + 1)
    else:
        h = min(max(h_base, h_floor), log2_rstar)
        ell = log2_rstar - h + 1
    rstar_pow = float(2.0**log2_rstar)
    nus = tuple(2.0 ** (-i) * mu * rstar_pow for i in range(1, ell + 1))
    return Schedule(
        b=b,
        r=r,
        h=h,
        l=ell,
        log2_rstar=log2_rstar,
        rstar_pow=rstar_pow,
        mu=mu,
        nus=nus,
        h_base=h_base,
        h_floor=h_floor,
    )


def sample_budget(config: RecoveryConfig, n: int, k: int, rstar: float) -> int:
    """Samples a main-driver run will read: B * R * H for its schedule."""
    return build_schedule(config, n, k, mu=1.0, rstar=rstar).budget


class ShiftFailure(RuntimeError):
    """The shift rejection loop ran out of attempts at ladder rung l."""

    def __init__(self, iteration: int, attempts: int, misconfigured: bool):
        super().__init__(
            f"no good shift at iteration {iteration} after {attempts} attempts"
            + (" (parameters make acceptance impossible)" if misconfigured else "")
        )
        self.iteration = iteration
        self.attempts = attempts
        self.misconfigured = misconfigured


@dataclass(frozen=True)
class IterationDiag:
    nu: float
    shift: complex
    shift_attempts: int
    support_after_reduce: int
    support_after_projection: int


@dataclass(frozen=True)
class RecoveryResult:
    y: dict
    diagnostics: tuple
    samples_used: int
    schedule: Schedule = field(repr=False)

    @property
    def attempts_total(self) -> int:
        return sum(d.shift_attempts for d in self.diagnostics)

    @property
    def attempts_max(self) -> int:
        return max((d.shift_attempts for d in self.diagnostics), default=0)


def _merge_dropping_zeros(y: dict, z: dict) -> dict:
    out = dict(y)
    for f, v in z.items():
        s = out.get(f, 0) + v
        if s == 0:
            out.pop(f, None)
        else:
            out[f] = s
    return out


def _resolve_entropy(rng: Union[int, np.random.Generator]) -> int:
    if isinstance(rng, (int, np.integer)):
        return int(rng)
    return int(rng.integers(2**63))


def _drive(
    x: AuditedSignal,
    schedule: Schedule,
    config: RecoveryConfig,
    entropy: int,
    use_shift: bool,
    grid_scale: float,
) -> RecoveryResult:
    u = x.universe
    bundle = SampleBundle.draw(u, schedule.h, schedule.r, schedule.b, entropy)
    x.grant_bundle(bundle)
    cap = config.max_shift_attempts_factor * _ceil_log2_int(u.n)

    y: dict = {}
    diags = []
    for ell in range(1, schedule.l + 1):
        nu = schedule.nus[ell - 1]
        z = reduce_h_rounds(x, y, bundle, nu, schedule.h)
        w = _merge_dropping_zeros(y, z)
        if ell == schedule.l:
            y = w
            diags.append(IterationDiag(nu, 0j, 0, len(w), len(w)))
            break

        shift = 0j
        attempts = 0
        if use_shift:
            params = ShiftParams(
                r_s=config.alpha * nu, r_b=2.0 ** (1 - schedule.h) * nu, r_g=config.beta * nu
            )
            try:
                shift, attempts = draw_good_shift(
                    w.values(), params, stream_rng(entropy, DOMAIN_SHIFT, ell), cap
                )
            except GoodShiftError as exc:
                raise ShiftFailure(ell, exc.attempts, exc.misconfigured) from exc

        grid = GridSpec(grid_scale * nu)
        y = {}
        for f, v in w.items():
            snapped = project(v + shift, grid)
            if snapped != 0:
                y[f] = snapped
        diags.append(IterationDiag(nu, shift, attempts, len(w), len(y)))

    return RecoveryResult(
        y=y,
        diagnostics=tuple(diags),
        samples_used=bundle.total_points(),
        schedule=schedule,
    )


def fourier_sparse_recovery(
    x: AuditedSignal,
    k: int,
    mu: float,
    rstar: float,
    config: RecoveryConfig = DESK_PROFILE,
    rng: Union[int, np.random.Generator] = 0,
) -> RecoveryResult:
    """Recover an O(k)-sparse spectrum approximation with sup error mu.

    mu bounds the noise level (1/sqrt(k) times the l2 norm of the
    spectrum's tail) and rstar bounds sup|xhat| / mu; both come from the
    caller, typically an oracle or prior knowledge. rng may be an integer
    seed or a Generator; either way the run is fully reproducible.
    """
    schedule = build_schedule(config, x.universe.n, k, mu, rstar)
    return _drive(x, schedule, config, _resolve_entropy(rng), True, config.beta)


def fourier_sparse_recovery_by_projection(
    x: AuditedSignal,
    k: int,
    mu: float,
    rstar: float,
    config: RecoveryConfig = DESK_PROFILE,
    rng: Union[int, np.random.Generator] = 0,
) -> RecoveryResult:
    """Shift-free variant with a fixed small H; meant for k = O(log n).

    Uses a coarser lattice (side warmup_grid * nu) whose cells are wide
    enough that no random shift is needed: the post-reduction residual
    2^(1-H)*nu plus the projection displacement still fits inside half the
    next rung's radius.
    """
    schedule = build_schedule(config, x.universe.n, k, mu, rstar, warmup=True)
    return _drive(x, schedule, config, _resolve_entropy(rng), False, config.warmup_grid)
