"""Command-line interface: recover, bench, and verify subcommands.

recover runs one seeded trial, bench a seeded batch; both print a JSON or
CSV report. verify reruns the statistical facts the algorithm leans on
(measurement-coefficient moments, the estimator tail bound, the shifted-box
acceptance rate) as seeded Monte Carlo checks.

Exit codes: 0 success, 2 configuration error, 3 sample-audit violation,
4 a verify check missed its threshold; other failures return 1.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys

import numpy as np

from .dft import Universe, unflat_index
from .grids import Box, GoodShiftError, GridSpec, box_projects_uniquely
from .recovery import DESK_PROFILE, PAPER_PROFILE, RecoveryConfig, ShiftFailure
from .runner import emit_report, run_experiment
from .sampling import AuditViolation, noise_bound_check
from .signals import SignalSpec

__all__ = ["main"]

_PROFILES = {"paper": PAPER_PROFILE, "desk": DESK_PROFILE}


def _add_signal_args(sub):
    sub.add_argument("--p", type=int, required=True, help="alphabet size per dimension")
    sub.add_argument("--d", type=int, required=True, help="number of dimensions")
    sub.add_argument("--k", type=int, required=True, help="sparsity")
    sub.add_argument("--sigma", type=float, default=0.0, help="frequency-domain noise level")
    sub.add_argument("--seed", type=int, default=0, help="master seed")
    sub.add_argument("--profile", choices=sorted(_PROFILES), default="desk")
    sub.add_argument("--algo", choices=("main", "warmup"), default="main")
    sub.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        dest="overrides",
        help="override a constant (e.g. --set C_B=64); repeatable",
    )
    sub.add_argument("--out", default=None, help="write the report here instead of stdout")
    sub.add_argument("--format", choices=("json", "csv"), default="json")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sfft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    recover = sub.add_parser("recover", help="run one recovery trial")
    _add_signal_args(recover)

    bench = sub.add_parser("bench", help="run a seeded batch of trials")
    _add_signal_args(bench)
    bench.add_argument("--trials", type=int, default=10)

    verify = sub.add_parser("verify", help="Monte Carlo checks of the core probability facts")
    verify.add_argument("--seed", type=int, default=0)
    return parser


def _parse_overrides(pairs) -> dict:
    types = {f.name: f.type for f in dataclasses.fields(RecoveryConfig)}
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"expected NAME=VALUE, got {pair!r}")
        name, value = pair.split("=", 1)
        key = name.strip().lower().replace("-", "_")
        if key not in types:
            raise ValueError(f"unknown constant {name!r}; choose from {sorted(types)}")
        cast = int if types[key] == "int" else float
        try:
            out[key] = cast(value)
        except ValueError:
            raise ValueError(f"cannot parse {value!r} as {cast.__name__} for {name}")
    return out


def _resolve_config(args) -> RecoveryConfig:
    base = _PROFILES[args.profile]
    overrides = _parse_overrides(args.overrides)
    return dataclasses.replace(base, **overrides) if overrides else base


def _run_report(args, trials: int, seeds=None) -> int:
    spec = SignalSpec(p=args.p, d=args.d, k=args.k, sigma=args.sigma, seed=args.seed)
    config = _resolve_config(args)
    report = run_experiment(spec, config, trials, algorithm=args.algo, seeds=seeds)
    text = emit_report(report, args.format, args.out)
    if args.out:
        agg = report.aggregates
        print(f"wrote {args.out}: success_rate={agg['success_rate']}, trials={trials}")
    else:
        sys.stdout.write(text)
    return 0


# ------------------------------------------------------ verify subcommand


def _check_coefficient_moments(seed: int):
    """E|c_f|^2 = 1/B and decorrelation across frequencies, within 3 SE."""
    u = Universe(p=16, d=2)
    b, draws = 64, 10_000
    rng = np.random.default_rng(seed)
    flats = rng.integers(0, u.n, size=(draws, b))
    coords = unflat_index(u, np.arange(u.n))

    freqs = [1, 7, 16, 100, 255]
    cs = []
    for f in freqs:
        fv = unflat_index(u, f)
        phase = (coords[flats.reshape(-1)] @ fv).reshape(draws, b) % u.p
        cs.append(np.exp(2j * np.pi * phase / u.p).mean(axis=1))

    pairs = []
    for c in cs:
        sq = np.abs(c) ** 2
        se = sq.std() / math.sqrt(draws)
        pairs.append((abs(sq.mean() - 1 / b), 3 * se))
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            cross = cs[i] * np.conj(cs[j])
            se = math.sqrt(cross.real.var() + cross.imag.var()) / math.sqrt(draws)
            pairs.append((abs(cross.mean()), 3 * se))
    worst_gap, worst_limit = max(pairs, key=lambda gl: gl[0] - gl[1])
    return worst_gap <= worst_limit, f"worst gap {worst_gap:.2e} vs 3*SE {worst_limit:.2e}"


def _check_noise_bound(seed: int):
    """Estimator leakage exceeds its tail bound in at most 2% of draws."""
    u = Universe(p=8, d=2)
    rng = np.random.default_rng(seed)
    support = [1, 9, 20, 33, 41, 50, 57, 63]
    xhat = np.zeros(u.n, dtype=np.complex128)
    xhat[support] = np.exp(2j * np.pi * rng.random(len(support)))
    rate = noise_bound_check(u, xhat, f=5, v_set=support, b=32, trials=10_000, rng=rng)
    return rate <= 0.02, f"exceedance rate {rate:.4f} vs limit 0.02"


def _check_shift_acceptance(seed: int):
    """Shifted worst-case box rounds uniquely at rate >= (1-r_b/r_s)^2."""
    rng = np.random.default_rng(seed)
    grid = GridSpec(1.0)
    center = 0.5 + 0.5j  # on a decision cross: the extremal center
    details = []
    ok = True
    for ratio in (0.5, 0.1, 0.01):
        r_s, r_b, draws = 0.5, 0.5 * ratio, 10_000
        shifts = rng.uniform(-r_s, r_s, size=(draws, 2))
        hits = sum(
            box_projects_uniquely(Box(center + complex(sr, si), r_b), grid)
            for sr, si in shifts
        )
        bound = (1 - ratio) ** 2
        sigma = math.sqrt(bound * (1 - bound) / draws)
        rate = hits / draws
        ok = ok and rate >= bound - 3 * sigma
        details.append(f"ratio {ratio}: rate {rate:.4f} >= {bound - 3 * sigma:.4f}")
    return ok, "; ".join(details)


def _run_verify(seed: int) -> int:
    checks = [
        ("coefficient-moments", _check_coefficient_moments),
        ("estimator-tail-bound", _check_noise_bound),
        ("shift-acceptance", _check_shift_acceptance),
    ]
    failed = False
    for name, fn in checks:
        ok, detail = fn(seed)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed = failed or not ok
    return 4 if failed else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args.seed)
        if args.command == "recover":
            return _run_report(args, trials=1, seeds=[args.seed])
        return _run_report(args, trials=args.trials)
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except AuditViolation as exc:
        print(f"sample audit violation: {exc}", file=sys.stderr)
        return 3
    except (ShiftFailure, GoodShiftError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
