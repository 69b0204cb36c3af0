"""Disorder sampling and exact satisfiability probing.

A trial samples p multiplets, then asks which admissible labelings (one
sign per multiplet, shared by its k points) are realizable by a
homogeneous linear classifier, optionally with a margin.  Three exact
backends and one sampling probe:

* ``full-rank``: kp independent points realize every labeling; the count
  is 2^p with no search (margin 0 only).
* ``cells``: enumerate the cells of the central hyperplane arrangement of
  the kp points (exact for effective rank <= 3 at any p; this is what
  makes deep-UNSAT scans at n = 3 affordable, where 2^p enumeration is
  hopeless).  With a positive margin the admissible cells are re-checked
  against the margin.
* ``sigma``: enumerate sign vectors sigma in {+/-1}^p with sigma_1 = +1
  fixed (the +/-sigma symmetry halves the work; counts are doubled) and
  decide each by `max_margin`.  Budgeted by ``p_enum_max``.
* `random_classifier_probe`: sample random directions and read off the
  labelings they induce; a lower bound on the count and a SAT witness
  finder, with no UNSAT certificate.

Trials are keyed by (master seed, trial index), so parallel runs reduce in
deterministic trial order and are bit-reproducible for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import BudgetError, ValidationError
from .numerics import Rng
from .separability import (
    TAU,
    dedupe_directions,
    max_margin,
    sign_pattern_blocks,
)
from .structure import StructureSpec, sample_multiplet

METHOD_FULL_RANK = "full-rank"
METHOD_CELLS = "cells"
METHOD_SIGMA = "sigma"
METHOD_RANDOM = "random-classifier"

DEFAULT_P_ENUM_MAX = 22


@dataclass(frozen=True, eq=False)
class Dataset:
    """A sampled disorder realization: p multiplets of k points in R^n."""

    spec: StructureSpec
    n: int
    p: int
    points: np.ndarray  # (p, k, n)

    @property
    def flat(self) -> np.ndarray:
        """All kp points as a (p*k, n) array, multiplet-major order."""
        return self.points.reshape(self.p * self.spec.k, self.n)

    def validate(self, atol: float = 1e-9) -> None:
        """Check unit norms and the within-multiplet overlap constraints."""
        if self.points.shape != (self.p, self.spec.k, self.n):
            raise ValidationError(f"points shape {self.points.shape} is inconsistent")
        norms = np.linalg.norm(self.points, axis=2)
        if np.max(np.abs(norms - 1.0)) > atol:
            raise ValidationError("points are not unit vectors")
        grams = np.einsum("pan,pbn->pab", self.points, self.points)
        if np.max(np.abs(grams - self.spec.gram[None])) > atol:
            raise ValidationError("within-multiplet overlaps violate the spec")


@dataclass(frozen=True)
class SatProbe:
    """Outcome of a separability probe on one dataset.

    ``count`` is exact (and even, by the sigma -> -sigma symmetry) when
    ``enumerated`` is true; early exits and random-classifier probes report
    partial counts with ``enumerated`` false.
    """

    count: int
    sat: bool
    enumerated: bool
    margin_used: float
    method: str


@dataclass(frozen=True)
class PhasePoint:
    """One load point of a SAT-fraction scan."""

    alpha: float
    p: int
    trials: int
    fraction: float
    stderr: float
    mean_count: float | None = None
    count_stderr: float | None = None


def sample_dataset(
    spec: StructureSpec, n: int, p: int, rng: Rng | np.random.Generator
) -> Dataset:
    """p independent multiplets under the flat constrained measure."""
    if p < 1:
        raise ValidationError(f"need p >= 1, got {p}")
    gen = rng.generator() if isinstance(rng, Rng) else rng
    pts = np.stack([sample_multiplet(spec, n, gen) for _ in range(p)])
    return Dataset(spec=spec, n=n, p=p, points=pts)


def _signed_flat(dataset: Dataset, labels: np.ndarray) -> np.ndarray:
    return np.repeat(np.asarray(labels, dtype=float), dataset.spec.k)


def _effective_rank(flat: np.ndarray) -> int:
    s = np.linalg.svd(flat, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > max(flat.shape) * np.finfo(float).eps * s[0]))


def _pick_method(dataset: Dataset, margin: float, p_enum_max: int, method: str) -> str:
    if method != "auto":
        return method
    flat = dataset.flat
    rank = _effective_rank(flat)
    if margin == 0.0 and rank == flat.shape[0]:
        return METHOD_FULL_RANK
    if rank <= 3:
        return METHOD_CELLS
    if dataset.p <= p_enum_max:
        return METHOD_SIGMA
    raise BudgetError(
        f"p={dataset.p} exceeds the sign-vector enumeration budget {p_enum_max} "
        f"and the effective rank {rank} is too high for cell enumeration; "
        "use random_classifier_probe or raise p_enum_max"
    )


def _cells_scan(dataset: Dataset, margin: float, early_exit: bool) -> tuple[int, bool]:
    """Count (or detect) admissible realizable labelings via arrangement cells.

    Degenerate-edge candidates and all positive-margin candidates are
    verified with `max_margin`; at margin 0 on generic data the cell
    patterns are exact as-is.
    """
    flat = dataset.flat
    p, k = dataset.p, dataset.spec.k
    reps, idx, sgn = dedupe_directions(flat)
    accepted: set[bytes] = set()
    rejected: set[bytes] = set()
    for block, verify in sign_pattern_blocks(reps):
        full = block[:, idx] * sgn[None, :]
        grouped = full.reshape(-1, p, k)
        consistent = np.all(grouped == grouped[:, :, :1], axis=(1, 2))
        if not consistent.any():
            continue
        labels = grouped[consistent, :, 0]
        flags = verify[consistent]
        for row, flagged in zip(labels, flags):
            key = row.tobytes()
            if key in accepted or key in rejected:
                continue
            if margin > 0.0 or flagged:
                value = max_margin(flat, _signed_flat(dataset, row))
                if value <= margin + TAU:
                    rejected.add(key)
                    continue
            accepted.add(key)
            if early_exit:
                return len(accepted), True
    return len(accepted), len(accepted) > 0


def _sigma_scan(
    dataset: Dataset, margin: float, p_enum_max: int, early_exit: bool
) -> tuple[int, bool]:
    """Enumerate labelings with the first sign fixed to +1; counts are
    reported for both orientations."""
    p = dataset.p
    if p > p_enum_max:
        raise BudgetError(
            f"p={p} exceeds the sign-vector enumeration budget {p_enum_max}"
        )
    flat = dataset.flat
    feasible = 0
    for bits in product((1, -1), repeat=p - 1):
        labels = np.array((1,) + bits, dtype=np.int8)
        if max_margin(flat, _signed_flat(dataset, labels)) > margin + TAU:
            feasible += 1
            if early_exit:
                return 2 * feasible, True
    return 2 * feasible, feasible > 0


def count_admissible_dichotomies(
    dataset: Dataset,
    margin: float = 0.0,
    p_enum_max: int = DEFAULT_P_ENUM_MAX,
    method: str = "auto",
) -> SatProbe:
    """Exact number of admissible labelings realizable above the margin.

    Backend selection (``method="auto"``): full-rank shortcut when the kp
    points are linearly independent, cell enumeration when the points span
    at most 3 dimensions, otherwise sign-vector enumeration within
    ``p_enum_max`` (`BudgetError` beyond it).
    """
    if margin < 0:
        raise ValidationError("margin must be >= 0")
    chosen = _pick_method(dataset, margin, p_enum_max, method)
    if chosen == METHOD_FULL_RANK:
        count: int = 2 ** dataset.p
    elif chosen == METHOD_CELLS:
        count, _ = _cells_scan(dataset, margin, early_exit=False)
    elif chosen == METHOD_SIGMA:
        count, _ = _sigma_scan(dataset, margin, p_enum_max, early_exit=False)
    else:
        raise ValidationError(f"unknown method {chosen!r}")
    return SatProbe(
        count=count,
        sat=count > 0,
        enumerated=True,
        margin_used=margin,
        method=chosen,
    )


def admissible_exists(
    dataset: Dataset,
    margin: float = 0.0,
    p_enum_max: int = DEFAULT_P_ENUM_MAX,
    method: str = "auto",
) -> SatProbe:
    """SAT/UNSAT decision with early exit on the first realizable labeling.

    UNSAT outcomes are exhaustive (``enumerated=True``); SAT outcomes stop
    at the witness, so the reported count is partial.
    """
    if margin < 0:
        raise ValidationError("margin must be >= 0")
    chosen = _pick_method(dataset, margin, p_enum_max, method)
    if chosen == METHOD_FULL_RANK:
        return SatProbe(
            count=2 ** dataset.p,
            sat=True,
            enumerated=True,
            margin_used=margin,
            method=chosen,
        )
    if chosen == METHOD_CELLS:
        count, sat = _cells_scan(dataset, margin, early_exit=True)
    elif chosen == METHOD_SIGMA:
        count, sat = _sigma_scan(dataset, margin, p_enum_max, early_exit=True)
    else:
        raise ValidationError(f"unknown method {chosen!r}")
    return SatProbe(
        count=count,
        sat=sat,
        enumerated=not sat,  # exhaustion proves UNSAT; a witness exits early
        margin_used=margin,
        method=chosen,
    )


def random_classifier_probe(
    dataset: Dataset,
    num_weights: int,
    rng: Rng | np.random.Generator,
    margin: float = 0.0,
    chunk: int = 16384,
) -> SatProbe:
    """Lower-bound the count by sampling random unit classifiers.

    Each direction w contributes the labeling it induces, provided every
    multiplet is labeled consistently (and, for margin probes, every scalar
    product clears the margin in absolute value).  The number of distinct
    admissible labelings observed converges to the exact count from below;
    sat=False is only the absence of a witness, never a certificate.
    """
    if num_weights < 1:
        raise ValidationError("num_weights must be >= 1")
    gen = rng.generator() if isinstance(rng, Rng) else rng
    flat = dataset.flat
    p, k = dataset.p, dataset.spec.k
    seen: set[bytes] = set()
    remaining = num_weights
    while remaining > 0:
        b = min(chunk, remaining)
        remaining -= b
        w = gen.standard_normal((b, dataset.n))
        w /= np.linalg.norm(w, axis=1, keepdims=True)
        dots = (w @ flat.T).reshape(b, p, k)
        pos = np.all(dots > margin, axis=2)
        neg = np.all(dots < -margin, axis=2)
        ok = np.all(pos | neg, axis=1)
        if not ok.any():
            continue
        labels = np.where(pos[ok], 1, -1).astype(np.int8)
        for row in labels:
            seen.add(row.tobytes())
    return SatProbe(
        count=len(seen),
        sat=len(seen) > 0,
        enumerated=False,
        margin_used=margin,
        method=METHOD_RANDOM,
    )


def _count_worker(args) -> int:
    spec, n, p, margin, p_enum_max, rng, t = args
    ds = sample_dataset(spec, n, p, rng.substream(t))
    return count_admissible_dichotomies(ds, margin=margin, p_enum_max=p_enum_max).count


def _sat_worker(args) -> bool:
    spec, n, p, margin, p_enum_max, probe, num_weights, rng, t = args
    stream = rng.substream(t)
    ds = sample_dataset(spec, n, p, stream)
    if probe == METHOD_RANDOM:
        return random_classifier_probe(
            ds, num_weights, stream.substream(1), margin=margin
        ).sat
    return admissible_exists(ds, margin=margin, p_enum_max=p_enum_max).sat


def _map_ordered(worker, jobs, threads: int):
    if threads <= 1:
        return [worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, jobs, chunksize=8))


def estimate_mean_count(
    spec: StructureSpec,
    n: int,
    p: int,
    trials: int,
    rng: Rng,
    margin: float = 0.0,
    p_enum_max: int = DEFAULT_P_ENUM_MAX,
    threads: int = 1,
) -> tuple[float, float]:
    """Mean admissible-dichotomy count over independent disorder trials.

    Returns (mean, standard error); the error is zero whenever the count is
    deterministic (e.g. unstructured data in general position).
    """
    if trials < 2:
        raise ValidationError("need at least 2 trials for a standard error")
    jobs = [(spec, n, p, margin, p_enum_max, rng, t) for t in range(trials)]
    counts = np.array(_map_ordered(_count_worker, jobs, threads), dtype=float)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(trials))
    return mean, stderr


def sat_fraction_scan(
    spec: StructureSpec,
    n: int,
    alpha_grid: list[float],
    trials: int,
    rng: Rng,
    margin: float = 0.0,
    p_enum_max: int = DEFAULT_P_ENUM_MAX,
    probe: str = "enumerate",
    num_weights: int = 10000,
    threads: int = 1,
    with_counts: bool = False,
    progress=None,
) -> list[PhasePoint]:
    """Fraction of disorder realizations admitting a realizable labeling.

    One point per load value, p = round(alpha * n); margin scans use k=1
    specs with the margin as the constraint.  ``probe`` selects the exact
    decision (``"enumerate"``) or the random-classifier witness search
    (``"random-classifier"``).  Trials are keyed by (grid index, trial
    index) substreams of ``rng``.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if probe not in ("enumerate", METHOD_RANDOM):
        raise ValidationError(f"unknown probe {probe!r}")
    if not alpha_grid:
        raise ValidationError("alpha grid must be nonempty")
    points: list[PhasePoint] = []
    probe_tag = METHOD_RANDOM if probe == METHOD_RANDOM else "enumerate"
    for i, alpha in enumerate(alpha_grid):
        p = int(round(alpha * n))
        if p < 1:
            raise ValidationError(f"alpha={alpha} gives p={p} < 1 at n={n}")
        base = rng.substream(i)
        jobs = [
            (spec, n, p, margin, p_enum_max, probe_tag, num_weights, base, t)
            for t in range(trials)
        ]
        hits = _map_ordered(_sat_worker, jobs, threads)
        frac = float(np.mean(hits))
        stderr = math.sqrt(frac * (1.0 - frac) / trials)
        mean_count = count_stderr = None
        if with_counts:
            cjobs = [
                (spec, n, p, margin, p_enum_max, base.substream(t, 2))
                for t in range(trials)
            ]
            counts = np.array(
                _map_ordered(_count_worker_packed, cjobs, threads), dtype=float
            )
            mean_count = float(counts.mean())
            count_stderr = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        point = PhasePoint(
            alpha=alpha,
            p=p,
            trials=trials,
            fraction=frac,
            stderr=stderr,
            mean_count=mean_count,
            count_stderr=count_stderr,
        )
        points.append(point)
        if progress is not None:
            progress(point, len(points), len(alpha_grid))
    return points


def _count_worker_packed(args) -> int:
    spec, n, p, margin, p_enum_max, stream = args
    ds = sample_dataset(spec, n, p, stream)
    return count_admissible_dichotomies(ds, margin=margin, p_enum_max=p_enum_max).count


def crossover_load(
    points: list[PhasePoint], level: float = 0.5
) -> tuple[float, float]:
    """Load at which the SAT fraction first crosses ``level`` going down.

    Linear interpolation between the bracketing grid points; the error
    propagates the two binomial fraction errors through the interpolation.
    """
    pts = sorted(points, key=lambda q: q.alpha)
    for a, b in zip(pts, pts[1:]):
        if a.fraction >= level > b.fraction:
            gap = a.fraction - b.fraction
            t = (a.fraction - level) / gap
            alpha = a.alpha + t * (b.alpha - a.alpha)
            dt_da = (level - b.fraction) / gap**2
            dt_db = (a.fraction - level) / gap**2
            sigma_t = math.hypot(dt_da * a.stderr, dt_db * b.stderr)
            return alpha, abs(b.alpha - a.alpha) * sigma_t
    raise ValidationError(f"SAT fraction never crosses {level} on this grid")
