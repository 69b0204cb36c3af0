"""Exact linear-separability decisions and hard-margin values.

Two complementary exact engines:

* `max_margin` solves the homogeneous hard-margin problem
  max_{|w|=1} min_i sigma_i (w . xi_i) through its dual: the optimum equals
  the Euclidean distance from the origin to the convex hull of the signed
  points, computed with Wolfe's minimum-norm-point algorithm.  A positive
  value certifies strict separability (the optimal w is the normalized
  hull point); when the origin lies in the hull the problem value is <= 0
  and 0.0 is returned (strictness is decided by the tolerance TAU, so the
  exact nonpositive depth is never needed).

* `sign_pattern_blocks` enumerates every sign vector realizable by some
  direction w, i.e. the cells of the central hyperplane arrangement whose
  normals are the points.  Each full-dimensional cone of a (projected)
  rank-r arrangement is pointed, hence adjacent to an edge spanned by some
  r-1 of the normals; perturbing along each edge direction reaches all
  2^(r-1) cells around it, so scanning the (r-1)-subsets reaches every
  cell.  Cost grows like m^(r-1) 2^r, which is what makes exact SAT/UNSAT
  decisions possible far beyond any 2^p label enumeration when r <= 3.

Both engines are cross-validated against each other in the test suite.
"""

from __future__ import annotations

import math
from itertools import combinations, product
from typing import Iterator

import numpy as np

from .errors import BudgetError, ValidationError

# Strict-separability threshold: margins in [0, TAU] count as "not strictly
# separable" (boundary cases have measure zero for continuous disorder).
TAU = 1e-9

# |w . x| below this, for a hyperplane not in the generating subset, marks a
# degenerate edge; candidate patterns from such edges get verified explicitly.
DEGENERACY_TOL = 1e-9

_MNP_TOL = 1e-13


def _affine_minimizer(points: np.ndarray) -> np.ndarray:
    """Weights (summing to 1, possibly negative) of the minimum-norm point
    in the affine hull of the given rows."""
    s = points.shape[0]
    if s == 1:
        return np.ones(1)
    a = np.zeros((s + 1, s + 1))
    a[:s, :s] = points @ points.T
    a[:s, s] = 1.0
    a[s, :s] = 1.0
    b = np.zeros(s + 1)
    b[s] = 1.0
    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(a, b, rcond=None)[0]
    return sol[:s]


def min_norm_point(points: np.ndarray, tol: float = _MNP_TOL) -> np.ndarray:
    """Minimum-norm point of the convex hull of the rows (Wolfe's algorithm).

    Maintains a corral of affinely independent rows; alternates between
    adding the row most violating the support condition
    min_j x_j . d >= |d|^2 and pruning the corral to keep the affine
    minimizer inside the simplex.  Terminates at the exact optimum up to
    the support tolerance.
    """
    x_rows = np.asarray(points, dtype=float)
    if x_rows.ndim != 2 or x_rows.shape[0] < 1:
        raise ValidationError("min_norm_point needs a nonempty 2-D point array")
    m = x_rows.shape[0]
    scale = max(float(np.max(np.einsum("ij,ij->i", x_rows, x_rows))), 1.0)
    start = int(np.argmin(np.einsum("ij,ij->i", x_rows, x_rows)))
    corral = [start]
    lam = np.array([1.0])
    d = x_rows[start].copy()
    for _ in range(16 * m + 64):
        dots = x_rows @ d
        j = int(np.argmin(dots))
        if dots[j] > d @ d - tol * scale:
            break
        if j in corral:
            break  # arithmetic stall; d is optimal to working precision
        corral.append(j)
        lam = np.append(lam, 0.0)
        while True:
            sub = x_rows[corral]
            w = _affine_minimizer(sub)
            if np.all(w > 1e-12):
                lam = w
                break
            # step toward w until the first coefficient hits zero, drop it
            shrink = lam - w
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(shrink > 1e-15, lam / shrink, np.inf)
            ratios[w > 1e-12] = np.inf
            theta = min(1.0, float(ratios.min()))
            lam = (1.0 - theta) * lam + theta * w
            lam[lam < 1e-12] = 0.0
            keep = lam > 0.0
            if keep.all():
                lam = lam / lam.sum()
                break
            corral = [c for c, kp in zip(corral, keep) if kp]
            lam = lam[keep]
            lam = lam / lam.sum()
        d = lam @ x_rows[corral]
    return d


def max_margin(points: np.ndarray, signs: np.ndarray) -> float:
    """Best worst-case margin of a homogeneous unit-norm linear classifier.

    Equals the distance from the origin to the hull of the signed points
    when that is positive; values at or below TAU collapse to exactly 0.0
    (not strictly separable).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValidationError("points must be a (m, n) array")
    sg = np.asarray(signs, dtype=float).reshape(-1)
    if sg.shape[0] != pts.shape[0]:
        raise ValidationError("one sign per point required")
    if not np.all(np.abs(sg) == 1.0):
        raise ValidationError("signs must be +/-1")
    d = min_norm_point(sg[:, None] * pts)
    value = float(np.linalg.norm(d))
    return value if value > TAU else 0.0


def linearly_separable(points: np.ndarray, signs: np.ndarray) -> bool:
    """True iff some direction w strictly separates (margin above TAU)."""
    return max_margin(points, signs) > TAU


def dedupe_directions(points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Collapse rows that are exact duplicates up to sign.

    Returns (representatives, rep_index, rep_sign) with
    points[i] == rep_sign[i] * representatives[rep_index[i]] bitwise.
    Coincident or antipodal points (overlaps +/-1) define the same
    hyperplane and would break the generic-arrangement assumptions.
    """
    reps: list[np.ndarray] = []
    keys: dict[bytes, int] = {}
    idx = np.empty(points.shape[0], dtype=np.intp)
    sgn = np.empty(points.shape[0], dtype=np.int8)
    for i, row in enumerate(points):
        kp = row.tobytes()
        kn = (-row).tobytes()
        canon = min(kp, kn)
        if canon not in keys:
            keys[canon] = len(reps)
            reps.append(row if kp <= kn else -row)
        idx[i] = keys[canon]
        sgn[i] = 1 if (row if kp <= kn else -row).tobytes() == kp else -1
    return np.array(reps), idx, sgn


def _project_to_row_space(points: np.ndarray) -> tuple[np.ndarray, int]:
    u, s, _ = np.linalg.svd(points, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return points[:, :0], 0
    r = int(np.sum(s > max(points.shape) * np.finfo(float).eps * s[0]))
    return u[:, :r] * s[:r], r


def sign_pattern_blocks(
    points: np.ndarray, chunk: int = 4096
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield blocks of candidate realizable sign patterns of the rows.

    Each yielded pair is (block, verify) where block is an int8 array of
    shape (b, m) with entries +/-1 and verify flags the rows that came from
    a degenerate edge (an extra hyperplane through it) and therefore need
    an explicit margin check before being trusted.  Rows must be distinct
    as hyperplanes (see `dedupe_directions`); patterns may repeat across
    blocks, callers deduplicate.  Together the non-flagged rows cover every
    cell of the central arrangement exactly once or more.
    """
    pts = np.asarray(points, dtype=float)
    m = pts.shape[0]
    if m == 0:
        raise ValidationError("need at least one point")
    proj, r = _project_to_row_space(pts)
    if r == 0:
        raise ValidationError("all points are zero")
    if r == 1:
        s = np.sign(proj[:, 0]).astype(np.int8)
        block = np.stack([s, -s])
        yield block, np.zeros(2, dtype=bool)
        return
    n_fix = r - 1
    n_subsets = math.comb(m, n_fix)
    if n_subsets * (2 ** n_fix) > 5e7:
        raise BudgetError(
            f"cell enumeration over {n_subsets} edge subsets in rank {r} is too large"
        )
    combos = np.array(list(product((1, -1), repeat=n_fix)), dtype=np.int8)
    subset_iter = combinations(range(m), n_fix)
    while True:
        batch = list(_take(subset_iter, chunk))
        if not batch:
            return
        sub = np.array(batch, dtype=np.intp)  # (b, r-1)
        dirs = _null_directions(proj, sub, r)  # (b, r)
        norms = np.linalg.norm(dirs, axis=1)
        good = norms > 1e-12  # near-parallel generators span no edge
        if not good.any():
            continue
        sub = sub[good]
        dirs = dirs[good] / norms[good, None]
        for orient in (1.0, -1.0):
            dots = (orient * dirs) @ proj.T  # (b, m)
            base = np.where(dots > 0, 1, -1).astype(np.int8)
            near_zero = np.abs(dots) <= DEGENERACY_TOL
            np.put_along_axis(near_zero, sub, False, axis=1)
            degenerate = near_zero.any(axis=1)
            b = sub.shape[0]
            for combo in combos:
                block = base.copy()
                np.put_along_axis(block, sub, np.broadcast_to(combo, sub.shape), axis=1)
                yield block, degenerate.copy()


def _take(iterator, count):
    for _, item in zip(range(count), iterator):
        yield item


def _null_directions(proj: np.ndarray, subsets: np.ndarray, r: int) -> np.ndarray:
    """Unit spanning vector of the common null space of each (r-1)-subset."""
    if r == 2:
        rows = proj[subsets[:, 0]]
        return np.stack([-rows[:, 1], rows[:, 0]], axis=1)
    if r == 3:
        return np.cross(proj[subsets[:, 0]], proj[subsets[:, 1]])
    out = np.empty((subsets.shape[0], r))
    for i, sub in enumerate(subsets):
        _, s, vt = np.linalg.svd(proj[sub], full_matrices=True)
        out[i] = vt[-1]
        if s.size >= r - 1 and s[-1] <= 1e-12 * max(s[0], 1.0):
            out[i] = 0.0  # rank-deficient subset: no unique edge
    return out


def realizable_sign_patterns(points: np.ndarray) -> np.ndarray:
    """All sign vectors realizable on the rows by some direction, deduplicated.

    Cells of the central arrangement (strictly separable patterns).  Rows
    coincident up to sign are collapsed and re-expanded, so degenerate
    inputs (repeated or antipodal points) are handled exactly.
    """
    pts = np.asarray(points, dtype=float)
    reps, idx, sgn = dedupe_directions(pts)
    seen: set[bytes] = set()
    rows: list[np.ndarray] = []
    for block, verify in sign_pattern_blocks(reps):
        full = block[:, idx] * sgn[None, :]
        for row, needs_check in zip(full, verify):
            key = row.tobytes()
            if key in seen:
                continue
            if needs_check and max_margin(pts, row) <= TAU:
                continue
            seen.add(key)
            rows.append(row)
    return np.array(rows, dtype=np.int8)
