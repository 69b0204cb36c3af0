"""Log-domain evaluation of the admissible-dichotomy counting recursion.

The mean number of admissible dichotomies of p multiplets in dimension n
obeys

    C[n, p+1] = sum_{l=0}^{k} theta_l * C[n-l, p]

with boundary values C[n>=1, 1] = 2 and C[n<=0, p] = 0 (indices n-l <= 0
contribute nothing, the only extension that keeps the step well defined up
to l = k).  The exact boundary depends mildly on the multiplet geometry;
the asymptotic quantities extracted from the table are insensitive to this
approximation.  For k=1 the recursion is Cover's and reproduces his closed
form exactly.

Counts overflow doubles already for moderate p, so tables store natural
logs with -inf encoding an exact zero; the recursion has positive weights,
so a shifted log-sum-exp loses nothing.  The VC entropy is H = log C.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import NoCrossingError, OutOfGridError, ValidationError
from .numerics import NEG_INF, bisect_root
from .structure import ThetaCoefficients

LOG2 = math.log(2.0)


def cover_count_exact(n: int, p: int) -> int:
    """Cover's function-counting formula, as an exact integer.

    Number of dichotomies of p points in general position realizable by a
    homogeneous linear classifier in R^n:

        C(n, p) = 2 * sum_{l=0}^{n-1} binom(p-1, l)

    Equals 2^p whenever p <= n (full expressivity).
    """
    if n < 1 or p < 1:
        raise ValidationError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    return 2 * sum(comb(p - 1, l) for l in range(min(n, p)))


@dataclass(frozen=True)
class CountTable:
    """Grid of log mean admissible-dichotomy counts.

    ``log_counts[n, p]`` holds log C[n, p] for 0 <= n <= n_max and
    1 <= p <= p_max (row 0 and column 0 are -inf padding).  Immutable after
    construction and safe to share between workers.
    """

    theta: ThetaCoefficients
    n_max: int
    p_max: int
    log_counts: np.ndarray

    def log_count(self, n: int, p: int) -> float:
        """log C[n, p]; -inf means an exact zero count."""
        if not (1 <= n <= self.n_max and 1 <= p <= self.p_max):
            raise OutOfGridError(
                f"(n={n}, p={p}) outside grid 1..{self.n_max} x 1..{self.p_max}"
            )
        return float(self.log_counts[n, p])

    def log_count_at_load(self, n: int, alpha: float) -> float:
        """log C at real-valued p = alpha*n, linear in log between columns."""
        p = alpha * n
        if p < 1 or p > self.p_max:
            raise OutOfGridError(f"p = alpha*n = {p} outside 1..{self.p_max}")
        lo = int(math.floor(p))
        hi = min(lo + 1, self.p_max)
        frac = p - lo
        a = self.log_counts[n, lo]
        b = self.log_counts[n, hi]
        if frac == 0.0 or a == NEG_INF or b == NEG_INF:
            return float(a if frac < 1.0 else b)
        return float((1.0 - frac) * a + frac * b)

    def to_csv(self, path, float_format: str = "%.17g") -> None:
        """Rows n,p,alpha,log_count for the whole grid."""
        with open(path, "w") as fh:
            fh.write("n,p,alpha,log_count\n")
            for n in range(1, self.n_max + 1):
                for p in range(1, self.p_max + 1):
                    alpha = p / n
                    fh.write(
                        "%d,%d,%s,%s\n"
                        % (n, p, float_format % alpha, float_format % self.log_counts[n, p])
                    )

    def summary(self) -> dict:
        """JSON-ready digest: coefficients, grid bounds, content checksum."""
        payload = self.log_counts[1:, 1:].tobytes()
        return {
            "theta": list(self.theta.theta),
            "n_max": self.n_max,
            "p_max": self.p_max,
            "checksum": hashlib.sha256(payload).hexdigest(),
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def build_count_table(theta: ThetaCoefficients, n_max: int, p_max: int) -> CountTable:
    """Fill the (n, p) grid by iterating the recursion in log domain.

    Each p-step is a weighted log-sum-exp over the k+1 shifted n-rows;
    zero coefficients enter as log 0 = -inf and drop out exactly.
    """
    if n_max < 1 or p_max < 1:
        raise ValidationError("grid bounds must be >= 1")
    k = theta.k
    log_theta = np.array(
        [math.log(t) if t > 0 else NEG_INF for t in theta.theta]
    )
    grid = np.full((n_max + 1, p_max + 1), NEG_INF)
    grid[1:, 1] = LOG2
    col = grid[:, 1].copy()
    for p in range(1, p_max):
        nxt = np.full(n_max + 1, NEG_INF)
        for l in range(k + 1):
            if log_theta[l] == NEG_INF:
                continue
            shifted = np.full(n_max + 1, NEG_INF)
            shifted[l:] = col[: n_max + 1 - l]  # C[n-l, p]; n-l <= 0 contributes 0
            nxt = np.logaddexp(nxt, log_theta[l] + shifted)
        nxt[0] = NEG_INF
        grid[:, p + 1] = nxt
        col = nxt
    return CountTable(theta=theta, n_max=n_max, p_max=p_max, log_counts=grid)


def vc_entropy(table: CountTable, n: int, p: int) -> float:
    """VC entropy H[n, p] = log C[n, p] (natural log; -inf for zero count)."""
    return table.log_count(n, p)


def crossing_load(
    theta: ThetaCoefficients,
    n1: int,
    n2: int,
    alpha_window: tuple[float, float],
    tol: float = 1e-4,
) -> float:
    """Load at which the entropy curves for dimensions n1 and n2 cross.

    Solves H[n1, alpha*n1] = H[n2, alpha*n2] by bisection on the window,
    with p interpolated linearly in log C between integer columns (the
    entropy is smooth at the 1e-4 resolution needed here).  Raises
    `NoCrossingError` when the difference keeps one sign over the window,
    which is the generic situation for Cover's k=1 recursion where the
    curves diverge monotonically.
    """
    if n1 == n2:
        raise ValidationError("crossing_load needs two distinct dimensions")
    lo, hi = alpha_window
    if not (0 < lo < hi):
        raise ValidationError(f"invalid load window {alpha_window}")
    n_max = max(n1, n2)
    p_max = int(math.ceil(hi * n_max)) + 1
    table = build_count_table(theta, n_max=n_max, p_max=p_max)

    def gap(alpha: float) -> float:
        return table.log_count_at_load(n1, alpha) - table.log_count_at_load(n2, alpha)

    if lo * min(n1, n2) < 1:
        lo = 1.0 / min(n1, n2)  # keep p >= 1 on both curves
    glo, ghi = gap(lo), gap(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if math.copysign(1.0, glo) == math.copysign(1.0, ghi):
        raise NoCrossingError(
            f"entropy curves for n={n1} and n={n2} do not cross on {alpha_window}"
        )
    return bisect_root(gap, lo, hi, tol=tol)
