"""Degree threshold N(a): self-consistent centroid bound, choice of c, table rows.

``rule`` selects which threshold drives the centroid fixed point:

* ``"paper"`` uses the crossing degree N3 alone.  This is the rule under
  which the published table is reproducible (its N column is N3).
* ``"strict"`` uses max(N1, N2, N3), the threshold that also honours the
  hypotheses of the upper estimate.  For small a, N2 dominates and the fixed
  point moves well below the published m.

Either way every row carries N1, N2 and N3 and flags ``exceeds`` when
max(N1, N2, N3) is larger than the reported N.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .bounds import centroid_params, constants, degree_thresholds, m_upper_bound_argmin
from .errors import ConvergenceError, DomainError, InvalidRowError, SendovError

RULES = ("paper", "strict")
DAMPING = 0.5
MAX_ITER = 200
# stands in for an invalid c inside the bounded search
INVALID_SCORE = 1e12

# (a, c, m, r, alpha, p, q, K, N) as printed
PAPER_TABLE = (
    (0.9, 0.756, 0.080, 0.1270, 13.32, 0.673, 0.255, 1.031, 1006),
    (0.8, 0.700, 0.100, 0.0686, 9.66, 0.500, 0.214, 1.049, 616),
    (0.7, 0.630, 0.110, 0.0366, 7.3, 0.369, 0.178, 1.051, 560),
    (0.6, 0.550, 0.100, 0.0197, 5.73, 0.286, 0.154, 1.048, 563),
    (0.5, 0.460, 0.100, 0.0117, 4.58, 0.200, 0.120, 1.035, 718),
    (0.4, 0.374, 0.089, 0.0057, 3.8, 0.139, 0.093, 1.024, 1004),
    (0.3, 0.284, 0.073, 0.0025, 3.18, 0.091, 0.067, 1.014, 1654),
    (0.2, 0.191, 0.053, 0.0009, 2.65, 0.052, 0.043, 1.007, 3587),
    (0.1, 0.096, 0.029, 0.0002, 2.17, 0.022, 0.020, 1.002, 15064),
)
PAPER_COLUMNS = ("a", "c", "m", "r", "alpha", "p", "q", "K", "N")
# printed decimals per column
PAPER_DIGITS = {"c": 3, "m": 3, "r": 4, "alpha": 2, "p": 3, "q": 3, "K": 3}


def paper_row(a: float) -> tuple | None:
    for row in PAPER_TABLE:
        if abs(row[0] - a) < 1e-12:
            return row
    return None


@dataclass(frozen=True)
class ThresholdRow:
    a: float
    c: float
    m: float
    r: float
    alpha: float
    p: float
    q: float
    K: float
    N: int
    N1: int
    N2: int
    N3: int
    N3_value: float
    delta_star: float
    residual: float
    rule: str = "paper"
    pinned: bool = False

    @property
    def N_max(self) -> int:
        return max(self.N1, self.N2, self.N3)

    @property
    def exceeds(self) -> bool:
        """max(N1, N2, N3) is larger than the reported N."""
        return self.N_max > self.N

    def to_dict(self) -> dict:
        d = asdict(self)
        d["N_max"] = self.N_max
        d["exceeds"] = self.exceeds
        return d


def _driver(t, rule: str) -> int:
    return t.N3 if rule == "paper" else t.N


def make_row(a: float, c: float, m: float, rule: str = "paper", pinned: bool = False,
             residual: float | None = None) -> ThresholdRow:
    if rule not in RULES:
        raise DomainError(f"unknown rule {rule!r}; expected one of {RULES}")
    p, q = centroid_params(a, m)
    k = constants(a, c, m)
    t = degree_thresholds(a, c, m)
    n = _driver(t, rule)
    bound, dstar = m_upper_bound_argmin(a, n)
    if residual is None:
        residual = abs(m - bound)
    return ThresholdRow(a, c, m, k.r, k.alpha, p, q, k.K, n, t.N1, t.N2, t.N3, t.N3_value,
                        dstar, residual, rule, pinned)


def fixed_point_m(a: float, c: float, tol: float = 1e-10, rule: str = "paper",
                  m0: float | None = None) -> tuple[float, int]:
    """Self-consistent centroid bound m = m_upper_bound(a, N(a, c, m)).

    Damped iteration m <- m + 0.5 (bound - m).  The map is decreasing in m and
    piecewise constant (N is an integer), so the iterates are also kept inside
    a bracket [lo, hi] with bound > m at lo and bound <= m at hi; whenever the
    damped step leaves the bracket it is replaced by the midpoint.  Stops once
    |bound - m| <= tol or the bracket is narrower than tol, returning the
    upper end of the bracket (where bound <= m) in the latter case.
    """
    if not 0 < c < a < 1:
        raise DomainError(f"need 0 < c < a < 1, got a={a}, c={c}")
    if rule not in RULES:
        raise DomainError(f"unknown rule {rule!r}; expected one of {RULES}")

    def step(m: float) -> tuple[float, int]:
        t = degree_thresholds(a, c, m)  # raises InvalidRowError when K <= 1
        n = _driver(t, rule)
        return m_upper_bound_argmin(a, n)[0], n

    lo, hi = 0.0, a / 2
    hi_n = None
    m = a / 4 if m0 is None else m0
    for _ in range(MAX_ITER):
        bound, n = step(m)
        gap = bound - m
        if abs(gap) <= tol:
            return m, n
        if gap > 0:
            lo = max(lo, m)
        else:
            hi, hi_n = min(hi, m), n
        if hi - lo <= tol and hi_n is not None:
            return hi, hi_n
        nxt = m + DAMPING * gap
        if not lo < nxt < hi:
            nxt = (lo + hi) / 2
        m = nxt
    raise ConvergenceError(f"fixed point for a={a}, c={c} did not settle in {MAX_ITER} iterations")


def _row_for_c(a: float, c: float, rule: str) -> ThresholdRow | None:
    try:
        m, _ = fixed_point_m(a, c, rule=rule)
        return make_row(a, c, m, rule)
    except SendovError:
        return None


def optimize_c(a: float, rule: str = "paper", steps: int = 200) -> tuple[float, ThresholdRow]:
    """Choose c in (0, a) minimizing the threshold.

    Coarse grid with spacing a/steps, then golden-section refinement of the
    real-valued crossing degree around the best grid point.
    """
    if not 0 < a < 1:
        raise DomainError(f"need 0 < a < 1, got {a}")
    grid = [a * i / steps for i in range(1, steps)]
    rows = [_row_for_c(a, c, rule) for c in grid]
    scored = [(_score(r), i) for i, r in enumerate(rows) if r is not None]
    if not scored:
        raise InvalidRowError(f"K <= 1 for every sampled c at a={a}")
    _, best = min(scored)

    def objective(c: float) -> float:
        row = _row_for_c(a, c, rule)
        return INVALID_SCORE if row is None else _score(row)

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-6 * a})
    cand = _row_for_c(a, float(res.x), rule)
    row = rows[best]
    if cand is not None and _score(cand) < _score(row):
        row = cand
    return row.c, row


def _score(row: ThresholdRow) -> float:
    """Threshold as a real number, so ties between integer N break smoothly."""
    if row.rule == "paper" or row.N == row.N3:
        return row.N3_value
    return float(row.N)


def make_table(avalues: Iterable[float], pinned: bool = False, rule: str = "paper",
               jobs: int = 1) -> list[ThresholdRow | SendovError]:
    """One row per a.  Failed rows are returned as the exception that stopped them."""
    avalues = list(avalues)

    def one(a: float):
        try:
            if pinned:
                pr = paper_row(a)
                if pr is None:
                    raise DomainError(f"no published row for a={a}")
                return make_row(a, pr[1], pr[2], rule, pinned=True)
            return optimize_c(a, rule)[1]
        except SendovError as exc:
            return exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, avalues))
    return [one(a) for a in avalues]


def _fmt(name: str, value) -> str:
    if name in PAPER_DIGITS:
        return f"{value:.{PAPER_DIGITS[name]}f}"
    if name == "a":
        return f"{value:g}"
    return str(value)


def table_csv(rows: Sequence[ThresholdRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PAPER_COLUMNS)
    for row in rows:
        d = asdict(row)
        w.writerow([_fmt(k, d[k]) for k in PAPER_COLUMNS])
    return buf.getvalue()


def table_json(rows: Sequence[ThresholdRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2)


def compare_with_paper(row: ThresholdRow) -> dict:
    """Relative gap between the crossing degree and the printed N, with flags.

    ``exceeds_printed`` marks rows where max(N1, N2, N3) is above the printed N,
    i.e. where the published threshold does not cover N1 or N2.
    """
    pr = paper_row(row.a)
    if pr is None:
        raise DomainError(f"no published row for a={row.a}")
    printed = pr[-1]
    return {
        "a": row.a,
        "printed_N": printed,
        "N1": row.N1,
        "N2": row.N2,
        "N3": row.N3,
        "N3_rel_gap": (row.N3_value - printed) / printed,
        "exceeds_printed": row.N_max > printed,
    }
