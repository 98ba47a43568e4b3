"""Scalar bounds for a hypothetical counterexample of degree n with zero a.

All logarithms are natural.  Functions validate their precondition intervals
and raise :class:`DomainError` outside them.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, InvalidRowError, ThresholdOverflowError
from .geometry import one_minus_sqrt
from .polycore import Polynomial, derivative
from .rootsolver import all_roots

SCAN_CAP = 10**7


# ---------------------------------------------------------------- parameters

def centroid_params(a: float, m: float) -> tuple[float, float]:
    """p and q for a centroid with real part m (values outside [0, 1] pass through)."""
    if not 0 < a < 1:
        raise DomainError(f"need 0 < a < 1, got {a}")
    return (a / 2 - m) / (1 - a / 2), (a / 2 - m) / (1 + a / 2)


def params_in_range(p: float, q: float) -> bool:
    return 0 <= q <= p <= 1


@dataclass(frozen=True)
class SampleStats:
    s: float
    prodabs: float

    @classmethod
    def of(cls, points: Sequence[complex]) -> SampleStats:
        z = np.asarray(points, dtype=np.complex128)
        return cls(float(z.real.mean()), float(np.prod(np.abs(z))))


# ---------------------------------------------------------------- lemma bounds

def lemma1_bound(delta: float, s: float, n: int) -> float:
    """Upper bound sqrt(1 + delta^2 - 2 delta s)^n for prod |delta - a_k|."""
    if not (0 < delta < 1 and -1 <= s <= 1 and n >= 1):
        raise DomainError(f"need 0 < delta < 1, -1 <= s <= 1, n >= 1; got {delta}, {s}, {n}")
    return math.sqrt(1 + delta * delta - 2 * delta * s) ** n


def lemmaA_bound(delta: float, a: float, s: float) -> float:
    """Per-factor bound A < 1 for |(delta - b_k) / (a - b_k)| over the lens complement."""
    if not (0 < delta < a < 1 and s <= a / 2):
        raise DomainError(f"need 0 < delta < a < 1 and s <= a/2; got {delta}, {a}, {s}")
    q = (a / 2 - s) / (1 + a / 2)
    return ((1 + delta) / (1 + a)) ** q * math.sqrt(1 + delta * delta - delta * a) ** (1 - q)


def lemmaB_branches(b: float, a: float, s: float) -> tuple[float, float]:
    if not (b > 1 and 0 < a < 1 and s <= a / 2):
        raise DomainError(f"need b > 1, 0 < a < 1, s <= a/2; got {b}, {a}, {s}")
    p = (a / 2 - s) / (1 - a / 2)
    q = (a / 2 - s) / (1 + a / 2)
    root = math.sqrt(1 + b * b - b * a)
    return (1 + b - a) ** p * root ** (1 - p), (1 + b) ** q * root ** (1 - q)


def lemmaB_bound(b: float, a: float, s: float) -> float:
    """min(B1, B2), a per-factor lower bound for |b - b_k| over the lens complement."""
    return min(lemmaB_branches(b, a, s))


def moebius_radius(c: float, r: float) -> float:
    """(c + r) / (1 + c r): modulus of the real point at Moebius distance r beyond c."""
    return (c + r) / (1 + c * r)


def lemma_beta_exponent(c: float, r: float, prodabs: float) -> float:
    if not (0 < c < 1 and 0 < r < 1 - c and 0 < prodabs <= 1):
        raise DomainError(
            f"need 0 < c < 1, 0 < r < 1 - c, 0 < prodabs <= 1; got {c}, {r}, {prodabs}")
    return math.log(prodabs) / math.log(moebius_radius(c, r))


def lemma_beta_bound(c: float, r: float, prodabs: float) -> float:
    """r**beta, lower bound for a product of Moebius distances from c."""
    return r ** lemma_beta_exponent(c, r, prodabs)


def sym_check(c: float, h: float, z: complex) -> tuple[float, float]:
    """Both sides of |c - z| >= c/(1-h) |(1-h)^2/c - z| for |z| >= 1 - h."""
    if not (0 < c < 1 - h and h >= 0):
        raise DomainError(f"need 0 < c < 1 - h, got c={c}, h={h}")
    if abs(z) < (1 - h) * (1 - 1e-12):
        raise DomainError(f"need |z| >= 1 - h, got |z|={abs(z)}")
    s = 1 - h
    return abs(c - z), c / s * abs(s * s / c - z)


def mini_check(p: Polynomial, b: float, check_roots: bool = True) -> tuple[float, float]:
    """(|P(b)|, (b-1)/n |P'(b)|) for P with every zero in the closed unit disk."""
    if not b > 1:
        raise DomainError(f"need b > 1, got {b}")
    if p.degree < 1:
        raise DomainError("need a nonconstant polynomial")
    if check_roots:
        rr = all_roots(p).roots
        if np.abs(rr).max() > 1 + 1e-8:
            raise DomainError("precondition violated: a root lies outside the unit disk")
    n = p.degree
    return abs(p(b)), (b - 1) / n * abs(derivative(p)(b))


# ---------------------------------------------------------------- centroid estimate

def _m_objective(delta: float, a: float, n: float) -> float:
    return delta / 2 - math.log(one_minus_sqrt(delta * delta - delta * a)) / (delta * n)


@lru_cache(maxsize=65536)
def m_upper_bound_argmin(a: float, n: int) -> tuple[float, float]:
    """(infimum, minimizer) of delta/2 - log(1 - sqrt(1 + delta^2 - delta a)) / (delta n).

    The objective blows up at both ends of (0, a); a log-spaced scan brackets
    the minimum and a bounded Brent search refines it.
    """
    if not (0 < a < 1 and n >= 2):
        raise DomainError(f"need 0 < a < 1 and n >= 2; got a={a}, n={n}")
    grid = a * np.geomspace(1e-6, 1 - 1e-9, 400)
    vals = [_m_objective(d, a, n) for d in grid]
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(_m_objective, bounds=(lo, hi), args=(a, n), method="bounded",
                          options={"xatol": 1e-12 * a})
    if res.fun <= vals[i]:
        return float(res.fun), float(res.x)
    return float(vals[i]), float(grid[i])


def m_upper_bound(a: float, n: int) -> float:
    return m_upper_bound_argmin(a, n)[0]


# ---------------------------------------------------------------- upper estimate of |P(c)|

def rapport_lower(delta: float, a: float, n: int) -> float:
    """Lower bound (1 - sqrt(1 + delta^2 - delta a)) / n for |P(delta) / P'(a)|."""
    if not (0 < delta < a and n >= 1):
        raise DomainError(f"need 0 < delta < a and n >= 1; got {delta}, {a}, {n}")
    return float(one_minus_sqrt(delta * delta - delta * a)) / n


def thm_P4_bounds(a: float, n: int) -> tuple[float, float]:
    """(upper bound on |P'(a)|, lower bound on |P(0)|) once n >= N1."""
    if not (0 < a <= 1 and n >= 1):
        raise DomainError(f"need 0 < a <= 1 and n >= 1; got a={a}, n={n}")
    return 16 * n / a**2, a**2 / 16


class Constants(NamedTuple):
    r: float
    alpha: float
    K: float
    D: float

    @property
    def valid(self) -> bool:
        return self.K > 1

    @property
    def D_ok(self) -> bool:
        return self.D < 1


def constants(a: float, c: float, m: float) -> Constants:
    if not 0 < c < a < 1:
        raise DomainError(f"need 0 < c < a < 1, got a={a}, c={c}")
    p, q = centroid_params(a, m)
    r = c * (a - c) / (2 * (1 - c * c))
    alpha = math.log(a / 16) / math.log(moebius_radius(c, r))
    root = math.sqrt(1 + c * c - a * c)
    K = min((1 + c - a * c) ** p * root ** (1 - p), (1 + c) ** q * root ** (1 - q))
    D = max((1 / (1 + a)) ** q, ((1 + c) / (1 + a)) ** q * root ** (1 - q))
    return Constants(r, alpha, K, D)


def lower_estimate(a: float, c: float, consts: Constants, n: int) -> float:
    """(1-c)(a-c)/(1-ac) r^alpha K^(n-1), the lower bound on |P(c)|."""
    return (1 - c) * (a - c) / (1 - a * c) * consts.r ** consts.alpha * consts.K ** (n - 1)


# ---------------------------------------------------------------- degree thresholds

def smallest_n(predicate, start: int = 2, cap: int = SCAN_CAP) -> int:
    """Smallest n >= start with predicate(n) true, for predicates false-then-true.

    Doubles until the predicate holds, then bisects.
    """
    if predicate(start):
        return start
    lo, hi = start, start * 2
    while not predicate(hi):
        lo, hi = hi, hi * 2
        if lo > cap:
            raise ThresholdOverflowError(f"threshold scan exceeded cap {cap}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    if hi > cap:
        raise ThresholdOverflowError(f"threshold {hi} exceeds cap {cap}")
    return hi


def n1_threshold(a: float, q: float) -> int:
    """Smallest n with ((1 + a/2)/(1 + a))^(q(n-1)) <= (1 - sqrt(1 - a^2/4)) / (n a)."""
    if q <= 0:
        raise ThresholdOverflowError("q <= 0: the N1 inequality never holds")
    log_ratio = math.log((1 + a / 2) / (1 + a))
    log_kappa = math.log(float(one_minus_sqrt(-a * a / 4)) / a)
    return smallest_n(lambda n: q * (n - 1) * log_ratio <= log_kappa - math.log(n))


def n2_threshold(a: float, D: float) -> int:
    """Smallest n with D^(n-1) <= a / (16 n)."""
    if not 0 < D < 1:
        raise ThresholdOverflowError(f"D = {D} is not below 1: the N2 inequality never holds")
    log_d = math.log(D)
    return smallest_n(lambda n: (n - 1) * log_d <= math.log(a / 16) - math.log(n))


def n3_value(a: float, c: float, consts: Constants) -> float:
    """The real-valued crossing degree of the upper and lower estimates of |P(c)|."""
    if not consts.valid:
        raise InvalidRowError(f"K = {consts.K} <= 1: no threshold for a={a}, c={c}")
    num = math.log((1 + a) * (1 - a * c) / ((1 - c) * (a - c))) - consts.alpha * math.log(consts.r)
    return num / math.log(consts.K) + 1


class Thresholds(NamedTuple):
    N1: int
    N2: int
    N3: int
    N: int
    N3_value: float


def degree_thresholds(a: float, c: float, m: float) -> Thresholds:
    consts = constants(a, c, m)
    x = n3_value(a, c, consts)
    n3 = math.floor(x) + 1
    _, q = centroid_params(a, m)
    n1 = n1_threshold(a, q)
    n2 = n2_threshold(a, consts.D)
    return Thresholds(n1, n2, n3, max(n1, n2, n3), x)


# ---------------------------------------------------------------- context bundle

@dataclass(frozen=True)
class BoundContext:
    a: float
    c: float
    m: float
    n: int
    p: float
    q: float
    r: float
    alpha: float
    K: float
    D: float
    N1: int
    N2: int
    N: int

    @classmethod
    def build(cls, a: float, c: float, m: float, n: int | None = None) -> BoundContext:
        """Assemble every constant for (a, c, m); ``n`` defaults to N."""
        p, q = centroid_params(a, m)
        k = constants(a, c, m)
        t = degree_thresholds(a, c, m)
        return cls(a, c, m, t.N if n is None else n, p, q, k.r, k.alpha, k.K, k.D, t.N1, t.N2, t.N)

    def to_dict(self) -> dict:
        return asdict(self)
