"""Executable forms of the geometric statements about zeros and critical points.

Each check either returns a boolean/report or a disk; the randomized suites in
:mod:`sendov.propverify` call these and measure the slack.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .polycore import Polynomial, derivative, from_roots, multiaffine_form
from .rootsolver import Disk, all_roots, smallest_enclosing_disk

__all__ = [
    "RootConfiguration",
    "SendovReport",
    "critical_points",
    "sendov_report",
    "localize_zero_disk",
    "bisector_margins",
    "bisector_check",
    "walsh_distance",
    "walsh_check",
    "exclusion_disk_basic",
    "exclusion_disk_refined",
    "one_minus_sqrt",
]

UNIT_SLACK = 1e-12
SENDOV_TOL = 1e-9


def one_minus_sqrt(x):
    """1 - sqrt(1 + x) without cancellation for small x."""
    return -x / (1.0 + np.sqrt(1.0 + x))


def critical_points(p: Polynomial) -> np.ndarray:
    dp = derivative(p)
    if dp.degree < 1:
        return np.empty(0, dtype=np.complex128)
    return all_roots(dp).roots


@dataclass(frozen=True)
class RootConfiguration:
    """Distinguished zero ``a`` (real, in (0, 1]) plus the remaining zeros."""

    a: float
    others: tuple
    criticals: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.a <= 1:
            raise DomainError(f"a must lie in (0, 1], got {self.a}")
        others = tuple(complex(z) for z in self.others)
        if any(abs(z) > 1 + UNIT_SLACK for z in others):
            raise DomainError("all zeros must lie in the closed unit disk")
        object.__setattr__(self, "others", others)
        object.__setattr__(self, "criticals", critical_points(self.polynomial))

    @property
    def roots(self) -> list[complex]:
        return [complex(self.a)] + list(self.others)

    @property
    def degree(self) -> int:
        return 1 + len(self.others)

    @property
    def polynomial(self) -> Polynomial:
        return from_roots(self.roots)

    @property
    def centroid_real(self) -> float:
        return float(np.mean(np.real(self.roots)))


@dataclass(frozen=True)
class SendovReport:
    minima: list  # (root, min distance to a critical point)
    satisfied: bool

    @property
    def worst(self) -> float:
        return max(d for _, d in self.minima)

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "minima": [
                {"root": [z.real, z.imag], "min_distance": d} for z, d in self.minima
            ],
        }


def sendov_report(roots: Sequence[complex]) -> SendovReport:
    roots = [complex(z) for z in roots]
    if len(roots) < 2:
        raise DomainError(f"degree must be at least 2, got {len(roots)}")
    if any(abs(z) > 1 + UNIT_SLACK for z in roots):
        raise DomainError("unit-disk violation: every root needs |z| <= 1")
    crit = critical_points(from_roots(roots))
    minima = [(z, float(np.abs(z - crit).min())) for z in roots]
    return SendovReport(minima, all(d <= 1 + SENDOV_TOL for _, d in minima))


def localize_zero_disk(p: Polynomial, delta: complex, omega: complex, n: int | None = None) -> Disk:
    """Disk with diameter [delta, delta - n (P(delta) - omega) / P'(delta)].

    ``P - omega`` has a zero in it.  ``n`` defaults to the degree of ``P`` and may
    be any ambient degree at least that large.
    """
    n = p.degree if n is None else n
    if n < p.degree:
        raise DomainError("ambient degree below polynomial degree")
    dval = derivative(p)(delta)
    if abs(dval) <= 1e-12:
        raise DomainError(f"vanishing derivative at delta: |P'(delta)| = {abs(dval):.3e}")
    far = delta - n * (p(delta) - omega) / dval
    return Disk(complex((delta + far) / 2), float(abs(far - delta) / 2))


def bisector_margins(p: Polynomial, alpha: complex, beta: complex) -> tuple[float, float]:
    """Signed distances of the critical points reaching furthest into each half-plane.

    The first entry is the largest signed distance towards ``beta``, the second
    the largest towards ``alpha``; both are >= 0 when each closed half-plane
    holds a critical point.
    """
    if alpha == beta:
        raise DomainError("alpha and beta must differ")
    pa, pb = p(alpha), p(beta)
    if abs(pa - pb) > 1e-9 * (1 + abs(pa)):
        raise DomainError(f"precondition violated: |P(alpha) - P(beta)| = {abs(pa - pb):.3e}")
    crit = critical_points(p)
    if crit.size == 0:
        return -math.inf, -math.inf
    u = (beta - alpha) / abs(beta - alpha)
    mid = (alpha + beta) / 2
    signed = np.real((crit - mid) * np.conj(u))
    return float(signed.max()), float(-signed.min())


def bisector_check(p: Polynomial, alpha: complex, beta: complex, tol: float = 1e-9) -> bool:
    towards_beta, towards_alpha = bisector_margins(p, alpha, beta)
    return towards_beta >= -tol and towards_alpha >= -tol


def walsh_distance(p: Polynomial, alphas: Sequence[complex]) -> tuple[float, Disk]:
    """Distance from the enclosing disk of ``alphas`` to the nearest solution of P(z) = V.

    Zero or negative means some solution lies inside the disk.
    """
    if p.degree > len(alphas):
        raise DomainError("degree of P exceeds the number of points")
    disk = smallest_enclosing_disk(alphas)
    value = multiaffine_form(p, alphas)
    shifted = p - value
    if shifted.degree < 1:
        # P is constant, so V = P and every beta works
        return -disk.radius, disk
    sols = all_roots(shifted).roots
    return float(np.abs(sols - disk.center).min() - disk.radius), disk


def walsh_check(p: Polynomial, alphas: Sequence[complex], slack: float = 1e-6) -> bool:
    dist, _ = walsh_distance(p, alphas)
    return dist <= slack


def exclusion_disk_basic(a: float, c: float) -> Disk:
    """Zero-free disk centred at c for a hypothetical counterexample with zero a."""
    if not 0 < c < a < 1:
        raise DomainError(f"need 0 < c < a < 1, got a={a}, c={c}")
    return Disk(complex(c), float(one_minus_sqrt(c * (c - a))))


def exclusion_disk_refined(a: float, c: float, h: float, check: bool = True) -> Disk:
    """The disk {|c - z| <= k |(1-h)^2 - c z|} as (center, radius).

    ``center`` here is a point on the real axis and is unrelated to the target
    value ``omega`` of :func:`localize_zero_disk`.
    """
    if not 0 < h < c < a < 1 - h:
        raise DomainError(f"need 0 < h < c < a < 1 - h, got a={a}, c={c}, h={h}")
    s = (1 - h) ** 2
    k = c * (a - c) / (2 * (s - c * c))
    den = 1 - (k * c) ** 2
    center = c * (1 - k * k * s) / den
    radius = k * (s - c * c) / den
    if check:
        bound = one_minus_sqrt(center * center - center * a)
        if radius > bound + 1e-12:
            raise AssertionError(
                f"containment failed at a={a}, c={c}, h={h}: R={radius} > {bound}")
    return Disk(complex(center), float(radius))
