"""Simultaneous root extraction and minimal enclosing disks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .polycore import Polynomial

__all__ = ["RootSet", "Disk", "all_roots", "smallest_enclosing_disk"]


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    residual: float
    sweeps: int = 0

    def __len__(self) -> int:
        return self.roots.size

    def __iter__(self):
        return iter(self.roots)


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise DomainError(f"disk radius must be nonnegative, got {self.radius}")

    def contains(self, z, slack: float = 0.0):
        return np.abs(np.asarray(z) - self.center) <= self.radius + slack


def _horner_pair(c: np.ndarray, z: np.ndarray):
    """Values of P and P' at z, plus the running bound sum |c_i||z|^i."""
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    az = np.abs(z)
    bound = np.full(z.shape, abs(c[-1]))
    for coef in c[-2::-1]:
        dp = dp * z + p
        p = p * z + coef
        bound = bound * az + abs(coef)
    return p, dp, bound


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    n = c.size - 1
    # Fujiwara-style radius from the monic-normalized coefficients
    mon = c / c[-1]
    k = np.arange(1, n + 1)
    rad = 2.0 * np.max(np.abs(mon[n - k]) ** (1.0 / k))
    rad = max(rad / 2.0, 1e-3)
    shift = -mon[n - 1] / n
    theta = 2 * np.pi * np.arange(n) / n + 0.4 + np.pi / (2 * n)
    return shift + rad * np.exp(1j * theta)


def all_roots(p: Polynomial, tol: float = 1e-12, max_sweeps: int = 1000,
              cluster: bool = True) -> RootSet:
    """All complex roots of ``p`` with multiplicity.

    Aberth-Ehrlich sweeps from a rotated circle of starting points, then up to
    a few Newton steps per root, each kept only if it lowers the residual.
    Convergence means |P(z)| <= tol * max(1 + max|c_i|, sum |c_i||z|^i) for
    every root.  With ``cluster`` set, tight clusters are replaced by their
    mean (see :func:`_average_clusters`).
    """
    if p.degree < 1:
        raise DomainError("root extraction needs degree >= 1")
    c = p.coeffs
    n = p.degree
    if n == 1:
        r = np.array([-c[0] / c[1]])
        return RootSet(r, float(abs(p(r[0]))), 0)

    cmax = float(np.abs(c).max())
    z = _initial_guesses(c)
    eye = np.eye(n, dtype=bool)
    sweeps = 0
    converged = False
    for sweeps in range(1, max_sweeps + 1):
        pv, dpv, bound = _horner_pair(c, z)
        ok = np.abs(pv) <= tol * np.maximum(1.0 + cmax, bound)
        if ok.all():
            converged = True
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dpv
            diff = z[:, None] - z[None, :]
            diff[eye] = 1.0
            inv = 1.0 / diff
            inv[eye] = 0.0
            s = inv.sum(axis=1)
            step = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(step)
        if bad.any():
            # coincident iterates or vanishing derivative: nudge them apart
            step[bad] = 1e-8 * (1 + np.abs(z[bad])) * np.exp(1j * (sweeps + np.arange(bad.sum())))
        step[ok] = 0.0
        z = z - step

    z = _polish(c, z)
    if cluster:
        z = _average_clusters(c, z)
    pv, _, bound = _horner_pair(c, z)
    ok = np.abs(pv) <= tol * np.maximum(1.0 + cmax, bound)
    residual = float(np.abs(pv).max())
    if not (converged or ok.all()):
        raise ConvergenceError(
            f"root solver did not converge after {max_sweeps} sweeps; worst residual {residual:.3e}")
    return RootSet(z, residual, sweeps)


def _polish(c: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    z = z.copy()
    pv, dpv, _ = _horner_pair(c, z)
    res = np.abs(pv)
    for _ in range(steps):
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - pv / dpv
        cand = np.where(np.isfinite(cand), cand, z)
        cpv, cdpv, _ = _horner_pair(c, cand)
        better = np.abs(cpv) < res
        if not better.any():
            break
        z = np.where(better, cand, z)
        pv = np.where(better, cpv, pv)
        dpv = np.where(better, cdpv, dpv)
        res = np.abs(pv)
    return z


# rounding level assumed when deciding whether a cluster is one multiple root
CLUSTER_EPS = 1e-14


def _average_clusters(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Replace near-multiple roots by their cluster mean.

    An m-fold root comes back from the iteration as m points spread over about
    eps**(1/m), while their mean is accurate to about eps.  A group whose
    diameter stays below 4 * CLUSTER_EPS**(1/m) * (1 + |mean|) is merged,
    provided the mean does not have a worse residual than the members.
    """
    n = z.size
    gaps = np.abs(z[:, None] - z[None, :])
    gaps[np.diag_indices(n)] = np.inf
    if gaps.min() > 4 * CLUSTER_EPS ** (1.0 / n) * (1 + np.abs(z).max()):
        return z
    z = z.copy()
    free = np.ones(n, dtype=bool)
    for i in np.argsort(np.abs(z)):
        if not free[i]:
            continue
        others = [j for j in np.flatnonzero(free) if j != i]
        others.sort(key=lambda j: abs(z[j] - z[i]))
        members = [i]
        for k in range(len(others) + 1, 1, -1):
            group = [i] + others[: k - 1]
            pts = z[group]
            reach = 4 * CLUSTER_EPS ** (1.0 / k) * (1 + abs(pts.mean()))
            if np.abs(pts[:, None] - pts[None, :]).max() <= reach:
                members = group
                break
        free[members] = False
        if len(members) < 2:
            continue
        mean = z[members].mean()
        pm, _, bm = _horner_pair(c, np.array([mean]))
        pz, _, bz = _horner_pair(c, z[members])
        if abs(pm[0]) <= max(10 * np.abs(pz).max(), 1e-300) or abs(pm[0]) <= CLUSTER_EPS * bm[0]:
            z[members] = mean
    return z


def smallest_enclosing_disk(points: Sequence[complex]) -> Disk:
    """Exact minimal enclosing disk by scanning every pair and triple.

    Cubic in the number of points, which stays below a few dozen here.
    """
    pts = np.unique(np.asarray(points, dtype=np.complex128))
    if pts.size == 0:
        raise DomainError("smallest_enclosing_disk needs at least one point")
    if pts.size == 1:
        return Disk(complex(pts[0]), 0.0)

    scale = float(np.abs(pts).max()) + 1.0
    slack = 1e-12 * scale
    best: Disk | None = None

    def consider(center: complex, radius: float):
        nonlocal best
        if best is not None and radius >= best.radius:
            return
        if np.all(np.abs(pts - center) <= radius + slack):
            best = Disk(center, radius)

    for i, j in itertools.combinations(range(pts.size), 2):
        center = (pts[i] + pts[j]) / 2
        consider(complex(center), float(abs(pts[i] - center)))
    if pts.size >= 3:
        for i, j, k in itertools.combinations(range(pts.size), 3):
            a, b, cc = pts[i], pts[j], pts[k]
            ba, ca = b - a, cc - a
            den = 2 * (ba.real * ca.imag - ba.imag * ca.real)
            if abs(den) <= 1e-14 * abs(ba) * abs(ca):
                continue
            ux = (ca.imag * abs(ba) ** 2 - ba.imag * abs(ca) ** 2) / den
            uy = (ba.real * abs(ca) ** 2 - ca.real * abs(ba) ** 2) / den
            center = a + complex(ux, uy)
            radius = max(abs(a - center), abs(b - center), abs(cc - center))
            consider(complex(center), float(radius))
    assert best is not None
    # every point must lie within radius + 1e-12 * scale
    far = float(np.abs(pts - best.center).max())
    return Disk(best.center, max(best.radius, far))
