"""Seeded randomized verification of the lemmas and theorems.

Every trial draws from its own Philox stream keyed by ``(seed, trial index)``,
so reports do not depend on how trials are spread over worker processes.
A trial returns a *margin*: the slack of the inequality it checks, scaled as
listed in :data:`SUITES`.  Margins below ``-tolerance`` count as violations;
sampler or solver failures count as errors.
"""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import bounds, geometry
from .errors import DomainError, RejectionBudgetError, SendovError
from .polycore import Polynomial, derivative, dump_complex_list, from_roots
from .rootsolver import all_roots

__all__ = [
    "SuiteSpec",
    "SuiteReport",
    "SUITES",
    "trial_stream",
    "sample_config",
    "run_suite",
    "run_all",
    "LEMMA_SUITES",
    "GEOMETRY_SUITES",
]

PARAM_MARGIN = 1e-3
MIN_ACCEPTANCE = 1e-4
CONSTRAINT_SLACK = 1e-12


def trial_stream(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial: Philox keyed by (seed, trial)."""
    if not 0 <= seed < 2**64:
        raise DomainError("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.Philox(key=(seed << 64) | trial))


def _uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    """Uniform draw from (lo, hi) kept PARAM_MARGIN (relative) away from both ends."""
    w = hi - lo
    return lo + w * rng.uniform(PARAM_MARGIN, 1 - PARAM_MARGIN)


def _disk_points(rng: np.random.Generator, k: int, radius: float = 1.0) -> np.ndarray:
    rad = radius * np.sqrt(rng.uniform(0, 1, k))
    return rad * np.exp(2j * np.pi * rng.uniform(0, 1, k))


# ---------------------------------------------------------------- regions

def _in_region(kind: str, z: np.ndarray, a: float, c: float | None, r: float | None) -> np.ndarray:
    az = np.abs(z)
    if kind == "unit_disk":
        return az <= 1 + CONSTRAINT_SLACK
    if kind == "lens_complement":
        return (az <= 1 + CONSTRAINT_SLACK) & (np.abs(z - a) >= 1 - CONSTRAINT_SLACK)
    if kind == "annulus_moebius":
        moeb = np.abs((c - z) / (1 - c * z))
        return (az > 0) & (az <= 1 + CONSTRAINT_SLACK) & (moeb >= r * (1 - CONSTRAINT_SLACK))
    raise DomainError(f"unknown region kind {kind!r}")


def _boundary_candidates(kind: str, rng, k: int, a: float, c, r) -> np.ndarray:
    """Candidates on the curves where the lemma bounds are tight."""
    pick = rng.integers(0, 3, k)
    out = np.empty(k, dtype=np.complex128)
    for i, which in enumerate(pick):
        if kind == "unit_disk":
            out[i] = np.exp(2j * np.pi * rng.uniform())
        elif kind == "lens_complement":
            if which == 0:  # unit circle with Re z <= a/2
                t0 = math.acos(a / 2)
                out[i] = np.exp(1j * rng.uniform(t0, 2 * np.pi - t0))
            elif which == 1:  # circle |z - a| = 1 inside the unit disk
                t0 = math.acos(-a / 2)
                out[i] = a + np.exp(1j * rng.uniform(t0, 2 * np.pi - t0))
            else:  # real segment [-1, a - 1]
                out[i] = rng.uniform(-1, a - 1)
        else:
            if which == 0:
                out[i] = rng.uniform(bounds.moebius_radius(c, r), 1)
            elif which == 1:
                w = r * np.exp(2j * np.pi * rng.uniform())
                out[i] = (c - w) / (1 - c * w)  # Moebius distance exactly r
            else:
                out[i] = np.exp(2j * np.pi * rng.uniform())
    return out


def sample_config(kind: str, n: int, a: float, rng: np.random.Generator, *,
                  c: float | None = None, r: float | None = None,
                  boundary: float = 0.5) -> np.ndarray:
    """``n`` points from a region, by rejection, re-verified before return.

    Kinds: ``unit_disk``; ``lens_complement`` (|z| <= 1 and |z - a| >= 1);
    ``annulus_moebius`` (0 < |z| <= 1 and |(c - z)/(1 - c z)| >= r).
    A fraction ``boundary`` of the candidates is drawn on the extremal curves
    of the region instead of uniformly in the unit disk.
    """
    if kind == "lens_complement" and not 0 < a < 1:
        raise DomainError(f"lens complement needs 0 < a < 1, got {a}")
    if kind == "annulus_moebius" and not (c is not None and r is not None and 0 < c < 1 and 0 < r < 1):
        raise DomainError("annulus_moebius needs 0 < c < 1 and 0 < r < 1")
    accepted: list[complex] = []
    draws = 0
    batch = max(16, 4 * n)
    while len(accepted) < n:
        cand = _disk_points(rng, batch)
        on_edge = rng.uniform(0, 1, batch) < boundary
        if on_edge.any():
            cand[on_edge] = _boundary_candidates(kind, rng, int(on_edge.sum()), a, c, r)
        keep = cand[_in_region(kind, cand, a, c, r)]
        accepted.extend(keep[: n - len(accepted)])
        draws += batch
        if draws >= 10_000 and len(accepted) / draws < MIN_ACCEPTANCE:
            raise RejectionBudgetError(
                f"{kind}: acceptance {len(accepted)}/{draws} below {MIN_ACCEPTANCE}")
    pts = np.array(accepted, dtype=np.complex128)
    if not _in_region(kind, pts, a, c, r).all():
        raise RejectionBudgetError(f"{kind}: sampled point failed re-verification")
    return pts


# ---------------------------------------------------------------- trials
# Each trial returns (margin, points, params).

class TrialError(SendovError):
    """A trial could not check its statement (bad sample, solver trouble)."""


def _unit_roots(rng, lo: int, hi: int) -> np.ndarray:
    n = int(rng.integers(lo, hi + 1))
    return sample_config("unit_disk", n, 0.5, rng, boundary=0.25)


def _t_lemma1(rng, max_degree):
    n = int(rng.integers(1, max_degree + 1))
    pts = sample_config("unit_disk", n, 0.5, rng)
    delta = _uniform(rng, 0, 1)
    s = float(pts.real.mean())
    lhs = float(np.sum(np.log(np.abs(delta - pts))))
    rhs = n * 0.5 * math.log(1 + delta * delta - 2 * delta * s)
    return rhs - lhs, pts, {"delta": delta, "s": s}


def _lens_setup(rng, max_degree):
    a = _uniform(rng, 0, 1)
    n = int(rng.integers(2, max_degree + 1))
    pts = sample_config("lens_complement", n - 1, a, rng)
    return a, n, pts, float(pts.real.mean())


def _t_maj_deri(rng, max_degree):
    a, n, pts, s = _lens_setup(rng, max_degree)
    delta = _uniform(rng, 0, a)
    A = bounds.lemmaA_bound(delta, a, s)
    lhs = float(np.sum(np.log(np.abs((delta - pts) / (a - pts)))))
    return (n - 1) * math.log(A) - lhs, pts, {"a": a, "delta": delta, "s": s, "A": A}


def _t_min_deri(rng, max_degree):
    a, n, pts, s = _lens_setup(rng, max_degree)
    b = _uniform(rng, 1, 3)
    B = bounds.lemmaB_bound(b, a, s)
    lhs = float(np.sum(np.log(np.abs(b - pts))))
    return lhs - (n - 1) * math.log(B), pts, {"a": a, "b": b, "s": s, "B": B}


def _t_min_reste(rng, max_degree):
    c = _uniform(rng, 0, 1)
    r = _uniform(rng, 0, 1 - c)
    n = int(rng.integers(1, max_degree + 1))
    pts = sample_config("annulus_moebius", n, 0.5, rng, c=c, r=r)
    prodabs = min(float(np.prod(np.abs(pts))), 1.0)
    beta = bounds.lemma_beta_exponent(c, r, prodabs)
    lhs = float(np.sum(np.log(np.abs((c - pts) / (1 - c * pts)))))
    return lhs - beta * math.log(r), pts, {"c": c, "r": r, "beta": beta}


def _t_sym(rng, max_degree):
    h = _uniform(rng, 0, 1)
    c = _uniform(rng, 0, 1 - h)
    # half on the circle |z| = 1 - h (equality case), half beyond it
    rad = (1 - h) * (1.0 if rng.uniform() < 0.5 else rng.uniform(1, 3 / (1 - h) if h < 1 else 3))
    z = rad * np.exp(2j * np.pi * rng.uniform())
    lhs, rhs = bounds.sym_check(c, h, z)
    return lhs - rhs, np.array([z]), {"c": c, "h": h}


def _t_mini(rng, max_degree):
    roots = _unit_roots(rng, 1, max_degree)
    b = _uniform(rng, 1, 3)
    lhs, rhs = bounds.mini_check(from_roots(roots), b)
    return (lhs - rhs) / lhs, roots, {"b": b}


def _t_localize(rng, max_degree):
    roots = _unit_roots(rng, 1, max_degree)
    p = from_roots(roots)
    delta = complex(_disk_points(rng, 1, 1.5)[0])
    omega = complex(_disk_points(rng, 1, 1.0)[0])
    disk = geometry.localize_zero_disk(p, delta, omega)
    sols = all_roots(p - omega).roots
    i = int(np.argmin(np.abs(sols - disk.center)))
    if abs(p(sols[i]) - omega) > 1e-7:
        raise TrialError(f"located root has residual {abs(p(sols[i]) - omega):.3e}")
    dist = abs(sols[i] - disk.center)
    return (disk.radius - dist) / (1 + disk.radius), roots, {
        "delta": [delta.real, delta.imag], "omega": [omega.real, omega.imag]}


def _t_walsh(rng, max_degree):
    n = int(rng.integers(1, max_degree + 1))
    d = int(rng.integers(1, n + 1))
    coeffs = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    p = Polynomial(coeffs)
    alphas = sample_config("unit_disk", n, 0.5, rng, boundary=0.25)
    dist, disk = geometry.walsh_distance(p, alphas)
    return -dist / (1 + disk.radius), alphas, {"coeffs": [[z.real, z.imag] for z in p.coeffs]}


def _t_bisector(rng, max_degree):
    roots = _unit_roots(rng, 2, max_degree)
    p = from_roots(roots)
    omega = p(complex(_disk_points(rng, 1)[0]))
    sols = all_roots(p - omega).roots
    i, j = rng.choice(sols.size, 2, replace=False)
    alpha, beta = complex(sols[i]), complex(sols[j])
    if abs(alpha - beta) < 1e-6:
        raise TrialError("sampled pair is numerically coincident")
    margin = min(geometry.bisector_margins(p, alpha, beta))
    return margin, roots, {"alpha": [alpha.real, alpha.imag], "beta": [beta.real, beta.imag]}


def _t_gauss_lucas(rng, max_degree):
    roots = _unit_roots(rng, 2, max_degree)
    crit = geometry.critical_points(from_roots(roots))
    return 1.0 - float(np.abs(crit).max()), roots, {}


def _t_centroid(rng, max_degree):
    roots = _unit_roots(rng, 2, max_degree)
    crit = geometry.critical_points(from_roots(roots))
    return -abs(roots.mean() - crit.mean()), roots, {}


def _t_sendov_smoke(rng, max_degree):
    roots = _unit_roots(rng, 2, max_degree)
    rep = geometry.sendov_report(roots)
    return 1.0 - rep.worst, roots, {}


def _t_exclusion(rng, max_degree):
    h = _uniform(rng, 0, 0.5)
    c = _uniform(rng, h, 1 - h)
    a = _uniform(rng, c, 1 - h)
    disk = geometry.exclusion_disk_refined(a, c, h, check=False)
    w = disk.center.real
    bound = float(geometry.one_minus_sqrt(w * w - w * a))
    return bound - disk.radius, np.array([disk.center]), {"a": a, "c": c, "h": h, "R": disk.radius}


@dataclass(frozen=True)
class Suite:
    trial: Callable
    tolerance: float
    margin: str


SUITES: dict[str, Suite] = {
    "lemma1": Suite(_t_lemma1, 1e-9, "log(bound) - log(product)"),
    "maj_deri": Suite(_t_maj_deri, 1e-9, "(n-1) log A - log(product)"),
    "min_deri": Suite(_t_min_deri, 1e-9, "log(product) - (n-1) log min(B1, B2)"),
    "min_reste": Suite(_t_min_reste, 1e-9, "log(product) - beta log r"),
    "sym": Suite(_t_sym, 1e-12, "lhs - rhs"),
    "mini": Suite(_t_mini, 1e-9, "(lhs - rhs) / lhs"),
    "localize": Suite(_t_localize, 1e-6, "(radius - distance) / (1 + radius)"),
    "walsh": Suite(_t_walsh, 1e-6, "-(distance outside disk) / (1 + radius)"),
    "bisector": Suite(_t_bisector, 1e-9, "min signed reach into either half-plane"),
    "gauss_lucas": Suite(_t_gauss_lucas, 1e-8, "1 - max |critical point|"),
    "sendov_smoke": Suite(_t_sendov_smoke, 1e-9, "1 - max over roots of nearest critical distance"),
    "centroid": Suite(_t_centroid, 1e-8, "-|mean(roots) - mean(criticals)|"),
    "exclusion_containment": Suite(_t_exclusion, 1e-12, "(1 - sqrt(1 + w^2 - w a)) - R"),
}
LEMMA_SUITES = ("lemma1", "maj_deri", "min_deri", "min_reste", "sym", "mini")
GEOMETRY_SUITES = ("localize", "walsh", "bisector", "gauss_lucas", "centroid")


# ---------------------------------------------------------------- harness

@dataclass(frozen=True)
class SuiteSpec:
    suite: str
    trials: int
    seed: int = 0
    max_degree: int = 12

    def __post_init__(self):
        if self.suite not in SUITES:
            raise DomainError(f"unknown suite {self.suite!r}; choose from {sorted(SUITES)}")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 2 <= self.max_degree <= 32:
            raise DomainError("max_degree must lie in [2, 32]")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")


@dataclass
class SuiteReport:
    suite: str
    trials: int
    violations: int
    errors: int
    worst_margin: float
    seed: int
    max_degree: int
    tolerance: float
    failures: list = field(default_factory=list)  # [trial, margin or message]
    elapsed: float | None = None

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.errors == 0

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("elapsed")
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


MAX_RECORDED = 20


def _run_chunk(suite: str, seed: int, max_degree: int, start: int, stop: int,
               dump: bool) -> tuple[int, int, float, list, list]:
    spec = SUITES[suite]
    violations = errors = 0
    worst = math.inf
    failures: list = []
    dumps: list = []
    for t in range(start, stop):
        rng = trial_stream(seed, t)
        try:
            margin, pts, params = spec.trial(rng, max_degree)
        except SendovError as exc:
            errors += 1
            if len(failures) < MAX_RECORDED:
                failures.append([t, f"error: {exc}"])
            continue
        worst = min(worst, margin)
        if not margin >= -spec.tolerance:
            violations += 1
            if len(failures) < MAX_RECORDED:
                failures.append([t, margin])
            if dump:
                dumps.append((t, pts, params, margin))
    return violations, errors, worst, failures, dumps


def run_suite(spec: SuiteSpec, jobs: int = 1, dump_failures: str | os.PathLike | None = None,
              ) -> SuiteReport:
    """Run ``spec.trials`` independent trials and aggregate them."""
    t0 = time.perf_counter()
    jobs = max(1, int(jobs))
    nchunks = min(spec.trials, jobs * 4) if jobs > 1 else 1
    edges = np.linspace(0, spec.trials, nchunks + 1).astype(int)
    args = [(spec.suite, spec.seed, spec.max_degree, int(lo), int(hi), dump_failures is not None)
            for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, *zip(*args)))
    else:
        parts = [_run_chunk(*a) for a in args]

    violations = sum(p[0] for p in parts)
    errors = sum(p[1] for p in parts)
    worst = min(p[2] for p in parts)
    failures = sorted((f for p in parts for f in p[3]), key=lambda f: f[0])[:MAX_RECORDED]
    if dump_failures is not None:
        _write_dumps(Path(dump_failures), spec.suite, [d for p in parts for d in p[4]])
    return SuiteReport(
        suite=spec.suite,
        trials=spec.trials,
        violations=violations,
        errors=errors,
        worst_margin=worst if math.isfinite(worst) else None,
        seed=spec.seed,
        max_degree=spec.max_degree,
        tolerance=SUITES[spec.suite].tolerance,
        failures=failures,
        elapsed=time.perf_counter() - t0,
    )


def _write_dumps(directory: Path, suite: str, dumps: list) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for t, pts, params, margin in dumps:
        (directory / f"{suite}-{t}.json").write_text(dump_complex_list(pts) + "\n")
        meta = {"suite": suite, "trial": t, "margin": margin, "params": params}
        (directory / f"{suite}-{t}.params.json").write_text(json.dumps(meta) + "\n")


def run_all(names, trials: int, seed: int, max_degree: int = 12, jobs: int = 1,
            dump_failures=None) -> list[SuiteReport]:
    return [run_suite(SuiteSpec(n, trials, seed, max_degree), jobs, dump_failures) for n in names]
