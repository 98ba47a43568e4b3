"""Dense complex polynomials and the Bombieri inner product.

Coefficients are stored constant term first, so ``coeffs[i]`` multiplies
``z**i``.  Instances are immutable.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeOverflowError

__all__ = [
    "Polynomial",
    "evaluate",
    "derivative",
    "from_roots",
    "binomials",
    "bombieri_inner",
    "kernel",
    "multiaffine_form",
    "load_complex_list",
    "dump_complex_list",
]


@dataclass(frozen=True, eq=False)
class Polynomial:
    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[complex]):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=np.complex128).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, z):
        return evaluate(self, z)

    def __sub__(self, other) -> Polynomial:
        other = other if isinstance(other, Polynomial) else Polynomial([other])
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=np.complex128)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] -= other.coeffs
        return Polynomial(out)

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * complex(other))

    __rmul__ = __mul__

    def allclose(self, other: Polynomial, rtol: float = 1e-9) -> bool:
        """Coefficient-wise comparison relative to the larger coefficient vector."""
        n = max(self.coeffs.size, other.coeffs.size)
        x = np.zeros(n, complex)
        y = np.zeros(n, complex)
        x[: self.coeffs.size] = self.coeffs
        y[: other.coeffs.size] = other.coeffs
        scale = max(np.abs(x).max(), np.abs(y).max(), 1e-300)
        return bool(np.abs(x - y).max() <= rtol * scale)

    def to_json(self) -> str:
        return dump_complex_list(self.coeffs)

    @classmethod
    def from_json(cls, text: str) -> Polynomial:
        return cls(load_complex_list(text))

    def __repr__(self) -> str:
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs)
        return f"Polynomial([{terms}])"


def evaluate(p: Polynomial, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc) if acc.ndim == 0 else acc


def derivative(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial([0])
    k = np.arange(1, p.coeffs.size)
    return Polynomial(p.coeffs[1:] * k)


def from_roots(roots: Sequence[complex]) -> Polynomial:
    """Monic polynomial with the given roots, multiplied out in input order."""
    c = np.ones(1, dtype=np.complex128)
    for r in roots:
        nxt = np.zeros(c.size + 1, dtype=np.complex128)
        nxt[1:] = c
        nxt[:-1] -= complex(r) * c
        c = nxt
    return Polynomial(c)


def binomials(n: int) -> np.ndarray:
    """binom(n, i) for i = 0..n as floats (multiplicative recurrence, no overflow)."""
    out = np.empty(n + 1)
    out[0] = 1.0
    for i in range(1, n + 1):
        out[i] = out[i - 1] * (n - i + 1) / i
    return out


def _padded(p: Polynomial, n: int) -> np.ndarray:
    if p.degree > n:
        raise DegreeOverflowError(f"degree {p.degree} exceeds ambient degree {n}")
    out = np.zeros(n + 1, dtype=np.complex128)
    out[: p.coeffs.size] = p.coeffs
    return out


def bombieri_inner(p: Polynomial, q: Polynomial, n: int) -> complex:
    """<P, Q>_n = sum_i binom(n, i)^-1 a_i conj(b_i)."""
    if n < 0:
        raise DegreeOverflowError("ambient degree must be nonnegative")
    a = _padded(p, n)
    b = _padded(q, n)
    return complex(np.sum(a * np.conj(b) / binomials(n)))


def kernel(alpha: complex, n: int, derivative_kernel: bool = False) -> Polynomial:
    """(conj(alpha) X + 1)^n, or n X (conj(alpha) X + 1)^(n-1) for the derivative kernel.

    The factor n makes ``<P, kernel>`` equal to P'(alpha) directly.
    """
    ab = np.conj(complex(alpha))
    if not derivative_kernel:
        return Polynomial(binomials(n) * ab ** np.arange(n + 1))
    m = n - 1
    c = np.zeros(n + 1, dtype=np.complex128)
    c[1:] = n * binomials(m) * ab ** np.arange(m + 1)
    return Polynomial(c)


def multiaffine_form(p: Polynomial, alphas: Sequence[complex]) -> complex:
    """<P, prod_k (conj(alpha_k) X + 1)>_n with n = len(alphas).

    This is the polarization of P: symmetric, affine in each alpha_k, and equal
    to P(alpha) when every alpha_k equals alpha.
    """
    n = len(alphas)
    prod = np.ones(1, dtype=np.complex128)
    for al in alphas:
        prod = np.convolve(prod, [1.0, np.conj(complex(al))])
    return bombieri_inner(p, Polynomial(prod), n)


def load_complex_list(text: str) -> list[complex]:
    """Parse a JSON array of ``[re, im]`` pairs (bare numbers are accepted as reals)."""
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("expected a JSON array of [re, im] pairs")
    out = []
    for item in data:
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            out.append(complex(item, 0.0))
        elif (isinstance(item, list) and len(item) == 2
              and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)):
            out.append(complex(item[0], item[1]))
        else:
            raise ValueError(f"malformed entry {item!r}; expected [re, im]")
    return out


def dump_complex_list(values: Iterable[complex]) -> str:
    return json.dumps([[float(complex(v).real), float(complex(v).imag)] for v in values])
