import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sendov.errors import DegreeOverflowError
from sendov.polycore import (
    Polynomial,
    bombieri_inner,
    derivative,
    evaluate,
    from_roots,
    kernel,
    multiaffine_form,
)

from conftest import unit_disk

Z2M1 = Polynomial([-1, 0, 1])


@pytest.mark.parametrize("z, expected", [(0, -1), (1, 0), (1j, -2)])
def test_evaluate_examples(z, expected):
    assert evaluate(Z2M1, z) == expected


def test_evaluate_vectorized():
    np.testing.assert_allclose(evaluate(Z2M1, np.array([0, 1, 2])), [-1, 0, 3])


def test_normalization_strips_trailing_zeros():
    p = Polynomial([1, 2, 0, 0])
    assert p.degree == 1
    zero = Polynomial([0, 0, 0])
    assert zero.degree == 0 and zero.is_zero
    assert Polynomial([]).is_zero


def test_immutable():
    with pytest.raises(ValueError):
        Z2M1.coeffs[0] = 5


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_derivative_of_power_minus_one(n):
    p = Polynomial([-1] + [0] * (n - 1) + [1])
    d = derivative(p)
    assert d.degree == n - 1
    assert d.allclose(Polynomial([0] * (n - 1) + [n]))


def test_derivative_examples():
    assert derivative(Polynomial([3.5])).is_zero
    assert derivative(Z2M1).allclose(Polynomial([0, 2]))


def test_from_roots_examples():
    assert from_roots([1, -1]).allclose(Z2M1)
    assert from_roots([]).allclose(Polynomial([1]))
    assert from_roots([1, 2, 3]).allclose(Polynomial([-6, 11, -6, 1]))


def test_from_roots_monic_and_residual(rng):
    for deg in range(1, 33):
        roots = unit_disk(rng, deg)
        p = from_roots(roots)
        assert p.leading == 1
        assert p.degree == deg
        res = np.abs(evaluate(p, roots)).max()
        assert res <= 1e-10 * (1 + np.abs(p.coeffs).max())


@pytest.mark.parametrize("n", [0, 1, 4, 17])
def test_inner_constant(n):
    assert bombieri_inner(Polynomial([1]), Polynomial([1]), n) == 1


@pytest.mark.parametrize("n", [1, 3, 10, 80])
def test_inner_top_monomial(n):
    xn = Polynomial([0] * n + [1])
    assert bombieri_inner(xn, xn, n) == pytest.approx(1)


def test_inner_linear_in_degree_two():
    x = Polynomial([0, 1])
    assert bombieri_inner(x, x, 2) == pytest.approx(0.5)


def test_inner_large_n_no_overflow():
    # binom(200, 100) ~ 9e58 overflows int64 but not float64
    x = Polynomial([0] * 100 + [1])
    assert bombieri_inner(x, x, 200) == pytest.approx(1 / math.comb(200, 100), rel=1e-12)


def test_inner_degree_overflow():
    with pytest.raises(DegreeOverflowError):
        bombieri_inner(Z2M1, Polynomial([1]), 1)
    with pytest.raises(DegreeOverflowError):
        multiaffine_form(Z2M1, [0.5])


def test_multiaffine_examples():
    assert multiaffine_form(Polynomial([0, 0, 1]), [1, -1]) == pytest.approx(-1)
    assert multiaffine_form(Polynomial([1]), [0.3, 2j, -4]) == pytest.approx(1)


def test_multiaffine_coalesced_equals_value(rng):
    for _ in range(50):
        n = int(rng.integers(1, 10))
        p = Polynomial(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
        al = complex(unit_disk(rng, 1)[0])
        assert multiaffine_form(p, [al] * n) == pytest.approx(evaluate(p, al), rel=1e-10, abs=1e-12)


def test_multiaffine_is_elementary_symmetric_sum(rng):
    # independent route: sum_i a_i e_i(alphas) / binom(n, i), e_i by brute force
    from itertools import combinations

    n = 5
    p = Polynomial(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
    al = unit_disk(rng, n)
    expected = sum(
        p.coeffs[i] * sum(np.prod(c) for c in combinations(al, i)) / math.comb(n, i)
        for i in range(n + 1)
    )
    assert multiaffine_form(p, al) == pytest.approx(expected, rel=1e-12)


def _random_poly(rng, n):
    deg = int(rng.integers(0, n + 1))
    return Polynomial(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))


def test_reproducing_identities(rng):
    for _ in range(300):
        n = int(rng.integers(1, 13))
        p = _random_poly(rng, n)
        al = complex(unit_disk(rng, 1)[0])
        v = evaluate(p, al)
        assert abs(bombieri_inner(p, kernel(al, n), n) - v) <= 1e-9 * (1 + abs(v))
        dv = evaluate(derivative(p), al)
        assert abs(bombieri_inner(p, kernel(al, n, derivative_kernel=True), n) - dv) <= 1e-9 * (1 + abs(dv))


complexes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
polys = st.lists(complexes, min_size=1, max_size=7).map(Polynomial)


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys, complexes)
def test_inner_sesquilinear(p, q, r, lam):
    n = 6
    lhs = bombieri_inner(lam * p - r, q, n)
    rhs = lam * bombieri_inner(p, q, n) - bombieri_inner(r, q, n)
    scale = 1 + sum(np.abs(x.coeffs).sum() for x in (p, q, r)) ** 2 * (1 + abs(lam))
    assert abs(lhs - rhs) <= 1e-12 * scale
    second = bombieri_inner(q, lam * p, n)
    assert abs(second - np.conj(lam) * bombieri_inner(q, p, n)) <= 1e-12 * scale
    assert abs(bombieri_inner(p, q, n) - np.conj(bombieri_inner(q, p, n))) <= 1e-12 * scale


def test_json_roundtrip():
    p = Polynomial([1 + 2j, -0.5, 3j])
    text = p.to_json()
    assert json.loads(text) == [[1.0, 2.0], [-0.5, 0.0], [0.0, 3.0]]
    assert Polynomial.from_json(text).allclose(p)


@pytest.mark.parametrize("bad", ['{"a": 1}', '[[1, 2, 3]]', '[["x", 1]]', "[true]"])
def test_json_malformed(bad):
    with pytest.raises(ValueError):
        Polynomial.from_json(bad)
