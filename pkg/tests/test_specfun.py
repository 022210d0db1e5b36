"""Special-function kernel tests.

The inverse maps are checked primarily by round-trips through their
forward partners; the error-function inverse is additionally checked
against an independently coded series/continued-fraction erfc inverted
by bisection, so the two sides never share code.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvalmeta import specfun as sf
from pvalmeta.errors import DomainError

# ---------------------------------------------------------------------------
# Independent erfc oracle: Taylor series for small arguments, continued
# fraction for large ones.  Used only inside this test module.
# ---------------------------------------------------------------------------


def _erf_series(z: float) -> float:
    total = 0.0
    term = z
    n = 0
    while abs(term) > 1e-18 * max(1.0, abs(total)):
        total += term / (2 * n + 1)
        n += 1
        term *= -z * z / n
        if n > 200:
            break
    return 2.0 / math.sqrt(math.pi) * total


def _erfc_cf(z: float, depth: int = 80) -> float:
    # erfc(z) = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    acc = 0.0
    for k in range(depth, 0, -1):
        acc = (0.5 * k) / (z + acc)
    return math.exp(-z * z) / math.sqrt(math.pi) / (z + acc)


def erfc_oracle(z: float) -> float:
    if z < 0.0:
        return 2.0 - erfc_oracle(-z)
    if z <= 2.0:
        return 1.0 - _erf_series(z)
    return _erfc_cf(z)


def inv_erfc_oracle(y: float) -> float:
    lo, hi = 0.0, 30.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if erfc_oracle(mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Regularized incomplete beta
# ---------------------------------------------------------------------------


def test_reg_inc_beta_boundary_and_identity_cases():
    assert sf.reg_inc_beta(0.0, 3.0, 0.5) == 0.0
    assert sf.reg_inc_beta(1.0, 3.0, 0.5) == 1.0
    # symmetric point of the symmetric shape pair
    assert sf.reg_inc_beta(0.5, 0.5, 0.5) == pytest.approx(0.5, abs=1e-13)
    # I_x(1, 1) is the identity
    assert sf.reg_inc_beta(0.37, 1.0, 1.0) == pytest.approx(0.37, abs=1e-14)


def test_reg_inc_beta_domain_errors():
    with pytest.raises(DomainError):
        sf.reg_inc_beta(-0.1, 1.0, 1.0)
    with pytest.raises(DomainError):
        sf.reg_inc_beta(1.1, 1.0, 1.0)
    with pytest.raises(DomainError):
        sf.reg_inc_beta(0.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        sf.reg_inc_beta(0.5, 1.0, -2.0)


def test_reg_inc_beta_monotone_in_x():
    xs = np.linspace(0.0, 1.0, 201)
    for a, b in [(0.5, 0.5), (3.0, 0.5), (0.5, 7.0), (250.0, 250.0)]:
        vals = sf.reg_inc_beta(xs, a, b)
        assert np.all(np.diff(vals) >= 0.0)


def test_reg_inc_beta_reflection_identity():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a = rng.uniform(0.3, 120.0)
        b = rng.uniform(0.3, 120.0)
        x = rng.uniform(0.0, 1.0)
        left = sf.reg_inc_beta(x, a, b)
        right = 1.0 - sf.reg_inc_beta(1.0 - x, b, a)
        assert left == pytest.approx(right, abs=1e-12)


def test_reg_inc_beta_matches_brute_force_quadrature():
    # direct numerical integral of the beta density as an independent check
    from scipy.integrate import quad

    for a, b, x in [(2.0, 3.0, 0.4), (0.7, 0.9, 0.2), (5.0, 0.5, 0.9), (12.0, 4.0, 0.65)]:
        norm = math.exp(-sf.log_beta(a, b))
        val, _ = quad(lambda t: norm * t ** (a - 1.0) * (1.0 - t) ** (b - 1.0), 0.0, x)
        assert sf.reg_inc_beta(x, a, b) == pytest.approx(val, abs=1e-10)


def test_reg_inc_beta_array_matches_scalar():
    xs = np.linspace(1e-9, 1.0 - 1e-9, 501)
    for a, b in [(0.5, 0.5), (10.0, 0.5), (0.5, 15.0), (100.0, 100.0)]:
        vec = sf.reg_inc_beta(xs, a, b)
        scalar = np.array([sf.reg_inc_beta(float(x), a, b) for x in xs])
        assert np.max(np.abs(vec - scalar)) < 1e-14


def test_inv_reg_inc_beta_boundaries_and_identity():
    assert sf.inv_reg_inc_beta(0.0, 2.0, 3.0) == 0.0
    assert sf.inv_reg_inc_beta(1.0, 2.0, 3.0) == 1.0
    assert sf.inv_reg_inc_beta(0.37, 1.0, 1.0) == pytest.approx(0.37, abs=1e-13)


def test_inv_reg_inc_beta_round_trip_examples():
    q = sf.reg_inc_beta(0.2, 5.0, 0.5)
    assert sf.inv_reg_inc_beta(q, 5.0, 0.5) == pytest.approx(0.2, abs=1e-10)


def test_inv_reg_inc_beta_round_trip_random_grid():
    # 1000 random triples across the working shape range
    rng = np.random.default_rng(20180115)
    worst = 0.0
    for _ in range(1000):
        a = rng.uniform(0.5, 100.0)
        b = rng.uniform(0.5, 100.0)
        q = rng.uniform(1e-9, 1.0 - 1e-9)
        x = sf.inv_reg_inc_beta(q, a, b)
        worst = max(worst, abs(sf.reg_inc_beta(x, a, b) - q))
    assert worst <= 1e-10


def test_inv_reg_inc_beta_strictly_monotone_in_q():
    qs = np.linspace(1e-6, 1.0 - 1e-6, 101)
    for a, b in [(0.5, 0.5), (10.0, 0.5), (2.0, 7.0)]:
        xs = [sf.inv_reg_inc_beta(float(q), a, b) for q in qs]
        assert all(x1 < x2 for x1, x2 in zip(xs[:-1], xs[1:]))


def test_inv_reg_inc_beta_array_matches_scalar():
    rng = np.random.default_rng(3)
    q = rng.uniform(1e-8, 1.0 - 1e-8, 400)
    for a, b in [(10.0, 0.5), (0.5, 10.0), (25.0, 25.0)]:
        vec = sf._inv_reg_inc_beta_array(q, a, b)
        res = np.abs(sf.reg_inc_beta(vec, a, b) - q)
        assert res.max() < 1e-10


@settings(max_examples=150, deadline=None)
@given(
    # away from the extremes where one ulp of x already moves the forward
    # value by more than the tolerance
    q=st.floats(min_value=1e-3, max_value=1.0 - 1e-3),
    a=st.floats(min_value=0.5, max_value=100.0),
    b=st.floats(min_value=0.5, max_value=100.0),
)
def test_inv_reg_inc_beta_round_trip_property(q, a, b):
    x = sf.inv_reg_inc_beta(q, a, b)
    assert abs(sf.reg_inc_beta(x, a, b) - q) <= 1e-10


# ---------------------------------------------------------------------------
# erfc / inv_erfc
# ---------------------------------------------------------------------------


def test_erfc_basics():
    assert sf.erfc(0.0) == 1.0
    assert sf.inv_erfc(1.0) == 0.0
    # strictly decreasing on the range where doubles resolve the tails
    zs = np.linspace(-5.0, 8.0, 301)
    vals = sf.erfc(zs)
    assert np.all(np.diff(vals) < 0.0)
    assert np.all(vals > 0.0) and np.all(vals < 2.0)


def test_erfc_against_independent_oracle():
    for z in np.linspace(-5.0, 8.0, 53):
        assert sf.erfc(float(z)) == pytest.approx(erfc_oracle(float(z)), rel=1e-10, abs=1e-300)


def test_inv_erfc_against_bisection_oracle():
    oracle = inv_erfc_oracle(0.1)
    assert oracle == pytest.approx(1.1631, abs=1e-3)
    assert sf.inv_erfc(0.1) == pytest.approx(oracle, abs=1e-9)


def test_inv_erfc_round_trip():
    ys = np.concatenate(
        [np.geomspace(1e-8, 1.0, 400), 2.0 - np.geomspace(1e-8, 1.0, 400)]
    )
    worst = max(abs(sf.erfc(sf.inv_erfc(float(y))) - y) for y in ys)
    assert worst <= 1e-13


def test_inv_erfc_domain_errors():
    for bad in (0.0, 2.0, -0.3, 2.5):
        with pytest.raises(DomainError):
            sf.inv_erfc(bad)


def test_inv_erfc_array_matches_scalar():
    ys = np.concatenate([np.geomspace(1e-7, 1.0, 100), 2.0 - np.geomspace(1e-7, 0.9, 100)])
    vec = sf._inv_erfc_array(ys)
    scalar = np.array([sf.inv_erfc(float(y)) for y in ys])
    assert np.max(np.abs(vec - scalar)) < 1e-12


# ---------------------------------------------------------------------------
# Student-T
# ---------------------------------------------------------------------------


def test_student_t_pdf_closed_form_values():
    # center of the one-degree case equals the Cauchy peak
    assert sf.student_t_pdf(0.0, 0.0, 1) == pytest.approx(1.0 / math.pi, abs=1e-12)
    # two degrees of freedom at the center: B(1, 1/2) = 2
    assert sf.student_t_pdf(0.0, 0.0, 2) == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), abs=1e-12)


def test_student_t_pdf_symmetry_about_center():
    assert sf.student_t_pdf(1.0, 3.0, 5) == pytest.approx(sf.student_t_pdf(5.0, 3.0, 5), abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 5, 20])
def test_student_t_pdf_normalizes(n):
    from scipy.integrate import quad

    val, _ = quad(lambda z: sf.student_t_pdf(z, 0.7, n), -np.inf, np.inf)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_student_t_survival_values():
    assert sf.student_t_survival(0.0, 7) == pytest.approx(0.5, abs=1e-15)
    # one degree of freedom is the Cauchy law: 1/2 - atan(z)/pi
    assert sf.student_t_survival(1.0, 1) == pytest.approx(0.25, abs=1e-12)
    assert sf.student_t_survival(-1.0, 1) == pytest.approx(0.75, abs=1e-12)


def test_student_t_survival_monotone_and_symmetric():
    zs = np.linspace(-8.0, 8.0, 161)
    for n in (1, 3, 30):
        vals = sf.student_t_survival(zs, n)
        assert np.all(np.diff(vals) < 0.0)
        flipped = sf.student_t_survival(-zs, n)
        assert np.max(np.abs(vals + flipped - 1.0)) < 1e-12


def test_student_t_survival_gaussian_limit():
    zs = np.linspace(-5.0, 5.0, 101)
    gap = max(
        abs(sf.student_t_survival(float(z), 10**4) - 0.5 * sf.erfc(float(z) / math.sqrt(2.0)))
        for z in zs
    )
    assert gap <= 5e-5


def test_student_t_survival_inverse_round_trips():
    assert sf.student_t_survival_inverse(0.5, 12) == 0.0
    # Cauchy case: survival 1/4 at z = 1
    assert sf.student_t_survival_inverse(0.25, 1) == pytest.approx(1.0, abs=1e-10)
    p = sf.student_t_survival(2.3, 9)
    assert sf.student_t_survival_inverse(p, 9) == pytest.approx(2.3, abs=1e-9)
    for n in (2, 5, 40):
        for p in (1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6):
            z = sf.student_t_survival_inverse(p, n)
            assert sf.student_t_survival(z, n) == pytest.approx(p, abs=1e-12)
            assert (z > 0.0) == (p < 0.5)


def test_student_t_survival_inverse_domain():
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(DomainError):
            sf.student_t_survival_inverse(bad, 5)
