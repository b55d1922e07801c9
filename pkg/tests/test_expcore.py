"""Exponential-polynomial arithmetic: examples and algebraic properties."""

import cmath
import math

import numpy as np
import pytest

from commsym.expcore import (
    DEFAULT_TOL,
    ExpPoly,
    ExpTerm,
    NonFinite,
    Tolerances,
    normalize,
)


def rand_poly(rng, n_terms=3, kappa_scale=0.5):
    terms = []
    for _ in range(n_terms):
        alpha = tuple(int(v) for v in rng.integers(0, 2, 4))
        kappa = tuple(
            complex(a, b)
            for a, b in zip(rng.normal(0, kappa_scale, 4), rng.normal(0, kappa_scale, 4))
        )
        terms.append(ExpTerm(complex(rng.normal(), rng.normal()), alpha, kappa))
    return ExpPoly(terms)


def eval_terms(terms, x):
    """Independent straight-line evaluation of a raw term list."""
    total = 0j
    for t in terms:
        mono = 1.0
        for xa, aa in zip(x, t.alpha):
            mono *= xa**aa
        total += t.coeff * mono * cmath.exp(sum(k * xa for k, xa in zip(t.kappa, x)))
    return total


# -- normalize ---------------------------------------------------------------


def test_normalize_cancellation_gives_zero():
    out = normalize([ExpTerm(1 + 0j), ExpTerm(-1 + 0j)])
    assert out.is_zero()
    assert out.terms == ()


def test_normalize_merges_equal_monomials():
    a = (1, 0, 0, 0)
    out = normalize([ExpTerm(1 + 0j, a), ExpTerm(2 + 0j, a)])
    assert len(out.terms) == 1
    assert out.terms[0].coeff == 3 + 0j


def test_normalize_merges_kappa_within_tolerance():
    k1 = (1j, 0j, 0j, 0j)
    k2 = (1j + 1e-15, 0j, 0j, 0j)
    raw = [ExpTerm(1 + 0j, kappa=k1), ExpTerm(1 + 0j, kappa=k2)]
    out = normalize(raw, Tolerances(merge_tol=1e-12))
    assert len(out.terms) == 1
    assert out.terms[0].coeff == 2 + 0j
    # oracle: merged form equals the raw sum at random points
    rng = np.random.default_rng(3)
    for _ in range(10):
        x = tuple(rng.uniform(-1, 1, 4))
        assert abs(out.evaluate(x) - eval_terms(raw, x)) < 1e-12


def test_normalize_rejects_non_finite():
    with pytest.raises(NonFinite):
        normalize([ExpTerm(complex(math.inf, 0))])
    with pytest.raises(NonFinite):
        normalize([ExpTerm(1 + 0j, kappa=(complex(math.nan, 0), 0j, 0j, 0j))])


def test_normalize_idempotent():
    rng = np.random.default_rng(5)
    for _ in range(25):
        f = rand_poly(rng)
        assert ExpPoly(f.terms) == f


def test_tolerances_validation():
    with pytest.raises(ValueError):
        Tolerances(zero_tol=-1.0)
    with pytest.raises(ValueError):
        Tolerances(zero_tol=1e-12, merge_tol=1e-10)


# -- arithmetic --------------------------------------------------------------


def test_mul_adds_exponents():
    k = (0j, 2 + 0j, 0j, 0j)
    kp = (0j, -0.5 + 1j, 0j, 0j)
    f = ExpPoly.coordinate(1) * ExpPoly.exponential(1, k)
    g = ExpPoly.exponential(1, kp)
    prod = f * g
    assert len(prod.terms) == 1
    t = prod.terms[0]
    assert t.alpha == (0, 1, 0, 0)
    assert t.kappa == tuple(a + b for a, b in zip(k, kp))


def test_mul_by_inverse_exponential_is_constant():
    k = (0.3j, -1 + 0j, 0j, 0.2j)
    f = ExpPoly.exponential(2.0, k)
    finv = ExpPoly.exponential(0.5, tuple(-v for v in k))
    assert (f * finv).approx_eq(ExpPoly.constant(1), 1e-14)


def test_add_cancels():
    f = ExpPoly.exponential(1, (1j, 0j, 0j, 0j))
    assert (f + (-f)).is_zero()


def test_scale_by_zero():
    assert (rand_poly(np.random.default_rng(0)) * 0).is_zero()


# -- derive ------------------------------------------------------------------


def test_derive_product_and_chain_rule():
    # d/dx1 [x1 e^{2 x1}] = (1 + 2 x1) e^{2 x1}
    f = ExpPoly.coordinate(1) * ExpPoly.exponential(1, (0, 2, 0, 0))
    df = f.derive(1)
    expected = (ExpPoly.constant(1) + 2 * ExpPoly.coordinate(1)) * ExpPoly.exponential(
        1, (0, 2, 0, 0)
    )
    assert df.approx_eq(expected, 1e-14)


def test_derive_plane_wave_brings_down_covector():
    # d_a exp(-i k.x) = -i k_a exp(-i k.x); phase omega(t - n.x/c) on x0 = ct
    omega, n = 1.3, (0.6, 0.0, 0.8)
    kappa = (-1j * omega, 1j * omega * n[0], 1j * omega * n[1], 1j * omega * n[2])
    wave = ExpPoly.exponential(1.0, kappa)
    for a in range(4):
        assert wave.derive(a).approx_eq(kappa[a] * wave, 1e-14)


def test_derive_constant_is_zero():
    assert ExpPoly.constant(1).derive(2).is_zero()


def test_commuting_partials():
    rng = np.random.default_rng(7)
    for _ in range(20):
        f = rand_poly(rng)
        for a in range(4):
            for b in range(a + 1, 4):
                assert f.derive(a).derive(b).approx_eq(f.derive(b).derive(a), 1e-12)


# -- evaluate ----------------------------------------------------------------


def test_evaluate_euler_identity():
    f = ExpPoly.exponential(1.0, (1j, 0j, 0j, 0j))
    assert abs(f.evaluate((math.pi, 0, 0, 0)) - (-1)) < 1e-14


def test_evaluate_zero_poly():
    assert ExpPoly.zero().evaluate((0.3, -2, 1, 9)) == 0


def test_evaluate_monomial_exponential():
    # x1 e^{2 x1} at x1 = 1 equals e^2 (scalar arithmetic oracle)
    f = ExpPoly.coordinate(1) * ExpPoly.exponential(1, (0, 2, 0, 0))
    assert abs(f.evaluate((0, 1, 0, 0)) - math.exp(2)) < 1e-12


def test_evaluate_overflow_raises():
    f = ExpPoly.exponential(1.0, (800.0, 0, 0, 0))
    with pytest.raises(NonFinite):
        f.evaluate((2.0, 0, 0, 0))


def test_evaluation_homomorphism():
    rng = np.random.default_rng(11)
    for _ in range(100):
        f, g = rand_poly(rng), rand_poly(rng)
        x = tuple(rng.uniform(-1, 1, 4))
        lhs = (f * g).evaluate(x)
        rhs = f.evaluate(x) * g.evaluate(x)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


# -- product rule (the central exactness property) ----------------------------


def test_derivation_law():
    rng = np.random.default_rng(13)
    for _ in range(50):
        f, g = rand_poly(rng), rand_poly(rng)
        for a in range(4):
            lhs = (f * g).derive(a)
            rhs = f.derive(a) * g + f * g.derive(a)
            assert lhs.approx_eq(rhs, 1e-12)


# -- is_zero -----------------------------------------------------------------


def test_is_zero_with_witness():
    # off-shell plane wave: box residual is (-k0^2 + |k|^2) * wave
    k0, k1 = 2.0, 1.0
    wave = ExpPoly.exponential(1.0, (-1j * k0, 1j * k1, 0j, 0j))
    residual = (
        wave.derive(0).derive(0)
        - wave.derive(1).derive(1)
        - wave.derive(2).derive(2)
        - wave.derive(3).derive(3)
    )
    assert not residual.is_zero()
    w = residual.witness()
    assert w is not None
    assert abs(abs(w.coeff) - abs(-(k0**2) + k1**2)) < 1e-12


def test_is_zero_with_external_scale():
    tiny = ExpPoly.constant(1e-14)
    assert not tiny.is_zero()  # relative to itself it is a real term
    assert tiny.is_zero(DEFAULT_TOL, scale=1.0)  # noise relative to O(1) inputs


# -- affine substitution -------------------------------------------------------


def test_substitute_affine_matches_pointwise():
    rng = np.random.default_rng(17)
    for _ in range(15):
        f = rand_poly(rng)
        A = rng.normal(size=(4, 4))
        b = rng.normal(size=4)
        g = f.substitute_affine(A, b)
        for _ in range(5):
            x = rng.uniform(-0.5, 0.5, 4)
            assert abs(g.evaluate(tuple(x)) - f.evaluate(tuple(A @ x + b))) < 1e-9 * max(
                1.0, abs(f.evaluate(tuple(A @ x + b)))
            )
