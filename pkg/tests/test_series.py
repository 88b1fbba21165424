import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncball import fock, series, words
from ncball.errors import (ArityMismatch, DegreeExceeded, LowDegreeTermsPresent, ShapeMismatch,
                           SingularConstantTerm)
from ncball.series import FreeSeries

from conftest import cgauss, rand_tuple


def X1(n=1):
    return FreeSeries.monomial(n, (1,))


def test_eval_examples():
    F = FreeSeries.monomial(2, (1, 2))
    A = 0.5 * np.array([[0, 1], [0, 0]])
    B = 0.5 * np.array([[0, 0], [1, 0]])
    assert np.allclose(series.eval_point(F, np.stack([A, B])), 0.25 * np.array([[1, 0], [0, 0]]))
    I = FreeSeries.identity(2, 2)
    X = cgauss(np.random.default_rng(0), 2, 3, 3)
    assert np.array_equal(series.eval_point(I, X), np.eye(6))


def test_eval_layout_operator_outermost(rng):
    A = cgauss(rng, 2, 3)
    X = cgauss(rng, 1, 2, 2)
    F = FreeSeries.monomial(1, (1,), A)
    assert np.allclose(series.eval_point(F, X), np.kron(X[0], A))
    with pytest.raises(ArityMismatch):
        series.eval_point(F, cgauss(rng, 2, 2, 2))


def test_eval_shift_example():
    m = fock.build_model(1, 3)
    got = series.eval_shift(X1(), 0.5, m)
    assert np.array_equal(got, 0.5 * m.S[0].toarray())


def test_radius_estimate_examples():
    assert series.radius_estimate(X1()) == 1.0
    assert series.radius_estimate(X1().scale(2)) == 0.5
    assert series.radius_estimate(FreeSeries.constant(2, np.eye(2))) == np.inf


def test_mul_and_compose_examples():
    P = series.mul(FreeSeries.monomial(2, (1,)), FreeSeries.monomial(2, (2,)))
    assert list(P.terms) == [(1, 2)] and P.terms[(1, 2)][0, 0] == 1
    Y1 = FreeSeries.monomial(1, (1,))
    X2 = FreeSeries.monomial(2, (2,))
    assert series.compose(Y1, [X2], 4).max_diff(X2) == 0
    Y12 = FreeSeries.monomial(2, (1, 2))
    X1s = FreeSeries.monomial(2, (1,))
    assert series.compose(Y12, [X1s, X1s], 4).max_diff(FreeSeries.monomial(2, (1, 1))) == 0


def test_mul_truncation_flag():
    P = series.mul(FreeSeries.monomial(1, (1, 1)), FreeSeries.monomial(1, (1,)), d_cap=2)
    assert P.truncated and not P.terms


def test_coeff_extract_examples(rng):
    A = cgauss(rng, 2, 3)
    F = FreeSeries.monomial(2, (1,), A) + FreeSeries.constant(2, np.ones((2, 3)))
    m = fock.build_model(2, 3)
    for r in (0.3, 0.9):
        Bd = series.eval_shift(F, r, m)
        assert np.allclose(series.coeff_extract(Bd, (1,), r, m, 2, 3), A, atol=1e-14)
        assert np.allclose(series.coeff_extract(Bd, (), r, m, 2, 3), np.ones((2, 3)))
        assert not np.any(series.coeff_extract(Bd, (2, 1), r, m, 2, 3))
    with pytest.raises(DegreeExceeded):
        series.coeff_extract(Bd, (1, 1, 1, 1), 0.5, m, 2, 3)


def test_invert_series_examples():
    G = series.invert_series(FreeSeries.identity(1) - X1(), 6)
    for k in range(7):
        assert abs(G.coeff((1,) * k)[0, 0] - 1) < 1e-15
    H = series.invert_series(FreeSeries.constant(2, 2 * np.eye(2)), 3)
    assert np.allclose(H.constant_term(), 0.5 * np.eye(2))
    K = series.invert_series(FreeSeries.identity(2) - FreeSeries.monomial(2, (1, 2)), 6)
    expect = {(1, 2) * j for j in range(4)}
    assert set(K.terms) == expect
    assert all(abs(K.terms[w][0, 0] - 1) < 1e-15 for w in expect)
    with pytest.raises(SingularConstantTerm):
        series.invert_series(X1(), 3)


def test_invert_series_is_inverse(rng):
    n, e, d = 2, 2, 5
    F = FreeSeries(n, e, e, {w: 0.3 * cgauss(rng, e, e) for w in words.enumerate_words(n, 2)[0]})
    F = F + FreeSeries.identity(n, e)
    G = series.invert_series(F, d)
    assert series.mul(F, G, d).max_diff(FreeSeries.identity(n, e), d) < 1e-12
    assert series.mul(G, F, d).max_diff(FreeSeries.identity(n, e), d) < 1e-12


def test_cayley_roundtrip(rng):
    F = FreeSeries(2, 2, 2, {w: 0.2 * cgauss(rng, 2, 2) for w in words.enumerate_words(2, 2)[0]
                             if w})
    G = series.cayley_inv(F, 6)
    assert series.cayley(G, 6).max_diff(F, 6) < 1e-12


def test_gleason_examples():
    F = FreeSeries.monomial(2, (1, 2))
    Gam = series.gleason(F, 1)
    assert Gam.shape == (2, 1)
    assert np.array_equal(Gam.coeff((2,)), np.array([[1], [0]]))
    F = FreeSeries(2, 1, 1, {(1,): 3.0, (2,): 5.0})
    Gam = series.gleason(F, 1)
    assert list(Gam.terms) == [()]
    assert np.array_equal(Gam.coeff(()), np.array([[3], [5]]))
    assert not series.gleason(FreeSeries.zero(2), 1).terms
    with pytest.raises(LowDegreeTermsPresent):
        series.gleason(FreeSeries.identity(2), 1)


def test_gleason_factorization(rng):
    n, m = 2, 2
    F = FreeSeries(n, 2, 3, {w: cgauss(rng, 2, 3) for w in words.enumerate_words(n, 4)[0]
                             if len(w) >= m})
    Th = series.theta_series(n, m, 2)
    assert series.mul(Th, series.gleason(F, m)).max_diff(F) < 1e-14


def test_radial_profile_isometric_homogeneous():
    # coefficients e_w / 2 over the four words of degree 2 satisfy sum A^*A = I
    n, m = 2, 2
    F = series.theta_series(n, m, 1)
    F = FreeSeries(n, n**m, 1, {w: A.T / 2 for w, A in F.terms.items()})
    model = fock.build_model(n, 5)
    for r, mu in series.radial_profile(F, [0.3, 0.7, 0.95], model):
        assert abs(mu - r**m) < 1e-12


def test_synth_herglotz_vacuum():
    aux = fock.build_model(1, 4)
    W = np.zeros((aux.dim, 1))
    W[0, 0] = 1
    G = series.synth_herglotz(1, 4, aux, W)
    assert G.max_diff(FreeSeries.identity(1)) == 0


def test_synth_schur_examples(rng):
    A0 = 0.5 * np.eye(2)
    F = series.synth_schur(A0, FreeSeries.identity(2, 2), 4)
    assert F.max_diff(FreeSeries.constant(2, A0)) < 1e-15
    aux = fock.build_model(2, 2)
    W = np.linalg.qr(cgauss(rng, aux.dim, 2))[0]
    G = series.synth_herglotz(2, 2, aux, W)
    F = series.synth_schur(np.zeros((2, 2)), G, 5)
    assert F.max_diff(series.cayley(G, 5).scale(-1), 5) < 1e-14
    assert np.array_equal(F.constant_term(), np.zeros((2, 2)))


def test_json_roundtrip(rng):
    F = FreeSeries(2, 1, 2, {(1, 2): cgauss(rng, 1, 2), (): np.ones((1, 2))})
    G = FreeSeries.from_json(F.to_json())
    assert G.max_diff(F) == 0 and G.shape == F.shape
    with pytest.raises(ShapeMismatch):
        FreeSeries(1, 2, 2, {(1,): np.ones((3, 3))})


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_eval_is_multiplicative(n, h, seed):
    r = np.random.default_rng(seed)
    F = FreeSeries(n, 2, 2, {w: cgauss(r, 2, 2) for w in words.enumerate_words(n, 2)[0]})
    G = FreeSeries(n, 2, 2, {w: cgauss(r, 2, 2) for w in words.enumerate_words(n, 2)[0]})
    X = rand_tuple(r, n, h, 0.7)
    lhs = series.eval_point(series.mul(F, G), X)
    rhs = series.eval_point(F, X) @ series.eval_point(G, X)
    assert np.allclose(lhs, rhs, atol=1e-10 * (1 + np.abs(rhs).max()))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_sup_norm_monotone_in_truncation(n, seed):
    # each truncation is a compression of the next, so the norms increase with d
    r = np.random.default_rng(seed)
    F = FreeSeries(n, 1, 1, {w: cgauss(r, 1, 1) for w in words.enumerate_words(n, 2)[0]})
    vals = [series.sup_norm(F, [0.6, 0.9], fock.build_model(n, d))[-1][1] for d in (2, 3, 4)]
    assert vals[0] <= vals[1] + 1e-12 and vals[1] <= vals[2] + 1e-12
