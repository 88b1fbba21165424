import numpy as np
import pytest

from ncball import fock, words
from ncball.errors import CapExceeded, InputError, NotContraction
from ncball.series import FreeSeries, eval_point

from conftest import cgauss, rand_tuple


def test_dim_examples():
    assert fock.build_model(2, 2).dim == 7
    assert fock.build_model(1, 5).dim == 6
    assert fock.build_model(3, 2).dim == 13
    with pytest.raises(CapExceeded):
        fock.build_model(2, 20)
    with pytest.raises(InputError):
        fock.build_model(0, 2)


@pytest.mark.parametrize("n,d", [(1, 6), (2, 4), (3, 3)])
def test_graded_isometry_and_orthogonal_ranges(n, d):
    # S_i^*S_j = delta_ij P_{<=d-1} exactly, ranges of distinct S_i orthogonal
    m = fock.build_model(n, d)
    P = m.projector(d - 1).toarray()
    for i in range(n):
        for j in range(n):
            G = (m.S[i].T @ m.S[j]).toarray()
            assert np.array_equal(G, P if i == j else np.zeros_like(P))
            GR = (m.R[i].T @ m.R[j]).toarray()
            assert np.array_equal(GR, P if i == j else np.zeros_like(P))
    total = sum((S @ S.T).toarray() for S in m.S)
    expect = np.eye(m.dim)
    expect[0, 0] = 0.0
    assert np.array_equal(total, expect)


def test_creation_action():
    m = fock.build_model(2, 3)
    e = np.zeros(m.dim)
    e[m.index((2,))] = 1
    assert (m.S[0] @ e)[m.index((1, 2))] == 1
    assert (m.R[0] @ e)[m.index((2, 1))] == 1
    # top degree is killed
    e = np.zeros(m.dim)
    e[m.index((1, 2, 2))] = 1
    assert not np.any(m.S[0] @ e)


def test_left_right_commute_below_top():
    m = fock.build_model(2, 4)
    P = m.projector(2).toarray()
    for i in range(2):
        for j in range(2):
            a = (m.S[i] @ m.R[j]).toarray() @ P
            b = (m.R[j] @ m.S[i]).toarray() @ P
            assert np.array_equal(a, b)


def test_monomial_matches_product():
    m = fock.build_model(2, 4)
    w = (1, 2, 2)
    prod = (m.S[0] @ m.S[1] @ m.S[1]).toarray()
    assert np.array_equal(m.monomial(w).toarray(), prod)


def test_memory_estimate():
    mem = fock.build_model(2, 2).memory_estimate()
    assert mem["dense_bytes"] == 7 * 7 * 16
    assert mem["sparse_bytes"] > 0


def test_poisson_reproduction(rng):
    n, h, D = 2, 2, 6
    m = fock.build_model(n, D)
    T = rand_tuple(rng, n, h, 0.8)
    terms = {w: cgauss(rng, 1, 1) for w in words.enumerate_words(n, 3)[0]}
    p = FreeSeries(n, 1, 1, terms)
    for r in (0.5, 0.9, 1.0):
        K = fock.poisson_kernel(T, r, m)
        got = fock.poisson_transform(p, K, m)
        want = eval_point(p, r * T)
        assert np.linalg.norm(got - want, 2) <= 1e-12 + fock.reproduction_bound(p, T, r, D)


def test_poisson_kernel_isometric_up_to_tail(rng):
    T = rand_tuple(rng, 2, 2, 0.7)
    m = fock.build_model(2, 8)
    K = fock.poisson_kernel(T, 0.9, m)
    err = np.linalg.norm(K.matrix.conj().T @ K.matrix - np.eye(2), 2)
    assert err <= K.tail_bound + 1e-14


def test_poisson_rejects_noncontraction(rng):
    T = rand_tuple(rng, 2, 2, 1.5)
    with pytest.raises(NotContraction):
        fock.poisson_kernel(T, 0.9, fock.build_model(2, 3))
