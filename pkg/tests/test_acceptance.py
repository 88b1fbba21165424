"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one line "criterion N: PASS|FAIL  <details>" before asserting.
"""
import time

import numpy as np
import pytest

from ncball import fock, series, words
from ncball.metric import ball_d, disc_distance, omega_delta_d
from ncball.opcore import op_norm, psd_margin, row_norm, scalar_tuple
from ncball.series import FreeSeries, eval_point, eval_shift, radial_profile
from ncball.transforms import AutomorphismSpec, auto_point, frac_point
from ncball.verify import TrialConfig, check, trial_rng
from ncball.verify import generators as gen

SEED = 20240611


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {n}: {detail}"


def _suite(ids, trials, bound, residual):
    cfg = TrialConfig(trials=trials, seed=SEED)
    out = {}
    for cid in ids:
        rep = check(cid, cfg)
        worst = rep.worst_residual() if residual else rep.worst_margin
        out[cid] = (rep.status, len(rep.records), worst)
    if residual:
        ok = all(s == "pass" and n == trials and w is not None and w <= bound
                 for s, n, w in out.values())
    else:
        ok = all(s == "pass" and n == trials and w is not None and w >= bound
                 for s, n, w in out.values())
    return ok, out


def _fmt(out):
    return ", ".join(f"{k}={v[2]:.2e}" for k, v in out.items())


def test_criterion_1_identity_suite(capsys):
    ids = ["frac_identities", "auto_identities", "frac_involution", "cayley_roundtrip",
           "inverse_recursion"]
    t = time.perf_counter()
    ok, out = _suite(ids, 200, 1e-9, residual=True)
    elapsed = time.perf_counter() - t
    ok = ok and elapsed <= 30.0
    report(capsys, 1, ok, f"worst residuals {_fmt(out)}; runtime {elapsed:.1f}s "
                          "(auto_identities includes the Phi_lambda involution)")


def test_criterion_2_fractional_fixed_points(capsys):
    worst = 0.0
    for t in range(100):
        rng = trial_rng(SEED, "acceptance_fixed_points", t)
        g, e = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        A = gen.matrix_contraction(rng, g, e, rng.uniform(0.0, 0.99))
        worst = max(worst, op_norm(frac_point(A, np.zeros_like(A)) - A),
                    op_norm(frac_point(A, A)))
    report(capsys, 2, worst <= 1e-12, f"max |Psi_A(0)-A|, |Psi_A(A)| = {worst:.2e}")


def test_criterion_3_loewner_suite(capsys):
    ids = ["schwarz_hom", "schwarz_strong", "factor_schwarz", "pick", "pick_julia_schur",
           "pick_julia_herglotz", "multiplier_i", "multiplier_ii"]
    ok, out = _suite(ids, 200, -1e-7, residual=False)
    report(capsys, 3, ok, f"worst PSD margins {_fmt(out)}")


def test_criterion_4_norm_suite(capsys):
    ids = ["lindelof", "lindelof_sharp", "caratheodory", "harnack_unit", "borel_caratheodory"]
    ok, out = _suite(ids, 200, -1e-7, residual=False)
    # equality case: F = X_1 at X = (x, 0, ..., 0)
    worst_eq = 0.0
    for t in range(50):
        rng = trial_rng(SEED, "acceptance_lindelof_equality", t)
        n, h = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        x = gen.matrix_contraction(rng, h, h, rng.uniform(0.01, 0.95))
        X = np.zeros((n, h, h), complex)
        X[0] = x
        F = FreeSeries.monomial(n, (1,))
        t_ = row_norm(X)
        slack = (t_ + 0.0) / (1 + 0.0) - op_norm(eval_point(F, X))
        worst_eq = max(worst_eq, abs(slack))
    ok = ok and worst_eq <= 1e-12
    report(capsys, 4, ok, f"worst slacks {_fmt(out)}; equality slack {worst_eq:.1e}")


def _metric_instances(count):
    out = []
    for t in range(count):
        rng = trial_rng(SEED, "acceptance_metric", t)
        X, Y, Z = (gen.contraction(rng, 2, 2, rng.uniform(0.05, 0.95)) for _ in range(3))
        lam = gen.ball_point(rng, 2, rng.uniform(0.0, 0.95))
        U = gen.isometry(rng, 2, 2)
        out.append((X, Y, Z, AutomorphismSpec.make(lam, U)))
    return out


def test_criterion_5_metric(capsys):
    D = 12
    sym = tri = tanh_err = inv = 0.0
    for X, Y, Z, spec in _metric_instances(200):
        wxy, dexy, dxy = omega_delta_d(X, Y, D)
        dyx = omega_delta_d(Y, X, D)[2]
        dxz = omega_delta_d(X, Z, D)[2]
        dyz = omega_delta_d(Y, Z, D)[2]
        sym = max(sym, abs(dxy - dyx))
        tri = max(tri, dxz - dxy - dyz)
        tanh_err = max(tanh_err, abs(dxy - np.tanh(dexy)))
        inv = max(inv, abs(omega_delta_d(auto_point(spec, X), auto_point(spec, Y), D)[2] - dxy))
    assert omega_delta_d(X, X, D) == (1.0, 0.0, 0.0)
    ladder_ok = 0
    for X, Y, _, spec in _metric_instances(20):
        errs = [abs(omega_delta_d(auto_point(spec, X), auto_point(spec, Y), k)[2]
                    - omega_delta_d(X, Y, k)[2]) for k in (8, 12, 16)]
        ladder_ok += errs[0] > errs[1] > errs[2]
    ok = sym <= 1e-8 and tri <= 1e-8 and tanh_err <= 1e-14 and inv <= 5e-3 and ladder_ok == 20
    report(capsys, 5, ok, f"symmetry {sym:.1e}, triangle excess {tri:.1e}, "
                          f"|d - tanh delta| {tanh_err:.1e}, invariance error at degree 12 "
                          f"{inv:.2e} (limit 5e-3), ladder strictly decreasing on "
                          f"{ladder_ok}/20")


def test_criterion_6_commutative_restriction(capsys):
    D = 14
    worst = 0.0
    for t in range(100):
        rng = trial_rng(SEED, "acceptance_commutative", t)
        n = 1 + t % 2
        z = gen.ball_point(rng, n, rng.uniform(0.0, 0.6))
        w = gen.ball_point(rng, n, rng.uniform(0.0, 0.6))
        d = omega_delta_d(scalar_tuple(z), scalar_tuple(w), D)[2]
        worst = max(worst, abs(d - ball_d(z, w)))
    closed = 0.0
    for t in range(100):
        rng = trial_rng(SEED, "acceptance_disc", t)
        z, w = (gen.ball_point(rng, 1, rng.uniform(0.0, 0.6))[0] for _ in range(2))
        closed = max(closed, abs(disc_distance(z, w) - ball_d([z], [w])))
    ok = worst <= 1e-3 and closed <= 1e-12
    report(capsys, 6, ok, f"max |d - ball_d| at degree 14 = {worst:.2e} (limit 1e-3); "
                          f"closed form vs ball_d {closed:.1e}")


def test_criterion_7_schwarz_pick_metric(capsys):
    cfg = TrialConfig(trials=100, seed=SEED, metric_degree=12, tolerance=1e-3)
    rep = check("schwarz_pick_metric", cfg)
    gaps = [r.residuals["d_FXFY"] - r.residuals["d_XY"] for r in rep.records
            if r.status != "inconclusive"]
    ok = rep.status == "pass" and len(gaps) == 100
    report(capsys, 7, ok, f"max d(F(X),F(Y)) - d(X,Y) = {max(gaps):.2e} (allowance 1e-3), "
                          f"{len(rep.failures)} failures, {len(rep.inconclusive)} inconclusive")


def test_criterion_8_fock_poisson(capsys):
    exact = True
    for n, d in [(1, 10), (2, 6), (3, 4)]:
        m = fock.build_model(n, d)
        P = m.projector(d - 1).toarray()
        for i in range(n):
            for j in range(n):
                G = (m.S[i].T @ m.S[j]).toarray()
                exact &= np.array_equal(G, P if i == j else np.zeros_like(P))
    worst_ratio = 0.0
    worst_bound = 0.0
    for t in range(100):
        rng = trial_rng(SEED, "acceptance_poisson", t)
        n, h = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        T = gen.contraction(rng, n, h, rng.uniform(0.05, 0.6))
        r = rng.uniform(0.1, 1.0)
        p = gen.random_polynomial(rng, n, 1, 1, int(rng.integers(0, 3)))
        D = p.degree
        while fock.reproduction_bound(p, T, r, D) > 1e-6:
            D += 1
        m = fock.build_model(n, D, cap=10**5)
        K = fock.poisson_kernel(T, r, m)
        err = np.linalg.norm(fock.poisson_transform(p, K, m) - eval_point(p, r * T), 2)
        bound = fock.reproduction_bound(p, T, r, D)
        worst_bound = max(worst_bound, bound)
        worst_ratio = max(worst_ratio, err - bound)
    ok = exact and worst_ratio <= 1e-13 and worst_bound <= 1e-6
    report(capsys, 8, ok, f"graded isometry exact: {exact}; max (error - bound) "
                          f"{worst_ratio:.1e}; largest bound used {worst_bound:.1e}")


def test_criterion_9_radial_profiles(capsys):
    worst = 0.0
    grid = [0.2, 0.5, 0.8, 0.95, 0.999]
    rng = trial_rng(SEED, "acceptance_radial", 0)
    for n, m, e in [(1, 3, 1), (2, 2, 2), (3, 1, 2), (2, 3, 1)]:
        ws = words.words_of_length(n, m)
        # isometric homogeneous: stack of A_w with sum A_w^*A_w = I
        V = gen.isometry(rng, len(ws) * e, e)
        F = FreeSeries(n, e, e, {w: V[i * e:(i + 1) * e] for i, w in enumerate(ws)})
        model = fock.build_model(n, m + 3)
        for r, mu in radial_profile(F, grid, model):
            worst = max(worst, abs(mu - r**m))
    K = 6
    a = gen.cgauss(rng, K + 1)
    a /= np.linalg.norm(a)
    phi = FreeSeries(2, 1, 1, {(2,) * k + (1,): a[k] for k in range(K + 1)})
    model = fock.build_model(2, K + 4)
    worst_phi = 0.0
    for r, mu in radial_profile(phi, grid, model):
        closed = r * np.sqrt(sum(r ** (2 * k) * abs(a[k]) ** 2 for k in range(K + 1)))
        worst_phi = max(worst_phi, abs(mu - closed))
    ok = worst <= 1e-10 and worst_phi <= 1e-10
    report(capsys, 9, ok, f"isometric homogeneous |mu - r^m| {worst:.1e}; "
                          f"X_2^k X_1 profile error {worst_phi:.1e}")


def test_criterion_10_structure_generators(capsys):
    g0 = f0 = over = 0.0
    psd = np.inf
    for t in range(100):
        rng = trial_rng(SEED, "acceptance_structure", t)
        n, e, q = int(rng.integers(1, 4)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
        G = gen.herglotz_series(rng, n, e, q)
        g0 = max(g0, np.abs(G.constant_term() - np.eye(e)).max())
        h = int(rng.integers(1, 4))
        X = gen.contraction(rng, n, h, rng.uniform(0.0, 0.95))
        GX = eval_point(G, X)
        psd = min(psd, psd_margin((GX + GX.conj().T) / 2))
        A0 = gen.matrix_contraction(rng, e, e, rng.uniform(0.0, 0.95))
        d_cap = {1: 16, 2: 7, 3: 5}[n]
        F = series.synth_schur(A0, G, d_cap)
        f0 = max(f0, np.abs(F.constant_term() - A0).max())
        # on the degree-d_cap model the truncation is the compression of the full F(rS)
        model = fock.build_model(n, d_cap, cap=10**5)
        over = max(over, op_norm(eval_shift(F, 0.999, model)) - 1.0)
    ok = g0 == 0.0 and psd >= -1e-8 and f0 == 0.0 and over <= 1e-8
    report(capsys, 10, ok, f"|G(0) - I| = {g0:.1e}, min psd_margin(Re G) = {psd:.2e}, "
                           f"|F(0) - A0| = {f0:.1e}, max ||F(0.999 S)|| - 1 = {over:.1e}")
