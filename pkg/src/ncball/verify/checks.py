"""The named checks.  Each trial function draws one instance and returns its outcome.

Conventions: a tuple X acts as the row [X_1 ... X_n]; XY^* means sum X_i Y_i^*,
Xa^* means sum conj(a_i) X_i for a point a of C^n.  Series values are
sum X_w (x) A_w (operator factor outermost), so a scalar-point value M enters
operator expressions as kron(I_h, M).
"""
from dataclasses import dataclass, field

import numpy as np

from .. import words
from ..errors import UnknownCheckId
from ..fock import build_model
from ..metric import omega_delta_d
from ..opcore import adjoint, herm_sqrt, invert, op_norm, psd_margin, row, row_norm
from ..series import (FreeSeries, cayley, cayley_inv, eval_point, eval_scalar, eval_shift,
                      gleason, invert_series, mul, theta_series)
from ..transforms import auto_lambda, frac_point, frac_series
from . import generators as gen

IDENTITY, LOEWNER, NORM, PREDICATE = "identity", "loewner", "norm", "predicate"
DEFAULT_TOL = {IDENTITY: 1e-8, LOEWNER: 1e-7, NORM: 1e-7, PREDICATE: 1e-8}


@dataclass
class Outcome:
    residuals: dict
    margin: float
    data: list
    instance: dict = field(default_factory=dict)
    inconclusive: str | None = None


# small helpers

def eye(k):
    return np.eye(k, dtype=np.complex128)


def rowprod(X, Y):
    """XY^* = sum X_i Y_i^*."""
    return np.einsum("iab,icb->ac", X, np.conj(Y))


def x_astar(X, a):
    """Xa^* = sum conj(a_i) X_i."""
    return np.tensordot(np.conj(a), X, axes=1)


def embed(M, h):
    return np.kron(eye(h), M)


def herm(M):
    return 0.5 * (M + adjoint(M))


def rel(a, b):
    return op_norm(a - b) / max(1.0, op_norm(b))


def schur(rng, s, rows, cols, degree=None, low=0, cfg=None, target=1.0):
    mode = cfg.schur_mode if cfg is not None else "certified"
    return gen.schur_series(rng, s.n, rows, cols, degree or s.degree, low=low, mode=mode,
                            target=target)


def herglotz(rng, s, e, cfg):
    mode = "structure" if cfg.herglotz_mode == "filter" else cfg.herglotz_mode
    return gen.herglotz_series(rng, s.n, e, s.degree, mode=mode)


def strict(rng, s, lo=0.05, hi=0.95, h=None):
    return gen.contraction(rng, s.n, h or s.h, rng.uniform(lo, hi))


def pick_predicate(m_a, m_b):
    """Margin for an equivalence of two strict predicates given their margins."""
    if (m_a > 0) == (m_b > 0):
        return 0.0
    return -min(abs(m_a), abs(m_b))


# identity class

def frac_identities(rng, s, cfg):
    g, e = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    A = gen.matrix_contraction(rng, g, e, rng.uniform(0.01, 0.9))
    B = gen.matrix_contraction(rng, g, e, rng.uniform(0.0, 1.0))
    C = gen.matrix_contraction(rng, g, e, rng.uniform(0.0, 1.0))
    PB, PC = frac_point(A, B), frac_point(A, C)
    DA = herm_sqrt(eye(e) - adjoint(A) @ A)
    DAs = herm_sqrt(eye(g) - A @ adjoint(A))
    lhs1 = eye(g) - PB @ adjoint(PC)
    rhs1 = DAs @ invert(eye(g) - B @ adjoint(A)) @ (eye(g) - B @ adjoint(C)) \
        @ invert(eye(g) - A @ adjoint(C)) @ DAs
    lhs2 = eye(e) - adjoint(PB) @ PC
    rhs2 = DA @ invert(eye(e) - adjoint(B) @ A) @ (eye(e) - adjoint(B) @ C) \
        @ invert(eye(e) - adjoint(A) @ C) @ DA
    res = {"row_identity": rel(lhs1, rhs1), "column_identity": rel(lhs2, rhs2)}
    return Outcome(res, -max(res.values()), [A, B, C], {"A": A, "B": B, "C": C})


def frac_involution(rng, s, cfg):
    g, e = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    A = gen.matrix_contraction(rng, g, e, rng.uniform(0.01, 0.9))
    B = gen.matrix_contraction(rng, g, e, rng.uniform(0.0, 0.999))
    point = rel(frac_point(A, frac_point(A, B)), B)
    d = min(s.degree, 3 if s.n == 3 else 4)
    F = gen.schur_series(rng, s.n, g, e, d)
    twice = frac_series(A, frac_series(A, F, d), d)
    series = twice.max_diff(F, d)
    res = {"point": point, "series": series, "fixed_zero": rel(frac_point(A, np.zeros_like(A)), A),
           "fixed_A": op_norm(frac_point(A, A))}
    return Outcome(res, -max(res.values()), [A, B, F.to_dense(d)], {"A": A, "B": B, "F": F})


def auto_identities(rng, s, cfg):
    n, h = s.n, s.h
    lam = gen.ball_point(rng, n, rng.uniform(0.0, 0.95))
    X, Y = strict(rng, s), strict(rng, s)
    PX, PY = auto_lambda(lam, X), auto_lambda(lam, Y)
    D2 = 1.0 - float(np.vdot(lam, lam).real)
    lhs = eye(h) - rowprod(PX, PY)
    rhs = D2 * invert(eye(h) - x_astar(X, lam)) @ (eye(h) - rowprod(X, Y)) \
        @ invert(eye(h) - adjoint(x_astar(Y, lam)))
    # column form through the row picture Phi_lam(X) = Psi_{lam (x) I}(row X)
    L = np.kron(lam[None, :], eye(h))
    Dls = np.kron(herm_sqrt(np.eye(n) - np.outer(np.conj(lam), lam)), eye(h))
    RX, RY = row(X), row(Y)
    lhs2 = eye(n * h) - adjoint(row(PX)) @ row(PY)
    rhs2 = Dls @ invert(eye(n * h) - adjoint(RX) @ L) @ (eye(n * h) - adjoint(RX) @ RY) \
        @ invert(eye(n * h) - adjoint(L) @ RY) @ Dls
    lam_t = np.kron(lam.reshape(n, 1, 1), eye(h)[None]).reshape(n, h, h)
    res = {"E1_row": rel(lhs, rhs), "E1_column": rel(lhs2, rhs2),
           "involution": op_norm(row(auto_lambda(lam, PX)) - row(X)),
           "phi_of_zero": op_norm(row(auto_lambda(lam, np.zeros_like(X))) - row(lam_t)),
           "phi_of_lambda": op_norm(row(auto_lambda(lam, lam_t)))}
    return Outcome(res, -max(res.values()), [lam, X, Y], {"lambda": lam, "X": X, "Y": Y})


def cayley_roundtrip(rng, s, cfg):
    e = s.e
    d = min(s.degree + 2, 4 if s.n == 3 else 6)
    F = gen.schur_series(rng, s.n, e, e, s.degree, target=rng.uniform(0.1, 0.9))
    back = cayley_inv(cayley(F, d), d)
    G = gen.schur_series(rng, s.n, e, e, s.degree, target=rng.uniform(0.1, 0.9))
    fwd = cayley(cayley_inv(G, d), d)
    res = {"inv_after_cayley": back.max_diff(F, d), "cayley_after_inv": fwd.max_diff(G, d)}
    return Outcome(res, -max(res.values()), [F.to_dense(d), G.to_dense(d)], {"F": F, "G": G})


def inverse_recursion(rng, s, cfg):
    e = s.e
    d = min(s.degree + 2, 4 if s.n == 3 else 6)
    F = gen.random_polynomial(rng, s.n, e, e, s.degree)
    # well-conditioned constant term
    U = gen.isometry(rng, e, e)
    A0 = U @ np.diag(rng.uniform(0.5, 2.0, e))
    F = FreeSeries(s.n, e, e, {**F.terms, (): A0})
    Finv = invert_series(F, d)
    one = FreeSeries.identity(s.n, e)
    res = {"right": mul(F, Finv, d).max_diff(one, d), "left": mul(Finv, F, d).max_diff(one, d)}
    return Outcome(res, -max(res.values()), [F.to_dense(d)], {"F": F})


# Loewner / norm class

def max_principle(rng, s, cfg):
    """F = Psi_{A0}[Theta_m] has ||F||_inf = 1 exactly and ||F(0)|| = ||A0|| < 1."""
    n, h, g = s.n, s.h, s.e
    m = 1 if n == 3 else int(rng.integers(1, 3))
    Th = theta_series(n, m, g)
    A0 = gen.matrix_contraction(rng, g, n**m * g, rng.uniform(0.0, 0.95))
    X = strict(rng, s)
    FX = frac_point(embed(A0, h), eval_point(Th, X))
    gap = 1.0 - op_norm(FX)
    return Outcome({"norm_F_X": op_norm(FX), "gap": gap}, gap, [A0, X], {"A0": A0, "X": X})


def schwarz_hom(rng, s, cfg):
    n, h = s.n, s.h
    m = 1 if n == 3 else int(rng.integers(1, 3))
    g, e = s.e, int(rng.integers(1, 4))
    F = schur(rng, s, g, e, degree=max(s.degree, m), low=m, cfg=cfg)
    X = strict(rng, s)
    FX = eval_point(F, X)
    P = sum(Xb @ adjoint(Xb) for Xb in _words_products(X, m))
    margin = psd_margin(np.kron(P, eye(g)) - FX @ adjoint(FX))
    return Outcome({"psd_margin": margin, "m": m}, margin, [F.to_dense(F.degree), X],
                   {"F": F, "X": X})


def _words_products(X, m):
    out = []
    for w in words.words_of_length(X.shape[0], m):
        P = eye(X.shape[1])
        for i in w:
            P = P @ X[i - 1]
        out.append(P)
    return out


def _schur_defect(FX, F0, h):
    """D_{F0*}[I - F(X)F0*]^{-1}[I - F(X)F(X)*][I - F0 F(X)*]^{-1}D_{F0*} with F0 embedded."""
    g = F0.shape[0]
    E0 = embed(F0, h)
    D = embed(herm_sqrt(eye(g) - F0 @ adjoint(F0)), h)
    k = FX.shape[0]
    return D @ invert(eye(k) - FX @ adjoint(E0)) @ (eye(k) - FX @ adjoint(FX)) \
        @ invert(eye(k) - E0 @ adjoint(FX)) @ D


def schwarz_strong(rng, s, cfg):
    h, g, e = s.h, s.e, int(rng.integers(1, 4))
    F = schur(rng, s, g, e, cfg=cfg)
    X = strict(rng, s)
    lhs = _schur_defect(eval_point(F, X), F.constant_term(), h)
    margin = psd_margin(lhs - np.kron(eye(h) - rowprod(X, X), eye(g)))
    return Outcome({"psd_margin": margin}, margin, [F.to_dense(F.degree), X], {"F": F, "X": X})


def factor_schwarz(rng, s, cfg):
    n, h, g = s.n, s.h, s.e
    m = 1 if n == 3 else int(rng.integers(1, 3))
    e = int(rng.integers(1, 4))
    Th = theta_series(n, m, g)
    Gam = schur(rng, s, n**m * g, e, cfg=cfg)
    F = mul(Th, Gam)
    X = strict(rng, s)
    FX, TX = eval_point(F, X), eval_point(Th, X)
    margin = psd_margin(TX @ adjoint(TX) - FX @ adjoint(FX))
    return Outcome({"psd_margin": margin, "m": m}, margin, [Gam.to_dense(Gam.degree), X],
                   {"Gamma": Gam, "X": X})


def harnack_unit(rng, s, cfg):
    G = herglotz(rng, s, s.e, cfg)
    X = strict(rng, s)
    t = row_norm(X)
    v = op_norm(eval_point(G, X))
    lo, hi = (1 - t) / (1 + t), (1 + t) / (1 - t)
    res = {"lower_slack": v - lo, "upper_slack": hi - v}
    return Outcome(res, min(res.values()), [G.to_dense(G.degree), X], {"G": G, "X": X})


def _filtered_herglotz(rng, s, cfg, budget):
    """Sample F = I + Theta Gamma until Re F(rS) >= 0 on the test model."""
    n, e = s.n, s.e
    Th = theta_series(n, 1, e)
    deg = max(s.degree - 1, 0)
    md = min(cfg.fock_degree, deg + 3)
    while words.count_words(n, md) * e > 600 and md > deg + 1:
        md -= 1
    model = build_model(n, md, cap=10**6)
    for k in range(1, budget + 1):
        Gam = gen.random_polynomial(rng, n, n * e, e, deg)
        Gam = Gam.scale(rng.uniform(0.3, 3.0) / gen.certified_norm(Gam))
        F = FreeSeries.identity(n, e) + mul(Th, Gam)
        ReF = herm(eval_shift(F, gen.R_STAR, model))
        if np.linalg.eigvalsh(ReF)[0] >= 0.0:
            return F, k
    return None, budget


def harnack_theta(rng, s, cfg):
    n, h, e = s.n, s.h, s.e
    Th = theta_series(n, 1, e)
    res = {}
    if cfg.herglotz_mode == "filter":
        budget = max(10, cfg.filter_samples // max(cfg.trials, 1))
        F, used = _filtered_herglotz(rng, s, cfg, budget)
        res["samples"] = used
        if F is None:
            return Outcome({"samples": used, "accepted": 0}, 0.0, [], {},
                           inconclusive=f"no sample passed the positivity filter in {used}")
        res["accepted"] = 1
        Gam = gleason(F - FreeSeries.identity(n, e), 1)
    else:
        F = herglotz(rng, s, e, cfg)
        Gam = gleason(F - FreeSeries.identity(n, e), 1)
    res["factorization"] = (FreeSeries.identity(n, e) + mul(Th, Gam)).max_diff(F)
    X = strict(rng, s)
    FX, TX = eval_point(F, X), eval_point(Th, X)
    k = FX.shape[0]
    lhs = (eye(k) - FX) @ adjoint(eye(k) - FX)
    rhs = (eye(k) + FX) @ TX @ adjoint(TX) @ adjoint(eye(k) + FX)
    res["psd_margin"] = psd_margin(rhs - lhs)
    t = op_norm(TX)
    res["norm_slack"] = (1 + t) / (1 - t) - op_norm(FX)
    margin = min(res["psd_margin"], res["norm_slack"], -res["factorization"])
    return Outcome(res, margin, [F.to_dense(F.degree), X], {"F": F, "X": X})


def caratheodory(rng, s, cfg):
    G = herglotz(rng, s, s.e, cfg)
    F = FreeSeries.identity(s.n, s.e) - G
    X = strict(rng, s)
    t = row_norm(X)
    slack = 2 * t / (1 - t) - op_norm(eval_point(F, X))
    return Outcome({"slack": slack}, slack, [G.to_dense(G.degree), X], {"G": G, "X": X})


def borel_caratheodory(rng, s, cfg):
    n, e = s.n, s.e
    F = gen.random_polynomial(rng, n, e, e, s.degree)
    F = F.scale(rng.uniform(0.2, 3.0) / gen.certified_norm(F))
    gamma = rng.uniform(0.3, 0.99)
    r = gamma * rng.uniform(0.05, 0.95)
    md = F.degree + 2
    while words.count_words(n, md) * e > 500 and md > F.degree:
        md -= 1
    model = build_model(n, md, cap=10**6)
    A = float(np.linalg.eigvalsh(herm(eval_shift(F, gamma, model)))[-1])
    sup_model = op_norm(eval_shift(F, r, model))
    pts = [op_norm(eval_point(F, gen.contraction(rng, n, s.h, r))) for _ in range(3)]
    lhs = max([sup_model] + pts)
    bound = 2 * r / (gamma - r) * A + (gamma + r) / (gamma - r) * op_norm(F.constant_term())
    slack = bound - lhs
    return Outcome({"slack": slack, "A_gamma": A, "sup_r": lhs, "gamma": gamma, "r": r},
                   slack, [F.to_dense(F.degree), [gamma, r]], {"F": F, "gamma": gamma, "r": r})


def pick(rng, s, cfg, a_range=(0.0, 0.95)):
    n, h = s.n, s.h
    m = s.m
    F = schur(rng, s, 1, m, cfg=cfg)
    a = gen.ball_point(rng, n, rng.uniform(*a_range))
    X = strict(rng, s)
    FX = eval_point(F, X)
    Fa = eval_scalar(F, a)
    Ea = embed(Fa, h)
    da2 = 1.0 - float(np.vdot(a, a).real)
    dF2 = 1.0 - op_norm(Fa) ** 2
    I = eye(h)
    core = I - FX @ adjoint(FX)
    lhs = dF2 * invert(I - FX @ adjoint(Ea)) @ core @ invert(I - Ea @ adjoint(FX))
    Xa = x_astar(X, a)
    rhs = da2 * invert(I - Xa) @ (I - rowprod(X, X)) @ invert(I - adjoint(Xa))
    e3 = psd_margin(lhs - rhs)
    nl = op_norm((I - Ea @ adjoint(FX)) @ invert(core) @ (I - FX @ adjoint(Ea)))
    b0 = op_norm((I - adjoint(Xa)) @ invert(I - rowprod(X, X)) @ (I - Xa))
    e4 = dF2 / da2 * b0 - nl
    res = {"E3_psd_margin": e3, "E4_slack": e4}
    return Outcome(res, min(e3, e4), [F.to_dense(F.degree), a, X], {"F": F, "a": a, "X": X}), \
        (F, a, X, FX, Ea, dF2, da2, b0)


def pick_check(rng, s, cfg):
    return pick(rng, s, cfg)[0]


def julia_finite(rng, s, cfg):
    out, (F, a, X, FX, Ea, dF2, da2, b0) = pick(rng, s, cfg, a_range=(0.8, 0.95))
    h = s.h
    I = eye(h)
    beta = b0 * (1.0 + rng.uniform(1e-3, 0.5))
    Xa = x_astar(X, a)
    hyp = psd_margin(beta * (I - rowprod(X, X)) - (I - Xa) @ (I - adjoint(Xa)))
    L = dF2 / da2
    concl = psd_margin(beta * L * (I - FX @ adjoint(FX))
                       - (I - FX @ adjoint(Ea)) @ (I - Ea @ adjoint(FX)))
    out.residuals.update({"hypothesis_margin": hyp, "conclusion_margin": concl, "L_a": L,
                          "beta": beta})
    out.margin = min(out.margin, concl)
    return out


def _ellipsoid_margins(X, c):
    h = X.shape[1]
    I = eye(h)
    X1 = X[0]
    Z = X1 - (1 - c) * I
    ME = I - Z @ adjoint(Z) / c**2 - sum(Xi @ adjoint(Xi) for Xi in X[1:]) / c
    MJ = c / (1 - c) * (I - rowprod(X, X)) - (I - X1) @ adjoint(I - X1)
    return herm(ME), herm(MJ)


def ellipsoid_equiv(rng, s, cfg):
    n, h = s.n, s.h
    c = rng.uniform(0.05, 0.95)
    Y = gen.contraction(rng, n, h, rng.uniform(0.05, 0.95)) * rng.uniform(0.6, 1.4)
    X = Y.copy()
    X[0] = (1 - c) * eye(h) + c * Y[0]
    X[1:] = np.sqrt(c) * Y[1:]
    ME, MJ = _ellipsoid_margins(X, c)
    identity = rel(MJ, c * c / (1 - c) * ME)
    ell = pick_predicate(np.linalg.eigvalsh(ME)[0], np.linalg.eigvalsh(MJ)[0])
    # (a) <=> (b) for a strict X and a unit vector xi
    Xs = strict(rng, s)
    xi = gen.ball_point(rng, n, 1.0)
    I = eye(h)
    Xx = x_astar(Xs, xi)
    D = I - rowprod(Xs, Xs)
    b0 = op_norm((I - adjoint(Xx)) @ invert(D) @ (I - Xx))
    beta = b0 * (1.0 + rng.uniform(-0.3, 0.3))
    ma = np.linalg.eigvalsh(herm(beta * D - (I - Xx) @ (I - adjoint(Xx))))[0]
    mb = beta - b0
    ab = pick_predicate(ma, mb)
    res = {"identity": identity, "ellipsoid_agreement": ell, "ab_agreement": ab}
    return Outcome(res, min(-identity, ell, ab), [X, Xs, xi, [c, beta]],
                   {"X": X, "c": c, "X_strict": Xs, "xi": xi, "beta": beta})


def korany_predicate(X, xi, alpha):
    """Smallest eigenvalue of (alpha^2/4)(1-||X||^2)(I-XX^*) - (I-X xi^*)(I-xi X^*)."""
    h = X.shape[1]
    I = eye(h)
    Xx = x_astar(X, xi)
    t = row_norm(X)
    M = alpha**2 / 4 * (1 - t * t) * (I - rowprod(X, X)) - (I - Xx) @ (I - adjoint(Xx))
    return float(np.linalg.eigvalsh(herm(M))[0])


def korany_member(rng, s, cfg):
    n, h = s.n, s.h
    xi = gen.ball_point(rng, n, 1.0)
    alpha = rng.uniform(1.05, 4.0)
    z = gen.ball_point(rng, n, rng.uniform(0.0, 0.95))
    classical = alpha / 2 * (1 - float(np.vdot(z, z).real)) - abs(1 - np.vdot(xi, z))
    scalar_op = korany_predicate(z.reshape(n, 1, 1), xi, alpha)
    Zh = np.kron(z.reshape(n, 1, 1), eye(h)[None]).reshape(n, h, h)
    embedded = korany_predicate(Zh, xi, alpha)
    zero = korany_predicate(np.zeros((n, 1, 1), np.complex128), xi, alpha)
    res = {"scalar_agreement": pick_predicate(classical, scalar_op),
           "embedded_agreement": pick_predicate(classical, embedded),
           "zero_agreement": pick_predicate(alpha - 2.0, zero)}
    return Outcome(res, min(res.values()), [xi, z, [alpha]], {"xi": xi, "z": z, "alpha": alpha})


def pick_julia_schur(rng, s, cfg):
    n, h, g, e = s.n, s.h, s.e, int(rng.integers(1, 4))
    F = schur(rng, s, g, e, cfg=cfg)
    z = gen.ball_point(rng, n, rng.uniform(0.0, 0.95))
    X = strict(rng, s)
    FX = eval_point(F, X)
    Fz = eval_scalar(F, z)
    P = frac_point(embed(Fz, h), FX)
    PhX = auto_lambda(z, X)
    m1 = psd_margin(np.kron(rowprod(PhX, PhX), eye(g)) - P @ adjoint(P))
    I = eye(h)
    Xz = x_astar(X, z)
    dz2 = 1.0 - float(np.vdot(z, z).real)
    rhs = dz2 * invert(I - Xz) @ (I - rowprod(X, X)) @ invert(I - adjoint(Xz))
    m2 = psd_margin(_schur_defect(FX, Fz, h) - np.kron(rhs, eye(g)))
    res = {"psd_margin": m1, "defect_psd_margin": m2}
    return Outcome(res, min(m1, m2), [F.to_dense(F.degree), z, X], {"F": F, "z": z, "X": X})


def pick_julia_herglotz(rng, s, cfg):
    n, h, e = s.n, s.h, s.e
    G = herglotz(rng, s, e, cfg)
    z = gen.ball_point(rng, n, rng.uniform(0.0, 0.95))
    X = strict(rng, s)
    GX = eval_point(G, X)
    Gz = eval_scalar(G, z)
    Ie = eye(e)
    Gam = 2.0 * herm_sqrt(herm(invert(Ie + Gz) @ herm(Gz) @ invert(Ie + adjoint(Gz))))
    k = GX.shape[0]
    Gz_, Gam_ = embed(Gz, h), embed(Gam, h)
    lhs = Gam_ @ (eye(k) + adjoint(Gz_)) @ invert(GX + adjoint(Gz_)) @ herm(GX) \
        @ invert(Gz_ + adjoint(GX)) @ (eye(k) + Gz_) @ Gam_
    I = eye(h)
    Xz = x_astar(X, z)
    dz2 = 1.0 - float(np.vdot(z, z).real)
    rhs = dz2 * invert(I - Xz) @ (I - rowprod(X, X)) @ invert(I - adjoint(Xz))
    margin = psd_margin(herm(lhs) - np.kron(rhs, Ie))
    return Outcome({"psd_margin": margin}, margin, [G.to_dense(G.degree), z, X],
                   {"G": G, "z": z, "X": X})


def _kernel_factor(z, w):
    ip = np.vdot(z, w)  # <w, z> = sum w_i conj(z_i)
    return abs(1 - ip) ** 2 / ((1 - np.vdot(z, z).real) * (1 - np.vdot(w, w).real))


def multiplier_i(rng, s, cfg):
    n, e = s.n, s.e
    F = schur(rng, s, e, e, cfg=cfg)
    z = gen.ball_point(rng, n, rng.uniform(0.0, 0.95))
    w = gen.ball_point(rng, n, rng.uniform(0.0, 0.95))
    Fz, Fw = eval_scalar(F, z), eval_scalar(F, w)
    I = eye(e)
    lhs = (I - Fz @ adjoint(Fw)) @ invert(I - Fw @ adjoint(Fw)) @ (I - Fw @ adjoint(Fz))
    rhs = _kernel_factor(z, w) * (I - Fz @ adjoint(Fz))
    margin = psd_margin(herm(rhs - lhs))
    return Outcome({"psd_margin": margin}, margin, [F.to_dense(F.degree), z, w],
                   {"F": F, "z": z, "w": w})


def multiplier_ii(rng, s, cfg):
    n, e = s.n, s.e
    G = herglotz(rng, s, e, cfg)
    z = gen.ball_point(rng, n, rng.uniform(0.0, 0.95))
    w = gen.ball_point(rng, n, rng.uniform(0.0, 0.95))
    Gz, Gw = eval_scalar(G, z), eval_scalar(G, w)
    lhs = (Gz + adjoint(Gw)) @ invert(herm(Gw)) @ (Gw + adjoint(Gz))
    rhs = 4 * _kernel_factor(z, w) * herm(Gz)
    margin = psd_margin(herm(rhs - lhs))
    return Outcome({"psd_margin": margin}, margin, [G.to_dense(G.degree), z, w],
                   {"G": G, "z": z, "w": w})


def lindelof_bound(t, f0):
    return (t + f0) / (1 + t * f0)


def lindelof(rng, s, cfg):
    F = schur(rng, s, 1, s.m, cfg=cfg)
    X = strict(rng, s)
    slack = lindelof_bound(row_norm(X), op_norm(F.constant_term())) - op_norm(eval_point(F, X))
    return Outcome({"slack": slack}, slack, [F.to_dense(F.degree), X], {"F": F, "X": X})


def lindelof_sharp(rng, s, cfg):
    F = schur(rng, s, 1, s.m, cfg=cfg)
    z = gen.ball_point(rng, s.n, rng.uniform(0.0, 0.95))
    X = strict(rng, s)
    t = row_norm(auto_lambda(z, X))
    slack = lindelof_bound(t, op_norm(eval_scalar(F, z))) - op_norm(eval_point(F, X))
    return Outcome({"slack": slack}, slack, [F.to_dense(F.degree), z, X],
                   {"F": F, "z": z, "X": X})


def series_tuple(F, m, X):
    """Components F_j(X) of a row series with m blocks of F.rows columns."""
    e = F.rows
    return np.stack([eval_point(F.columns(j * e, (j + 1) * e), X) for j in range(m)])


def schwarz_pick_metric(rng, s, cfg):
    n, m = s.n, s.m
    h = s.h if s.h <= 2 else 2
    e = 1 if h == 2 else int(rng.integers(1, 3))
    F = schur(rng, s, e, m * e, cfg=cfg, target=rng.uniform(0.3, 0.9))
    X = gen.contraction(rng, n, h, rng.uniform(0.05, 0.95))
    Y = gen.contraction(rng, n, h, rng.uniform(0.05, 0.95))
    FX, FY = series_tuple(F, m, X), series_tuple(F, m, Y)
    D = cfg.metric_degree
    dxy = omega_delta_d(X, Y, D)[2]
    dfxy = omega_delta_d(FX, FY, D)[2]
    margin = dxy - dfxy
    return Outcome({"d_XY": dxy, "d_FXFY": dfxy, "slack": margin, "degree": D}, margin,
                   [F.to_dense(F.degree), X, Y], {"F": F, "X": X, "Y": Y})


CHECKS = {
    "frac_identities": (frac_identities, IDENTITY),
    "frac_involution": (frac_involution, IDENTITY),
    "auto_identities": (auto_identities, IDENTITY),
    "max_principle": (max_principle, NORM),
    "schwarz_hom": (schwarz_hom, LOEWNER),
    "schwarz_strong": (schwarz_strong, LOEWNER),
    "factor_schwarz": (factor_schwarz, LOEWNER),
    "harnack_unit": (harnack_unit, NORM),
    "harnack_theta": (harnack_theta, LOEWNER),
    "caratheodory": (caratheodory, NORM),
    "borel_caratheodory": (borel_caratheodory, NORM),
    "pick": (pick_check, LOEWNER),
    "julia_finite": (julia_finite, LOEWNER),
    "ellipsoid_equiv": (ellipsoid_equiv, PREDICATE),
    "korany_member": (korany_member, PREDICATE),
    "pick_julia_schur": (pick_julia_schur, LOEWNER),
    "pick_julia_herglotz": (pick_julia_herglotz, LOEWNER),
    "multiplier_i": (multiplier_i, LOEWNER),
    "multiplier_ii": (multiplier_ii, LOEWNER),
    "lindelof": (lindelof, NORM),
    "lindelof_sharp": (lindelof_sharp, NORM),
    "schwarz_pick_metric": (schwarz_pick_metric, NORM),
    "cayley_roundtrip": (cayley_roundtrip, IDENTITY),
    "inverse_recursion": (inverse_recursion, IDENTITY),
}

# Tolerance overrides.  The metric comparison carries the truncation error of
# two finite-degree distances.
TOL_OVERRIDE = {"schwarz_pick_metric": 1e-3}

NOTES = {
    "harnack_theta": "Re F >= 0 is certified by construction (structure mode) or only on the "
                     "truncated model at r = 0.999 (filter mode; a filter, not a proof).",
    "julia_finite": "Boundary limits L are not estimated; the finite pair (a, F(a)) replaces "
                    "(xi, eta) with L_a = (1 - ||F(a)||^2)/(1 - ||a||^2).",
    "borel_caratheodory": "sup over ||X|| = r is taken as max(||F(rS)|| on the model, sampled "
                          "points); A(gamma) is the top eigenvalue of Re F(gamma S) on the model.",
    "schwarz_pick_metric": "distances are truncated at the configured metric degree.",
    "max_principle": "F = Psi_A0[Theta_m], whose sup norm is exactly 1.",
}


def default_tolerance(check_id):
    if check_id not in CHECKS:
        raise UnknownCheckId(f"unknown check {check_id!r}")
    return TOL_OVERRIDE.get(check_id, DEFAULT_TOL[CHECKS[check_id][1]])
