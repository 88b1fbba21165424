"""Seeded random instances: contractions, ball points, Schur and Herglotz series."""
import numpy as np

from .. import words
from ..errors import InputError
from ..fock import build_model
from ..opcore import as_tuple, op_norm, row_norm
from ..series import FreeSeries, cayley_inv, eval_shift, synth_herglotz
from .config import TrialConfig, draw_sizes, trial_rng

R_STAR = 0.999


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def contraction(rng, n, h, target):
    """Random tuple scaled to row norm exactly `target`."""
    if not 0.0 <= target <= 0.95:
        raise InputError("target row norm must lie in [0, 0.95]")
    if target == 0.0:
        return np.zeros((n, h, h), dtype=np.complex128)
    X = cgauss(rng, n, h, h)
    return X * (target / row_norm(X))


def ball_point(rng, n, radius):
    z = cgauss(rng, n)
    return z * (radius / np.linalg.norm(z))


def matrix_contraction(rng, rows, cols, norm):
    A = cgauss(rng, rows, cols)
    return A * (norm / op_norm(A))


def isometry(rng, rows, cols):
    if cols > rows:
        raise InputError("an isometry needs rows >= cols")
    Q, R = np.linalg.qr(cgauss(rng, rows, cols))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def certified_norm(F):
    """sum_k ||sum_{|w|=k} A_w^* A_w||^{1/2}, an upper bound for ||F||_inf.

    The homogeneous part of degree k evaluated at the left creation operators
    is the isometric row [S_w (x) I] times the column of its coefficients.
    """
    return float(sum(F.degree_norms().values()))


def random_polynomial(rng, n, rows, cols, degree, low=0, density=0.7):
    """Random complex polynomial with terms of degree low..degree."""
    terms = {}
    for k in range(low, degree + 1):
        for w in words.words_of_length(n, k):
            if k == low or rng.random() < density:
                terms[w] = cgauss(rng, rows, cols) * rng.uniform(0.2, 1.0)
    if degree > low and max(len(w) for w in terms) == low:
        # keep the top degree populated so the polynomial is never constant
        w = words.unrank(int(rng.integers(n**degree)), degree, n)
        terms[w] = cgauss(rng, rows, cols) * rng.uniform(0.2, 1.0)
    return FreeSeries(n, rows, cols, terms)


def estimated_norm(F, r=R_STAR, cap=1500, rtol=1e-3):
    """||F(rS)|| on models of growing degree until successive values agree to rtol.

    Starts one above the degree of F and stops at the dimension cap; a lower estimate.
    """
    prev = None
    d = F.degree + 1
    val = None
    while words.count_words(F.n, d) * max(F.rows, F.cols) <= cap:
        val = op_norm(eval_shift(F, r, build_model(F.n, d, cap=cap)))
        if prev is not None and abs(val - prev) <= rtol * val:
            break
        prev = val
        d += 1
    if val is None:
        raise InputError("series too large for the estimation model")
    return val


def schur_series(rng, n, rows, cols, degree, low=0, mode="certified", target=1.0):
    """Random polynomial of sup norm <= target.

    certified: scaled by certified_norm, so the bound is rigorous.
    estimated: scaled by the truncated-model norm at r = 0.999 (a lower
    estimate; declared with provenance "estimated").
    """
    F = random_polynomial(rng, n, rows, cols, degree, low)
    if mode == "certified":
        F = F.scale(target / certified_norm(F))
        return F.with_norm(target, "certified")
    if mode == "estimated":
        F = F.scale(target / estimated_norm(F))
        return F.with_norm(target, "estimated")
    raise InputError(f"unknown schur mode {mode!r}")


def herglotz_series(rng, n, e, q, mode="structure", d_cap=None):
    """Random G with G(0) = I and Re G >= 0.

    structure: G = W^*[2(I - sum X_i (x) V_i^*)^{-1} - I]W with W an isometry
    into the degree-q part of the Fock space; the series is then an exact
    polynomial of degree <= q.
    cayley: cayley_inv of a certified Schur polynomial with zero constant term,
    truncated at d_cap.
    """
    if mode == "structure":
        aux = build_model(n, q, cap=10**6)
        if aux.dim < e:
            q = q + 1
            while words.count_words(n, q) < e:
                q += 1
            aux = build_model(n, q, cap=10**6)
        W = isometry(rng, aux.dim, e)
        return synth_herglotz(n, q, aux, W)
    if mode == "cayley":
        F = schur_series(rng, n, e, e, q, low=1)
        return cayley_inv(F, d_cap if d_cap is not None else 2 * q)
    raise InputError(f"unknown herglotz mode {mode!r}")


# cfg-level entry points

def gen_contraction(cfg: TrialConfig, trial=0, target=None, n=None, h=None):
    rng = trial_rng(cfg.seed, "gen_contraction", trial)
    s = draw_sizes(rng, cfg)
    t = rng.uniform(0.05, 0.95) if target is None else float(target)
    return contraction(rng, n or s.n, h or s.h, t)


def gen_schur(cfg: TrialConfig, trial=0, rows=None, cols=None, vanish_below=0, target=1.0):
    rng = trial_rng(cfg.seed, "gen_schur", trial)
    s = draw_sizes(rng, cfg)
    deg = max(s.degree, vanish_below)
    return schur_series(rng, s.n, rows or s.e, cols or s.e, deg, low=vanish_below,
                        mode=cfg.schur_mode, target=target)


def gen_herglotz(cfg: TrialConfig, trial=0, e=None):
    rng = trial_rng(cfg.seed, "gen_herglotz", trial)
    s = draw_sizes(rng, cfg)
    mode = "structure" if cfg.herglotz_mode == "filter" else cfg.herglotz_mode
    return herglotz_series(rng, s.n, e or s.e, s.degree, mode=mode)

