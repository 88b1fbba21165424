"""Running checks: seeded trials, parallel execution, counterexample artifacts."""
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..errors import NcballError, UnknownCheckId
from ..opcore import matrix_to_json, tuple_to_json
from ..series import FreeSeries
from .checks import CHECKS, NOTES, default_tolerance
from .config import TrialConfig, draw_sizes, trial_rng
from .report import FAIL, INCONCLUSIVE, PASS, TrialRecord, VerificationReport, digest, dumps

OUT_OF_SCOPE = ("Julia-limit quantities (boundary L, M) are not estimated; only their "
                "finite-data surrogates are checked.")


def check_ids():
    return list(CHECKS)


def _instance_json(inst):
    out = {}
    for k, v in inst.items():
        if isinstance(v, FreeSeries):
            out[k] = v.to_json()
        elif isinstance(v, np.ndarray) and v.ndim == 3:
            out[k] = tuple_to_json(v)
        elif isinstance(v, np.ndarray) and v.ndim == 2:
            out[k] = matrix_to_json(v)
        elif isinstance(v, np.ndarray):
            out[k] = [[float(z.real), float(z.imag)] for z in v.reshape(-1)]
        else:
            out[k] = float(v) if isinstance(v, (float, np.floating)) else v
    return out


def run_trial(check_id, cfg, trial, tol):
    fn, _ = CHECKS[check_id]
    rng = trial_rng(cfg.seed, check_id, trial)
    sizes = draw_sizes(rng, cfg)
    try:
        with np.errstate(all="raise"):
            out = fn(rng, sizes, cfg)
    except (NcballError, np.linalg.LinAlgError, FloatingPointError) as exc:
        return TrialRecord(trial, "", {}, float("nan"), INCONCLUSIVE,
                           note=f"{type(exc).__name__}: {exc}")
    if out.inconclusive:
        return TrialRecord(trial, "", out.residuals, float("nan"), INCONCLUSIVE,
                           note=out.inconclusive)
    margin = float(out.margin)
    if not np.isfinite(margin):
        return TrialRecord(trial, digest(*map(np.ravel, out.data)), out.residuals, margin,
                           INCONCLUSIVE, note="non-finite margin")
    status = PASS if margin >= -tol else FAIL
    rec = TrialRecord(trial, digest(*[np.ravel(np.asarray(a, dtype=np.complex128))
                                      for a in out.data]),
                      out.residuals, margin, status)
    if status == FAIL:
        rec.instance = _instance_json(out.instance)
    return rec


def _run_chunk(args):
    check_id, cfg, trials, tol = args
    return [run_trial(check_id, cfg, t, tol) for t in trials]


def _write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_counterexamples(report, directory):
    """One JSON file per failing trial: seed, trial index and the instance."""
    paths = []
    for rec in report.failures:
        obj = {"check": report.check, "seed": report.config["seed"], "trial": rec.trial,
               "margin": rec.margin, "residuals": rec.residuals, "instance": rec.instance}
        path = os.path.join(directory, f"{report.check}-seed{report.config['seed']}"
                                       f"-trial{rec.trial}.json")
        _write_atomic(path, dumps(obj))
        paths.append(path)
    return paths


def check(check_id, cfg=None, jobs=1, artifacts_dir=None):
    """Run cfg.trials seeded trials of one check and return the report."""
    if check_id not in CHECKS:
        raise UnknownCheckId(f"unknown check {check_id!r}; known: {', '.join(CHECKS)}")
    cfg = cfg if cfg is not None else TrialConfig()
    tol = cfg.tolerance if cfg.tolerance is not None else default_tolerance(check_id)
    trials = list(range(cfg.trials))
    if jobs > 1 and len(trials) > 1:
        chunks = [trials[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_run_chunk, [(check_id, cfg, c, tol) for c in chunks]))
        records = sorted((r for p in parts for r in p), key=lambda r: r.trial)
    else:
        records = _run_chunk((check_id, cfg, trials, tol))
    meta = {}
    if check_id in NOTES:
        meta["note"] = NOTES[check_id]
    if check_id in ("julia_finite", "pick", "pick_julia_schur", "pick_julia_herglotz"):
        meta["out_of_scope"] = OUT_OF_SCOPE
    if cfg.schur_mode == "estimated":
        meta["schur_norm"] = ("estimated: sup norms are truncated-model lower estimates, so a "
                              "failure may come from an input whose true norm exceeds 1")
    if check_id == "harnack_theta" and cfg.herglotz_mode == "filter":
        samples = sum(r.residuals.get("samples", 0) for r in records)
        accepted = sum(r.residuals.get("accepted", 0) for r in records)
        meta["filter_samples"] = samples
        meta["acceptance_rate"] = accepted / samples if samples else 0.0
        meta["global_hypothesis"] = "certified only on the truncated model at r = 0.999"
        if accepted == 0:
            for r in records:
                r.status = INCONCLUSIVE
    report = VerificationReport(check_id, CHECKS[check_id][1], tol, cfg.to_json(), records, meta)
    if artifacts_dir and report.failures:
        report.metadata["artifacts"] = save_counterexamples(report, artifacts_dir)
    return report


def check_all(cfg=None, jobs=1, artifacts_dir=None, ids=None):
    return [check(c, cfg, jobs, artifacts_dir) for c in (ids or CHECKS)]


def consolidated(reports, cfg):
    status = PASS
    if any(r.status == FAIL for r in reports):
        status = FAIL
    elif any(r.status == INCONCLUSIVE for r in reports):
        status = INCONCLUSIVE
    return {"config": cfg.to_json(), "status": status,
            "checks": [r.to_json() for r in reports],
            "summary": {r.check: r.summary() for r in reports}}


def exit_code(reports):
    if any(r.status == FAIL for r in reports):
        return 1
    if any(r.status == INCONCLUSIVE for r in reports):
        return 3
    return 0


__all__ = ["check", "check_all", "check_ids", "consolidated", "exit_code", "run_trial",
           "save_counterexamples", "FAIL", "PASS", "INCONCLUSIVE"]
