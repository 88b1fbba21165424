"""Seeded instance generators and the theorem checker."""
from .checks import CHECKS, default_tolerance
from .config import PROFILES, TrialConfig, env_seed, trial_rng
from .generators import gen_contraction, gen_herglotz, gen_schur
from .report import TrialRecord, VerificationReport
from .runner import check, check_all, check_ids, consolidated, exit_code

__all__ = ["CHECKS", "PROFILES", "TrialConfig", "TrialRecord", "VerificationReport", "check",
           "check_all", "check_ids", "consolidated", "default_tolerance", "env_seed",
           "exit_code", "gen_contraction", "gen_herglotz", "gen_schur", "trial_rng"]
