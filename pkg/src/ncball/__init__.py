"""Free power series on the noncommutative unit ball: evaluation, transforms,
truncated Fock models, the pseudohyperbolic metric, and a seeded checker for
the operator inequalities these objects satisfy."""
from . import fock, metric, opcore, series, transforms, verify, words
from ._kernels import BACKEND
from .series import FreeSeries

__all__ = ["BACKEND", "FreeSeries", "fock", "metric", "opcore", "series", "transforms", "verify",
           "words"]
__version__ = "0.1.0"
