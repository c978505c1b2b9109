"""Moments and correlation functions of characteristic polynomials of
non-Hermitian random matrices, computed three independent ways (exact
finite-N duality determinants, Painleve sigma-form transport, Monte Carlo)
and cross-validated against the matching large-N expansions."""

from . import asymptotics, confluent, dualities, ensembles, gap, linalg, oracles, painleve, specfun, verify

__all__ = [
    "asymptotics",
    "confluent",
    "dualities",
    "ensembles",
    "gap",
    "linalg",
    "oracles",
    "painleve",
    "specfun",
    "verify",
]

__version__ = "0.1.0"
