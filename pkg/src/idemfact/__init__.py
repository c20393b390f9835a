"""Factor singular endomorphisms of finite sets and GF(p)^d into idempotents of equal rank."""

from .algebra import Algebra, Endomorphism, PartialEndomorphism, compose, is_idempotent, rank_endo
from .factorization import FactorizationReport, factorize, verify_factorization
from .instances import enumerate_endomorphisms, format_endo, is_singular, parse_endo

__all__ = [
    "Algebra",
    "Endomorphism",
    "PartialEndomorphism",
    "FactorizationReport",
    "compose",
    "enumerate_endomorphisms",
    "factorize",
    "format_endo",
    "is_idempotent",
    "is_singular",
    "parse_endo",
    "rank_endo",
    "verify_factorization",
]
