"""meromat: exact and numeric analysis of polynomial, rational and
quasi-polynomial matrices.

Exact layer (gmpy2 rationals): Smith and Smith-McMillan forms, gcrd/gcld
and Bezout identities, coprime matrix-fraction descriptions, least order
and McMillan degree, system equivalence of analytic matrix descriptions,
decoupling zeros. Numeric layer: argument-principle counting, root
localization, and local pole-zero indices of holomorphic matrices,
including quasi-polynomial matrices of time-delay systems.
"""

__version__ = "0.1.0"

from . import errors, exactalg, frontio, holomat, polymat, ratmat, sysmat
from .errors import (
    AmbiguousRankError,
    AnalysisError,
    ContourError,
    ConvergenceError,
    InputError,
    MeromatError,
    NoSolutionError,
    NotCoprimeError,
    ParseError,
    RankDeficientError,
    SingularMatrixError,
)
from .exactalg import QQ, GaussRat, Poly, RatFn
from .holomat import (
    Contour,
    CountResult,
    QuasiPolyEntry,
    QuasiPolyMat,
    TdsData,
    build_tds_amd,
    count_zeros_minus_poles,
    local_indices,
    regional_coprime,
    roots_in_region,
    tds_pole_count,
)
from .polymat import PolyMat, gcld, gcrd, hermite_form, smith_form
from .ratmat import (
    Divisor,
    IndexTuple,
    Mfd,
    RatMat,
    RootHandle,
    least_order,
    left_coprime_mfd,
    mcmillan_degree,
    mfd_unit_relator,
    right_coprime_mfd,
    smith_mcmillan,
)
from .sysmat import (
    Amd,
    FseWitness,
    RseWitness,
    decouple,
    equate_irreducible,
    least_order_check,
    to_lmf,
    to_rmf,
    transfer_function,
    verify_fse,
    verify_rse,
)
from .frontio import parse_entry

__all__ = [
    "__version__",
    "errors", "exactalg", "polymat", "ratmat", "sysmat", "holomat",
    "frontio",
    "MeromatError", "InputError", "ParseError", "AnalysisError",
    "SingularMatrixError", "RankDeficientError", "NotCoprimeError",
    "NoSolutionError", "ContourError", "ConvergenceError",
    "AmbiguousRankError",
    "QQ", "GaussRat", "Poly", "RatFn",
    "PolyMat", "smith_form", "hermite_form", "gcrd", "gcld",
    "RatMat", "Divisor", "RootHandle", "IndexTuple", "Mfd",
    "smith_mcmillan", "right_coprime_mfd", "left_coprime_mfd",
    "mfd_unit_relator", "least_order", "mcmillan_degree",
    "Amd", "FseWitness", "RseWitness", "transfer_function",
    "verify_fse", "verify_rse", "to_rmf", "to_lmf",
    "equate_irreducible", "least_order_check", "decouple",
    "QuasiPolyEntry", "QuasiPolyMat", "Contour", "CountResult",
    "count_zeros_minus_poles", "roots_in_region", "local_indices",
    "regional_coprime", "TdsData", "build_tds_amd", "tds_pole_count",
    "parse_entry",
]
