"""Hypergeometric data over C and F_q: Gauss sums, equivalence moves and their decision procedure."""

from .charsum import CycloElem, FiniteField, gauss_sum, gauss_valuation, hasse_davenport_ratio
from .classify import decide_isomorphism, profile_equal, recover_rank1, synthesize_rank1
from .cone import facets, is_nonresonant
from .hgdata import HGData, complex_data, finite_data, validate
from .mellin import hodge_type, mellin_bruteforce, mellin_fq, mellin_order, profile
from .moves import move_frobenius, move_multiplicative, move_reduce, normalize
from .residues import Residue, balanced_bracket, frac_bracket

__all__ = [
    "CycloElem", "FiniteField", "gauss_sum", "gauss_valuation", "hasse_davenport_ratio",
    "decide_isomorphism", "profile_equal", "recover_rank1", "synthesize_rank1",
    "facets", "is_nonresonant",
    "HGData", "complex_data", "finite_data", "validate",
    "hodge_type", "mellin_bruteforce", "mellin_fq", "mellin_order", "profile",
    "move_frobenius", "move_multiplicative", "move_reduce", "normalize",
    "Residue", "balanced_bracket", "frac_bracket",
]
__version__ = "0.1.0"
