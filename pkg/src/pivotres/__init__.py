"""Free resolutions of monomial ideals: Taylor, Morse, Lyubeznik and pivot
resolutions, their DG-algebra structures, higher homotopies and the
Eisenbud-Shamash construction, all in exact rational arithmetic."""

__version__ = "0.1.0"

from .core import Polynomial
from .ideal import IdealError, MonomialIdeal, ResourceError, ideal_from_strings
from .chain import BasedComplex, SparseMatrix, check_d_squared, homology_dims, is_resolution, minimalize, strand
from .resolutions import (
    betti_numbers,
    find_gaps,
    has_minimal_pivot,
    is_pivot_resolution,
    lyubeznik_resolution,
    morse_resolution,
    pivot_complex,
    pivot_rank_formula,
    scarf_number,
    smallest_pivot_indices,
    taylor_resolution,
)
