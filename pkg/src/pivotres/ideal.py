from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

from .core import Multidegree, divides, lcm_of, lcm_multidegree
from .indexsets import IndexSet

DEFAULT_MAX_GENERATORS = 20


class IdealError(ValueError):
    pass


class ResourceError(RuntimeError):
    """A configured size cap (cells, gradient paths) would be exceeded."""


def max_generators() -> int:
    return int(os.environ.get("PIVOTRES_MAX_GENERATORS", DEFAULT_MAX_GENERATORS))


@dataclass(frozen=True)
class MonomialIdeal:
    """Minimally generated monomial ideal (m_1, ..., m_q); generator order is significant."""

    variables: Tuple[str, ...]
    generators: Tuple[Multidegree, ...]
    _lcm_cache: Dict[IndexSet, Multidegree] = field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "generators", tuple(tuple(g) for g in self.generators))
        n = len(self.variables)
        if not self.generators:
            raise IdealError("an ideal needs at least one generator")
        for g in self.generators:
            if len(g) != n:
                raise IdealError(f"generator {g} has {len(g)} exponents, expected {n}")
            if any(e < 0 for e in g):
                raise IdealError(f"negative exponent in {g}")
            if not any(g):
                raise IdealError("the unit ideal is not supported")
        for i, gi in enumerate(self.generators):
            for j, gj in enumerate(self.generators):
                if i != j and divides(gi, gj):
                    raise IdealError(
                        f"generators are not minimal: {self.format_monomial(gi)} "
                        f"divides {self.format_monomial(gj)} (m{i + 1} | m{j + 1})"
                    )

    @property
    def q(self) -> int:
        return len(self.generators)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def gen(self, i: int) -> Multidegree:
        """The 1-based generator m_i."""
        return self.generators[i - 1]

    def lcm(self, cell: IndexSet) -> Multidegree:
        """Exponent vector of m_A = lcm(m_i : i in A); m_emptyset = 1."""
        got = self._lcm_cache.get(cell)
        if got is None:
            if len(cell) <= 1:
                got = self.gen(cell[0]) if cell else (0,) * self.nvars
            else:
                got = lcm_multidegree(self.lcm(cell[:-1]), self.gen(cell[-1]))
            self._lcm_cache[cell] = got
        return got

    def relabeled(self, perm: Dict[int, int]) -> "MonomialIdeal":
        """Ideal whose generator perm[i] is the old m_i."""
        gens = [None] * self.q
        for old, new in perm.items():
            gens[new - 1] = self.gen(old)
        return MonomialIdeal(self.variables, tuple(gens))

    def format_monomial(self, exps: Multidegree) -> str:
        names = self.variables
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
        return "*".join(parts) if parts else "1"

    def __str__(self):
        return "(" + ", ".join(self.format_monomial(g) for g in self.generators) + ")"


def ideal_from_strings(variables: Sequence[str], gens: Sequence[str]) -> MonomialIdeal:
    """Convenience constructor: ``ideal_from_strings("wxyz", ["w*x", "x*y"])``."""
    from .io import parse_monomial

    variables = tuple(variables)
    return MonomialIdeal(variables, tuple(parse_monomial(g, variables) for g in gens))


def lcm_all(ideal: MonomialIdeal) -> Multidegree:
    return lcm_of(ideal.generators, ideal.nvars)
