"""Exact arithmetic: multidegrees (exponent vectors) and sparse polynomials over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Multidegree = Tuple[int, ...]
Scalar = Union[int, Fraction]


class DimensionError(ValueError):
    """Two multidegrees of different lengths were combined."""


class NotDivisibleError(ArithmeticError):
    pass


def _check_lengths(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionError(f"multidegree lengths differ: {len(a)} vs {len(b)}")


def lcm_multidegree(a: Multidegree, b: Multidegree) -> Multidegree:
    _check_lengths(a, b)
    return tuple(x if x >= y else y for x, y in zip(a, b))


def divides(a: Multidegree, b: Multidegree) -> bool:
    """True iff the monomial with exponents ``a`` divides the one with exponents ``b``."""
    _check_lengths(a, b)
    return all(x <= y for x, y in zip(a, b))


def monomial_quotient(num: Multidegree, den: Multidegree) -> Multidegree:
    _check_lengths(num, den)
    out = tuple(x - y for x, y in zip(num, den))
    if any(e < 0 for e in out):
        raise NotDivisibleError(f"{den} does not divide {num}")
    return out


def add_degrees(a: Multidegree, b: Multidegree) -> Multidegree:
    _check_lengths(a, b)
    return tuple(x + y for x, y in zip(a, b))


def lcm_of(degrees: Iterable[Multidegree], nvars: int) -> Multidegree:
    out = (0,) * nvars
    for d in degrees:
        out = lcm_multidegree(out, d)
    return out


class Polynomial:
    """Sparse polynomial with rational coefficients, keyed by exponent vector.

    Instances are treated as immutable; arithmetic always returns new objects.
    Zero coefficients are never stored, so the zero polynomial has no terms.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Multidegree, Scalar] | None = None):
        clean: Dict[Multidegree, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    clean[tuple(exps)] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Multidegree, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exps: Multidegree, coeff: Scalar = 1) -> "Polynomial":
        if not coeff:
            return cls._raw({})
        return cls._raw({tuple(exps): Fraction(coeff)})

    @classmethod
    def constant(cls, c: Scalar, nvars: int) -> "Polynomial":
        return cls.monomial((0,) * nvars, c)

    # -- inspection ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        """Nonzero scalar (a unit of the polynomial ring)."""
        if len(self.terms) != 1:
            return False
        (exps,) = self.terms
        return not any(exps)

    def is_monomial_term(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a nonzero constant")
        return next(iter(self.terms.values()))

    def coefficient(self, exps: Multidegree) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def sorted_terms(self) -> list:
        """Terms in lexicographic order on exponent vectors (the serialization order)."""
        return sorted(self.terms.items())

    def __iter__(self) -> Iterator:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(out)

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial._raw({})
            return Polynomial._raw({e: c * other for e, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, exps: Multidegree) -> "Polynomial":
        """Multiply by the monomial with exponent vector ``exps``."""
        return Polynomial._raw({add_degrees(e, exps): c for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not other:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"Polynomial({dict(self.sorted_terms())!r})"

    def format(self, names: Sequence[str]) -> str:
        """Human-readable string such as ``x^2 - 3/2*y``; terms in descending lex order."""
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if not p.terms or not q.terms:
        return Polynomial._raw({})
    out: Dict[Multidegree, Fraction] = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return Polynomial._raw(out)


ZERO = Polynomial()
