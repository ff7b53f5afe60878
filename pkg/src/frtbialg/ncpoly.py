"""Noncommutative polynomials: finite linear combinations of words."""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .base import ZERO, format_rational, parse_rational

Word = tuple


class NCPoly:
    """Element of a free algebra 𝕂⟨alphabet⟩.

    ``terms`` maps words (tuples of hashable letters) to nonzero rationals.
    ``alphabet`` is an optional tag; arithmetic refuses to mix tags.
    """

    __slots__ = ("terms", "alphabet")

    def __init__(self, terms: Mapping[Word, Fraction | int | str] | None = None, alphabet: Hashable = None):
        clean = {}
        for w, c in (terms or {}).items():
            c = parse_rational(c) if not isinstance(c, Fraction) else c
            if c:
                clean[tuple(w)] = clean.get(tuple(w), ZERO) + c
        self.terms = {w: c for w, c in clean.items() if c}
        self.alphabet = alphabet

    @classmethod
    def one(cls, alphabet: Hashable = None) -> "NCPoly":
        return cls({(): 1}, alphabet)

    @classmethod
    def letter(cls, a: Hashable, alphabet: Hashable = None) -> "NCPoly":
        return cls({(a,): 1}, alphabet)

    def _check(self, other: "NCPoly") -> Hashable:
        if self.alphabet is not None and other.alphabet is not None and self.alphabet != other.alphabet:
            raise ValueError(f"alphabet mismatch: {self.alphabet!r} vs {other.alphabet!r}")
        return self.alphabet if self.alphabet is not None else other.alphabet

    def __add__(self, other: "NCPoly") -> "NCPoly":
        return nc_add(self, other)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return nc_add(self, other.scale(-1))

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        return nc_mul(self, other)

    def scale(self, c) -> "NCPoly":
        c = Fraction(c)
        return NCPoly({w: c * v for w, v in self.terms.items()}, self.alphabet)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), repr(t[0])))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            word = "·".join(str(a) for a in w) if w else "1"
            parts.append(f"{format_rational(c)}*{word}")
        return " + ".join(parts)


def nc_add(a: NCPoly, b: NCPoly) -> NCPoly:
    tag = a._check(b)
    out = dict(a.terms)
    for w, c in b.terms.items():
        v = out.get(w, ZERO) + c
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return NCPoly(out, tag)


def nc_mul(a: NCPoly, b: NCPoly) -> NCPoly:
    tag = a._check(b)
    out: dict = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            w = w1 + w2
            v = out.get(w, ZERO) + c1 * c2
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return NCPoly(out, tag)


def nc_sum(polys: Iterable[NCPoly], alphabet: Hashable = None) -> NCPoly:
    acc = NCPoly({}, alphabet)
    for p in polys:
        acc = nc_add(acc, p)
    return acc
