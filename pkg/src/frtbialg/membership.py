"""Bounded two-sided ideal membership with re-expandable certificates.

Elements are sparse dicts over monomial keys ``(ctx, word)``; ``ctx`` is a
left coefficient letter (``None`` for a plain free algebra) and ``word`` a
tuple of letters.  An algebra adapter supplies the product.  Rows of the
search space are ``u·g·v`` with ``u = (ctx, prefix)`` and ``v`` a pure word.

The row set grows by support closure: every monomial met so far proposes
the rows in which one of its subwords is a word of some generator.
Optionally, generators containing the empty word may be inserted between
letters (this raises the degree, so it is bounded by ``bound``).
"""
from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Protocol, Sequence

from .base import ONE, ZERO
from .linalg import Echelon

Mono = tuple  # (ctx, word)


class MonomialAlgebra(Protocol):
    def mul(self, x: dict, y: dict) -> dict: ...
    def mono_key(self, mono: Mono): ...


def add_into(acc: dict, x: dict, c=1) -> dict:
    for k, v in x.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def combine(*pairs) -> dict:
    """Σ c·x over (c, x) pairs."""
    acc: dict = {}
    for c, x in pairs:
        add_into(acc, x, c)
    return acc


def degree(x: dict) -> int:
    return max((len(m[1]) for m in x), default=-1)


def mono_order(m: Mono):
    ctx, word = m
    return (len(word), word, () if ctx is None else ctx)


@dataclass
class MembershipCertificate:
    """target = Σ coeff · u·g·v; ``items`` rows are (coeff, ctx, prefix, gen index, suffix).

    ``inconclusive`` marks a failed search at ``bound``; success is sound,
    failure is not a disproof.
    """

    items: list[tuple[Fraction, Hashable, tuple, int, tuple]] = field(default_factory=list)
    bound: int = 0
    inconclusive: bool = False
    rows_used: int = 0

    @property
    def found(self) -> bool:
        return not self.inconclusive

    def verdict(self) -> str:
        return f"inconclusive({self.bound})" if self.inconclusive else "pass"

    def summary(self) -> dict:
        if self.inconclusive:
            return {"bound": self.bound, "rows": self.rows_used}
        return {"bound": self.bound, "terms": len(self.items),
                "generators": sorted({gi for *_, gi, _ in self.items})}


class FreeAlgebra:
    """Plain free algebra adapter (``ctx`` is always ``None``)."""

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for (c1, w1), a in x.items():
            for (c2, w2), b in y.items():
                k = (None, w1 + w2)
                v = out.get(k, 0) + a * b
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out


class IdealSpan:
    """Incremental bounded span of u·g·v rows inside a monomial algebra.

    Not thread-safe by itself; a lock serialises growth so one span can be
    shared by a pool of checkers (reduction results do not depend on the
    interleaving of *reads*, and all growth happens under the lock in the
    caller's deterministic order).
    """

    def __init__(self, algebra, generators: Sequence[dict], bound: int, insertion: bool = False,
                 row_limit: int = 400_000):
        self.algebra = algebra
        self.generators = [dict(g) for g in generators]
        self.bound = bound
        self.insertion = insertion
        self.row_limit = row_limit
        self.gen_degree = [degree(g) for g in self.generators]
        self.word_index: dict[tuple, list[int]] = {}
        self.empty_word_gens: list[int] = []
        for gi, g in enumerate(self.generators):
            words = {m[1] for m in g}
            for w in sorted(words):
                if w:
                    self.word_index.setdefault(w, []).append(gi)
                else:
                    self.empty_word_gens.append(gi)
        self.max_sub = max((len(w) for w in self.word_index), default=0)
        self.echelon = Echelon(order_key=mono_order, track=True, leading=True)
        self.seen: set = set()
        self.row_tags: set = set()
        self.overflow = False
        self.frontier: list = []
        self.pending_insert: list = []
        self.lock = threading.RLock()

    # -- growth -----------------------------------------------------------
    def _row(self, ctx, prefix: tuple, gi: int, suffix: tuple) -> dict:
        alg = self.algebra
        u = {(ctx, prefix): ONE}
        ug = alg.mul(u, self.generators[gi])
        if not suffix:
            return ug
        return {(c, w + suffix): v for (c, w), v in ug.items()}

    def _proposals(self, mono: Mono):
        """Rows in which a subword of ``mono`` is a word of some generator."""
        ctx, word = mono
        n = len(word)
        for i in range(n):
            for j in range(i + 1, min(n, i + self.max_sub) + 1):
                for gi in self.word_index.get(word[i:j], ()):
                    if i + self.gen_degree[gi] + (n - j) <= self.bound:
                        yield (ctx, word[:i], gi, word[j:])

    def _insertions(self, mono: Mono):
        """Rows inserting a generator with an empty-word term between two letters."""
        ctx, word = mono
        n = len(word)
        for gi in self.empty_word_gens:
            if n + self.gen_degree[gi] <= self.bound:
                for i in range(n + 1):
                    yield (ctx, word[:i], gi, word[i:])

    def _add_rows(self, tags) -> bool:
        for tag in tags:
            if tag in self.row_tags:
                continue
            if len(self.row_tags) >= self.row_limit:
                self.overflow = True
                return False
            self.row_tags.add(tag)
            row = self._row(*tag)
            if not row:
                continue
            new = sorted((m for m in row if m not in self.seen), key=mono_order)
            self.seen.update(new)
            self.frontier.extend(new)
            if self.insertion:
                for m in new:
                    heapq.heappush(self.pending_insert, (mono_order(m), m))
            self.echelon.add(row, tag)
        return True

    def seed(self, x: dict, done=None) -> bool:
        """Grow the row set around the monomials of x.

        Subword rows are closed first (they never raise the degree).  Insertion
        rows are then added one monomial at a time, lowest degree first, each
        followed by a new subword closure; ``done`` (optional) is tested in
        between so the search stops as soon as it has succeeded.  Unexpanded
        work is kept for later calls.  Returns False if the row limit was hit.
        """
        with self.lock:
            fresh = sorted((m for m in x if m not in self.seen), key=mono_order)
            self.seen.update(fresh)
            self.frontier.extend(fresh)
            if self.insertion:
                for m in fresh:
                    heapq.heappush(self.pending_insert, (mono_order(m), m))
            while True:
                while self.frontier:
                    layer, self.frontier = self.frontier, []
                    for mono in layer:
                        if not self._add_rows(self._proposals(mono)):
                            return False
                if not self.pending_insert or (done is not None and done()):
                    return True
                _, mono = heapq.heappop(self.pending_insert)
                if not self._add_rows(self._insertions(mono)):
                    return False

    # -- queries ----------------------------------------------------------
    def reduce(self, x: dict) -> dict:
        """Normal form of x relative to the current rows (seed first)."""
        with self.lock:
            return self.echelon.reduce(x)

    def contains(self, x: dict) -> bool:
        if not x:
            return True
        self.seed(x, lambda: not self.echelon.reduce(x))
        return not self.reduce(x)

    def certificate(self, x: dict) -> MembershipCertificate:
        if not x:
            return MembershipCertificate([], self.bound)
        self.seed(x, lambda: not self.echelon.reduce(x))
        with self.lock:
            rem, prov = self.echelon.reduce_tracked(x)
        if rem:
            return MembershipCertificate([], self.bound, inconclusive=True, rows_used=len(self.row_tags))
        items = [(c, ctx, pre, gi, suf) for (ctx, pre, gi, suf), c in prov.items()]
        items.sort(key=lambda t: (t[3], mono_order((t[1], t[2])), t[4]))
        cert = MembershipCertificate(items, self.bound, rows_used=len(self.row_tags))
        assert self.expand(cert) == {k: v for k, v in x.items() if v}, "certificate re-expansion failed"
        return cert

    def expand(self, cert: MembershipCertificate) -> dict:
        acc: dict = {}
        for c, ctx, pre, gi, suf in cert.items:
            add_into(acc, self._row(ctx, pre, gi, suf), c)
        return acc


def membership_bounded(target: dict, generators: Sequence[dict], bound: int, algebra=None,
                       insertion: bool | None = None) -> MembershipCertificate:
    """Search span{u·g·v : total degree ≤ bound} for ``target``.

    Tries without empty-word insertion first, then with it (iterative deepening).
    """
    algebra = algebra or FreeAlgebra()
    if bound < degree(target):
        raise ValueError("bound is below the target degree")
    modes = [False, True] if insertion is None else [insertion]
    cert = MembershipCertificate([], bound, inconclusive=True)
    for mode in modes:
        span = IdealSpan(algebra, generators, bound, insertion=mode)
        cert = span.certificate(target)
        if cert.found:
            return cert
    return cert


def from_ncpoly(p) -> dict:
    """NCPoly → free-algebra element dict."""
    return {(None, w): c for w, c in p.terms.items()}
