"""Exact linear algebra over the rationals.

Small dense helpers (rank, null space, affine solve) and :class:`Echelon`, an
incremental sparse triangular basis with optional provenance tracking.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .base import ONE, ZERO


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    return len(_rref(rows, len(rows[0]))[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple]:
    """Basis of {z : rows·z = 0}, one vector per free column."""
    red, pivots = _rref([list(r) for r in rows], ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        z = [ZERO] * ncols
        z[f] = ONE
        for r, p in zip(red, pivots):
            z[p] = -r[f]
        basis.append(tuple(z))
    return basis


def solve_affine(eqs: Sequence[tuple[Sequence[Fraction], Fraction]], ncols: int) -> tuple | None:
    """One solution of Σ a_k z_k = b for every (a, b), or None."""
    aug = [list(a) + [b] for a, b in eqs]
    red, pivots = _rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    z = [ZERO] * ncols
    for r, p in zip(red, pivots):
        z[p] = r[ncols]
    return tuple(z)


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in bt] for row in a]


def identity(n: int) -> list[list[Fraction]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


SparseVec = dict  # column -> Fraction


def small(c):
    """Integral rationals as plain ints: int arithmetic is much faster than Fraction."""
    return int(c) if getattr(c, "denominator", 1) == 1 else c


def sparse_axpy(target: dict, coeff: Fraction, source: dict) -> None:
    """target += coeff * source, dropping zeros."""
    for k, v in source.items():
        nv = target.get(k, 0) + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class Echelon:
    """Triangular basis of a growing span of sparse vectors.

    Row ``k`` has a pivot column where rows ``0..k-1`` vanish, so reducing
    pivots in creation order leaves a remainder that is zero on every pivot
    column.  That remainder is the normal form: linear, idempotent and zero
    exactly on the span.

    Pivot choice: among the surviving columns of a new row, the one whose
    coefficient has the smallest denominator, ties broken by ``order_key``.
    With ``leading=True`` the pivot is the largest column under ``order_key``
    instead, so remainders never contain a column above the input's largest.
    With ``track=True`` every stored row remembers its expansion in terms of
    the tags passed to :meth:`add`.
    """

    def __init__(self, order_key: Callable[[Hashable], object] | None = None, track: bool = False,
                 leading: bool = False):
        self.order_key = order_key if order_key is not None else (lambda c: c)
        self.track = track
        self.leading = leading
        self.rows: list[dict] = []
        self.pivots: list[Hashable] = []
        self.provenance: list[dict] = []
        self.pivot_of: dict[Hashable, int] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def _eliminate(self, vec: dict, prov: dict | None) -> None:
        heap = [self.pivot_of[c] for c in vec if c in self.pivot_of]
        heapq.heapify(heap)
        done = set()
        while heap:
            k = heapq.heappop(heap)
            if k in done:
                continue
            done.add(k)
            col = self.pivots[k]
            c = vec.get(col)
            if not c:
                continue
            row = self.rows[k]
            for key, v in row.items():
                nv = vec.get(key, 0) - c * v
                if nv:
                    if key not in vec:
                        j = self.pivot_of.get(key)
                        if j is not None and j > k:
                            heapq.heappush(heap, j)
                    vec[key] = nv
                else:
                    vec.pop(key, None)
            if prov is not None:
                sparse_axpy(prov, -c, self.provenance[k])

    def reduce(self, vec: dict) -> dict:
        out = {k: small(v) for k, v in vec.items() if v}
        self._eliminate(out, None)
        return out

    def reduce_tracked(self, vec: dict) -> tuple[dict, dict]:
        """Remainder r and combination p with vec = r + Σ p[tag]·(row tagged tag)."""
        out = {k: small(v) for k, v in vec.items() if v}
        prov: dict = {}
        self._eliminate(out, prov)
        return out, {t: -c for t, c in prov.items()}

    def add(self, vec: dict, tag: Hashable | None = None) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        out = {k: small(v) for k, v in vec.items() if v}
        prov = {tag: 1} if (self.track and tag is not None) else ({} if self.track else None)
        self._eliminate(out, prov)
        if not out:
            return False
        if self.leading:
            col = max(out, key=self.order_key)
        else:
            col = min(out, key=lambda k: (out[k].denominator, self.order_key(k)))
        piv = out[col]
        if piv != 1:
            inv = -1 if piv == -1 else ONE / piv
            out = {k: small(v * inv) for k, v in out.items()}
            if prov is not None:
                prov = {k: small(v * inv) for k, v in prov.items()}
        self.pivot_of[col] = len(self.rows)
        self.pivots.append(col)
        self.rows.append(out)
        if prov is not None:
            self.provenance.append(prov)
        return True

    def add_all(self, vecs: Iterable[dict]) -> int:
        return sum(1 for v in vecs if self.add(v))
