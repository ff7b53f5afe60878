"""Finite quivers over Λ, fiber products Q^(m) and the quiver induced by (Λ, X, deg)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .base import DegreeMap

DEFAULT_MAX_LENGTH = 4


class Path(NamedTuple):
    """A composable arrow sequence starting at ``source`` (a vertex index).

    Length-0 paths are bare vertices: ``Path(λ, ())``.
    """

    source: int
    arrows: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrow_ids: tuple[str, ...]
    sources: tuple[int, ...]
    targets: tuple[int, ...]
    max_length: int = DEFAULT_MAX_LENGTH
    _out: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nv = len(self.vertices)
        if not (len(self.arrow_ids) == len(self.sources) == len(self.targets)):
            raise ValueError("arrow data lengths differ")
        for a, s, t in zip(self.arrow_ids, self.sources, self.targets):
            if not (0 <= s < nv and 0 <= t < nv):
                raise ValueError(f"arrow {a!r} has an endpoint outside the vertex set")
        out = [[] for _ in range(nv)]
        # arrows leaving each vertex, in arrow-id order
        for a in sorted(range(len(self.arrow_ids)), key=lambda k: self.arrow_ids[k]):
            out[self.sources[a]].append(a)
        object.__setattr__(self, "_out", tuple(tuple(o) for o in out))

    @classmethod
    def from_labels(cls, vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]]) -> "Quiver":
        index = {v: i for i, v in enumerate(vertices)}
        ids, src, tgt = [], [], []
        for aid, s, t in arrows:
            if s not in index or t not in index:
                raise ValueError(f"arrow {aid!r} has an endpoint outside the vertex set")
            ids.append(aid)
            src.append(index[s])
            tgt.append(index[t])
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate arrow id")
        return cls(tuple(vertices), tuple(ids), tuple(src), tuple(tgt))

    def target(self, p: Path) -> int:
        return self.targets[p.arrows[-1]] if p.arrows else p.source

    def concat(self, p: Path, q: Path) -> Path | None:
        if self.target(p) != q.source:
            return None
        return Path(p.source, p.arrows + q.arrows)

    def is_path(self, p: Path) -> bool:
        v = p.source
        for a in p.arrows:
            if self.sources[a] != v:
                return False
            v = self.targets[a]
        return True

    def paths(self, m: int) -> list[Path]:
        """Q^(m) in lexicographic order of arrow ids (vertex order for m = 0)."""
        if m < 0:
            raise ValueError("path length must be non-negative")
        if m > self.max_length:
            raise ValueError(f"path length {m} exceeds the configured cap {self.max_length}")
        if m == 0:
            return [Path(v, ()) for v in range(len(self.vertices))]
        first = sorted(range(len(self.arrow_ids)), key=lambda k: self.arrow_ids[k])
        out = [Path(self.sources[a], (a,)) for a in first]
        for _ in range(m - 1):
            out = [Path(p.source, p.arrows + (b,)) for p in out for b in self._out[self.target(p)]]
        return out

    def label(self, p: Path) -> str:
        if not p.arrows:
            return self.vertices[p.source]
        return "/".join(self.arrow_ids[a] for a in p.arrows)


def fiber_product(q: Quiver, m: int) -> list[Path]:
    return q.paths(m)


def build_sigma_quiver(deg: DegreeMap) -> Quiver:
    """Arrows (λ, x) from λ to λ·deg(x); arrow index λ·|X| + x, id "λ,x"."""
    nx = len(deg.xs)
    ids, src, tgt = [], [], []
    for lam, lname in enumerate(deg.lambdas):
        for x, xname in enumerate(deg.xs):
            ids.append(f"{lname},{xname}")
            src.append(lam)
            tgt.append(deg.act(lam, x))
    quiver = Quiver(deg.lambdas, tuple(ids), tuple(src), tuple(tgt))
    # keep arrow ordering aligned with (λ, x) index order
    order = sorted(range(len(ids)), key=lambda k: ids[k])
    if order != list(range(len(ids))):
        quiver = _reindexed(quiver, nx)
    return quiver


def _reindexed(q: Quiver, nx: int) -> Quiver:
    # Label strings may sort differently from (λ, x) index order; pad ids so
    # lexicographic order and index order coincide.
    width = len(str(len(q.arrow_ids)))
    ids = tuple(f"{k:0{width}d}:{a}" for k, a in enumerate(q.arrow_ids))
    return Quiver(q.vertices, ids, q.sources, q.targets, q.max_length)


def sigma_arrow(deg: DegreeMap, lam: int, x: int) -> int:
    return lam * len(deg.xs) + x
