"""Exact scalars, finite-dimensional algebras, the base algebra M_Λ(R) and Frobenius systems."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

# Single scalar type for the whole package.  Swap here if a faster exact
# rational type is ever needed.
Scalar = Fraction
ZERO = Scalar(0)
ONE = Scalar(1)

Vec = tuple  # coordinate vector of Scalars


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse "p/q", "p" or an int into an exact rational; reject zero denominators."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, int):
        return Scalar(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {type(text).__name__}")
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            n, d = int(num), int(den)
        except ValueError:
            raise ValueError(f"malformed rational {text!r}") from None
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Scalar(n, d)
    try:
        return Scalar(int(s))
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def vec_is_zero(u: Vec) -> bool:
    return not any(u)


@dataclass(frozen=True)
class AlgebraSpec:
    """A unital algebra over the rationals with basis e_0..e_{n-1}.

    ``table[i][j]`` lists the nonzero ``(k, c)`` with e_i e_j = Σ c e_k.
    """

    dimension: int
    table: tuple
    unit: Vec
    name: str = ""

    @classmethod
    def from_triples(cls, dimension: int, triples: Iterable[tuple], unit: Sequence | None = None,
                     name: str = "") -> "AlgebraSpec":
        if dimension <= 0:
            raise ValueError("algebra dimension must be positive")
        acc: dict[tuple[int, int], dict[int, Fraction]] = {}
        for i, j, k, c in triples:
            for idx in (i, j, k):
                if not 0 <= idx < dimension:
                    raise ValueError(f"structure index {idx} out of range")
            c = parse_rational(c)
            slot = acc.setdefault((i, j), {})
            slot[k] = slot.get(k, ZERO) + c
        table = tuple(
            tuple(tuple(sorted((k, c) for k, c in acc.get((i, j), {}).items() if c))
                  for j in range(dimension))
            for i in range(dimension))
        alg = cls(dimension, table, (ZERO,) * dimension, name)
        if unit is None:
            found = alg._solve_unit()
            if found is None:
                raise ValueError("algebra has no two-sided unit")
            unit_vec = found
        else:
            if len(unit) != dimension:
                raise ValueError("unit has the wrong length")
            unit_vec = tuple(parse_rational(u) for u in unit)
        return cls(dimension, table, unit_vec, name)

    def _solve_unit(self) -> Vec | None:
        from .linalg import solve_affine

        n = self.dimension
        rows = []
        # Σ_k u_k (e_k e_i) = e_i and Σ_k u_k (e_i e_k) = e_i for all i
        for i in range(n):
            for side in (0, 1):
                coeffs = [[ZERO] * n for _ in range(n)]
                for k in range(n):
                    terms = self.table[k][i] if side == 0 else self.table[i][k]
                    for m, c in terms:
                        coeffs[m][k] += c
                for m in range(n):
                    rows.append((coeffs[m], ONE if m == i else ZERO))
        return solve_affine(rows, n)

    @property
    def structure_constants(self) -> list[list[list[Fraction]]]:
        """Dense c[i][j][k] view."""
        n = self.dimension
        out = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                for k, c in self.table[i][j]:
                    out[i][j][k] = c
        return out

    def basis(self, i: int) -> Vec:
        return tuple(ONE if k == i else ZERO for k in range(self.dimension))

    def zero(self) -> Vec:
        return (ZERO,) * self.dimension

    def mul(self, u: Vec, v: Vec) -> Vec:
        out = [ZERO] * self.dimension
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j]:
                    out[k] += ab * c
        return tuple(out)

    def violations(self) -> list[str]:
        """Associativity and unit failures, as readable strings."""
        n = self.dimension
        bad = []
        for i in range(n):
            ei = self.basis(i)
            if self.mul(self.unit, ei) != ei or self.mul(ei, self.unit) != ei:
                bad.append(f"unit fails on e{i}")
        for i in range(n):
            for j in range(n):
                eij = self.mul(self.basis(i), self.basis(j))
                for k in range(n):
                    ek = self.basis(k)
                    if self.mul(eij, ek) != self.mul(self.basis(i), self.mul(self.basis(j), ek)):
                        bad.append(f"associativity fails on (e{i},e{j},e{k})")
        return bad

    def is_commutative(self) -> bool:
        n = self.dimension
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(n))


def rationals() -> AlgebraSpec:
    return AlgebraSpec.from_triples(1, [(0, 0, 0, 1)], [1], name="Q")


def matrix_algebra(n: int) -> AlgebraSpec:
    """M_n(Q) with basis E_ij at index i*n + j."""
    triples = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                triples.append((i * n + j, j * n + k, i * n + k, 1))
    unit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    return AlgebraSpec.from_triples(n * n, triples, unit, name=f"M{n}")


def cyclic_group_algebra(n: int) -> AlgebraSpec:
    """Q[Z/n] with basis g^0..g^{n-1}."""
    triples = [(i, j, (i + j) % n, 1) for i in range(n) for j in range(n)]
    return AlgebraSpec.from_triples(n, triples, [1] + [0] * (n - 1), name=f"QZ{n}")


def center_basis(alg: AlgebraSpec) -> list[Vec]:
    """Basis of Z(R): null space of z ↦ (z e_i − e_i z)_i."""
    from .linalg import nullspace

    n = alg.dimension
    rows = []
    for i in range(n):
        # coefficient of e_m in z e_i − e_i z, as a linear form in z
        forms = [[ZERO] * n for _ in range(n)]
        for k in range(n):
            for m, c in alg.table[k][i]:
                forms[m][k] += c
            for m, c in alg.table[i][k]:
                forms[m][k] -= c
        rows.extend(forms)
    return nullspace(rows, n)


def in_span(vectors: Sequence[Vec], v: Vec) -> bool:
    from .linalg import rank

    if vec_is_zero(v):
        return True
    return rank(list(vectors) + [v]) == rank(list(vectors))


@dataclass(frozen=True)
class DegreeMap:
    """deg: X → Perm(Λ); ``perms[x][λ]`` is the index of λ·deg(x)."""

    lambdas: tuple[str, ...]
    xs: tuple[str, ...]
    perms: tuple[tuple[int, ...], ...]
    inverses: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.lambdas)
        if len(self.perms) != len(self.xs):
            raise ValueError("one permutation per X-label is required")
        invs = []
        for x, p in zip(self.xs, self.perms):
            if sorted(p) != list(range(n)):
                raise ValueError(f"deg({x}) is not a bijection of Λ")
            inv = [0] * n
            for lam, img in enumerate(p):
                inv[img] = lam
            invs.append(tuple(inv))
        object.__setattr__(self, "inverses", tuple(invs))

    @classmethod
    def from_labels(cls, lambdas: Sequence[str], xs: Sequence[str],
                    images: dict[str, Sequence[str]]) -> "DegreeMap":
        lam_index = {l: i for i, l in enumerate(lambdas)}
        perms = []
        for x in xs:
            if x not in images:
                raise ValueError(f"missing deg entry for {x!r}")
            try:
                perms.append(tuple(lam_index[l] for l in images[x]))
            except KeyError as exc:
                raise ValueError(f"deg({x}) mentions unknown Λ-label {exc.args[0]!r}") from None
            if len(perms[-1]) != len(lambdas):
                raise ValueError(f"deg({x}) has the wrong length")
        return cls(tuple(lambdas), tuple(xs), tuple(perms))

    def act(self, lam: int, x: int) -> int:
        """λ·deg(x)."""
        return self.perms[x][lam]

    def act_inv(self, lam: int, x: int) -> int:
        """λ·deg(x)⁻¹."""
        return self.inverses[x][lam]

    def x_index(self, label: str) -> int:
        try:
            return self.xs.index(label)
        except ValueError:
            raise KeyError(f"unknown X-label {label!r}") from None


@dataclass(frozen=True)
class BaseMap:
    """An element of M_Λ(R): one R-coordinate vector per Λ-label, in Λ order."""

    values: tuple[Vec, ...]

    @classmethod
    def from_dict(cls, lambdas: Sequence[str], alg: AlgebraSpec, values: dict[str, Vec]) -> "BaseMap":
        extra = set(values) - set(lambdas)
        if extra:
            raise ValueError(f"unknown Λ-labels {sorted(extra)}")
        return cls(tuple(tuple(values.get(l, alg.zero())) for l in lambdas))

    @classmethod
    def delta(cls, nlam: int, lam: int, alg: AlgebraSpec, r: Vec | None = None) -> "BaseMap":
        r = alg.unit if r is None else r
        return cls(tuple(r if k == lam else alg.zero() for k in range(nlam)))

    @classmethod
    def constant(cls, nlam: int, r: Vec) -> "BaseMap":
        return cls((r,) * nlam)

    def mul(self, other: "BaseMap", alg: AlgebraSpec) -> "BaseMap":
        return BaseMap(tuple(alg.mul(a, b) for a, b in zip(self.values, other.values)))

    def add(self, other: "BaseMap") -> "BaseMap":
        return BaseMap(tuple(vec_add(a, b) for a, b in zip(self.values, other.values)))

    def is_zero(self) -> bool:
        return all(vec_is_zero(v) for v in self.values)

    def flat(self) -> Vec:
        """Coordinates in the basis δ_λ e_i, index λ·n + i."""
        return tuple(c for v in self.values for c in v)


def shift(deg: DegreeMap, x: str | int, f: BaseMap) -> BaseMap:
    """T_{deg(x)}: f ↦ (λ ↦ f(λ·deg(x)))."""
    xi = deg.x_index(x) if isinstance(x, str) else x
    if not 0 <= xi < len(deg.xs):
        raise KeyError(f"unknown X-label index {x!r}")
    return BaseMap(tuple(f.values[deg.act(lam, xi)] for lam in range(len(deg.lambdas))))


def shift_inverse(deg: DegreeMap, x: str | int, f: BaseMap) -> BaseMap:
    xi = deg.x_index(x) if isinstance(x, str) else x
    return BaseMap(tuple(f.values[deg.act_inv(lam, xi)] for lam in range(len(deg.lambdas))))


def base_algebra(alg: AlgebraSpec, nlam: int) -> AlgebraSpec:
    """M_Λ(R) as an algebra in its own right, basis δ_λ e_i at index λ·n + i."""
    n = alg.dimension
    triples = []
    for lam in range(nlam):
        for i in range(n):
            for j in range(n):
                for k, c in alg.table[i][j]:
                    triples.append((lam * n + i, lam * n + j, lam * n + k, c))
    unit = [c for _ in range(nlam) for c in alg.unit]
    return AlgebraSpec.from_triples(n * nlam, triples, unit, name=f"M_{nlam}({alg.name})")


@dataclass(frozen=True)
class FrobeniusSystem:
    """ψ as a coordinate vector and the casimir as (left, right) coordinate pairs."""

    psi: Vec
    casimir: tuple[tuple[Vec, Vec], ...]
    derived: bool = False

    def apply_psi(self, v: Vec) -> Fraction:
        return sum((a * b for a, b in zip(self.psi, v)), ZERO)


def verify_frobenius(alg: AlgebraSpec, sys: FrobeniusSystem) -> list[str]:
    """Return the failed identities; an empty list means the system is valid."""
    n = alg.dimension
    if len(sys.psi) != n or any(len(l) != n or len(r) != n for l, r in sys.casimir):
        raise ValueError("Frobenius data does not match the algebra dimension")
    failures = []
    total = alg.zero()
    for l, r in sys.casimir:
        total = vec_add(total, alg.mul(l, r))
    if total != alg.unit:
        failures.append("casimir product e1 e2 is not the unit")
    for i in range(n):
        b = alg.basis(i)
        left = alg.zero()
        right = alg.zero()
        for l, r in sys.casimir:
            left = vec_add(left, vec_scale(sys.apply_psi(alg.mul(b, l)), r))
            right = vec_add(right, vec_scale(sys.apply_psi(alg.mul(r, b)), l))
        if left != b:
            failures.append(f"psi(l e1) e2 = l fails at basis index {i}")
        if right != b:
            failures.append(f"e1 psi(e2 l) = l fails at basis index {i}")
    return failures


def lift_frobenius(sys: FrobeniusSystem, alg: AlgebraSpec, nlam: int) -> FrobeniusSystem:
    """ψ′(f) = Σ_λ ψ(f(λ)), casimir Σ_λ (e1 δ_λ)⊗(e2 δ_λ), in base_algebra coordinates."""
    n = alg.dimension
    psi = tuple(c for _ in range(nlam) for c in sys.psi)
    cas = []
    for lam in range(nlam):
        for l, r in sys.casimir:
            pad = lambda v: tuple(v[k % n] if k // n == lam else ZERO for k in range(n * nlam))
            cas.append((pad(l), pad(r)))
    return FrobeniusSystem(psi, tuple(cas), derived=True)


def standard_frobenius(alg: AlgebraSpec) -> FrobeniusSystem | None:
    """Known systems for the stock algebras (Q, M_n, Q[Z/n]); None otherwise."""
    name = alg.name
    if name == "Q":
        return FrobeniusSystem((ONE,), (((ONE,), (ONE,)),))
    if name.startswith("M") and name[1:].isdigit():
        m = int(name[1:])
        # ψ = m·trace, casimir (1/m) Σ E_ij ⊗ E_ji
        psi = tuple(Scalar(m) if i == j else ZERO for i in range(m) for j in range(m))
        cas = []
        for i in range(m):
            for j in range(m):
                cas.append((vec_scale(Scalar(1, m), alg.basis(i * m + j)), alg.basis(j * m + i)))
        return FrobeniusSystem(psi, tuple(cas))
    if name.startswith("QZ") and name[2:].isdigit():
        m = int(name[2:])
        # ψ(g^k) = m δ_k0, casimir (1/m) Σ g^k ⊗ g^{-k}
        psi = (Scalar(m),) + (ZERO,) * (m - 1)
        cas = tuple((vec_scale(Scalar(1, m), alg.basis(k)), alg.basis((-k) % m)) for k in range(m))
        return FrobeniusSystem(psi, cas)
    return None
