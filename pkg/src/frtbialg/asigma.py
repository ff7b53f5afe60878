"""The left bialgebroid A_σ.

Elements of the free algebra on ΛX are kept left-collected: every monomial
is ``(ctx, word)`` with ``ctx = (λ, i, μ, j)`` the basis letter
(δ_λ e_i)⊗(δ_μ e_j) of M_Λ(R)⊗M_Λ(R)^op and ``word`` a tuple of L-letters.
Letter codes: L_ab is ``a*|X| + b``, (L⁻¹)_ab is ``|X|² + a*|X| + b``.

Collection applies generator families (1), (3) and (5) exactly, so only
families (2) and (4) remain as ideal generators for membership search.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import wraps
from typing import Iterable, Sequence

from .base import (ONE, ZERO, AlgebraSpec, BaseMap, DegreeMap, FrobeniusSystem, Vec,
                   center_basis, in_span, vec_is_zero)
from .linalg import identity, mat_mul, small
from .membership import IdealSpan, MembershipCertificate, add_into, degree
from .ncpoly import NCPoly


def _memo(fn):
    """Per-instance memo (an lru_cache on a method would keep every instance alive)."""
    slot = "_memo_" + fn.__name__

    @wraps(fn)
    def wrapper(self, *args):
        cache = self.__dict__.setdefault(slot, {})
        try:
            return cache[args]
        except KeyError:
            value = cache[args] = fn(self, *args)
            return value
    return wrapper


class SigmaFamily:
    """σ^{ab}_{cd} ∈ M_Λ(R) for (a,b,c,d) ∈ X⁴; absent keys are zero."""

    def __init__(self, deg: DegreeMap, alg: AlgebraSpec, entries: dict[tuple[int, int, int, int], BaseMap]):
        self.deg = deg
        self.alg = alg
        nx, nlam = len(deg.xs), len(deg.lambdas)
        self.entries = {}
        for key, f in entries.items():
            if len(key) != 4 or not all(0 <= k < nx for k in key):
                raise ValueError(f"σ key {key} is not in X⁴")
            if len(f.values) != nlam:
                raise ValueError(f"σ{key} does not have one value per Λ-label")
            if not f.is_zero():
                self.entries[tuple(key)] = f

    def value(self, a: int, b: int, c: int, d: int, lam: int) -> Vec:
        f = self.entries.get((a, b, c, d))
        return self.alg.zero() if f is None else f.values[lam]

    def with_entry(self, a: int, b: int, c: int, d: int, lam: int, r: Vec) -> "SigmaFamily":
        entries = dict(self.entries)
        nlam = len(self.deg.lambdas)
        old = entries.get((a, b, c, d), BaseMap(tuple(self.alg.zero() for _ in range(nlam))))
        vals = list(old.values)
        vals[lam] = tuple(r)
        entries[(a, b, c, d)] = BaseMap(tuple(vals))
        return SigmaFamily(self.deg, self.alg, entries)

    def is_scalar(self) -> bool:
        """True when every value is a rational multiple of 1_R."""
        u = self.alg.unit
        k = next(i for i, c in enumerate(u) if c)
        for f in self.entries.values():
            for v in f.values:
                if v != tuple(v[k] / u[k] * c for c in u):
                    return False
        return True


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    detail: str


def check_sigma_conditions(s: SigmaFamily, alg: AlgebraSpec | None = None) -> list[Violation]:
    """Centrality of every σ value and the degree-compatibility vanishing rule."""
    alg = alg or s.alg
    deg = s.deg
    zbasis = center_basis(alg)
    out = []
    for (a, b, c, d), f in sorted(s.entries.items()):
        for lam, v in enumerate(f.values):
            if not vec_is_zero(v) and not in_span(zbasis, v):
                out.append(Violation("noncentral", (a, b, c, d, lam),
                                     f"σ^{{{deg.xs[a]}{deg.xs[b]}}}_{{{deg.xs[c]}{deg.xs[d]}}}"
                                     f"({deg.lambdas[lam]}) is not central"))
    nx, nlam = len(deg.xs), len(deg.lambdas)
    for a in range(nx):
        for b in range(nx):
            for c in range(nx):
                for d in range(nx):
                    for lam in range(nlam):
                        lhs = deg.act(deg.act(lam, d), b)
                        rhs = deg.act(deg.act(lam, c), a)
                        if lhs != rhs and not vec_is_zero(s.value(b, d, a, c, lam)):
                            out.append(Violation(
                                "degree", (b, d, a, c, lam),
                                f"σ^{{{deg.xs[b]}{deg.xs[d]}}}_{{{deg.xs[a]}{deg.xs[c]}}}"
                                f"({deg.lambdas[lam]}) must vanish: "
                                f"{deg.lambdas[lam]}·deg({deg.xs[d]})·deg({deg.xs[b]}) = {deg.lambdas[lhs]} ≠ "
                                f"{deg.lambdas[rhs]} = {deg.lambdas[lam]}·deg({deg.xs[c]})·deg({deg.xs[a]})"))
    return out


class ASigma:
    """Left-collected model of 𝕂⟨ΛX⟩ modulo families (1), (3), (5)."""

    def __init__(self, sigma: SigmaFamily, witnesses: dict | None = None):
        self.sigma = sigma
        self.deg = sigma.deg
        self.alg = sigma.alg
        self.n = self.alg.dimension
        self.nlam = len(self.deg.lambdas)
        self.nx = len(self.deg.xs)
        self.unit_coords = [(i, small(c)) for i, c in enumerate(self.alg.unit) if c]
        self._fuse = self._fusion_table()
        self._spans: dict[tuple, IdealSpan] = {}
        self._lock = threading.Lock()
        self._mono_mul_cache: dict = {}
        self.witness_x = None
        self.witness_y = None
        if witnesses is not None:
            self.set_witnesses(*witnesses)

    # -- letters ----------------------------------------------------------
    def L(self, a: int, b: int) -> int:
        return a * self.nx + b

    def Li(self, a: int, b: int) -> int:
        return self.nx * self.nx + a * self.nx + b

    def letter_info(self, code: int) -> tuple[bool, int, int]:
        """(is_inverse, a, b)."""
        inv, rest = divmod(code, self.nx * self.nx)
        a, b = divmod(rest, self.nx)
        return bool(inv), a, b

    def letter_name(self, code: int) -> str:
        inv, a, b = self.letter_info(code)
        xs = self.deg.xs
        return f"{'Li' if inv else 'L'}[{xs[a]},{xs[b]}]"

    def ctx_name(self, ctx) -> str:
        lam, i, mu, j = ctx
        ls = self.deg.lambdas
        return f"B[{ls[lam]}.{i},{ls[mu]}.{j}]"

    def mono_name(self, m) -> str:
        ctx, w = m
        return "·".join([self.ctx_name(ctx)] + [self.letter_name(c) for c in w])

    # -- products ---------------------------------------------------------
    def _fusion_table(self):
        # (i, j, i', j') -> [((k, l), c)] for (e_i⊗e_j)(e_i'⊗e_j') = e_i e_i' ⊗ e_j' e_j
        t = self.alg.table
        n = self.n
        out = {}
        for i in range(n):
            for j in range(n):
                for i2 in range(n):
                    for j2 in range(n):
                        acc = {}
                        for k, c1 in t[i][i2]:
                            for l, c2 in t[j2][j]:
                                acc[(k, l)] = acc.get((k, l), ZERO) + c1 * c2
                        out[(i, j, i2, j2)] = [(kl, small(c)) for kl, c in sorted(acc.items()) if c]
        return out

    @_memo
    def push(self, word: tuple, lam: int, mu: int) -> tuple[int, int]:
        """(λ′, μ′) with word·B(λ,·,μ,·) = B(λ′,·,μ′,·)·word."""
        deg = self.deg
        for code in reversed(word):
            inv, a, b = self.letter_info(code)
            if inv:
                lam, mu = deg.act(lam, b), deg.act(mu, a)
            else:
                lam, mu = deg.act_inv(lam, a), deg.act_inv(mu, b)
        return lam, mu

    @_memo
    def end_vertex(self, lam: int, mu: int, word: tuple) -> tuple[int, int]:
        """Vertex reached from (λ, μ) along word: B(λ,μ)·word = word·B(end)."""
        deg = self.deg
        for code in word:
            inv, a, b = self.letter_info(code)
            if inv:
                lam, mu = deg.act_inv(lam, b), deg.act_inv(mu, a)
            else:
                lam, mu = deg.act(lam, a), deg.act(mu, b)
        return lam, mu

    def mono_mul(self, m1, m2) -> list:
        key = (m1, m2)
        hit = self._mono_mul_cache.get(key)
        if hit is not None:
            return hit
        (c1, w1), (c2, w2) = m1, m2
        lam2, mu2 = self.push(w1, c2[0], c2[2])
        res = []
        if lam2 == c1[0] and mu2 == c1[2]:
            w = w1 + w2
            for (k, l), c in self._fuse[(c1[1], c1[3], c2[1], c2[3])]:
                res.append((((c1[0], k, c1[2], l), w), c))
        self._mono_mul_cache[key] = res
        return res

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for m1, a in x.items():
            for m2, b in y.items():
                for m, c in self.mono_mul(m1, m2):
                    v = out.get(m, 0) + a * b * c
                    if v:
                        out[m] = v
                    else:
                        out.pop(m, None)
        return out

    def mul_all(self, *xs: dict) -> dict:
        acc = xs[0]
        for x in xs[1:]:
            acc = self.mul(acc, x)
        return acc

    def one(self) -> dict:
        return self.base_elem(BaseMap.constant(self.nlam, self.alg.unit),
                              BaseMap.constant(self.nlam, self.alg.unit))

    def base_elem(self, f: BaseMap, g: BaseMap) -> dict:
        """f⊗g as a collected element."""
        out = {}
        for lam, fv in enumerate(f.values):
            for i, a in enumerate(fv):
                if not a:
                    continue
                for mu, gv in enumerate(g.values):
                    for j, b in enumerate(gv):
                        if b:
                            out[((lam, i, mu, j), ())] = small(a * b)
        return out

    def ctx_elem(self, ctx) -> dict:
        return {(ctx, ()): 1}

    def word_elem(self, word: Sequence[int]) -> dict:
        """1·word."""
        word = tuple(word)
        return {(ctx, word): c for (ctx, _), c in self.one().items()}

    def times_word(self, x: dict, word: tuple) -> dict:
        return {(c, w + word): v for (c, w), v in x.items()}

    def s_map(self, f: BaseMap) -> dict:
        return self.base_elem(f, BaseMap.constant(self.nlam, self.alg.unit))

    def t_map(self, g: BaseMap) -> dict:
        return self.base_elem(BaseMap.constant(self.nlam, self.alg.unit), g)

    def s_flat(self, v: Vec) -> dict:
        return self.s_map(self.unflatten(v))

    def t_flat(self, v: Vec) -> dict:
        return self.t_map(self.unflatten(v))

    def unflatten(self, v: Vec) -> BaseMap:
        n = self.n
        return BaseMap(tuple(tuple(v[lam * n:(lam + 1) * n]) for lam in range(self.nlam)))

    def base_basis(self) -> list[BaseMap]:
        """δ_λ e_i for all λ, i."""
        out = []
        for lam in range(self.nlam):
            for i in range(self.n):
                out.append(BaseMap.delta(self.nlam, lam, self.alg, self.alg.basis(i)))
        return out

    def contexts(self) -> list[tuple]:
        return [(lam, i, mu, j) for lam in range(self.nlam) for i in range(self.n)
                for mu in range(self.nlam) for j in range(self.n)]

    # -- presentation -----------------------------------------------------
    def family2(self) -> list[dict]:
        """Σ_c L_ac (L⁻¹)_cb − δ_ab 1 and Σ_c (L⁻¹)_ac L_cb − δ_ab 1, collected."""
        gens = []
        one = self.one()
        for kind in (0, 1):
            for a in range(self.nx):
                for b in range(self.nx):
                    g: dict = {}
                    for c in range(self.nx):
                        w = (self.L(a, c), self.Li(c, b)) if kind == 0 else (self.Li(a, c), self.L(c, b))
                        add_into(g, self.word_elem(w))
                    if a == b:
                        add_into(g, one, -ONE)
                    gens.append(g)
        return gens

    def family4(self) -> list[dict]:
        """Σ(σ^{xy}_{ac}⊗1)L_yd L_xb − Σ(1⊗σ^{bd}_{xy})L_cy L_ax, indexed by (a,b,c,d)."""
        gens = []
        unit = BaseMap.constant(self.nlam, self.alg.unit)
        s = self.sigma
        for a in range(self.nx):
            for b in range(self.nx):
                for c in range(self.nx):
                    for d in range(self.nx):
                        g: dict = {}
                        for x in range(self.nx):
                            for y in range(self.nx):
                                f = s.entries.get((x, y, a, c))
                                if f is not None:
                                    add_into(g, self.times_word(self.base_elem(f, unit), (self.L(y, d), self.L(x, b))))
                                h = s.entries.get((b, d, x, y))
                                if h is not None:
                                    add_into(g, self.times_word(self.base_elem(unit, h), (self.L(c, y), self.L(a, x))), -ONE)
                        gens.append(g)
        return gens

    def family4_index(self, a: int, b: int, c: int, d: int) -> int:
        nx = self.nx
        return 2 * nx * nx + ((a * nx + b) * nx + c) * nx + d

    def generators(self) -> list[dict]:
        """Collected generators used for membership: family (2) then family (4)."""
        if not hasattr(self, "_gens"):
            self._gens = self.family2() + self.family4()
        return self._gens

    def generator_label(self, gi: int) -> str:
        nx = self.nx
        xs = self.deg.xs
        if gi < 2 * nx * nx:
            kind, rest = divmod(gi, nx * nx)
            a, b = divmod(rest, nx)
            return f"{'L·Li' if kind == 0 else 'Li·L'}[{xs[a]},{xs[b]}]"
        rest = gi - 2 * nx * nx
        a, rest = divmod(rest, nx ** 3)
        b, rest = divmod(rest, nx * nx)
        c, d = divmod(rest, nx)
        return f"exchange[{xs[a]},{xs[b]},{xs[c]},{xs[d]}]"

    # -- NCPoly bridge ----------------------------------------------------
    def letter_to_nc(self, code: int) -> tuple:
        inv, a, b = self.letter_info(code)
        return ("Li" if inv else "L", a, b)

    def to_ncpoly(self, x: dict) -> NCPoly:
        terms = {}
        for (ctx, w), c in x.items():
            terms[(("B",) + tuple(ctx),) + tuple(self.letter_to_nc(k) for k in w)] = c
        return NCPoly(terms, alphabet="LambdaX")

    def collect(self, p: NCPoly) -> dict:
        """Left collection of a free-algebra polynomial (families 1, 3, 5 applied)."""
        out: dict = {}
        for word, coeff in p.terms.items():
            cur = self.one()
            for letter in word:
                tag = letter[0]
                if tag == "B":
                    cur = self.mul(cur, self.ctx_elem(tuple(letter[1:])))
                elif tag == "L":
                    cur = self.times_word(cur, (self.L(letter[1], letter[2]),))
                elif tag == "Li":
                    cur = self.times_word(cur, (self.Li(letter[1], letter[2]),))
                else:
                    raise ValueError(f"letter {letter!r} is not in the ΛX alphabet")
            add_into(out, cur, coeff)
        return out

    def base_to_nc(self, f: BaseMap, g: BaseMap) -> NCPoly:
        return self.to_ncpoly(self.base_elem(f, g))

    # -- structure maps ---------------------------------------------------
    def delta_word(self, word: tuple) -> list[tuple[tuple, tuple]]:
        pairs = [((), ())]
        for code in word:
            inv, a, b = self.letter_info(code)
            nxt = []
            for c in range(self.nx):
                if inv:
                    l, r = self.Li(c, b), self.Li(a, c)
                else:
                    l, r = self.L(a, c), self.L(c, b)
                nxt.extend((pl + (l,), pr + (r,)) for pl, pr in pairs)
            pairs = nxt
        return pairs

    def delta_lift(self, x: dict) -> dict:
        """Δ̄ on the free lift: ctx ↦ s⊗t, letters by the matrix coproduct."""
        out: dict = {}
        for (ctx, w), coeff in x.items():
            lam, i, mu, j = ctx
            sl = self.s_map(BaseMap.delta(self.nlam, lam, self.alg, self.alg.basis(i)))
            tr = self.t_map(BaseMap.delta(self.nlam, mu, self.alg, self.alg.basis(j)))
            for wl, wr in self.delta_word(w):
                for (c1, _), v1 in sl.items():
                    for (c2, _), v2 in tr.items():
                        key = ((c1, wl), (c2, wr))
                        nv = out.get(key, ZERO) + coeff * v1 * v2
                        if nv:
                            out[key] = nv
                        else:
                            out.pop(key, None)
        return out

    # χ and π
    def _ctx_matrix(self, ctx):
        lam, i, mu, j = ctx
        n, N = self.n, self.n * self.nlam
        m = [[ZERO] * N for _ in range(N)]
        if lam != mu:
            return m
        ei, ej = self.alg.basis(i), self.alg.basis(j)
        for k in range(n):
            img = self.alg.mul(self.alg.mul(ei, self.alg.basis(k)), ej)
            for r, c in enumerate(img):
                if c:
                    m[lam * n + r][lam * n + k] = c
        return m

    def _letter_matrix(self, code: int):
        inv, a, b = self.letter_info(code)
        n, N = self.n, self.n * self.nlam
        m = [[ZERO] * N for _ in range(N)]
        if a != b:
            return m
        for kappa in range(self.nlam):
            row = self.deg.act(kappa, a) if inv else self.deg.act_inv(kappa, a)
            for k in range(n):
                m[row * n + k][kappa * n + k] = ONE
        return m

    @_memo
    def _word_matrix(self, word: tuple):
        m = identity(self.n * self.nlam)
        for code in word:
            m = mat_mul(m, self._letter_matrix(code))
        return m

    def chi_rep(self, x: dict) -> list[list[Fraction]]:
        N = self.n * self.nlam
        out = [[ZERO] * N for _ in range(N)]
        for (ctx, w), c in x.items():
            m = mat_mul(self._ctx_matrix(ctx), self._word_matrix(w))
            for r in range(N):
                for k in range(N):
                    if m[r][k]:
                        out[r][k] += c * m[r][k]
        return out

    def pi_map(self, x: dict) -> Vec:
        """π(x) = χ(x)(1), flat coordinates of M_Λ(R)."""
        n = self.n
        out = [ZERO] * (n * self.nlam)
        for (ctx, w), c in x.items():
            lam, i, mu, j = ctx
            if lam != mu:
                continue
            if any(self.letter_info(k)[1] != self.letter_info(k)[2] for k in w):
                continue
            prod = self.alg.mul(self.alg.basis(i), self.alg.basis(j))
            for k, v in enumerate(prod):
                if v:
                    out[lam * n + k] += c * v
        return tuple(out)

    # -- equality modulo I_σ ----------------------------------------------
    def span(self, bound: int, insertion: bool = False) -> IdealSpan:
        """Span shared by all queries with the same (bound, insertion).

        Growth is lazy (it stops once the current query is settled), so later
        queries reuse earlier rows; results depend on query order, which every
        caller keeps fixed.
        """
        key = (bound, insertion)
        with self._lock:
            sp = self._spans.get(key)
            if sp is None:
                sp = IdealSpan(self, self.generators(), bound, insertion=insertion)
                self._spans[key] = sp
            return sp

    def certify_zero(self, x: dict, bound: int | None = None, slack: int = 2) -> MembershipCertificate:
        """Certificate that x ∈ I_σ; tries without then with empty-word insertion."""
        x = {k: v for k, v in x.items() if v}
        if not x:
            return MembershipCertificate([], bound or 0)
        D = bound if bound is not None else degree(x) + slack
        if D < degree(x):
            D = degree(x)
        cert = self._query(D, False, lambda sp: sp.certificate(x), lambda c: c.found)
        if cert.found:
            return cert
        if D >= 2:
            cert2 = self._query(D, True, lambda sp: sp.certificate(x), lambda c: c.found)
            if cert2.found:
                return cert2
        return cert

    def _query(self, bound: int, insertion: bool, run, ok):
        """Run a query on the shared span; after an overflow, once more on a fresh one."""
        sp = self.span(bound, insertion)
        res = run(sp)
        if not ok(res) and sp.overflow:
            with self._lock:
                self._spans[(bound, insertion)] = IdealSpan(self, self.generators(), bound, insertion=insertion)
            res = run(self.span(bound, insertion))
        return res

    # tensor equality modulo I_σ⊗B + B⊗I_σ
    def certify_tensor_zero(self, T: dict, bound: int | None = None, slack: int = 2,
                            contract: bool = False) -> tuple[bool, dict]:
        """(N⊗N)(T) = 0 for the normal form N of a bounded span; sound, not complete."""
        if contract:
            T = self.contract(T)
        T = {k: v for k, v in T.items() if v}
        if not T:
            return True, {"terms": 0}
        monos = {m for key in T for m in key}
        D = bound if bound is not None else max(len(m[1]) for m in monos) + slack
        return certify_legwise_zero(self, T, D)

    def contract(self, T: dict) -> dict:
        """Canonical representative modulo I_2: t(g)a⊗b ~ a⊗s(g)b.

        The target half t(δ_μ e_j) of each left-leg letter moves to the right
        leg, so every left leg carries s(δ_λ e_i) only.
        """
        out: dict = {}
        units = self.unit_coords
        for ((c1, w1), (c2, w2)), coeff in T.items():
            lam, i, mu, j = c1
            lam2, i2, mu2, j2 = c2
            if mu != lam2:
                continue
            prod = self.alg.mul(self.alg.basis(j), self.alg.basis(i2))
            for k, v in enumerate(prod):
                if not v:
                    continue
                right = ((lam2, k, mu2, j2), w2)
                for mu1 in range(self.nlam):
                    for ju, uc in units:
                        key = (((lam, i, mu1, ju), w1), right)
                        nv = out.get(key, ZERO) + coeff * v * uc
                        if nv:
                            out[key] = nv
                        else:
                            out.pop(key, None)
        return out

    # -- rigidity and S ---------------------------------------------------
    def set_witnesses(self, x: dict, y: dict) -> None:
        missing = [(a, b) for a in range(self.nx) for b in range(self.nx) if (a, b) not in x or (a, b) not in y]
        if missing:
            raise ValueError(f"witness table incomplete at {missing[:3]}")
        self.witness_x = x
        self.witness_y = y

    def default_witnesses(self) -> tuple[dict, dict]:
        x = {(a, b): self.word_elem((self.L(a, b),)) for a in range(self.nx) for b in range(self.nx)}
        y = {(a, b): self.word_elem((self.Li(a, b),)) for a in range(self.nx) for b in range(self.nx)}
        return x, y

    def antipode_S(self) -> "WordMap":
        if self.witness_x is None:
            raise ValueError("rigidity witnesses are missing")
        rules = {}
        for a in range(self.nx):
            for b in range(self.nx):
                rules[self.L(a, b)] = self.word_elem((self.Li(a, b),))
                rules[self.Li(a, b)] = self.witness_x[(a, b)]
        swap = lambda ctx: {((ctx[2], ctx[3], ctx[0], ctx[1]), ()): ONE}
        return WordMap(self, rules, swap, anti=True)


def legwise_residual(sp: IdealSpan, T: dict) -> dict:
    """Apply the span's normal form on every leg of T."""
    cache: dict = {}
    acc: dict = {}
    for key, c in T.items():
        parts = [((), c)]
        for m in key:
            red = cache.get(m)
            if red is None:
                red = cache[m] = sp.reduce({m: 1})
            parts = [(ks + (n,), a * b) for ks, a in parts for n, b in red.items()]
        for ks, v in parts:
            nv = acc.get(ks, 0) + v
            if nv:
                acc[ks] = nv
            else:
                acc.pop(ks, None)
    return acc


def certify_legwise_zero(A: "ASigma", T: dict, D: int) -> tuple[bool, dict]:
    """Zero modulo Σ (I_σ in one leg): legwise normal forms of a bounded span vanish."""
    monos = sorted({m for key in T for m in key}, key=_mono_sort)
    probe = {m: 1 for m in monos}
    acc = T
    def run(sp):
        with sp.lock:
            sp.seed(probe, lambda: not legwise_residual(sp, T))
            return legwise_residual(sp, T)

    for insertion in ((False, True) if D >= 2 else (False,)):
        acc = A._query(D, insertion, run, lambda r: not r)
        if not acc:
            return True, {"bound": D, "insertion": insertion, "legs": len(monos)}
    return False, {"bound": D, "residual_terms": len(acc)}


def _mono_sort(m):
    ctx, w = m
    return (len(w), w, ctx)


class WordMap:
    """Multiplicative (or anti-multiplicative) extension of letter rules into A_σ-shaped targets.

    ``target`` supplies ``mul`` and ``one``; ``ctx_rule`` maps a basis letter
    of M_Λ(R)⊗M_Λ(R)^op to a target element.
    """

    def __init__(self, target, letter_rules: dict, ctx_rule, anti: bool = False):
        self.target = target
        self.rules = letter_rules
        self.ctx_rule = ctx_rule
        self.anti = anti
        self._word_cache: dict = {}
        self._ctx_cache: dict = {}

    def image_word(self, word: tuple):
        hit = self._word_cache.get(word)
        if hit is not None:
            return hit
        if not word:
            val = self.target.one()
        elif len(word) == 1:
            val = self.rules[word[0]]
        else:
            head = self.image_word(word[:-1])
            last = self.rules[word[-1]]
            val = self.target.mul(last, head) if self.anti else self.target.mul(head, last)
        self._word_cache[word] = val
        return val

    def image_ctx(self, ctx):
        hit = self._ctx_cache.get(ctx)
        if hit is None:
            hit = self.ctx_rule(ctx)
            self._ctx_cache[ctx] = hit
        return hit

    def __call__(self, x: dict):
        acc: dict = {}
        for (ctx, w), c in x.items():
            a, b = self.image_ctx(ctx), self.image_word(w)
            add_into(acc, self.target.mul(b, a) if self.anti else self.target.mul(a, b), c)
        return acc


@dataclass
class ASigmaPresentation:
    """Raw presentation: alphabet description, NCPoly generators by family, σ."""

    sigma: SigmaFamily
    families: dict[int, list[NCPoly]]
    algebra: ASigma

    @property
    def generators(self) -> list[NCPoly]:
        return [g for k in sorted(self.families) for g in self.families[k]]


def build_I_sigma(s: SigmaFamily, check: bool = True) -> ASigmaPresentation:
    if check:
        bad = check_sigma_conditions(s)
        if bad:
            raise ValueError(f"σ violates the conditions: {bad[0].detail}")
    A = ASigma(s)
    nl, n, nx = A.nlam, A.n, A.nx
    alg = s.alg
    unit = BaseMap.constant(nl, alg.unit)
    fam: dict[int, list[NCPoly]] = {1: [], 2: [], 3: [], 4: [], 5: []}
    # family (1): products of basis letters, schematic over the letter basis
    ctxs = A.contexts()
    for c1 in ctxs:
        for c2 in ctxs:
            prod = A.mul(A.ctx_elem(c1), A.ctx_elem(c2))
            p = NCPoly({(("B",) + c1, ("B",) + c2): 1}, "LambdaX")
            p = p - A.to_ncpoly(prod)
            fam[1].append(p)
    for kind in (0, 1):
        for a in range(nx):
            for b in range(nx):
                fam[2].append(_raw_family2(A, kind, a, b))
    basis = A.base_basis()
    from .base import shift, shift_inverse
    for a in range(nx):
        for b in range(nx):
            La = NCPoly.letter(("L", a, b), "LambdaX")
            Lia = NCPoly.letter(("Li", a, b), "LambdaX")
            for f in basis:
                fam[3].append(A.base_to_nc(shift(s.deg, a, f), unit) * La - La * A.base_to_nc(f, unit))
                fam[3].append(A.base_to_nc(unit, shift(s.deg, b, f)) * La - La * A.base_to_nc(unit, f))
                fam[3].append(A.base_to_nc(f, unit) * Lia - Lia * A.base_to_nc(shift(s.deg, b, f), unit))
                fam[3].append(A.base_to_nc(unit, f) * Lia - Lia * A.base_to_nc(unit, shift(s.deg, a, f)))
    for g in A.family4():
        fam[4].append(A.to_ncpoly(g))
    fam[5].append(NCPoly.one("LambdaX") - A.base_to_nc(unit, unit))
    return ASigmaPresentation(s, fam, A)


def _raw_family2(A: ASigma, kind: int, a: int, b: int) -> NCPoly:
    """Family (2) with the empty word ∅ kept (before unit identification)."""
    terms = {}
    for c in range(A.nx):
        w = (("L", a, c), ("Li", c, b)) if kind == 0 else (("Li", a, c), ("L", c, b))
        terms[w] = ONE
    if a == b:
        terms[()] = -ONE
    return NCPoly(terms, "LambdaX")


def verify_rigidity(A: ASigma, x: dict, y: dict, bound: int | None = None) -> list[dict]:
    """Four sums per (a,b), each certified to equal δ_ab·1 modulo I_σ."""
    one = A.one()
    records = []
    jobs = []
    for a in range(A.nx):
        for b in range(A.nx):
            sums = {
                "Li_cb x_ac": [A.mul(A.word_elem((A.Li(c, b),)), x[(a, c)]) for c in range(A.nx)],
                "x_cb Li_ac": [A.mul(x[(c, b)], A.word_elem((A.Li(a, c),))) for c in range(A.nx)],
                "L_cb y_ac": [A.mul(A.word_elem((A.L(c, b),)), y[(a, c)]) for c in range(A.nx)],
                "y_cb L_ac": [A.mul(y[(c, b)], A.word_elem((A.L(a, c),))) for c in range(A.nx)],
            }
            for name, parts in sums.items():
                acc: dict = {}
                for p in parts:
                    add_into(acc, p)
                if a == b:
                    add_into(acc, one, -ONE)
                jobs.append((name, (a, b), acc))
    for name, ab, diff in jobs:
        xs = A.deg.xs
        elem = f"{xs[ab[0]]},{xs[ab[1]]}"
        records.append(certify_record(A, f"rigidity {name}", elem, diff, bound))
    return records


def certify_record(A: ASigma, identity: str, element: str, diff: dict, bound: int | None = None) -> dict:
    """Report record for "diff ∈ I_σ": exact zero, χ-disproof, certificate or inconclusive."""
    diff = {k: v for k, v in diff.items() if v}
    if not diff:
        return {"identity": identity, "element": element, "verdict": "pass", "witness": {"exact": True}}
    # χ vanishes on I_σ, so a nonzero χ-image is a sound disproof
    chi = A.chi_rep(diff)
    if any(any(r) for r in chi):
        return {"identity": identity, "element": element, "verdict": "fail",
                "witness": {"chi_nonzero": True, "terms": len(diff)}}
    cert = A.certify_zero(diff, bound)
    return {"identity": identity, "element": element, "verdict": cert.verdict(), "witness": cert.summary()}
