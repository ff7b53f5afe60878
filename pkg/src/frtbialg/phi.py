"""w_σ, the homomorphism Φ: 𝔄(w_σ) → A_σ, and the universal map F out of A_σ."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .asigma import ASigma, SigmaFamily, WordMap, build_I_sigma, certify_record
from .aw import AwAlgebra, FaceWeight, _record
from .base import BaseMap, DegreeMap
from .membership import add_into, degree
from .quiver import Path, build_sigma_quiver, sigma_arrow
from .weak import ConvMap, WeakASigma, WeakAw, WhaAntipode, _basis_upto, asigma_generators

ONE = 1


def build_w_sigma(s: SigmaFamily) -> FaceWeight:
    """𝐰[(λ,a);(μ,c);(λ′,b);(μ′,d)] = δ_{λ,μ} σ^{ba}_{dc}(λ): note the transposed indices."""
    deg = s.deg
    q = build_sigma_quiver(deg)
    nx = len(deg.xs)
    entries = {}
    for lam in range(len(deg.lambdas)):
        for a in range(nx):
            lam2 = deg.act(lam, a)
            for c in range(nx):
                mu2 = deg.act(lam, c)
                for b in range(nx):
                    for d in range(nx):
                        r = s.value(b, a, d, c, lam)
                        if any(r):
                            ab = (sigma_arrow(deg, lam, a), sigma_arrow(deg, lam2, b))
                            cd = (sigma_arrow(deg, lam, c), sigma_arrow(deg, mu2, d))
                            entries[(ab, cd)] = r
    return FaceWeight(q, s.alg, entries)


@dataclass
class GenHom:
    """A homomorphism given by generator images.

    ``direction`` is one of ``"aw->asigma"``, ``"aw->target"`` or
    ``"asigma->target"``; ``apply`` is its linear extension.
    """

    direction: str
    target: object
    apply: Callable[[dict], dict]
    generator_images: dict

    def __call__(self, x: dict) -> dict:
        return self.apply(x)


def _phi_key(As: ASigma, Aw: AwAlgebra, key) -> dict:
    i, j, p, q = key
    nx = As.nx
    word = tuple(As.L(pa % nx, qa % nx) for pa, qa in zip(p.arrows, q.arrows))
    return {((p.source, i, q.source, j), word): ONE}


def build_phi(s: SigmaFamily, Aw: AwAlgebra | None = None, As: ASigma | None = None) -> tuple[GenHom, ConvMap]:
    """Φ̄(r⊗r′⊗𝐞[p;q]) = (r_M⊗r′_M)(δ_𝔰(p)⊗δ_𝔰(q)) L_{x₁y₁}⋯L_{x_my_m}."""
    Aw = Aw or AwAlgebra(build_w_sigma(s))
    As = As or ASigma(s)
    phi = ConvMap("phi", lambda k: _phi_key(As, Aw, k))
    gens = {}
    for r, f in enumerate(Aw.base_basis_flat()):
        gens[f"s[{r}]"] = phi(Aw.s_flat(f))
        gens[f"t[{r}]"] = phi(Aw.t_flat(f))
    arrows = Aw.quiver.paths(1)
    for a in arrows:
        for b in arrows:
            x = {(u, v, a, b): uc * vc for u, uc in Aw.units for v, vc in Aw.units}
            gens[f"[{Aw.quiver.label(a)};{Aw.quiver.label(b)}]"] = phi(x)
    return GenHom("aw->asigma", As, phi, gens), phi


def verify_phi(Aw: AwAlgebra, As: ASigma, phi: ConvMap, bound: int | None = None, cap: int = 2) -> list[dict]:
    """Φ̄ kills the face ideal, and Φ respects s, t, π and Δ_L."""
    records = []
    n, nl = Aw.n, Aw.nlam
    # images of degree-0 idempotents stay idempotent
    for lam in range(nl):
        for mu in range(nl):
            e = {(u, v, Path(lam, ()), Path(mu, ())): uc * vc for u, uc in Aw.units for v, vc in Aw.units}
            img = phi(e)
            d = As.mul(img, img)
            add_into(d, img, -ONE)
            records.append(_record("degree0-idempotent", f"1(x)1(x)[{lam};{mu}]", not d, {"exact": True}))
    # face generators: images lie in I_σ, certified at bound = image degree
    for tag, g in Aw.generators():
        img = phi(g)
        b = max(degree(img), 0) if bound is None else bound
        records.append(certify_record(As, "face-generator-image", _face_name(Aw, tag), img, b))
    # source and target maps, exact
    for r, f in enumerate(Aw.base_basis_flat()):
        name = f"d{Aw.quiver.vertices[r // n]}.e{r % n}"
        d = phi(Aw.s_flat(f))
        add_into(d, As.s_flat(f), -ONE)
        records.append(_record("phi-source", name, not d, {"exact": True}))
        d = phi(Aw.t_flat(f))
        add_into(d, As.t_flat(f), -ONE)
        records.append(_record("phi-target", name, not d, {"exact": True}))
    # counit: π_A∘Φ = π_𝔄, via χ on the A_σ side and ζ on the 𝔄 side
    basis = _basis_upto(Aw, cap)
    for m in range(cap + 1):
        for k in basis[m]:
            x = {k: ONE}
            img = phi(x)
            ok = As.pi_map(img) == Aw.pi(x) and As.chi_rep(img) == Aw.zeta(x)
            records.append(_record("phi-counit", Aw.key_name(k), ok, {"exact": True}))
    # comultiplication on degree ≤ 1, modulo I_2 and the leg ideals
    for m in range(min(cap, 1) + 1):
        for k in basis[m]:
            x = {k: ONE}
            T = dict(As.delta_lift(phi(x)))
            for (k1, k2), c in Aw.delta(x).items():
                for m1, a in phi.key(k1).items():
                    for m2, b in phi.key(k2).items():
                        add_into(T, {(m1, m2): -c * a * b})
            ok, w = As.certify_tensor_zero(T, bound, contract=True)
            records.append({"identity": "phi-comultiplicative", "element": Aw.key_name(k),
                            "verdict": "pass" if ok else f"inconclusive({w.get('bound')})", "witness": w})
    return records


def _face_name(Aw: AwAlgebra, tag) -> str:
    q = Aw.quiver
    arrow = lambda x: q.label(Path(q.sources[x], (x,)))
    (ab, cd) = tag
    return f"[{' '.join(map(arrow, ab))};{' '.join(map(arrow, cd))}]"


# -- relabeled copies --------------------------------------------------------

def relabel_sigma(s: SigmaFamily, perm: list[int]) -> SigmaFamily:
    """σ′ with X reindexed by x ↦ perm[x]; labels travel with their letters."""
    deg = s.deg
    nx = len(deg.xs)
    xs = [None] * nx
    perms = [None] * nx
    for a in range(nx):
        xs[perm[a]] = deg.xs[a]
        perms[perm[a]] = deg.perms[a]
    deg2 = DegreeMap(deg.lambdas, tuple(xs), tuple(perms))
    entries = {tuple(perm[k] for k in key): f for key, f in s.entries.items()}
    return SigmaFamily(deg2, s.alg, entries)


def relabel_map(As: ASigma, Bs: ASigma, perm: list[int]) -> WordMap:
    rules = {}
    for a in range(As.nx):
        for b in range(As.nx):
            rules[As.L(a, b)] = Bs.word_elem((Bs.L(perm[a], perm[b]),))
            rules[As.Li(a, b)] = Bs.word_elem((Bs.Li(perm[a], perm[b]),))
    return WordMap(Bs, rules, lambda ctx: {(ctx, ()): ONE})


# -- universal map -----------------------------------------------------------

def build_universal_F(Aw: AwAlgebra, As: ASigma, fplus: ConvMap, fminus: ConvMap, target: ASigma) -> GenHom:
    """F̄(ξ) = Υ(ξ), F̄(L_ab) = Σ_{λ,μ} f⁺(1⊗1⊗𝐞[(λ,a);(μ,b)]), F̄((L⁻¹)_ab) likewise with f⁻."""
    q = Aw.quiver
    deg = As.deg
    units = Aw.units

    def arrow_sum(a: int, b: int, f: ConvMap) -> dict:
        out: dict = {}
        for lam in range(As.nlam):
            pa = Path(lam, (sigma_arrow(deg, lam, a),))
            for mu in range(As.nlam):
                pb = Path(mu, (sigma_arrow(deg, mu, b),))
                x = {(u, v, pa, pb): uc * vc for u, uc in units for v, vc in units}
                add_into(out, f(Aw.nf(x)))
        return out

    rules = {}
    for a in range(As.nx):
        for b in range(As.nx):
            rules[As.L(a, b)] = arrow_sum(a, b, fplus)
            rules[As.Li(a, b)] = arrow_sum(a, b, fminus)

    def ctx_rule(ctx):
        lam, i, mu, j = ctx
        return fplus(Aw.nf({(i, j, Path(lam, ()), Path(mu, ())): ONE}))

    F = WordMap(target, rules, ctx_rule)
    images = {As.ctx_name(c): ctx_rule(c) for c in As.contexts()}
    images.update({As.letter_name(k): v for k, v in rules.items()})
    hom = GenHom("asigma->target", target, F, images)
    hom.letter_rules = rules
    hom.ctx_rule = ctx_rule
    return hom


def _eval_raw(F: GenHom, As: ASigma, p) -> dict:
    """F̄ on a raw free-algebra element over the letters B(ctx), L_ab, (L⁻¹)_ab and ∅."""
    T = F.target
    out: dict = {}
    for word, c in p.terms.items():
        acc = T.one()
        for letter in word:
            if letter[0] == "B":
                img = F.ctx_rule(tuple(letter[1:]))
            elif letter[0] == "L":
                img = F.letter_rules[As.L(letter[1], letter[2])]
            else:
                img = F.letter_rules[As.Li(letter[1], letter[2])]
            acc = T.mul(acc, img)
        add_into(out, acc, c)
    return out


def verify_universal_F(F: GenHom, s: SigmaFamily, As: ASigma, bound: int | None = None) -> list[dict]:
    """F̄ kills the raw generators of I_σ, family by family."""
    pres = build_I_sigma(s, check=False)
    records = []
    for fam in sorted(pres.families):
        for idx, g in enumerate(pres.families[fam]):
            img = _eval_raw(F, As, g)
            records.append(certify_record(F.target, f"well-defined-family-{fam}", f"g{idx}", img, bound))
    return records


def verify_closure(Aw: AwAlgebra, As: ASigma, phi: ConvMap, fplus: ConvMap, F: GenHom,
                   expected: WordMap | None = None, cap: int = 2, bound: int | None = None,
                   weak_target: WeakASigma | None = None, challengers: dict | None = None) -> list[dict]:
    """F∘Φ = f⁺ on the graded basis, F on generators, optional Δ/ε preservation."""
    T = F.target
    records = []
    d = F(As.one())
    add_into(d, T.one(), -ONE)
    records.append(certify_record(T, "F-unit", "1", d, bound))
    basis = _basis_upto(Aw, cap)
    for m in range(cap + 1):
        for k in basis[m]:
            d = F(phi.key(k))
            add_into(d, fplus.key(k), -ONE)
            records.append(certify_record(T, "F-after-phi", Aw.key_name(k), d, bound))
    gens = asigma_generators(As)
    if expected is not None:
        for name, g in gens:
            d = F(g)
            add_into(d, expected(g), -ONE)
            records.append(certify_record(T, "F-on-generators", name, d, bound))
    for cname, G in sorted((challengers or {}).items()):
        for name, g in gens:
            d = F(g)
            add_into(d, G(g), -ONE)
            records.append(certify_record(T, f"F-unique-vs-{cname}", name, d, bound))
    if weak_target is not None:
        WS_src = WeakASigma(As, weak_target.frob_base, bound)
        for name, g in gens:
            lhs = dict(weak_target.delta(F(g)))
            for (m1, m2), c in WS_src.delta(g).items():
                for n1, a in F({m1: ONE}).items():
                    for n2, b in F({m2: ONE}).items():
                        add_into(lhs, {(n1, n2): -c * a * b})
            ok, w = T.certify_tensor_zero(lhs, bound)
            records.append({"identity": "F-comultiplicative", "element": name,
                            "verdict": "pass" if ok else f"inconclusive({w.get('bound')})", "witness": w})
            records.append(_record("F-counital", name, weak_target.eps(F(g)) == WS_src.eps(g), {"exact": True}))
    return records
