"""Instance files: TOML with exact rationals written as "p/q" strings.

Parsing is total-or-error.  Every failure raises :class:`InstanceError`
carrying a line and column; unknown sections and keys are rejected.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path as FsPath

import tomli

from .asigma import SigmaFamily
from .aw import FaceWeight
from .base import AlgebraSpec, BaseMap, DegreeMap, FrobeniusSystem, parse_rational
from .quiver import Quiver, build_sigma_quiver

BUNDLED = ("example-4-1-i1", "example-4-1-i2", "example-4-1-m2")

SCHEMA: dict[str, set[str]] = {
    "algebra": {"name", "dimension", "structure", "unit"},
    "lambda": {"labels"},
    "x": {"labels"},
    "deg": set(),  # one key per X-label, checked separately
    "frobenius": {"psi", "casimir"},
    "sigma": {"entries"},
    "quiver": {"vertices", "arrows"},
    "face_w": {"entries"},
    "rigidity": {"x", "y"},
    "options": {"degree_cap", "membership_bound", "coassoc_cap"},
}
REQUIRED = ("algebra", "lambda", "frobenius")
WITNESS_PRESETS = ("L", "Li")


class InstanceError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = "<instance>"):
        self.message, self.line, self.col, self.source = message, line, col, source
        super().__init__(f"{source}:{line}:{col}: {message}")


@dataclass
class Instance:
    name: str
    text: str
    alg: AlgebraSpec
    lambdas: tuple[str, ...]
    frobenius: FrobeniusSystem
    deg: DegreeMap | None = None
    sigma: SigmaFamily | None = None
    face_w: FaceWeight | None = None
    witnesses: tuple[str, str] = ("L", "Li")
    options: dict = field(default_factory=dict)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()


class _Locator:
    """Best-effort line/column lookup for semantic errors (TOML carries no positions)."""

    def __init__(self, text: str, source: str):
        self.lines = text.splitlines()
        self.source = source

    def find(self, section: str, key: str | None = None) -> tuple[int, int]:
        header = re.compile(r"^\s*\[\s*" + re.escape(section) + r"\s*\]")
        keypat = None if key is None else re.compile(r'^\s*"?' + re.escape(key) + r'"?\s*=')
        start = None
        for n, line in enumerate(self.lines, 1):
            if start is None:
                if header.match(line):
                    start = n
                    if keypat is None:
                        return n, line.index("[") + 1
                continue
            if re.match(r"^\s*\[", line):
                break
            if keypat.match(line):
                return n, len(line) - len(line.lstrip()) + 1
        return (start or 0), 1

    def error(self, message: str, section: str, key: str | None = None) -> InstanceError:
        line, col = self.find(section, key)
        return InstanceError(message, line, col, self.source)


def _rat(v, loc: _Locator, section: str, key: str):
    try:
        return parse_rational(v)
    except ValueError as exc:
        raise loc.error(str(exc), section, key) from None


def _vec(v, n: int, loc: _Locator, section: str, key: str) -> tuple:
    if not isinstance(v, list) or len(v) != n:
        raise loc.error(f"expected a list of {n} rationals", section, key)
    return tuple(_rat(c, loc, section, key) for c in v)


def _labels(doc: dict, section: str, loc: _Locator) -> tuple[str, ...]:
    labels = doc[section].get("labels")
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
        raise loc.error("labels must be a list of strings", section, "labels")
    if len(set(labels)) != len(labels):
        raise loc.error("duplicate label", section, "labels")
    return tuple(labels)


def _index(labels, value, loc, section, key, what) -> int:
    try:
        return labels.index(value)
    except ValueError:
        raise loc.error(f"unknown {what} label {value!r}", section, key) from None


def _algebra(sec: dict, loc: _Locator) -> AlgebraSpec:
    dim = sec.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0:
        raise loc.error("dimension must be a positive integer", "algebra", "dimension")
    triples = []
    for t in sec.get("structure", []):
        if not (isinstance(t, list) and len(t) == 4 and all(isinstance(i, int) for i in t[:3])):
            raise loc.error("structure entries are [i, j, k, value]", "algebra", "structure")
        triples.append((t[0], t[1], t[2], _rat(t[3], loc, "algebra", "structure")))
    unit = None
    if "unit" in sec:
        unit = _vec(sec["unit"], dim, loc, "algebra", "unit")
    try:
        alg = AlgebraSpec.from_triples(dim, triples, unit, name=str(sec.get("name", "")))
    except ValueError as exc:
        raise loc.error(str(exc), "algebra", "structure") from None
    bad = alg.violations()
    if bad:
        raise loc.error(f"not a unital associative algebra: {bad[0]}", "algebra", "structure")
    return alg


def parse_instance(text: str, source: str = "<instance>") -> Instance:
    loc = _Locator(text, source)
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"\(at line (\d+), column (\d+)\)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (0, 0)
        raise InstanceError(str(exc).split(" (at line")[0], line, col, source) from None

    for section, body in doc.items():
        if section not in SCHEMA:
            raise loc.error(f"unknown section [{section}]", section)
        if not isinstance(body, dict):
            raise loc.error(f"[{section}] must be a table", section)
        if section != "deg":
            for key in body:
                if key not in SCHEMA[section]:
                    raise loc.error(f"unknown key {key!r} in [{section}]", section, key)
    for section in REQUIRED:
        if section not in doc:
            raise InstanceError(f"missing section [{section}]", 1, 1, source)
    if "sigma" not in doc and "face_w" not in doc:
        raise InstanceError("an instance needs [sigma] or [face_w]", 1, 1, source)

    alg = _algebra(doc["algebra"], loc)
    n = alg.dimension
    lambdas = _labels(doc, "lambda", loc)

    fsec = doc["frobenius"]
    psi = _vec(fsec.get("psi"), n, loc, "frobenius", "psi")
    cas = []
    for pair in fsec.get("casimir", []):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise loc.error("casimir entries are [left, right] pairs", "frobenius", "casimir")
        cas.append((_vec(pair[0], n, loc, "frobenius", "casimir"), _vec(pair[1], n, loc, "frobenius", "casimir")))
    frob = FrobeniusSystem(psi, tuple(cas))

    inst = Instance(FsPath(source).stem, text, alg, lambdas, frob)

    if "x" in doc or "deg" in doc or "sigma" in doc:
        for section in ("x", "deg"):
            if section not in doc:
                raise InstanceError(f"missing section [{section}]", 1, 1, source)
        xs = _labels(doc, "x", loc)
        for key in doc["deg"]:
            if key not in xs:
                raise loc.error(f"unknown key {key!r} in [deg] (not an X-label)", "deg", key)
        for x in xs:
            img = doc["deg"].get(x)
            if not isinstance(img, list):
                raise loc.error(f"deg({x}) must be a list of Λ-labels", "deg", x)
            for lab in img:
                _index(lambdas, lab, loc, "deg", x, "Λ")
        try:
            inst.deg = DegreeMap.from_labels(lambdas, xs, doc["deg"])
        except ValueError as exc:
            raise loc.error(str(exc), "deg") from None

    if "sigma" in doc:
        xs = inst.deg.xs
        entries: dict = {}
        for e in doc["sigma"].get("entries", []):
            if not (isinstance(e, list) and len(e) == 6):
                raise loc.error("sigma entries are [a, b, c, d, λ, value]", "sigma", "entries")
            key = tuple(_index(xs, v, loc, "sigma", "entries", "X") for v in e[:4])
            lam = _index(lambdas, e[4], loc, "sigma", "entries", "Λ")
            vals = list(entries.get(key, [alg.zero()] * len(lambdas)))
            if any(vals[lam]):
                raise loc.error(f"duplicate sigma entry {e[:5]}", "sigma", "entries")
            vals[lam] = _vec(e[5], n, loc, "sigma", "entries")
            entries[key] = vals
        inst.sigma = SigmaFamily(inst.deg, alg, {k: BaseMap(tuple(v)) for k, v in entries.items()})

    if "face_w" in doc:
        inst.face_w = _face_weight(doc, inst, loc)

    rig = doc.get("rigidity", {})
    wit = []
    for key, default in (("x", "L"), ("y", "Li")):
        v = rig.get(key, default)
        if v not in WITNESS_PRESETS:
            raise loc.error(f"witness {key} must be one of {WITNESS_PRESETS}", "rigidity", key)
        wit.append(v)
    inst.witnesses = (wit[0], wit[1])

    for key, v in doc.get("options", {}).items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise loc.error(f"option {key} must be a non-negative integer", "options", key)
        inst.options[key] = v
    return inst


def _face_weight(doc: dict, inst: Instance, loc: _Locator) -> FaceWeight:
    if "quiver" in doc:
        q = doc["quiver"]
        verts = q.get("vertices", list(inst.lambdas))
        try:
            quiver = Quiver.from_labels(verts, [tuple(a) for a in q.get("arrows", [])])
        except (ValueError, TypeError) as exc:
            raise loc.error(str(exc), "quiver", "arrows") from None
    elif inst.deg is not None:
        quiver = build_sigma_quiver(inst.deg)
    else:
        raise InstanceError("[face_w] needs [quiver] or [x]/[deg]", 1, 1, loc.source)
    ids = list(quiver.arrow_ids)
    entries = {}
    for e in doc["face_w"].get("entries", []):
        if not (isinstance(e, list) and len(e) == 5):
            raise loc.error("face_w entries are [top, right, left, bottom, value]", "face_w", "entries")
        a, b, c, d = (_index(ids, v, loc, "face_w", "entries", "arrow") for v in e[:4])
        entries[((a, b), (c, d))] = _vec(e[4], inst.alg.dimension, loc, "face_w", "entries")
    try:
        return FaceWeight(quiver, inst.alg, entries)
    except ValueError as exc:
        raise loc.error(str(exc), "face_w", "entries") from None


def load_instance(path: str) -> Instance:
    """Read a file path, or a bundled instance name such as ``example-4-1-i1``."""
    stem = FsPath(path).name.removesuffix(".toml")
    if not FsPath(path).exists() and stem in BUNDLED:
        text = resources.files("frtbialg").joinpath("data", f"{stem}.toml").read_text()
        return parse_instance(text, f"{stem}.toml")
    try:
        text = FsPath(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read instance: {exc.strerror}", 0, 0, path) from None
    return parse_instance(text, path)
