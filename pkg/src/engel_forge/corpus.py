"""Cycle notation, group files and named constructions.

Group files are JSON objects::

    {"name": "s4", "degree": 4, "generators": ["(1,2,3,4)", "(1,2)"],
     "tags": ["soluble"], "provenance": "...",
     "named_elements": {"alpha": "(2,3)"},
     "named_subgroups": {"base": ["(1,2)"]}}

The last two keys are optional.  Points are 1-based in text and 0-based in
memory.
"""

from __future__ import annotations

import ast
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidInputError, ParseError
from .group import PermGroup
from .perm import Permutation


# cycle notation


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse ``"(1,2,3)(4,5)"`` (1-based, disjoint cycles) into a permutation.

    Whitespace is ignored; ``""`` and ``"()"`` give the identity.
    """
    if degree < 1:
        raise InvalidInputError("degree must be positive")
    images = list(range(degree))
    seen: set[int] = set()
    i, n = 0, len(text)

    def skip(j: int) -> int:
        while j < n and text[j].isspace():
            j += 1
        return j

    i = skip(i)
    while i < n:
        if text[i] != "(":
            raise ParseError(f"expected '(' but found {text[i]!r}", i)
        i = skip(i + 1)
        cycle: list[int] = []
        if i < n and text[i] == ")":
            i = skip(i + 1)
            continue
        while True:
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i == start:
                if i >= n:
                    raise ParseError("unterminated cycle", i)
                raise ParseError(f"expected a point but found {text[i]!r}", i)
            point = int(text[start:i])
            if not 1 <= point <= degree:
                raise ParseError(f"point {point} outside 1..{degree}", start)
            if point in seen:
                raise ParseError(f"repeated point {point}", start)
            seen.add(point)
            cycle.append(point - 1)
            i = skip(i)
            if i >= n:
                raise ParseError("unterminated cycle", i)
            if text[i] == ",":
                i = skip(i + 1)
                continue
            if text[i] == ")":
                i = skip(i + 1)
                break
            raise ParseError(f"expected ',' or ')' but found {text[i]!r}", i)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a] = b
    return Permutation._trusted(tuple(images))


def format_cycles(p: Sequence[int]) -> str:
    """Canonical 1-based cycle string."""
    return Permutation._trusted(tuple(p)).cycle_string()


# group files


@dataclass
class GroupFile:
    name: str
    degree: int
    generators: list[str]
    tags: list[str] = field(default_factory=list)
    provenance: str = ""
    named_elements: dict[str, str] = field(default_factory=dict)
    named_subgroups: dict[str, list[str]] = field(default_factory=dict)

    def group(self) -> PermGroup:
        return PermGroup(self.degree, [parse_cycles(g, self.degree) for g in self.generators])

    def element(self, name: str) -> Permutation:
        if name not in self.named_elements:
            raise InvalidInputError(f"{self.name} has no element named {name!r}")
        return parse_cycles(self.named_elements[name], self.degree)

    def subgroup(self, name: str) -> PermGroup:
        if name not in self.named_subgroups:
            raise InvalidInputError(f"{self.name} has no subgroup named {name!r}")
        return PermGroup(self.degree, [parse_cycles(g, self.degree) for g in self.named_subgroups[name]])

    def to_dict(self) -> dict:
        out = {"name": self.name, "degree": self.degree, "generators": list(self.generators),
               "tags": list(self.tags), "provenance": self.provenance}
        if self.named_elements:
            out["named_elements"] = dict(self.named_elements)
        if self.named_subgroups:
            out["named_subgroups"] = {k: list(v) for k, v in self.named_subgroups.items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "GroupFile":
        try:
            name, degree, gens = data["name"], data["degree"], data["generators"]
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"group file lacks field {exc}") from None
        if not isinstance(degree, int) or degree < 1:
            raise InvalidInputError("degree must be a positive integer")
        gf = cls(str(name), degree, [str(g) for g in gens], [str(t) for t in data.get("tags", [])],
                 str(data.get("provenance", "")), dict(data.get("named_elements", {})),
                 {k: list(v) for k, v in data.get("named_subgroups", {}).items()})
        # canonicalize so that parse -> print -> parse is the identity
        gf.generators = [format_cycles(parse_cycles(g, degree)) for g in gf.generators]
        gf.named_elements = {k: format_cycles(parse_cycles(v, degree)) for k, v in gf.named_elements.items()}
        gf.named_subgroups = {k: [format_cycles(parse_cycles(g, degree)) for g in v]
                              for k, v in gf.named_subgroups.items()}
        return gf

    @classmethod
    def loads(cls, text: str) -> "GroupFile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> "GroupFile":
        return cls.loads(Path(path).read_text())

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())


def corpus_dir() -> Path:
    return Path(str(resources.files("engel_forge") / "data" / "corpus"))


def load_corpus(path: str | Path | None = None) -> list[GroupFile]:
    """All group files in a directory (or a single file), sorted by name."""
    path = Path(path) if path is not None else corpus_dir()
    files = [path] if path.is_file() else sorted(path.glob("*.json"))
    return sorted((GroupFile.load(f) for f in files), key=lambda gf: gf.name)


def find_group(name_or_path: str) -> GroupFile:
    """A group file by path, or by name in the bundled corpus."""
    p = Path(name_or_path)
    if p.is_file():
        return GroupFile.load(p)
    for gf in load_corpus():
        if gf.name == name_or_path:
            return gf
    raise InvalidInputError(f"no group file or corpus entry {name_or_path!r}")


# constructions


@dataclass
class Construction:
    """A group with distinguished elements and subgroups."""

    name: str
    degree: int
    generators: list[Permutation]
    elements: dict[str, Permutation] = field(default_factory=dict)
    subgroups: dict[str, list[Permutation]] = field(default_factory=dict)
    tags: list[str] = field(default_factory=list)

    def group(self) -> PermGroup:
        return PermGroup(self.degree, self.generators)

    def subgroup(self, name: str) -> PermGroup:
        return PermGroup(self.degree, self.subgroups[name])

    def to_file(self, name: str | None = None, provenance: str = "", tags: Iterable[str] | None = None) -> GroupFile:
        return GroupFile(name or self.name, self.degree, [g.cycle_string() for g in self.generators],
                         list(tags if tags is not None else self.tags), provenance,
                         {k: v.cycle_string() for k, v in self.elements.items()},
                         {k: [g.cycle_string() for g in v] for k, v in self.subgroups.items()})


def _perm(images: Sequence[int]) -> Permutation:
    return Permutation(images)


def _cycle(points: Sequence[int], degree: int) -> Permutation:
    return Permutation.from_cycles([points], degree)


def symmetric(n: int) -> Construction:
    if n < 1:
        raise InvalidInputError("Sym(n) needs n >= 1")
    gens = []
    if n >= 2:
        gens = [_cycle(range(n), n), _cycle([0, 1], n)]
    return Construction(f"Sym({n})", n, gens)


def alternating(n: int) -> Construction:
    if n < 1:
        raise InvalidInputError("Alt(n) needs n >= 1")
    gens = [_cycle([0, 1, i], n) for i in range(2, n)]
    return Construction(f"Alt({n})", n, gens)


def cyclic(n: int) -> Construction:
    if n < 1:
        raise InvalidInputError("Cyclic(n) needs n >= 1")
    return Construction(f"Cyclic({n})", n, [_cycle(range(n), n)] if n > 1 else [])


def dihedral(n: int) -> Construction:
    """The symmetry group of an ``n``-gon, of order ``2n``."""
    if n < 3:
        raise InvalidInputError("Dihedral(n) needs n >= 3")
    reflection = _perm([(-i) % n for i in range(n)])
    return Construction(f"Dihedral({n})", n, [_cycle(range(n), n), reflection])


def _shift(p: Sequence[int], offset: int, degree: int) -> Permutation:
    images = list(range(degree))
    for i, j in enumerate(p):
        images[offset + i] = offset + j
    return Permutation._trusted(tuple(images))


def direct_product(*parts: Construction) -> Construction:
    if not parts:
        raise InvalidInputError("direct product of nothing")
    degree = sum(c.degree for c in parts)
    gens: list[Permutation] = []
    subgroups: dict[str, list[Permutation]] = {}
    offset = 0
    for i, c in enumerate(parts, 1):
        shifted = [_shift(g, offset, degree) for g in c.generators]
        gens += shifted
        subgroups[f"factor{i}"] = shifted
        offset += c.degree
    return Construction("DirectProduct(" + ", ".join(c.name for c in parts) + ")", degree, gens,
                        subgroups=subgroups)


def _multiplicative_order(m: int, n: int) -> int:
    k, x = 1, m % n
    while x != 1:
        x = x * m % n
        k += 1
    return k


def semidirect_power_map(n: int, multiplier: int | None = None, alpha_order: int | None = None) -> Construction:
    """``C_n`` extended by ``alpha: i -> multiplier * i (mod n)`` on ``n`` points.

    Give either the multiplier or the order of ``alpha``; in the latter case the
    least multiplier of that order modulo ``n`` is used.
    """
    if n < 2:
        raise InvalidInputError("semidirect product needs n >= 2")
    if (multiplier is None) == (alpha_order is None):
        raise InvalidInputError("give exactly one of multiplier and alpha_order")
    if multiplier is None:
        choices = [m for m in range(1, n) if math.gcd(m, n) == 1 and _multiplicative_order(m, n) == alpha_order]
        if not choices:
            raise InvalidInputError(f"no unit of order {alpha_order} modulo {n}")
        multiplier = choices[0]
    if math.gcd(multiplier, n) != 1:
        raise InvalidInputError("multiplier must be a unit modulo n")
    shift = _cycle(range(n), n)
    alpha = _perm([(multiplier * i) % n for i in range(n)])
    gens = [shift] + ([alpha] if not alpha.is_identity() else [])
    return Construction(f"SemidirectByPowerMap({n}, {multiplier})", n, gens,
                        elements={"alpha": alpha}, subgroups={"normal": [shift]})


def affine(p: int, matrix: Sequence[Sequence[int]]) -> Construction:
    """Translations of ``F_p^d`` extended by one linear map, on ``p^d`` points."""
    d = len(matrix)
    if p < 2 or any(len(row) != d for row in matrix):
        raise InvalidInputError("need a prime p and a square matrix")
    vectors = [tuple((index // p ** j) % p for j in range(d)) for index in range(p ** d)]
    where = {v: i for i, v in enumerate(vectors)}

    def apply(f) -> Permutation:
        return _perm([where[f(v)] for v in vectors])

    translations = [apply(lambda v, j=j: tuple((v[i] + (i == j)) % p for i in range(d))) for j in range(d)]
    alpha = apply(lambda v: tuple(sum(matrix[i][j] * v[j] for j in range(d)) % p for i in range(d)))
    if sorted(alpha) != list(range(len(vectors))):
        raise InvalidInputError("matrix is not invertible")
    return Construction(f"Affine({p}, {[list(r) for r in matrix]})", len(vectors), translations + [alpha],
                        elements={"alpha": alpha}, subgroups={"normal": translations})


def wreath_cyclic(S: Construction, r: int) -> Construction:
    """``S^r`` extended by the block ``r``-cycle ``phi`` on ``r * deg(S)`` points."""
    if r < 1:
        raise InvalidInputError("wreath product needs r >= 1")
    d = S.degree
    degree = r * d
    base = [_shift(g, i * d, degree) for i in range(r) for g in S.generators]
    phi = _perm([(i + d) % degree for i in range(degree)])
    gens = base + ([phi] if r > 1 else [])
    subgroups = {"base": base, "factor1": [_shift(g, 0, degree) for g in S.generators]}
    return Construction(f"WreathCyclicTop({S.name}, {r})", degree, gens,
                        elements={"phi": phi}, subgroups=subgroups)


def wreath(S: Construction, T: Construction) -> Construction:
    """``S wr T`` in its imprimitive action: ``T`` permutes ``deg(T)`` blocks of size ``deg(S)``."""
    d, t = S.degree, T.degree
    degree = d * t
    base = [_shift(g, 0, degree) for g in S.generators]
    top = [_perm([g[i // d] * d + i % d for i in range(degree)]) for g in T.generators]
    all_base = [_shift(g, b * d, degree) for b in range(t) for g in S.generators]
    return Construction(f"Wreath({S.name}, {T.name})", degree, base + top,
                        subgroups={"base": all_base, "factor1": base, "top": top})


def special_linear_2(p: int) -> Construction:
    """``SL(2, p)`` acting on the ``p^2 - 1`` nonzero vectors of ``F_p^2``."""
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise InvalidInputError("SL(2, p) needs a prime p")
    vectors = [(a, b) for a in range(p) for b in range(p) if (a, b) != (0, 0)]
    where = {v: i for i, v in enumerate(vectors)}

    def mat(m) -> Permutation:
        return _perm([where[((m[0][0] * a + m[0][1] * b) % p, (m[1][0] * a + m[1][1] * b) % p)]
                      for a, b in vectors])

    gens = [mat(((1, 1), (0, 1))), mat(((0, p - 1), (1, 0)))]
    return Construction(f"SL(2, {p})", len(vectors), gens, elements={"minus_one": mat(((p - 1, 0), (0, p - 1)))})


CONSTRUCTIONS = {
    "sym": symmetric,
    "alt": alternating,
    "cyclic": cyclic,
    "dihedral": dihedral,
    "direct": direct_product,
    "semidirect": semidirect_power_map,
    "affine": affine,
    "wreath_cyclic": wreath_cyclic,
    "wreath": wreath,
    "sl2": special_linear_2,
}


def construct(expr: str) -> Construction:
    """Evaluate a construction expression such as ``"wreath_cyclic(alt(5), 2)"``.

    Only the names in ``CONSTRUCTIONS``, integer literals and lists or tuples
    of them are allowed.
    """
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"malformed construction: {exc.msg}", (exc.offset or 1) - 1) from None

    def ev(node):
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            fn = CONSTRUCTIONS.get(node.func.id)
            if fn is None:
                raise ParseError(f"unknown construction {node.func.id!r}", node.col_offset)
            args = [ev(a) for a in node.args]
            kwargs = {k.arg: ev(k.value) for k in node.keywords}
            try:
                return fn(*args, **kwargs)
            except TypeError as exc:
                raise ParseError(f"bad arguments to {node.func.id}: {exc}", node.col_offset) from None
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, (ast.List, ast.Tuple)):
            return [ev(e) for e in node.elts]
        raise ParseError("unsupported expression", getattr(node, "col_offset", 0))

    result = ev(tree.body)
    if not isinstance(result, Construction):
        raise ParseError("expression does not describe a group", 0)
    return result
