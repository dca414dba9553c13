"""Explicit group presentations attached to a labelled graph.

Words are tuples of ``(generator, ±1)`` letters. Relator order is stable:
Artin relators per edge, then added power relators for vertices, then for
edges, each in declaration order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .classify import odd_decomposition
from .graph import GraphError, LabelledGraph

Word = tuple  # tuple[tuple[str, int], ...]


class PresentationError(ValueError):
    pass


def reduce_word(letters) -> Word:
    """Cancel adjacent inverse pairs."""
    out: list[tuple[str, int]] = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return reduce_word(w * k)


def prod_word(a: str, b: str, n: int) -> Word:
    """Alternating word a b a b ... of length n."""
    if n < 1:
        raise PresentationError(f"prod length must be >= 1, got {n}")
    return tuple(((a, b)[i % 2], 1) for i in range(n))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise PresentationError("duplicate generator")
        for w in self.relators:
            for g, e in w:
                if g not in gens:
                    raise PresentationError(f"relator uses undeclared generator {g!r}")
                if e not in (1, -1):
                    raise PresentationError(f"bad exponent {e!r}")

    def relator_set(self) -> frozenset:
        return frozenset(self.relators)

    def to_text(self) -> str:
        return format_presentation(self)

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [[[g, e] for g, e in w] for w in self.relators],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Presentation":
        return cls(tuple(data["generators"]), tuple(tuple((g, int(e)) for g, e in w) for w in data["relators"]))


# -- constructions -------------------------------------------------------


def artin_relator(a: str, b: str, m: int) -> Word:
    return reduce_word(prod_word(a, b, m) + inverse(prod_word(b, a, m)))


def artin_presentation(g: LabelledGraph) -> Presentation:
    rels = tuple(artin_relator(u, v, m) for u, v, m in g.edge_list())
    return Presentation(g.vertices, rels)


def _check_n(N: int):
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise PresentationError(f"N must be a positive integer, got {N!r}")


def shephard_presentation(g: LabelledGraph, N: int) -> Presentation:
    _check_n(N)
    base = artin_presentation(g)
    extra = tuple(power(((c, 1),), N) for c in g.vertices)
    return Presentation(base.generators, base.relators + extra)


def dihedral_power(a: str, b: str, m: int, k: int) -> Word:
    """(ab)^(m*k)."""
    return power(((a, 1), (b, 1)), m * k)


def hyperbolic_quotient_presentation(g: LabelledGraph, N: int) -> Presentation:
    shep = shephard_presentation(g, N)
    extra = tuple(dihedral_power(u, v, m, N) for u, v, m in g.edge_list())
    return Presentation(shep.generators, shep.relators + extra)


# -- kernels -------------------------------------------------------------


@dataclass(frozen=True)
class KernelSpec:
    """Base classes with multipliers.

    A class is ``("component", v)`` naming the odd component of vertex v, or
    ``("edge", u, v)`` naming the dihedral on edge uv.
    """

    base: tuple[tuple, ...]
    multipliers: tuple[int, ...]

    def __post_init__(self):
        if len(self.base) != len(self.multipliers):
            raise PresentationError("one multiplier per base class is required")
        for m in self.multipliers:
            if isinstance(m, bool) or not isinstance(m, int) or m < 1:
                raise PresentationError(f"multipliers must be positive integers, got {m!r}")

    def to_dict(self) -> dict:
        return {"base": [list(c) for c in self.base], "multipliers": list(self.multipliers)}


def _resolve(g: LabelledGraph, cls) -> tuple:
    """Canonical key for a base class: ('component', index) or ('edge', frozenset)."""
    kind = cls[0]
    if kind == "component":
        dec = odd_decomposition(g)
        return ("component", dec.component_of(cls[1]))
    if kind == "edge":
        u, v = cls[1], cls[2]
        if not g.has_edge(u, v):
            raise PresentationError(f"unknown edge class {u}-{v}")
        return ("edge", frozenset((u, v)))
    raise PresentationError(f"unknown class kind {kind!r}")


def full_base(g: LabelledGraph, N: int) -> KernelSpec:
    """Every odd component and every edge, all with multiplier N."""
    dec = odd_decomposition(g)
    base = [("component", c[0]) for c in dec.components]
    base += [("edge", u, v) for u, v, _ in g.edge_list()]
    return KernelSpec(tuple(base), (N,) * len(base))


def kernel_presentation(g: LabelledGraph, spec: KernelSpec) -> Presentation:
    dec = odd_decomposition(g)
    comp_mult: dict[int, int] = {}
    edge_mult: dict[frozenset, int] = {}
    for cls, m in zip(spec.base, spec.multipliers):
        try:
            kind, key = _resolve(g, cls)
        except GraphError as exc:
            raise PresentationError(f"unknown class {cls!r}: {exc}") from None
        table = comp_mult if kind == "component" else edge_mult
        if key in table:
            raise PresentationError(f"duplicate class {cls!r}")
        table[key] = m
    base = artin_presentation(g)
    extra = []
    for i, comp in enumerate(dec.components):
        if i in comp_mult:
            extra.append(power(((comp[0], 1),), comp_mult[i]))
    for u, v, m in g.edge_list():
        key = frozenset((u, v))
        if key in edge_mult:
            extra.append(dihedral_power(u, v, m, edge_mult[key]))
    return Presentation(base.generators, base.relators + tuple(extra))


def is_deep_enough(spec: KernelSpec | tuple, d: int) -> bool:
    mults = spec.multipliers if isinstance(spec, KernelSpec) else tuple(spec)
    if d < 1:
        raise PresentationError("divisor must be >= 1")
    return all(m % d == 0 for m in mults)


def normalize_generator_powers(p: Presentation, g: LabelledGraph) -> frozenset:
    """Relator set with each ``c^k`` replaced by ``s^k``, s the representative of c's odd component.

    Conjugate generators have conjugate powers, so the normal closure is unchanged.
    """
    dec = odd_decomposition(g)
    rep = {v: c[0] for c in dec.components for v in c}
    out = set()
    for w in p.relators:
        gens = {x for x, _ in w}
        if len(gens) == 1 and len({e for _, e in w}) == 1:
            (x,) = gens
            out.add(tuple((rep[x], e) for _, e in w))
        else:
            out.add(w)
    return frozenset(out)


# -- abelianization ------------------------------------------------------


def relation_matrix(p: Presentation) -> list[list[int]]:
    col = {g: i for i, g in enumerate(p.generators)}
    rows = []
    for w in p.relators:
        row = [0] * len(p.generators)
        for g, e in w:
            row[col[g]] += e
        rows.append(row)
    return rows


def smith_diagonal(matrix: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form, each dividing the next."""
    a = [list(r) for r in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best, pivot = abs(a[i][j]), (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    for r in a:
                        r[j] -= q * r[t]
                    if a[t][j]:
                        done = False
            if done:
                # the pivot must divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                best, pivot = None, None
                for i in range(t, rows):
                    if a[i][t] and (best is None or abs(a[i][t]) < best):
                        best, pivot = abs(a[i][t]), (i, t)
                for j in range(t, cols):
                    if a[t][j] and (best is None or abs(a[t][j]) < best):
                        best, pivot = abs(a[t][j]), (t, j)
                i, j = pivot
                a[t], a[i] = a[i], a[t]
                for r in a:
                    r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank x Z/t1 x ... with t1 | t2 | ... and every ti > 1."""

    rank: int
    torsion: tuple[int, ...]

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank:
            parts.insert(0, "Z" if self.rank == 1 else f"Z^{self.rank}")
        return " x ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def abelianization(p: Presentation) -> AbelianGroup:
    diag = smith_diagonal(relation_matrix(p))
    return AbelianGroup(len(p.generators) - len(diag), tuple(d for d in diag if d != 1))


# -- text grammar --------------------------------------------------------


def _inv_token(g: str) -> str:
    up = g.upper()
    return up if up != g and g == g.lower() else f"{g}^-1"


def _period(w: Word) -> int:
    n = len(w)
    for p in range(1, n // 2 + 1):
        if n % p == 0 and w == w[:p] * (n // p):
            return p
    return n


def format_word(w: Word) -> str:
    if not w:
        return "1"
    p = _period(w)
    body = " ".join(x if e == 1 else _inv_token(x) for x, e in w[:p])
    k = len(w) // p
    if k == 1:
        return body
    if p == 1:
        return f"{body}^{k}"
    return f"({body})^{k}"


def format_presentation(p: Presentation) -> str:
    lines = ["gen " + " ".join(p.generators)]
    lines += ["rel " + format_word(w) for w in p.relators]
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(r"\(|\)(?:\^(-?\d+))?|[^\s()]+")


def parse_word(text: str, generators) -> Word:
    gens = set(generators)
    inv = {_inv_token(g): g for g in gens if _inv_token(g) != f"{g}^-1"}
    stack: list[list] = [[]]
    for m in _TOKEN.finditer(text):
        tok = m.group(0)
        if tok == "(":
            stack.append([])
        elif tok.startswith(")"):
            if len(stack) == 1:
                raise PresentationError(f"unbalanced ')' in {text!r}")
            inner = tuple(stack.pop())
            k = int(m.group(1)) if m.group(1) is not None else 1
            stack[-1].extend(power(inner, k))
        elif tok == "1":
            continue
        else:
            base, _, exp = tok.partition("^")
            k = int(exp) if exp else 1
            if base in gens:
                letter = (base, 1)
            elif base in inv:
                letter = (inv[base], -1)
            else:
                raise PresentationError(f"unknown generator {base!r}")
            stack[-1].extend(power((letter,), k))
    if len(stack) != 1:
        raise PresentationError(f"unbalanced '(' in {text!r}")
    return reduce_word(stack[0])


def parse_presentation(text: str) -> Presentation:
    gens: list[str] | None = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "gen":
            if gens is not None:
                raise PresentationError(f"line {lineno}: second gen line")
            gens = rest.split()
        elif head == "rel":
            if gens is None:
                raise PresentationError(f"line {lineno}: rel before gen")
            try:
                rels.append(parse_word(rest, gens))
            except PresentationError as exc:
                raise PresentationError(f"line {lineno}: {exc}") from None
        else:
            raise PresentationError(f"line {lineno}: unknown directive {head!r}")
    if gens is None:
        raise PresentationError("missing gen line")
    return Presentation(tuple(gens), tuple(rels))


def parse_kernel_spec(text: str) -> KernelSpec:
    """Lines ``component <vertex> <M>`` or ``edge <u> <v> <M>``."""
    base, mults = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        try:
            if toks[0] == "component" and len(toks) == 3:
                base.append(("component", toks[1]))
                mults.append(int(toks[2]))
            elif toks[0] == "edge" and len(toks) == 4:
                base.append(("edge", toks[1], toks[2]))
                mults.append(int(toks[3]))
            else:
                raise PresentationError(f"line {lineno}: expected 'component <v> <M>' or 'edge <u> <v> <M>'")
        except ValueError as exc:
            if isinstance(exc, PresentationError):
                raise
            raise PresentationError(f"line {lineno}: multiplier is not an integer") from None
    return KernelSpec(tuple(base), tuple(mults))
