"""Structural classification of Artin defining graphs.

Covers type flags, the odd-component decomposition with hanging components,
the product region graph and its discreteness test, abelianization ranks, and
the Hopf verdict for large hyperbolic type.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import GraphError, LabelledGraph, connected_components, odd_subgraph, triangles


class HypothesisError(ValueError):
    """An operation was called outside the regime where it is defined."""


class Hanging(str, enum.Enum):
    NOT_HANGING = "not-hanging"
    BROAD = "broad"
    NEEDLE = "needle"
    FORBIDDEN_SINGLETON = "forbidden-singleton"


class Outcome(str, enum.Enum):
    HOPFIAN = "HOPFIAN"
    UNKNOWN = "UNKNOWN"


class Branch(str, enum.Enum):
    SMALL = "small"
    FREE_PRODUCT = "free-product"
    SINGLE_ODD = "single-odd"
    THREE_PLUS_ODD = "three-plus-odd"
    TWO_ODD_NEEDLE = "two-odd-needle"
    TWO_ODD_BROAD = "two-odd-broad"
    FAILS = "fails-hypotheses"


@dataclass(frozen=True)
class TypeFlags:
    large: bool
    hyperbolic: bool
    even: bool
    extra_large: bool
    xxxl: bool
    free_of_infinity: bool
    connected: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def type_flags(g: LabelledGraph) -> TypeFlags:
    labels = list(g.edges.values())
    n = len(g)
    return TypeFlags(
        large=all(m >= 3 for m in labels),
        hyperbolic=not bad_triangles(g),
        even=all(m % 2 == 0 for m in labels),
        # "extra-large" is taken to mean every label is at least 4
        extra_large=all(m >= 4 for m in labels),
        xxxl=all(m >= 6 for m in labels),
        free_of_infinity=len(g.edges) == n * (n - 1) // 2,
        connected=g.is_connected(),
    )


def bad_triangles(g: LabelledGraph) -> list[tuple[str, str, str]]:
    """Triangles whose reciprocal label sum is at least one."""
    out = []
    for a, b, c in triangles(g):
        s = Fraction(1, g.label(a, b)) + Fraction(1, g.label(b, c)) + Fraction(1, g.label(a, c))
        if s >= 1:
            out.append((a, b, c))
    return out


# -- odd decomposition ---------------------------------------------------


@dataclass(frozen=True)
class OddDecomposition:
    """Odd components (in order of first vertex), their graph and hanging kinds.

    ``oc_edges`` holds index pairs ``(i, j)`` with ``i < j`` into ``components``.
    """

    components: tuple[tuple[str, ...], ...]
    oc_edges: frozenset
    hanging: tuple[Hanging, ...]

    def component_of(self, v: str) -> int:
        for i, comp in enumerate(self.components):
            if v in comp:
                return i
        raise GraphError(f"unknown vertex {v!r}")

    def oc_degree(self, i: int) -> int:
        return sum(1 for e in self.oc_edges if i in e)

    def to_dict(self) -> dict:
        return {
            "components": [list(c) for c in self.components],
            "oc_edges": sorted([list(e) for e in self.oc_edges]),
            "hanging": [h.value for h in self.hanging],
        }


def odd_decomposition(g: LabelledGraph) -> OddDecomposition:
    comps = tuple(connected_components(odd_subgraph(g)))
    where = {v: i for i, c in enumerate(comps) for v in c}
    oc = set()
    for pair, m in g.edges.items():
        if m % 2 == 0:
            a, b = pair
            i, j = where[a], where[b]
            if i != j:
                oc.add((min(i, j), max(i, j)))
    deg = [0] * len(comps)
    for i, j in oc:
        deg[i] += 1
        deg[j] += 1
    kinds = []
    for i, comp in enumerate(comps):
        if len(comps) < 2 or deg[i] > 1:
            kinds.append(Hanging.NOT_HANGING)
        elif len(comp) > 1:
            kinds.append(Hanging.BROAD)
        elif g.degree(comp[0]) == 1:
            kinds.append(Hanging.NEEDLE)
        else:
            kinds.append(Hanging.FORBIDDEN_SINGLETON)
    return OddDecomposition(comps, frozenset(oc), tuple(kinds))


def even_leaf_tips(g: LabelledGraph) -> frozenset:
    tips = set()
    for v in g.vertices:
        nb = g.neighbours(v)
        if len(nb) == 1 and g.label(v, nb[0]) % 2 == 0:
            tips.add(v)
    return frozenset(tips)


# -- product region graph ------------------------------------------------


@dataclass(frozen=True)
class EdgeNode:
    """Edge vertex of the product region graph; never equal to a component tuple."""

    u: str
    v: str

    def __iter__(self):
        return iter((self.u, self.v))

    def __getitem__(self, i: int) -> str:
        return (self.u, self.v)[i]


@dataclass(frozen=True)
class PRGraph:
    """Bipartite graph between odd components and edges of the defining graph.

    Component nodes are tuples of vertices; edge nodes are ``EdgeNode`` pairs
    in declaration order. ``adjacency`` holds ``(component, edge)`` pairs.
    """

    component_nodes: tuple[tuple[str, ...], ...]
    edge_nodes: tuple[tuple[str, str], ...]
    adjacency: frozenset

    def neighbours(self, node) -> set:
        out = set()
        for c, e in self.adjacency:
            if c == node:
                out.add(e)
            elif e == node:
                out.add(c)
        return out

    def is_bipartite(self) -> bool:
        comps, edges = set(self.component_nodes), set(self.edge_nodes)
        if comps & edges or not all(isinstance(e, EdgeNode) for e in edges):
            return False
        return all(c in comps and e in edges for c, e in self.adjacency)

    def to_dict(self) -> dict:
        return {
            "components": [list(c) for c in self.component_nodes],
            "edges": [list(e) for e in self.edge_nodes],
            "adjacency": sorted([[list(c), list(e)] for c, e in self.adjacency]),
        }

    def to_dot(self, name: str = "PR") -> str:
        def cname(c):
            return "O{" + ",".join(c) + "}"

        def ename(e):
            return f"e_{e[0]}{e[1]}" if all(len(x) == 1 for x in e) else f"e_{e[0]}_{e[1]}"

        lines = [f"graph {name} {{"]
        lines += [f'  "{cname(c)}" [shape=box];' for c in self.component_nodes]
        lines += [f'  "{ename(e)}" [shape=ellipse];' for e in self.edge_nodes]
        order = {e: i for i, e in enumerate(self.edge_nodes)}
        corder = {c: i for i, c in enumerate(self.component_nodes)}
        for c, e in sorted(self.adjacency, key=lambda ce: (corder[ce[0]], order[ce[1]])):
            lines.append(f'  "{cname(c)}" -- "{ename(e)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def product_region_graph(g: LabelledGraph) -> PRGraph:
    if not g.is_connected():
        raise HypothesisError("product region graph needs a connected defining graph")
    if len(g) < 3:
        raise HypothesisError("product region graph needs at least three vertices")
    if not type_flags(g).large:
        raise HypothesisError("product region graph needs large type (all labels >= 3)")
    dec = odd_decomposition(g)
    tips = even_leaf_tips(g)
    comps = tuple(c for c in dec.components if not set(c) <= tips)
    edges = tuple(EdgeNode(u, v) for u, v, _ in g.edge_list())
    adj = frozenset((c, e) for c in comps for e in edges if e[0] in c or e[1] in c)
    return PRGraph(comps, edges, adj)


def pr_discrete_after_removal(pr: PRGraph, removed) -> bool:
    removed = {tuple(c) for c in removed}
    for c in removed:
        if c not in pr.component_nodes:
            raise HypothesisError(f"{c!r} is not a component vertex of the product region graph")
    return all(c in removed for c, _ in pr.adjacency)


# -- abelianization ranks ------------------------------------------------


def abelianization_rank(g: LabelledGraph) -> int:
    return len(odd_decomposition(g).components)


def dihedral_image_rank(g: LabelledGraph, a: str, b: str) -> int:
    """Rank of the image of the dihedral parabolic on edge ab in the abelianization."""
    if not g.has_edge(a, b):
        raise GraphError(f"unknown edge {a}-{b}")
    dec = odd_decomposition(g)
    return 1 if dec.component_of(a) == dec.component_of(b) else 2


def centralizer_image_rank(g: LabelledGraph, a: str) -> int | str:
    """Rank of the image of the centralizer of generator ``a``: 2, ``"≥3"``, or 1.

    1 only happens with a single odd component, where the whole
    abelianization has rank 1.
    """
    g.index(a)
    if not g.is_connected() or len(g) < 3:
        raise HypothesisError("centralizer rank needs a connected graph on at least three vertices")
    dec = odd_decomposition(g)
    i = dec.component_of(a)
    deg = dec.oc_degree(i)
    if deg == 0:
        return 1
    if dec.hanging[i] is not Hanging.NOT_HANGING:
        return 2
    return "≥3"


def stabilizer_image_rank(g: LabelledGraph, which) -> int | str:
    """``which`` is a 2-tuple (dihedral on an edge) or a single vertex (centralizer)."""
    if isinstance(which, str):
        return centralizer_image_rank(g, which)
    a, b = which
    return dihedral_image_rank(g, a, b)


# -- Hopf verdict --------------------------------------------------------


@dataclass(frozen=True)
class HopfVerdict:
    outcome: Outcome
    branch: Branch
    obstructions: tuple[str, ...] = ()
    parts: tuple["HopfVerdict", ...] = field(default=(), compare=False)

    @property
    def hopfian(self) -> bool:
        return self.outcome is Outcome.HOPFIAN

    def summary(self) -> str:
        if self.hopfian:
            return f"HOPFIAN ({self.branch.value})"
        return "UNKNOWN: " + "; ".join(self.obstructions)

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "justification": self.branch.value,
            "obstructions": list(self.obstructions),
        }


def _fmt_set(vs) -> str:
    return "{" + ",".join(vs) + "}"


def hypothesis_obstructions(g: LabelledGraph) -> list[str]:
    """Large and hyperbolic type violations, in a stable order."""
    obs = []
    for u, v, m in g.edge_list():
        if m < 3:
            obs.append(f"non-large label {m} on edge {u}-{v}")
    for t in bad_triangles(g):
        obs.append(f"bad triangle {_fmt_set(t)}")
    return obs


def hopf_verdict(g: LabelledGraph) -> HopfVerdict:
    obs = hypothesis_obstructions(g)
    if obs:
        return HopfVerdict(Outcome.UNKNOWN, Branch.FAILS, tuple(obs))
    comps = connected_components(g)
    if len(comps) > 1:
        parts = tuple(_connected_verdict(g.subgraph(c)) for c in comps)
        if all(p.hopfian for p in parts):
            return HopfVerdict(Outcome.HOPFIAN, Branch.FREE_PRODUCT, (), parts)
        bad = tuple(o for p in parts for o in p.obstructions)
        return HopfVerdict(Outcome.UNKNOWN, Branch.FAILS, bad, parts)
    return _connected_verdict(g)


def _connected_verdict(g: LabelledGraph) -> HopfVerdict:
    if len(g) <= 2:
        return HopfVerdict(Outcome.HOPFIAN, Branch.SMALL)
    dec = odd_decomposition(g)
    forbidden = [c for c, h in zip(dec.components, dec.hanging) if h is Hanging.FORBIDDEN_SINGLETON]
    if forbidden:
        return HopfVerdict(
            Outcome.UNKNOWN,
            Branch.FAILS,
            tuple(f"forbidden singleton hanging component {_fmt_set(c)}" for c in forbidden),
        )
    k = len(dec.components)
    if k == 1:
        branch = Branch.SINGLE_ODD
    elif k == 2:
        branch = Branch.TWO_ODD_NEEDLE if Hanging.NEEDLE in dec.hanging else Branch.TWO_ODD_BROAD
    else:
        branch = Branch.THREE_PLUS_ODD
    return HopfVerdict(Outcome.HOPFIAN, branch)


def theorem_applicable(g: LabelledGraph) -> bool:
    """Whether every hypothesis of the Hopf criterion holds for ``g``."""
    return hopf_verdict(g).hopfian


# -- informational flags -------------------------------------------------


def known_classes_report(g: LabelledGraph) -> list[str]:
    flags = type_flags(g)
    out = []
    if not triangles(g):
        out.append("triangle-free")
    if flags.even:
        out.append("even (FC type not decided)")
    if flags.xxxl:
        out.append("XXXL")
    if flags.free_of_infinity:
        out.append("free-of-infinity")
    if len(odd_decomposition(g).components) == 1:
        out.append("single-odd-component")
    return out


@dataclass(frozen=True)
class ClassificationReport:
    vertices: int
    edges: int
    flags: TypeFlags
    decomposition: OddDecomposition
    even_leaf_tips: tuple[str, ...]
    abelianization_rank: int
    verdict: HopfVerdict
    known_classes: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices,
            "edges": self.edges,
            "flags": self.flags.to_dict(),
            "odd_decomposition": self.decomposition.to_dict(),
            "even_leaf_tips": list(self.even_leaf_tips),
            "abelianization_rank": self.abelianization_rank,
            "verdict": self.verdict.to_dict(),
            "known_classes": list(self.known_classes),
        }

    def to_text(self) -> str:
        f = self.flags
        lines = [
            f"vertices: {self.vertices}  edges: {self.edges}",
            "flags: " + ", ".join(k for k, v in f.to_dict().items() if v),
            "odd components: " + " ".join(_fmt_set(c) for c in self.decomposition.components),
        ]
        hang = [
            f"{_fmt_set(c)}={h.value}"
            for c, h in zip(self.decomposition.components, self.decomposition.hanging)
            if h is not Hanging.NOT_HANGING
        ]
        lines.append("hanging: " + (" ".join(hang) if hang else "none"))
        lines.append(f"abelianization rank: {self.abelianization_rank}")
        lines.append("known classes: " + (", ".join(self.known_classes) or "none"))
        lines.append("verdict: " + self.verdict.summary())
        return "\n".join(lines) + "\n"


def classify(g: LabelledGraph) -> ClassificationReport:
    dec = odd_decomposition(g)
    return ClassificationReport(
        vertices=len(g),
        edges=len(g.edges),
        flags=type_flags(g),
        decomposition=dec,
        even_leaf_tips=g.sort(even_leaf_tips(g)),
        abelianization_rank=len(dec.components),
        verdict=hopf_verdict(g),
        known_classes=tuple(known_classes_report(g)),
    )
