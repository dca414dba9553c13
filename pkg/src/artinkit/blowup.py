"""Blowups of support graphs and finite combinatorial-HHS checks.

Vertices of a blowup are the support vertices (tips) followed by the leaves
of each tip. Internally vertex sets are bitmasks over that order; the public
functions take and return frozensets of vertex names.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .delta import bfs_distances, diameter, four_point_delta
from .graph import GraphError, LabelledGraph, _tokens, squares, triangles


class BlowupError(ValueError):
    pass


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class BlowupComplex:
    """Blowup of ``support`` where tip v is replaced by the star of v over ``leaves[v]``.

    Squids of adjacent support vertices span joins; leaves of the same tip are
    pairwise non-adjacent.
    """

    def __init__(self, support: LabelledGraph, leaves: Mapping[str, Iterable[str]] | None = None):
        leaves = {v: tuple(ls) for v, ls in (leaves or {}).items()}
        for v in leaves:
            if v not in support:
                raise BlowupError(f"leaf set for unknown support vertex {v!r}")
        self.support = support
        self.leaves = {v: leaves.get(v, ()) for v in support.vertices}
        names = list(support.vertices)
        for v in support.vertices:
            names.extend(self.leaves[v])
        if len(set(names)) != len(names):
            raise BlowupError("leaf identifiers must be distinct from each other and from support vertices")
        self.vertices: tuple[str, ...] = tuple(names)
        self.index = {x: i for i, x in enumerate(names)}
        self.tip = {v: v for v in support.vertices}
        for v in support.vertices:
            for x in self.leaves[v]:
                self.tip[x] = v
        self.squid = {v: (1 << self.index[v]) | self.mask(self.leaves[v]) for v in support.vertices}
        nbr = [0] * len(names)
        for x in names:
            v = self.tip[x]
            m = 0
            for w in support.neighbours(v):
                m |= self.squid[w]
            if x == v:
                m |= self.mask(self.leaves[v])
            else:
                m |= 1 << self.index[v]
            nbr[self.index[x]] = m
        self.nbr = nbr
        self.full = (1 << len(names)) - 1
        self._simplices: list[int] | None = None

    # -- conversions -----------------------------------------------------

    def mask(self, vs: Iterable[str]) -> int:
        m = 0
        for x in vs:
            try:
                m |= 1 << self.index[x]
            except KeyError:
                raise BlowupError(f"unknown vertex {x!r}") from None
        return m

    def names(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in _bits(mask))

    def ordered(self, vs: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(vs, key=self.index.__getitem__))

    def retract(self, x: str) -> str:
        """The Lipschitz retraction onto the support."""
        return self.tip[x]

    def preimage(self, support_vertices: Iterable[str]) -> frozenset:
        m = 0
        for v in support_vertices:
            m |= self.squid[v]
        return self.names(m)

    def edges(self) -> list[tuple[str, str]]:
        out = []
        for i, x in enumerate(self.vertices):
            for j in _bits(self.nbr[i] >> (i + 1) << (i + 1)):
                out.append((x, self.vertices[j]))
        return out

    def adjacency(self) -> dict:
        return {x: tuple(self.vertices[j] for j in _bits(self.nbr[i])) for i, x in enumerate(self.vertices)}

    # -- simplices ---------------------------------------------------------

    def is_clique(self, mask: int) -> bool:
        for i in _bits(mask):
            if (mask & ~(1 << i)) & ~self.nbr[i]:
                return False
        return True

    def link_mask(self, mask: int) -> int:
        out = self.full
        for i in _bits(mask):
            out &= self.nbr[i]
        return out & ~mask

    def set_link_mask(self, mask: int) -> int:
        """Link of an arbitrary vertex set: common neighbours outside the set."""
        return self.link_mask(mask)

    def simplices(self) -> list[int]:
        """All cliques including the empty simplex, as bitmasks."""
        if self._simplices is None:
            out = [0]

            def grow(clique: int, cand: int):
                for i in _bits(cand):
                    c = clique | (1 << i)
                    out.append(c)
                    grow(c, cand & self.nbr[i] & ~((1 << (i + 1)) - 1))

            grow(0, self.full)
            self._simplices = out
        return self._simplices

    def maximal_simplices(self) -> list[int]:
        return [s for s in self.simplices() if s and self.link_mask(s) == 0]

    def to_dict(self) -> dict:
        return {
            "support": {"vertices": list(self.support.vertices), "edges": [[u, v] for u, v, _ in self.support.edge_list()]},
            "leaves": {v: list(ls) for v, ls in self.leaves.items()},
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges()],
            "maximal_simplices": [format_simplex(self, self.names(s)) for s in sort_masks(self.maximal_simplices())],
        }


def blowup(support: LabelledGraph, leaves: Mapping[str, Iterable[str]] | None = None) -> BlowupComplex:
    return BlowupComplex(support, leaves)


def sort_masks(masks: Iterable[int]) -> list[int]:
    """Order simplices by their sorted vertex-index tuples (lexicographic)."""
    return sorted(masks, key=lambda m: tuple(_bits(m)))


def _simplex_mask(X: BlowupComplex, simplex: Iterable[str]) -> int:
    m = X.mask(simplex)
    if not X.is_clique(m):
        raise BlowupError(f"{sorted(simplex)} is not a simplex of the blowup")
    return m


def simplex_link(X: BlowupComplex, simplex: Iterable[str]) -> frozenset:
    return X.names(X.link_mask(_simplex_mask(X, simplex)))


def link_of_set(X: BlowupComplex, vertices: Iterable[str]) -> frozenset:
    return X.names(X.set_link_mask(X.mask(vertices)))


def saturation(X: BlowupComplex, simplex: Iterable[str]) -> frozenset:
    lk = X.link_mask(_simplex_mask(X, simplex))
    out = 0
    for s in X.simplices():
        if X.link_mask(s) == lk:
            out |= s
    return X.names(out)


@dataclass(frozen=True)
class SimplexClass:
    representative: frozenset
    link: frozenset
    members: tuple[frozenset, ...]


def _class_masks(X: BlowupComplex) -> dict[int, list[int]]:
    """Link mask -> member simplices (non-maximal only), members sorted."""
    classes: dict[int, list[int]] = {}
    for s in X.simplices():
        lk = X.link_mask(s)
        if lk:
            classes.setdefault(lk, []).append(s)
    return {lk: sort_masks(ms) for lk, ms in classes.items()}


def simplex_classes(X: BlowupComplex) -> list[SimplexClass]:
    """Classes of non-maximal simplices with equal links, ordered by representative."""
    out = []
    for lk, members in _class_masks(X).items():
        out.append((tuple(_bits(members[0])), SimplexClass(X.names(members[0]), X.names(lk), tuple(X.names(m) for m in members))))
    return [c for _, c in sorted(out, key=lambda t: t[0])]


# -- link classification ---------------------------------------------------


class LinkCase(str, enum.Enum):
    EMPTY = "empty"
    EDGE = "edge-type"
    TRIANGLE = "triangle-type"
    MAXIMAL = "maximal"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class LinkClassification:
    case: LinkCase
    link: frozenset
    predicted: frozenset | None
    diameter: float
    vertex_or_join: bool

    @property
    def formula_holds(self) -> bool:
        """Whether the directly computed link matches the case's formula."""
        if self.case is LinkCase.BOUNDED:
            return self.vertex_or_join and self.diameter <= 2
        return self.link == self.predicted

    def to_dict(self) -> dict:
        return {
            "case": self.case.value,
            "link": sorted(self.link),
            "diameter": self.diameter if self.diameter != float("inf") else "inf",
            "vertex_or_join": self.vertex_or_join,
            "formula_holds": self.formula_holds,
        }


def check_support_hypotheses(support: LabelledGraph):
    if triangles(support):
        raise BlowupError("support graph has a triangle")
    for v in support.vertices:
        if support.degree(v) == 0:
            raise BlowupError(f"support component {{{v}}} is a single point")


def _is_vertex_or_join(X: BlowupComplex, m: int) -> bool:
    """A single vertex, or the induced graph splits as a non-trivial join.

    A join splits iff the complement graph on ``m`` is disconnected.
    """
    verts = list(_bits(m))
    if len(verts) == 1:
        return True
    if len(verts) < 2:
        return False
    seen = 1 << verts[0]
    stack = [verts[0]]
    while stack:
        i = stack.pop()
        for j in _bits(m & ~X.nbr[i] & ~(1 << i) & ~seen):
            seen |= 1 << j
            stack.append(j)
    return seen != m


def classify_simplex_link(X: BlowupComplex, simplex: Iterable[str]) -> LinkClassification:
    check_support_hypotheses(X.support)
    s = _simplex_mask(X, simplex)
    lk = X.link_mask(s)
    link = X.names(lk)
    adj = X.adjacency()
    diam = diameter(adj, link) if link else 0
    voj = _is_vertex_or_join(X, lk)
    names = X.names(s)
    tips = {x for x in names if X.tip[x] == x}
    leaves = names - tips
    support = {X.tip[x] for x in names}
    if not names:
        return LinkClassification(LinkCase.EMPTY, link, frozenset(X.vertices), diam, voj)
    by_tip = {v: {x for x in leaves if X.tip[x] == v} for v in support}
    full_squids = all(v in tips and len(by_tip[v]) == 1 for v in support)
    if len(support) == 1 and full_squids:
        (v,) = support
        pred = X.preimage(X.support.neighbours(v))
        return LinkClassification(LinkCase.EDGE, link, pred, diam, voj)
    if len(support) == 2 and tips == support:
        a, b = support
        if full_squids:
            return LinkClassification(LinkCase.MAXIMAL, link, frozenset(), diam, voj)
        if len(leaves) == 1:
            (x,) = leaves
            w = b if X.tip[x] == a else a
            pred = frozenset(X.leaves[w])
            return LinkClassification(LinkCase.TRIANGLE, link, pred, diam, voj)
    return LinkClassification(LinkCase.BOUNDED, link, None, diam, voj)


# -- relations ---------------------------------------------------------------


class Relation(str, enum.Enum):
    NESTED = "nested"
    ORTHOGONAL = "orthogonal"
    TRANSVERSE = "transverse"
    EQUAL = "equal"


def _relation_masks(X: BlowupComplex, l1: int, l2: int) -> Relation:
    if l1 == l2:
        return Relation.EQUAL
    if l1 & ~l2 == 0 or l2 & ~l1 == 0:
        return Relation.NESTED
    if l2 & ~X.set_link_mask(l1) == 0:
        return Relation.ORTHOGONAL
    return Relation.TRANSVERSE


def relation(X: BlowupComplex, s1: Iterable[str], s2: Iterable[str]) -> Relation:
    """Relation between the classes of two non-maximal simplices.

    NESTED covers containment of links in either direction; use
    :func:`is_nested` for the direction.
    """
    l1 = X.link_mask(_simplex_mask(X, s1))
    l2 = X.link_mask(_simplex_mask(X, s2))
    if not l1 or not l2:
        raise BlowupError("relations are defined for non-maximal simplices only")
    return _relation_masks(X, l1, l2)


def is_nested(X: BlowupComplex, s1: Iterable[str], s2: Iterable[str]) -> bool:
    l1 = X.link_mask(_simplex_mask(X, s1))
    l2 = X.link_mask(_simplex_mask(X, s2))
    return l1 & ~l2 == 0


def ell_class(X: BlowupComplex, v: str) -> frozenset | None:
    """A triangle-type simplex {(w,x),(v)} whose link is L_v, if one exists."""
    if not X.leaves[v]:
        return None
    for w in X.support.neighbours(v):
        if X.leaves[w]:
            return frozenset((w, X.leaves[w][0], v))
    return None


def u_class(X: BlowupComplex, v: str) -> frozenset | None:
    """An edge-type simplex {(v,x)} supported on v, if one exists."""
    if not X.leaves[v]:
        return None
    return frozenset((v, X.leaves[v][0]))


# -- chains ------------------------------------------------------------------


def longest_link_chain(X: BlowupComplex) -> int:
    """Length of the longest strictly increasing chain of links over all simplices."""
    links = sorted({X.link_mask(s) for s in X.simplices()}, key=lambda m: bin(m).count("1"))
    best: list[int] = []
    for i, m in enumerate(links):
        b = 1
        for j in range(i):
            if best[j] + 1 > b and links[j] & ~m == 0 and links[j] != m:
                b = best[j] + 1
        best.append(b)
    return max(best, default=0)


# -- X-graphs and augmentation -------------------------------------------------


class XGraph:
    """A graph on the maximal simplices of a blowup."""

    def __init__(self, X: BlowupComplex, edges: Iterable[tuple[Iterable[str], Iterable[str]]] = ()):
        self.X = X
        maximal = set(X.maximal_simplices())
        self.vertices = sort_masks(maximal)
        pairs = set()
        for a, b in edges:
            ma, mb = X.mask(a), X.mask(b)
            for m, orig in ((ma, a), (mb, b)):
                if m not in maximal:
                    raise BlowupError(f"W vertex {sorted(orig)} is not a maximal simplex")
            if ma == mb:
                raise BlowupError("W edges join distinct maximal simplices")
            pairs.add(frozenset((ma, mb)))
        self.edge_masks = pairs

    @classmethod
    def complete(cls, X: BlowupComplex) -> "XGraph":
        ms = sort_masks(X.maximal_simplices())
        return cls(X, [(X.names(a), X.names(b)) for a, b in itertools.combinations(ms, 2)])

    def adjacent(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.edge_masks

    def edges(self) -> list[tuple[frozenset, frozenset]]:
        out = []
        for p in self.edge_masks:
            a, b = sort_masks(p)
            out.append((a, b))
        out.sort(key=lambda ab: (tuple(_bits(ab[0])), tuple(_bits(ab[1]))))
        return [(self.X.names(a), self.X.names(b)) for a, b in out]


def _augmented_nbr(X: BlowupComplex, W: XGraph) -> list[int]:
    nbr = list(X.nbr)
    for p in W.edge_masks:
        a, b = tuple(p)
        for i in _bits(a):
            nbr[i] |= b
        for i in _bits(b):
            nbr[i] |= a
    return [m & ~(1 << i) for i, m in enumerate(nbr)]


def augmented_graph(X: BlowupComplex, W: XGraph) -> dict:
    if W.X is not X:
        raise BlowupError("W was built for a different blowup")
    nbr = _augmented_nbr(X, W)
    return {x: tuple(X.vertices[j] for j in _bits(nbr[i])) for i, x in enumerate(X.vertices)}


def augmented_support(X: BlowupComplex, W: XGraph) -> dict:
    """Support graph plus an edge between tips of W-adjacent maximal simplices."""
    if W.X is not X:
        raise BlowupError("W was built for a different blowup")
    adj = {v: set(X.support.neighbours(v)) for v in X.support.vertices}
    for p in W.edge_masks:
        a, b = tuple(p)
        ta = {X.tip[x] for x in X.names(a)}
        tb = {X.tip[x] for x in X.names(b)}
        for u in ta:
            for v in tb:
                if u != v:
                    adj[u].add(v)
                    adj[v].add(u)
    return {v: tuple(X.support.sort(adj[v])) for v in X.support.vertices}


# -- combinatorial HHS axioms ----------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    passed: bool | None
    detail: str = ""
    witness: tuple | None = None
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"axiom": self.name, "passed": self.passed, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = [sorted(w) if isinstance(w, frozenset) else w for w in self.witness]
        if self.data:
            out["data"] = self.data
        return out


@dataclass
class AxiomReport:
    results: list[AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.passed is not False for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "axioms": [r.to_dict() for r in self.results]}

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            mark = {True: "PASS", False: "FAIL", None: "INFO"}[r.passed]
            line = f"[{mark}] {r.name}"
            if r.detail:
                line += f": {r.detail}"
            if r.witness is not None:
                line += "  witness=" + " ".join(_fmt_witness(w) for w in r.witness)
            lines.append(line)
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def _fmt_witness(w) -> str:
    if isinstance(w, frozenset):
        return "{" + ",".join(sorted(w)) + "}"
    if isinstance(w, tuple):
        # permutation images and other composite witness entries
        return "[" + " ".join(_fmt_witness(x) for x in w) + "]"
    return str(w)


def _restricted(nbr: list[int], keep: int) -> dict:
    return {i: tuple(_bits(nbr[i] & keep)) for i in _bits(keep)}


def _distortion(nbr: list[int], c_mask: int, y_mask: int) -> tuple[Fraction, int]:
    """Largest ratio and difference of distances in C versus the ambient Y."""
    c_adj = _restricted(nbr, c_mask)
    y_adj = _restricted(nbr, y_mask)
    ratio, extra = Fraction(1), 0
    for i in c_adj:
        dc = bfs_distances(c_adj, i)
        dy = bfs_distances(y_adj, i)
        for j, k in dc.items():
            if j != i and j in dy:
                ratio = max(ratio, Fraction(k, dy[j]))
                extra = max(extra, k - dy[j])
    return ratio, extra


def chhs_check(X: BlowupComplex, W: XGraph, delta, n: int) -> AxiomReport:
    """Check the four combinatorial-HHS axioms exhaustively on finite data.

    Axiom 2 only certifies hyperbolicity; the quasi-isometric embedding half
    is reported as measured distortion with ``passed=None``.
    """
    if W.X is not X:
        raise BlowupError("W was built for a different blowup")
    delta = Fraction(delta)
    results = []

    chain = longest_link_chain(X)
    results.append(AxiomResult("1-complexity", chain <= n, f"longest link chain {chain}, bound {n}", data={"chain": chain}))

    aug = _augmented_nbr(X, W)
    classes = _class_masks(X)
    class_diam: dict[int, float] = {}
    worst = Fraction(0)
    witness = None
    ratio_max, extra_max = Fraction(1), 0
    for lk, members in sorted(classes.items(), key=lambda kv: tuple(_bits(kv[1][0]))):
        sat = 0
        for m in members:
            sat |= m
        c_adj = _restricted(aug, lk)
        d = four_point_delta(c_adj)
        class_diam[lk] = diameter(c_adj)
        if d > worst:
            worst = d
        if d > delta and witness is None:
            witness = (X.names(members[0]),)
        r, e = _distortion(aug, lk, X.full & ~sat)
        ratio_max, extra_max = max(ratio_max, r), max(extra_max, e)
    results.append(
        AxiomResult(
            "2-hyperbolic-links",
            witness is None,
            f"max four-point constant {worst}, bound {delta}",
            witness,
            {"max_delta": str(worst)},
        )
    )
    results.append(
        AxiomResult(
            "2-embedding-distortion",
            None,
            f"multiplicative {ratio_max}, additive {extra_max} (finite-scale measurement)",
            data={"multiplicative": str(ratio_max), "additive": extra_max},
        )
    )

    results.append(_check_containers(X, classes, class_diam, delta))
    results.append(_check_full_links(X, W))
    return AxiomReport(results)


def _check_containers(X: BlowupComplex, classes, class_diam, delta) -> AxiomResult:
    links = sorted(classes, key=lambda lk: tuple(_bits(classes[lk][0])))
    non_max = sort_masks(s for s in X.simplices() if X.link_mask(s))
    all_s = X.simplices()
    checked = 0
    for lk_d in links:
        for sig in non_max:
            lk_s = X.link_mask(sig)
            inter = lk_d & lk_s
            big = [g for g in links if g & ~inter == 0 and class_diam[g] >= delta]
            if not big:
                continue
            checked += 1
            ok = False
            for pi in all_s:
                if pi & sig != sig:
                    continue
                lk_p = X.link_mask(pi)
                if lk_p & ~lk_d == 0 and all(g & ~lk_p == 0 for g in big):
                    ok = True
                    break
            if not ok:
                return AxiomResult(
                    "3-containers",
                    False,
                    "no container simplex extends the witness",
                    (X.names(classes[lk_d][0]), X.names(sig)),
                )
    return AxiomResult("3-containers", True, f"{checked} (class, simplex) pairs needed a container")


def _check_full_links(X: BlowupComplex, W: XGraph) -> AxiomResult:
    maximal = W.vertices
    containing = {i: [m for m in maximal if m >> i & 1] for i in range(len(X.vertices))}
    checked = 0
    for d in sort_masks(X.simplices()):
        lk = X.link_mask(d)
        for i, j in itertools.combinations(list(_bits(lk)), 2):
            if X.nbr[i] >> j & 1:
                continue
            if not any(W.adjacent(a, b) for a in containing[i] for b in containing[j]):
                continue
            checked += 1
            good = any(
                W.adjacent(a, b)
                for a in containing[i]
                if a & d == d
                for b in containing[j]
                if b & d == d
            )
            if not good:
                return AxiomResult(
                    "4-full-links",
                    False,
                    "W-adjacent pair not realised by simplices extending the witness",
                    (X.names(d), X.vertices[i], X.vertices[j]),
                )
    detail = f"{checked} non-adjacent W-related pairs checked" if checked else "vacuous"
    return AxiomResult("4-full-links", True, detail)


def replay_full_links(X: BlowupComplex, W: XGraph, simplex, v: str, w: str) -> bool:
    """True when (simplex, v, w) violates the full-links axiom."""
    d = _simplex_mask(X, simplex)
    i, j = X.index[v], X.index[w]
    lk = X.link_mask(d)
    if not (lk >> i & 1 and lk >> j & 1) or X.nbr[i] >> j & 1 or i == j:
        return False
    ms = W.vertices
    related = any(W.adjacent(a, b) for a in ms if a >> i & 1 for b in ms if b >> j & 1)
    realised = any(
        W.adjacent(a, b) for a in ms if a >> i & 1 and a & d == d for b in ms if b >> j & 1 and b & d == d
    )
    return related and not realised


# -- file format ---------------------------------------------------------------

_SIMPLEX = re.compile(r"^\(([^()]*)\)$")


def parse_simplex(X: BlowupComplex, text: str) -> frozenset:
    """Parse ``(v:x,w:y)`` / ``(v,w:y)`` literals, or ``{a,b,c}`` raw vertex lists."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        body = text[1:-1].strip()
        return frozenset(p.strip() for p in body.split(",") if p.strip())
    m = _SIMPLEX.match(text)
    if not m:
        raise BlowupError(f"bad simplex literal {text!r}")
    out = set()
    for part in m.group(1).split(","):
        part = part.strip()
        if not part:
            continue
        tip, _, leaf = part.partition(":")
        if tip not in X.support:
            raise BlowupError(f"unknown support vertex {tip!r} in {text!r}")
        out.add(tip)
        if leaf:
            if leaf not in X.leaves[tip]:
                raise BlowupError(f"{leaf!r} is not a leaf of {tip!r}")
            out.add(leaf)
    return frozenset(out)


def format_simplex(X: BlowupComplex, simplex: Iterable[str]) -> str:
    simplex = set(simplex)
    parts = []
    for v in X.support.sort({X.tip[x] for x in simplex}):
        part = [x for x in X.ordered(simplex) if X.tip[x] == v and x != v]
        if v in simplex:
            parts.append(v + "".join(":" + x for x in part))
        else:
            return "{" + ",".join(X.ordered(simplex)) + "}"
    return "(" + ",".join(parts) + ")"


def parse_blowup(text: str) -> tuple[BlowupComplex, XGraph]:
    """Graph grammar plus ``leaf <v> <id>`` and ``wedge <simplex> <simplex>`` lines.

    Support ``edge`` lines may omit the label; labels are ignored.
    """
    graph_lines, leaf_lines, wedge_lines = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            graph_lines.append("")
            continue
        head = toks[0][1]
        if head == "edge" and len(toks) == 3:
            graph_lines.append(line + " 2")
        elif head in ("vertex", "edge"):
            graph_lines.append(line)
        elif head == "leaf":
            if len(toks) != 3:
                raise GraphError("expected: leaf <support-vertex> <leaf-id>", lineno, toks[0][0])
            leaf_lines.append((lineno, toks[1], toks[2]))
            graph_lines.append("")
        elif head == "wedge":
            rest = line.split(None, 1)[1] if len(toks) > 1 else ""
            parts = re.findall(r"\([^()]*\)|\{[^{}]*\}", rest)
            if len(parts) != 2:
                raise GraphError("expected: wedge <maxsimplex> <maxsimplex>", lineno, toks[0][0])
            wedge_lines.append((lineno, parts))
            graph_lines.append("")
        else:
            raise GraphError(f"unknown directive {head!r}", lineno, toks[0][0])
    from .graph import parse_graph

    support = parse_graph("\n".join(graph_lines))
    leaves: dict[str, list[str]] = {}
    for lineno, (cv, v), (cx, x) in leaf_lines:
        if v not in support:
            raise GraphError(f"unknown support vertex {v!r}", lineno, cv)
        leaves.setdefault(v, []).append(x)
    try:
        X = BlowupComplex(support, leaves)
    except BlowupError as exc:
        raise GraphError(str(exc)) from None
    pairs = []
    for lineno, parts in wedge_lines:
        try:
            pairs.append(tuple(parse_simplex(X, p) for p in parts))
        except BlowupError as exc:
            raise GraphError(str(exc), lineno) from None
    try:
        W = XGraph(X, pairs)
    except BlowupError as exc:
        raise GraphError(str(exc)) from None
    return X, W


def format_blowup(X: BlowupComplex, W: XGraph | None = None) -> str:
    lines = [f"vertex {v}" for v in X.support.vertices]
    lines += [f"edge {u} {v}" for u, v, _ in X.support.edge_list()]
    for v in X.support.vertices:
        lines += [f"leaf {v} {x}" for x in X.leaves[v]]
    if W is not None:
        lines += [f"wedge {format_simplex(X, a)} {format_simplex(X, b)}" for a, b in W.edges()]
    return "\n".join(lines) + "\n"


def support_is_admissible(support: LabelledGraph) -> bool:
    """Triangle- and square-free with no isolated vertex."""
    return not triangles(support) and not squares(support) and all(support.degree(v) for v in support.vertices)
