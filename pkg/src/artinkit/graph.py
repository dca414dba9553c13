"""Finite simplicial graphs with integer edge labels.

A missing edge stands for the label infinity, so files and dumps never
mention it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

Edge = frozenset


class GraphError(ValueError):
    """Raised for malformed graph input; carries an optional line/column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class LabelledGraph:
    """Simplicial graph on ordered vertices with labels >= 2 on its edges.

    ``edges`` maps ``frozenset({u, v})`` to the label. Edge iteration order is
    the insertion order, which parsing sets to declaration order.
    """

    vertices: tuple[str, ...]
    edges: Mapping[frozenset, int] = field(default_factory=dict)

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex")
        for v in verts:
            if not isinstance(v, str) or not v:
                raise GraphError(f"vertex identifiers must be non-empty strings, got {v!r}")
        known = set(verts)
        edges: dict[frozenset, int] = {}
        for key, label in dict(self.edges).items():
            pair = frozenset(key)
            if len(pair) != 2:
                raise GraphError(f"self-loop or malformed edge {sorted(pair)}")
            for end in pair:
                if end not in known:
                    raise GraphError(f"undeclared endpoint {end!r}")
            if isinstance(label, bool) or not isinstance(label, int):
                raise GraphError(f"label must be an integer, got {label!r}")
            if label < 2:
                raise GraphError(f"label {label} < 2 on edge {self._fmt(pair, verts)}")
            if pair in edges:
                raise GraphError(f"duplicate edge {self._fmt(pair, verts)}")
            edges[pair] = label
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        adj: dict[str, tuple[str, ...]] = {}
        index = {v: i for i, v in enumerate(verts)}
        nbrs: dict[str, list[str]] = {v: [] for v in verts}
        for pair in edges:
            a, b = pair
            nbrs[a].append(b)
            nbrs[b].append(a)
        for v in verts:
            adj[v] = tuple(sorted(nbrs[v], key=index.__getitem__))
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_index", index)

    @staticmethod
    def _fmt(pair, order) -> str:
        pos = {v: i for i, v in enumerate(order)}
        a, b = sorted(pair, key=lambda v: pos.get(v, len(pos)))
        return f"{a}-{b}"

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, int]]) -> "LabelledGraph":
        table: dict[frozenset, int] = {}
        for u, v, m in edges:
            pair = frozenset((u, v))
            if pair in table:
                raise GraphError(f"duplicate edge {u}-{v}")
            table[pair] = m
        return cls(tuple(vertices), table)

    # -- basic queries -------------------------------------------------

    def __contains__(self, v) -> bool:
        return v in self._index

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def sort(self, vs: Iterable[str]) -> tuple[str, ...]:
        """Order vertices by declaration order."""
        return tuple(sorted(vs, key=self.index))

    def neighbours(self, v: str) -> tuple[str, ...]:
        self.index(v)
        return self._adj[v]

    def degree(self, v: str) -> int:
        return len(self.neighbours(v))

    def label(self, u: str, v: str) -> int | None:
        """Label of edge uv, or None when absent (label infinity)."""
        return self.edges.get(frozenset((u, v)))

    def has_edge(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edges

    def edge_list(self) -> list[tuple[str, str, int]]:
        """Edges as ``(u, v, m)`` with u before v in declaration order."""
        out = []
        for pair, m in self.edges.items():
            u, v = self.sort(pair)
            out.append((u, v, m))
        return out

    def subgraph(self, keep: Iterable[str]) -> "LabelledGraph":
        keep = set(keep)
        verts = tuple(v for v in self.vertices if v in keep)
        return LabelledGraph(verts, {e: m for e, m in self.edges.items() if e <= keep})

    def relabel(self, mapping: Mapping[str, str], order: Iterable[str] | None = None) -> "LabelledGraph":
        verts = tuple(order) if order is not None else tuple(mapping[v] for v in self.vertices)
        return LabelledGraph(verts, {frozenset(mapping[x] for x in e): m for e, m in self.edges.items()})

    def is_connected(self) -> bool:
        return len(connected_components(self)) <= 1

    # -- serialization -------------------------------------------------

    def to_text(self) -> str:
        lines = [f"vertex {v}" for v in self.vertices]
        lines += [f"edge {u} {v} {m}" for u, v, m in self.edge_list()]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [[u, v, m] for u, v, m in self.edge_list()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        lines += [f'  "{u}" -- "{v}" [label={m}];' for u, v, m in self.edge_list()]
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "LabelledGraph":
        return cls.from_edges(data["vertices"], [tuple(e) for e in data["edges"]])


def _tokens(line: str) -> Iterator[tuple[int, str]]:
    """Yield (1-based column, token) pairs of a whitespace separated line."""
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield col + 1, tok
        col += len(tok)


def parse_graph(text: str, allow: Iterable[str] = ()) -> LabelledGraph:
    """Parse the ``vertex`` / ``edge`` line grammar.

    Directives named in ``allow`` are skipped so that extended grammars
    (blowups, kernel specs) can reuse this parser for their graph part.
    """
    vertices: list[str] = []
    seen: set[str] = set()
    edges: dict[frozenset, int] = {}
    allow = set(allow)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        (col, head), rest = toks[0], toks[1:]
        if head == "vertex":
            if len(rest) != 1:
                raise GraphError("expected: vertex <id>", lineno, col)
            v = rest[0][1]
            if v in seen:
                raise GraphError(f"duplicate vertex {v!r}", lineno, rest[0][0])
            seen.add(v)
            vertices.append(v)
        elif head == "edge":
            if len(rest) != 3:
                raise GraphError("expected: edge <id> <id> <int>", lineno, col)
            (cu, u), (cv, v), (cm, m) = rest
            for c, end in ((cu, u), (cv, v)):
                if end not in seen:
                    raise GraphError(f"undeclared endpoint {end!r}", lineno, c)
            if u == v:
                raise GraphError("self-loop", lineno, cv)
            try:
                label = int(m)
            except ValueError:
                raise GraphError(f"label {m!r} is not an integer", lineno, cm) from None
            if label < 2:
                raise GraphError(f"label {label} < 2", lineno, cm)
            pair = frozenset((u, v))
            if pair in edges:
                raise GraphError(f"duplicate edge {u}-{v}", lineno, col)
            edges[pair] = label
        elif head in allow:
            continue
        else:
            raise GraphError(f"unknown directive {head!r}", lineno, col)
    return LabelledGraph(tuple(vertices), edges)


# -- elementary queries ------------------------------------------------


def link(g: LabelledGraph, v: str) -> frozenset:
    return frozenset(g.neighbours(v))


def star(g: LabelledGraph, v: str) -> frozenset:
    return link(g, v) | {v}


def triangles(g: LabelledGraph) -> list[tuple[str, str, str]]:
    out = []
    for a, b, c in itertools.combinations(g.vertices, 3):
        if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c):
            out.append((a, b, c))
    return out


def squares(g: LabelledGraph) -> list[tuple[str, str, str, str]]:
    """Induced 4-cycles, each reported once as (a, b, c, d) with a first in order.

    The cycle is a-b-c-d-a; b precedes d so each cycle appears exactly once.
    """
    out = []
    for quad in itertools.combinations(g.vertices, 4):
        a = quad[0]
        for b, c, d in itertools.permutations(quad[1:]):
            if g.index(b) > g.index(d):
                continue
            cyc = (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d) and g.has_edge(d, a))
            if cyc and not g.has_edge(a, c) and not g.has_edge(b, d):
                out.append((a, b, c, d))
    return out


def is_triangle_and_square_free(g: LabelledGraph) -> bool:
    return not triangles(g) and not squares(g)


def connected_components(g: LabelledGraph) -> list[tuple[str, ...]]:
    """Components in order of their first vertex; vertices in declaration order."""
    seen: set[str] = set()
    comps = []
    for root in g.vertices:
        if root in seen:
            continue
        seen.add(root)
        stack, comp = [root], []
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in g.neighbours(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(g.sort(comp))
    return comps


def odd_subgraph(g: LabelledGraph) -> LabelledGraph:
    return LabelledGraph(g.vertices, {e: m for e, m in g.edges.items() if m % 2 == 1})
