"""Shared finite corpora for exhaustive checks."""

import itertools

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher
from networkx.generators.atlas import graph_atlas_g

from artinkit.blowup import Relation, blowup, ell_class, is_nested, relation, support_is_admissible, u_class
from artinkit.graph import LabelledGraph


def admissible_supports(max_vertices=6):
    """Triangle/square-free graphs without isolated vertices, one per isomorphism class."""
    out = []
    for G in graph_atlas_g():
        n = G.number_of_nodes()
        if not 0 < n <= max_vertices:
            continue
        names = [f"s{i}" for i in range(n)]
        g = LabelledGraph.from_edges(names, [(names[a], names[b], 2) for a, b in G.edges])
        if support_is_admissible(g):
            out.append((G, g))
    return out


def blowup_corpus(max_vertices=6, max_leaves=3, up_to_symmetry=True, min_leaves=0):
    """Every blowup of an admissible support with min_leaves..max_leaves leaves per vertex.

    With ``up_to_symmetry`` only one leaf-count vector per orbit of the
    support's automorphism group is produced.
    """
    for G, g in admissible_supports(max_vertices):
        autos = list(GraphMatcher(G, G).isomorphisms_iter()) if up_to_symmetry else [{i: i for i in G}]
        seen = set()
        for counts in itertools.product(range(min_leaves, max_leaves + 1), repeat=len(g)):
            canon = min(tuple(counts[a[i]] for i in range(len(counts))) for a in autos)
            if canon in seen:
                continue
            seen.add(canon)
            yield blowup(g, {v: [f"{v}x{j}" for j in range(c)] for v, c in zip(g.vertices, counts)})


def relation_table_violations(X):
    """Check the five relations between the l_v and U_v classes; return failures."""
    S = X.support
    G = nx.Graph()
    G.add_nodes_from(S.vertices)
    G.add_edges_from((u, v) for u, v, _ in S.edge_list())
    dist = dict(nx.all_pairs_shortest_path_length(G))
    ell = {v: ell_class(X, v) for v in S.vertices}
    U = {v: u_class(X, v) for v in S.vertices}
    bad = []

    def expect(tag, got, want, *extra):
        if got is not want or not all(extra):
            bad.append((tag, got))

    for v, w in itertools.permutations(S.vertices, 2):
        adjacent = S.has_edge(v, w)
        far = dist[v].get(w, float("inf")) >= 2
        if ell[v] and ell[w]:
            expect(("ell-ell", v, w), relation(X, ell[v], ell[w]), Relation.ORTHOGONAL if adjacent else Relation.TRANSVERSE)
        if adjacent and ell[v] and U[w]:
            expect(("ell-in-U", v, w), relation(X, ell[v], U[w]), Relation.NESTED, is_nested(X, ell[v], U[w]))
        if far and S.degree(v) > 1 and U[v] and ell[w]:
            expect(("U-ell", v, w), relation(X, U[v], ell[w]), Relation.TRANSVERSE)
        if far and S.degree(v) > 1 and S.degree(w) > 1 and U[v] and U[w]:
            expect(("U-U", v, w), relation(X, U[v], U[w]), Relation.TRANSVERSE)
    for v in S.vertices:
        if ell[v] and U[v]:
            expect(("ell-U", v), relation(X, ell[v], U[v]), Relation.ORTHOGONAL)
    return bad


def relation_table_coverage(X):
    """How many instances of each relation bullet the blowup exercises."""
    S = X.support
    ell = {v: ell_class(X, v) for v in S.vertices}
    U = {v: u_class(X, v) for v in S.vertices}
    return {
        "ell-ell": sum(1 for v, w in itertools.permutations(S.vertices, 2) if ell[v] and ell[w]),
        "ell-U": sum(1 for v in S.vertices if ell[v] and U[v]),
    }
