import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artinkit.blowup import (
    BlowupError,
    LinkCase,
    Relation,
    XGraph,
    augmented_graph,
    augmented_support,
    blowup,
    chhs_check,
    classify_simplex_link,
    ell_class,
    format_blowup,
    is_nested,
    link_of_set,
    longest_link_chain,
    parse_blowup,
    parse_simplex,
    relation,
    replay_full_links,
    saturation,
    simplex_classes,
    simplex_link,
    u_class,
)
from artinkit.graph import GraphError, LabelledGraph

from conftest import DATA
from corpus import blowup_corpus, relation_table_violations


def support(*edges, vertices=None):
    names = vertices or sorted({v for e in edges for v in e}, key=str)
    return LabelledGraph.from_edges(names, [(u, v, 2) for u, v in edges])


@pytest.fixture
def edge_x():
    """Edge v-w with L_v = {x1, x2} and L_w = {y}."""
    return blowup(support(("v", "w"), vertices=["v", "w"]), {"v": ["x1", "x2"], "w": ["y"]})


def brute_blowup_edges(sup, leaves):
    """Squids are stars and squids of adjacent support vertices span joins."""
    squid = {v: {v, *leaves.get(v, [])} for v in sup.vertices}
    out = set()
    for v in sup.vertices:
        out |= {frozenset((v, x)) for x in leaves.get(v, [])}
    for u, v, _ in sup.edge_list():
        out |= {frozenset((a, b)) for a in squid[u] for b in squid[v]}
    return out


class TestConstruction:
    def test_edge_example(self, edge_x):
        assert len(edge_x.vertices) == 5
        adj = edge_x.adjacency()
        assert set(adj["x1"]) == {"v", "w", "y"}
        assert "x2" not in adj["x1"]

    def test_degenerate(self):
        X = blowup(LabelledGraph(("v",)))
        assert X.vertices == ("v",) and X.edges() == []

    def test_empty_leaves_is_support(self):
        sup = support(("u", "v"), ("v", "w"), vertices=["u", "v", "w"])
        X = blowup(sup)
        assert {frozenset(e) for e in X.edges()} == {frozenset(("u", "v")), frozenset(("v", "w"))}

    def test_retraction(self, edge_x):
        assert edge_x.retract("x2") == "v" and edge_x.retract("w") == "w"
        assert edge_x.preimage(["w"]) == {"w", "y"}

    def test_errors(self):
        sup = support(("v", "w"), vertices=["v", "w"])
        with pytest.raises(BlowupError):
            blowup(sup, {"v": ["w"]})
        with pytest.raises(BlowupError):
            blowup(sup, {"zz": ["x"]})

    @settings(max_examples=40)
    @given(st.integers(2, 6), st.data())
    def test_edges_match_join_rule(self, n, data):
        names = [f"s{i}" for i in range(n)]
        pairs = data.draw(st.sets(st.sampled_from(list(itertools.combinations(names, 2)))))
        sup = support(*pairs, vertices=names)
        leaves = {v: [f"{v}x{j}" for j in range(data.draw(st.integers(0, 3)))] for v in names}
        X = blowup(sup, leaves)
        assert {frozenset(e) for e in X.edges()} == brute_blowup_edges(sup, leaves)
        assert all(X.retract(x) == v for v in names for x in leaves[v])


class TestLinks:
    def test_empty_simplex(self, edge_x):
        assert simplex_link(edge_x, []) == set(edge_x.vertices)

    def test_edge_type(self, edge_x):
        assert simplex_link(edge_x, ["v", "x1"]) == {"w", "y"}

    def test_triangle_type(self, edge_x):
        assert simplex_link(edge_x, ["v", "x1", "w"]) == {"y"}

    def test_non_clique(self, edge_x):
        with pytest.raises(BlowupError):
            simplex_link(edge_x, ["x1", "x2"])

    def test_link_of_set(self, edge_x):
        assert link_of_set(edge_x, ["x1", "x2"]) == {"v", "w", "y"}

    def test_saturation_and_classes(self, edge_x):
        # {v,w} and {v,w,x1}... share nothing; {w} and {w,y}? links differ; {x1}, {x2} share {v,w,y}? no
        assert saturation(edge_x, ["v", "x1"]) == {"v", "x1", "x2"}
        classes = simplex_classes(edge_x)
        reps = [sorted(c.representative) for c in classes]
        assert reps == sorted(reps, key=lambda r: [edge_x.vertices.index(x) for x in r])
        assert all(c.link for c in classes)


class TestLinkCases:
    def test_cases(self, edge_x):
        assert classify_simplex_link(edge_x, ["v", "x1", "w", "y"]).case is LinkCase.MAXIMAL
        r = classify_simplex_link(edge_x, ["v"])
        assert r.case is LinkCase.BOUNDED and r.diameter <= 2 and r.formula_holds
        assert classify_simplex_link(edge_x, []).case is LinkCase.EMPTY
        assert classify_simplex_link(edge_x, ["v", "x1"]).case is LinkCase.EDGE
        assert classify_simplex_link(edge_x, ["v", "x1", "w"]).case is LinkCase.TRIANGLE

    def test_hypotheses(self):
        tri = blowup(support(("a", "b"), ("b", "c"), ("a", "c")))
        with pytest.raises(BlowupError, match="triangle"):
            classify_simplex_link(tri, ["a"])
        with pytest.raises(BlowupError, match="point"):
            classify_simplex_link(blowup(LabelledGraph(("v",))), ["v"])

    def test_empty_leaf_set_breaks_bounded_case(self):
        # {v} in the path u-v-w with no leaves at all: Lk = {u, w}, two
        # non-adjacent vertices, which is neither a vertex nor a join
        X = blowup(support(("u", "v"), ("v", "w"), vertices=["u", "v", "w"]))
        r = classify_simplex_link(X, ["v"])
        assert r.case is LinkCase.BOUNDED and not r.formula_holds

    def test_formulas_on_corpus_with_leaves(self):
        # the bounded-link property needs non-empty leaf sets; check 1..2 leaves per vertex on supports <= 5
        for X in blowup_corpus(max_vertices=5, max_leaves=2, min_leaves=1):
            for s in X.simplices():
                r = classify_simplex_link(X, X.names(s))
                assert r.formula_holds, (format_blowup(X), sorted(X.names(s)), r)


class TestRelations:
    def test_ell_ell_adjacent(self, edge_x):
        assert relation(edge_x, ell_class(edge_x, "v"), ell_class(edge_x, "w")) is Relation.ORTHOGONAL

    def test_ell_u_same_vertex(self, edge_x):
        assert relation(edge_x, ell_class(edge_x, "v"), u_class(edge_x, "v")) is Relation.ORTHOGONAL

    def test_u_ell_far_apart(self):
        sup = support(("u", "v"), ("v", "w"), ("w", "t"), vertices=["u", "v", "w", "t"])
        X = blowup(sup, {v: [f"{v}1"] for v in sup.vertices})
        assert relation(X, u_class(X, "v"), ell_class(X, "t")) is Relation.TRANSVERSE

    def test_valence_one_end_is_orthogonal(self):
        # with u of valence one the U_u class is orthogonal to l_w, not transverse
        sup = support(("u", "v"), ("v", "w"), vertices=["u", "v", "w"])
        X = blowup(sup, {v: [f"{v}1"] for v in sup.vertices})
        assert relation(X, u_class(X, "u"), ell_class(X, "w")) is Relation.ORTHOGONAL

    def test_nesting_direction(self, edge_x):
        l, U = ell_class(edge_x, "v"), u_class(edge_x, "w")
        assert relation(edge_x, l, U) is Relation.NESTED
        assert is_nested(edge_x, l, U) and not is_nested(edge_x, U, l)

    def test_equal_and_maximal(self, edge_x):
        assert relation(edge_x, ["v", "x1"], ["v", "x2"]) is Relation.EQUAL
        with pytest.raises(BlowupError):
            relation(edge_x, ["v", "x1", "w", "y"], ["v"])

    def test_missing_classes(self):
        X = blowup(support(("v", "w"), vertices=["v", "w"]), {"v": ["x"]})
        assert ell_class(X, "w") is None and u_class(X, "w") is None
        assert ell_class(X, "v") is None

    def test_relation_table_small_corpus(self):
        for X in blowup_corpus(max_vertices=5, max_leaves=2):
            assert relation_table_violations(X) == [], format_blowup(X)


class TestChains:
    def test_edge_chain(self, edge_x):
        assert longest_link_chain(edge_x) <= 25

    def test_chain_is_strict(self):
        X = blowup(LabelledGraph(("v",)))
        # only the empty simplex (link {v}) and {v} (empty link)
        assert longest_link_chain(X) == 2


class TestAugmentation:
    def test_edgeless_w(self, edge_x):
        aug = augmented_graph(edge_x, XGraph(edge_x))
        assert {k: set(v) for k, v in aug.items()} == {k: set(v) for k, v in edge_x.adjacency().items()}

    def test_single_w_edge(self, edge_x):
        W = XGraph(edge_x, [(["v", "x1", "w", "y"], ["v", "x2", "w", "y"])])
        aug = augmented_graph(edge_x, W)
        assert "x2" in aug["x1"]
        assert set(aug["v"]) == set(edge_x.adjacency()["v"])

    def test_complete_w_support(self, edge_x):
        asup = augmented_support(edge_x, XGraph.complete(edge_x))
        assert set(asup["v"]) == {"w"}

    def test_complete_w_on_path_connects_ends(self):
        sup = support(("u", "v"), ("v", "w"), vertices=["u", "v", "w"])
        X = blowup(sup, {v: [f"{v}1"] for v in sup.vertices})
        asup = augmented_support(X, XGraph.complete(X))
        assert set(asup["u"]) == {"v", "w"}

    def test_w_rejects_non_maximal(self, edge_x):
        with pytest.raises(BlowupError):
            XGraph(edge_x, [(["v", "x1"], ["v", "x2", "w", "y"])])


class TestCHHS:
    def test_complete_w_passes_fullness(self, edge_x):
        report = chhs_check(edge_x, XGraph.complete(edge_x), 1, 25)
        assert report["4-full-links"].passed
        assert report.passed

    def test_edgeless_w_vacuous(self, edge_x):
        report = chhs_check(edge_x, XGraph(edge_x), 1, 25)
        assert report["4-full-links"].passed and "vacuous" in report["4-full-links"].detail
        assert report["1-complexity"].data["chain"] <= 25
        assert report["2-embedding-distortion"].passed is None

    def test_complexity_bound_enforced(self, edge_x):
        assert not chhs_check(edge_x, XGraph(edge_x), 1, 2)["1-complexity"].passed

    def test_hyperbolicity_bound_enforced(self):
        # a 2x2 grid of leaves makes an augmented link contain a 4-cycle
        sup = support(("v", "w"), vertices=["v", "w"])
        X = blowup(sup, {"v": ["x1", "x2"], "w": ["y1", "y2"]})
        report = chhs_check(X, XGraph(X), 0, 25)
        assert report["2-hyperbolic-links"].passed is False
        assert report["2-hyperbolic-links"].witness is not None

    def test_full_links_violation(self):
        X, W = parse_blowup((DATA / "full_links_violation.blowup").read_text())
        result = chhs_check(X, W, 1, 25)["4-full-links"]
        assert result.passed is False
        simplex, v, w = result.witness
        assert replay_full_links(X, W, simplex, v, w)

    def test_replay_rejects_non_witness(self, edge_x):
        W = XGraph.complete(edge_x)
        assert not replay_full_links(edge_x, W, ["w", "y"], "x1", "x2")


class TestFileFormat:
    def test_round_trip(self):
        text = (DATA / "path_wedged.blowup").read_text()
        X, W = parse_blowup(text)
        X2, W2 = parse_blowup(format_blowup(X, W))
        assert X2.vertices == X.vertices and W2.edges() == W.edges()

    def test_simplex_literals(self, edge_x):
        assert parse_simplex(edge_x, "(v:x1,w:y)") == {"v", "x1", "w", "y"}
        assert parse_simplex(edge_x, "{v,x1}") == {"v", "x1"}
        with pytest.raises(BlowupError):
            parse_simplex(edge_x, "(v:y)")

    @pytest.mark.parametrize(
        "text",
        [
            "vertex v\nleaf q x\n",
            "vertex v\nleaf v\n",
            "vertex v\nvertex w\nedge v w\nleaf v x\nwedge (v:x) (w)\n",
            "vertex v\nfoo v\n",
        ],
    )
    def test_errors(self, text):
        with pytest.raises(GraphError):
            parse_blowup(text)
