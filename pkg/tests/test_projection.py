from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artinkit.projection import (
    CPSData,
    MalformedData,
    RotatingFamilyData,
    cps_check,
    crf_check,
    generated_group,
    parse_cps,
    replay,
    sbgi_check,
)

from conftest import DATA

CORPUS = sorted((DATA / "projection").iterdir())


def expectation(path: Path) -> str:
    return path.read_text().splitlines()[0].split(":", 1)[1].strip()


def check(data):
    return crf_check(data) if isinstance(data, RotatingFamilyData) else cps_check(data)


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus(path):
    data = parse_cps(path.read_text())
    report = check(data)
    failed = [r.name for r in report.results if r.passed is False]
    want = expectation(path)
    if want == "pass":
        assert failed == [] and report.passed
    else:
        assert want in failed
        for r in report.results:
            if r.passed is False:
                assert r.witness is not None and replay(data, r.name, r.witness)


def test_corpus_covers_every_axiom():
    names = {expectation(p) for p in CORPUS} - {"pass"}
    cps_axioms = {"colour-in-action", "symmetry-in-action", "symmetry", "triangle-inequality", "behrstock", "separation", "closeness-in-inaction"}
    crf_axioms = {
        "action-preserves-colours",
        "action-preserves-act",
        "action-preserves-distances",
        "rotation-fixes",
        "rotation-preserves-distances",
        "equivariance",
        "commutation-in-inaction",
        "rotation-bound",
    }
    assert names == cps_axioms | crf_axioms


class TestCPSExamples:
    def test_zero_distances(self):
        data = CPSData.build([["y1", "y2", "y3"]], 1, default=0)
        assert cps_check(data).passed

    def test_triangle_witness(self):
        dist = {}
        for a, b, v in [("x", "z", 5), ("x", "w", 1), ("w", "z", 1)]:
            dist[("y", a, b)] = dist[("y", b, a)] = v
        data = CPSData.build([["x", "y", "z", "w"]], 10, dist=dist, default=0)
        r = cps_check(data)["triangle-inequality"]
        assert r.passed is False and r.witness == ("y", "x", "w", "z")

    def test_behrstock_witness(self):
        dist = {("y", "x", "z"): 3, ("y", "z", "x"): 3, ("z", "x", "y"): 3, ("z", "y", "x"): 3}
        data = CPSData.build([["x", "y", "z"]], 2, dist=dist, default=0)
        r = cps_check(data)["behrstock"]
        assert r.passed is False and replay(data, "behrstock", r.witness)

    def test_properness_constant(self):
        data = CPSData.build([["x", "y", "z"]], 5, default=Fraction(3, 2))
        r = cps_check(data)["properness"]
        assert r.passed and "T = 5/2" in r.detail

    def test_report_mentions_unmodelled_modification(self):
        report = cps_check(CPSData.build([["x"]], 1))
        assert any("not modelled" in r.detail for r in report.results)


class TestMalformed:
    def test_missing_entry(self):
        with pytest.raises(MalformedData, match="missing"):
            CPSData.build([["x", "y", "z"]], 1)

    def test_outside_domain(self):
        with pytest.raises(MalformedData, match="outside"):
            CPSData.build([["x", "y"]], 1, act={"x": {"x"}, "y": {"y"}}, dist={("x", "y", "y"): 1})

    def test_overlapping_colours(self):
        with pytest.raises(MalformedData):
            CPSData.build([["x"], ["x"]], 1)

    def test_negative_values(self):
        with pytest.raises(MalformedData):
            CPSData.build([["x"]], -1)
        with pytest.raises(MalformedData):
            CPSData.build([["x", "y"]], 1, dist={("x", "y", "y"): -1}, default=0)

    @pytest.mark.parametrize(
        "text",
        ["colour 0 x\n", "colour 0 x\ntheta a\n", "colour 0 x\ntheta 1\nbogus\n", "colour 0 x y\ntheta 1\ndefault 0\nperm g (x q)\n"],
    )
    def test_parse_errors(self, text):
        with pytest.raises(MalformedData):
            parse_cps(text)

    def test_non_bijective_permutation(self):
        cps = CPSData.build([["x", "y"]], 1, default=0)
        with pytest.raises(MalformedData):
            RotatingFamilyData(cps, {"g": {"x": "x", "y": "x"}}, {}, Fraction(1))

    def test_gamma_must_fix_point(self):
        cps = CPSData.build([["x", "y"]], 1, default=0)
        with pytest.raises(MalformedData):
            RotatingFamilyData(cps, {"g": {"x": "y", "y": "x"}}, {"x": ("g",)}, Fraction(1))


class TestCRF:
    def test_trivial_family(self):
        cps = CPSData.build([["x", "y", "z"]], 1, default=0)
        report = crf_check(RotatingFamilyData(cps, {}, {}, Fraction(5)))
        assert report.passed and report["rotation-bound"].passed

    def test_rotation_control_must_be_positive(self):
        cps = CPSData.build([["x"]], 1)
        assert not crf_check(RotatingFamilyData(cps, {}, {}, Fraction(0))).passed

    def test_generated_group(self):
        pts = ("a", "b", "c")
        g = ("b", "c", "a")
        assert len(generated_group([g], pts)) == 3
        assert generated_group([], pts) == {pts}


@st.composite
def cps_tables(draw):
    n = draw(st.integers(1, 4))
    pts = [f"p{i}" for i in range(n)]
    dist = {(y, x, z): Fraction(draw(st.integers(0, 6))) for y in pts for x in pts for z in pts if x != y and z != y}
    return CPSData.build([pts], draw(st.integers(0, 6)), dist=dist)


@settings(max_examples=150)
@given(cps_tables(), st.integers(0, 5))
def test_monotone_in_theta(data, extra):
    if cps_check(data).passed:
        assert cps_check(data.with_theta(data.theta + extra)).passed


@settings(max_examples=150)
@given(cps_tables())
def test_witnesses_replay(data):
    for r in cps_check(data).results:
        if r.passed is False:
            assert replay(data, r.name, r.witness)


class TestStrongBGI:
    def path(self, n):
        names = [f"v{i}" for i in range(n)]
        return {names[i]: [names[j] for j in (i - 1, i + 1) if 0 <= j < n] for i in range(n)}

    def test_geodesic_through_centre_passes(self):
        # path v0-v1-v2: only d_v1(v0, v2) is large, and the unique geodesic meets v1
        pts = ["v0", "v1", "v2"]
        dist = {(s, x, y): Fraction(0) for s in pts for x in pts for y in pts if s not in (x, y)}
        dist[("v1", "v0", "v2")] = dist[("v1", "v2", "v0")] = Fraction(5)
        data = CPSData.build([pts], 1, dist=dist)
        assert sbgi_check(self.path(3), data, 1).passed

    def test_avoiding_geodesic_fails(self):
        # square v0-v1-v2-v3: the geodesic v0-v3-v2 avoids v1 when d_v1 is large
        adj = {"v0": ["v1", "v3"], "v1": ["v0", "v2"], "v2": ["v1", "v3"], "v3": ["v2", "v0"]}
        data = CPSData.build([["v0", "v1", "v2", "v3"]], 1, default=5)
        r = sbgi_check(adj, data, 0)
        assert r.passed is False
        x, y, s = r.witness
        assert data.d(s, x, y) > 0
