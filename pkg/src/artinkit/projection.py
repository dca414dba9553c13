"""Validators for finite composite projection systems and rotating families.

Distances are exact rationals. Every failure carries the lexicographically
first witness tuple (in declaration order of the points), and
:func:`replay` re-evaluates the axiom at a witness.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .blowup import AxiomReport, AxiomResult


class MalformedData(ValueError):
    pass


NOT_MODELLED = "the monotone modification of projection distances is not modelled; checks use the table as given"


@dataclass(frozen=True)
class CPSData:
    """Colour classes, a constant theta, active sets and a distance table.

    ``dist[(y, x, z)]`` must be defined exactly when x and z lie in
    ``act[y] - {y}``.
    """

    colours: tuple[tuple[str, ...], ...]
    theta: Fraction
    act: Mapping[str, frozenset]
    dist: Mapping[tuple[str, str, str], Fraction]

    def __post_init__(self):
        pts = [p for c in self.colours for p in c]
        if len(set(pts)) != len(pts):
            raise MalformedData("colour classes must be disjoint")
        known = set(pts)
        object.__setattr__(self, "theta", Fraction(self.theta))
        if self.theta < 0:
            raise MalformedData("theta must be non-negative")
        act = {}
        for y in pts:
            a = frozenset(self.act.get(y, ()))
            if a - known:
                raise MalformedData(f"Act({y}) mentions unknown points {sorted(a - known)}")
            act[y] = a
        for y in self.act:
            if y not in known:
                raise MalformedData(f"Act given for unknown point {y!r}")
        dist = {}
        for key, val in self.dist.items():
            y, x, z = key
            if y not in known:
                raise MalformedData(f"distance for unknown point {y!r}")
            dom = act[y] - {y}
            if x not in dom or z not in dom:
                raise MalformedData(f"d_{y}({x},{z}) is outside the domain Act({y})-{{{y}}}")
            v = Fraction(val)
            if v < 0:
                raise MalformedData(f"d_{y}({x},{z}) is negative")
            dist[(y, x, z)] = v
        for y in pts:
            dom = [p for p in pts if p in act[y] and p != y]
            for x in dom:
                for z in dom:
                    if (y, x, z) not in dist:
                        raise MalformedData(f"d_{y}({x},{z}) is missing")
        object.__setattr__(self, "act", act)
        object.__setattr__(self, "dist", dist)

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(p for c in self.colours for p in c)

    def colour_of(self, y: str) -> int:
        for i, c in enumerate(self.colours):
            if y in c:
                return i
        raise MalformedData(f"unknown point {y!r}")

    def d(self, y: str, x: str, z: str) -> Fraction | None:
        return self.dist.get((y, x, z))

    def domain(self, y: str) -> tuple[str, ...]:
        return tuple(p for p in self.points if p in self.act[y] and p != y)

    def with_theta(self, theta) -> "CPSData":
        return CPSData(self.colours, Fraction(theta), self.act, self.dist)

    @classmethod
    def build(cls, colours, theta, act=None, dist=None, default=None) -> "CPSData":
        """Convenience constructor; ``act=None`` means everything is active and
        ``default`` fills missing domain entries."""
        colours = tuple(tuple(c) for c in colours)
        pts = [p for c in colours for p in c]
        if act is None:
            act = {p: frozenset(pts) for p in pts}
        else:
            act = {p: frozenset(a) for p, a in act.items()}
        table = {k: Fraction(v) for k, v in (dist or {}).items()}
        if default is not None:
            for y in pts:
                dom = [p for p in pts if p in act.get(y, ()) and p != y]
                for x in dom:
                    for z in dom:
                        table.setdefault((y, x, z), Fraction(default))
        return cls(colours, Fraction(theta), act, table)


# -- axiom predicates (true = violated) --------------------------------------------


def _violates(data: CPSData, axiom: str, w: tuple) -> bool:
    d, th = data.d, data.theta
    if axiom == "symmetry-in-action":
        x, y = w
        return (x in data.act[y]) != (y in data.act[x])
    if axiom == "colour-in-action":
        y, x = w
        return data.colour_of(x) == data.colour_of(y) and x not in data.act[y]
    if axiom == "symmetry":
        y, x, z = w
        a, b = d(y, x, z), d(y, z, x)
        return a is not None and b is not None and a != b
    if axiom == "triangle-inequality":
        y, a, m, b = w
        vals = d(y, a, b), d(y, a, m), d(y, m, b)
        return None not in vals and vals[0] > vals[1] + vals[2]
    if axiom == "behrstock":
        y, z, x = w
        a, b = d(y, x, z), d(z, x, y)
        return a is not None and b is not None and min(a, b) > th
    if axiom == "separation":
        y, z = w
        a = d(y, z, z)
        return a is not None and not a < th
    if axiom == "closeness-in-inaction":
        x, z, y = w
        a = d(y, x, z)
        return x not in data.act[z] and y in data.act[x] and y in data.act[z] and a is not None and a > th
    raise KeyError(axiom)


def replay(data, axiom: str, witness: tuple) -> bool:
    """Re-evaluate ``axiom`` at ``witness``; True means the violation reproduces."""
    if isinstance(data, RotatingFamilyData):
        if axiom in _CRF_AXIOMS:
            return _crf_violates(data, axiom, witness)
        data = data.cps
    return _violates(data, axiom, witness)


def _first(data: CPSData, axiom: str, tuples: Iterable[tuple]) -> tuple | None:
    for w in tuples:
        if _violates(data, axiom, w):
            return w
    return None


def cps_check(data: CPSData) -> AxiomReport:
    pts = data.points
    results = []

    def add(axiom, tuples, detail=""):
        w = _first(data, axiom, tuples)
        results.append(AxiomResult(axiom, w is None, detail if w is None else f"violated ({detail})" if detail else "violated", w))

    add("colour-in-action", itertools.product(pts, pts))
    add("symmetry-in-action", itertools.product(pts, pts))
    add("symmetry", ((y, x, z) for y in pts for x in data.domain(y) for z in data.domain(y)))
    add(
        "triangle-inequality",
        ((y, a, m, b) for y in pts for a in data.domain(y) for m in data.domain(y) for b in data.domain(y)),
        "d(a,b) <= d(a,m) + d(m,b)",
    )
    add("behrstock", itertools.product(pts, pts, pts), f"min <= theta = {data.theta}")
    add("separation", ((y, z) for y in pts for z in data.domain(y)), f"d_y(z,z) < theta = {data.theta}")
    add("closeness-in-inaction", itertools.product(pts, pts, pts), f"<= theta = {data.theta}")

    top = max(data.dist.values(), default=Fraction(0))
    T = top + 1
    results.append(
        AxiomResult(
            "properness",
            True,
            f"vacuous on finite data; uniform properness constant T = {T}",
            data={"T": str(T)},
        )
    )
    cover = _greedy_cover(data)
    results.append(
        AxiomResult(
            "finite-filling",
            True,
            f"vacuous on finite data; {len(cover)} active sets cover all of them",
            data={"cover": list(cover)},
        )
    )
    results.append(AxiomResult("note", None, NOT_MODELLED))
    return AxiomReport(results)


def _greedy_cover(data: CPSData) -> tuple[str, ...]:
    target = set().union(*(data.act[p] for p in data.points)) if data.points else set()
    covered: set = set()
    chosen = []
    while covered != target:
        best = max(data.points, key=lambda p: len(data.act[p] - covered))
        chosen.append(best)
        covered |= data.act[best]
    return tuple(chosen)


# -- rotating families -----------------------------------------------------------

Perm = tuple  # tuple of images in the order of data.points


@dataclass(frozen=True)
class RotatingFamilyData:
    """A projection system, named permutations and generators of each Γ_x.

    ``perms[name]`` maps each point to its image. ``gamma[x]`` lists permutation
    names generating Γ_x (empty for the trivial group). The acting group is the
    group generated by all named permutations.
    """

    cps: CPSData
    perms: Mapping[str, Mapping[str, str]]
    gamma: Mapping[str, tuple[str, ...]]
    theta_rot: Fraction

    def __post_init__(self):
        pts = self.cps.points
        object.__setattr__(self, "theta_rot", Fraction(self.theta_rot))
        perms = {}
        for name, mapping in self.perms.items():
            if set(mapping) != set(pts) or set(mapping.values()) != set(pts):
                raise MalformedData(f"permutation {name!r} is not a bijection of the points")
            perms[name] = tuple(mapping[p] for p in pts)
        object.__setattr__(self, "perms", perms)
        gamma = {}
        for x in pts:
            gens = tuple(self.gamma.get(x, ()))
            for g in gens:
                if g not in perms:
                    raise MalformedData(f"unknown permutation {g!r} in Γ_{x}")
                if perms[g][pts.index(x)] != x:
                    raise MalformedData(f"permutation {g!r} in Γ_{x} does not fix {x}")
            gamma[x] = gens
        for x in self.gamma:
            if x not in set(pts):
                raise MalformedData(f"Γ given for unknown point {x!r}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.cps.points)}

    def apply(self, g: Perm, p: str) -> str:
        return g[self.index[p]]


def _compose(g: Perm, h: Perm, index) -> Perm:
    """g after h."""
    return tuple(g[index[x]] for x in h)


def _invert(g: Perm, pts, index) -> Perm:
    out = [None] * len(pts)
    for i, p in enumerate(pts):
        out[index[g[i]]] = p
    return tuple(out)


def generated_group(gens: Iterable[Perm], pts, limit: int = 100_000) -> frozenset:
    index = {p: i for i, p in enumerate(pts)}
    ident = tuple(pts)
    gens = list(gens)
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = _compose(s, g, index)
            if h not in seen:
                if len(seen) >= limit:
                    raise MalformedData("permutation group too large to enumerate")
                seen.add(h)
                queue.append(h)
    return frozenset(seen)


_CRF_AXIOMS = (
    "action-preserves-colours",
    "action-preserves-act",
    "action-preserves-distances",
    "rotation-fixes",
    "rotation-preserves-distances",
    "equivariance",
    "commutation-in-inaction",
    "rotation-bound",
)


def _perm(data: RotatingFamilyData, g) -> Perm:
    return data.perms[g] if isinstance(g, str) else g


def _crf_violates(data: RotatingFamilyData, axiom: str, w: tuple) -> bool:
    cps, pts, idx = data.cps, data.cps.points, data.index
    if axiom == "action-preserves-colours":
        g, i = w
        images = {_perm(data, g)[idx[p]] for p in cps.colours[i]}
        return not any(images == set(c) for c in cps.colours)
    if axiom == "action-preserves-act":
        g, y = w
        gp = _perm(data, g)
        return cps.act[gp[idx[y]]] != {gp[idx[p]] for p in cps.act[y]}
    if axiom == "action-preserves-distances":
        g, y, x, z = w
        gp = _perm(data, g)
        a = cps.d(y, x, z)
        b = cps.d(gp[idx[y]], gp[idx[x]], gp[idx[z]])
        return a is not None and a != b
    if axiom == "rotation-fixes":
        x, g, y = w
        return (y == x or y not in cps.act[x]) and _perm(data, g)[idx[y]] != y
    if axiom == "rotation-preserves-distances":
        x, g, y, a, b = w
        gp = _perm(data, g)
        if not (y == x or y not in cps.act[x]):
            return False
        d1 = cps.d(y, a, b)
        return d1 is not None and d1 != cps.d(y, gp[idx[a]], gp[idx[b]])
    if axiom == "equivariance":
        g, x = w
        gp = _perm(data, g)
        gx = gp[idx[x]]
        inv = _invert(gp, pts, idx)
        conj = {_compose(_compose(gp, h, idx), inv, idx) for h in _gamma_group(data, x)}
        return conj != set(_gamma_group(data, gx))
    if axiom == "commutation-in-inaction":
        x, z, g, h = w
        if x in cps.act[z]:
            return False
        gp, hp = _perm(data, g), _perm(data, h)
        return _compose(gp, hp, idx) != _compose(hp, gp, idx)
    if axiom == "rotation-bound":
        y, x, z, g = w
        gp = _perm(data, g)
        if gp == tuple(pts) or cps.colour_of(x) != cps.colour_of(y) or cps.colour_of(z) != cps.colour_of(y):
            return False
        a = cps.d(y, x, z)
        if a is None or a > cps.theta:
            return False
        b = cps.d(y, x, gp[idx[z]])
        return b is not None and b < data.theta_rot
    raise KeyError(axiom)


def _gamma_group(data: RotatingFamilyData, x: str) -> frozenset:
    cache = data.__dict__.setdefault("_gamma_cache", {})
    if x not in cache:
        cache[x] = generated_group((data.perms[g] for g in data.gamma[x]), data.cps.points)
    return cache[x]


def _sorted_group(group: frozenset, pts) -> list[Perm]:
    ident = tuple(pts)
    return sorted(group, key=lambda g: (g != ident, g))


def crf_check(data: RotatingFamilyData) -> AxiomReport:
    cps = data.cps
    pts = cps.points
    names = list(data.perms)
    whole = _sorted_group(generated_group(data.perms.values(), pts), pts)
    results = []

    def add(axiom, tuples, detail=""):
        w = None
        for t in tuples:
            if _crf_violates(data, axiom, t):
                w = t
                break
        shown = None if w is None else tuple(_name(data, x) for x in w)
        results.append(AxiomResult(axiom, w is None, detail if w is None else "violated", shown))

    add("action-preserves-colours", ((g, i) for g in names for i in range(len(cps.colours))))
    add("action-preserves-act", ((g, y) for g in names for y in pts))
    add(
        "action-preserves-distances",
        ((g, y, x, z) for g in names for y in pts for x in cps.domain(y) for z in cps.domain(y)),
    )
    add("rotation-fixes", ((x, g, y) for x in pts for g in data.gamma[x] for y in pts))
    add(
        "rotation-preserves-distances",
        ((x, g, y, a, b) for x in pts for g in data.gamma[x] for y in pts for a in cps.domain(y) for b in cps.domain(y)),
    )
    results.append(AxiomResult("proper-isotropy", True, "vacuous on finite groups"))
    results.append(AxiomResult("infinite-stabilizers", None, "not modelled: finite permutation data only"))
    add("equivariance", ((g, x) for g in whole for x in pts))
    add(
        "commutation-in-inaction",
        ((x, z, g, h) for x in pts for z in pts for g in data.gamma[x] for h in data.gamma[z]),
    )
    add(
        "rotation-bound",
        (
            (y, x, z, g)
            for c in cps.colours
            for y in c
            for x in c
            for z in c
            if x != y and z != y
            for g in _sorted_group(_gamma_group(data, y), pts)
        ),
        f"Θ_rot = {data.theta_rot}, premise threshold θ = {cps.theta}",
    )
    if data.theta_rot <= 0:
        results.append(AxiomResult("rotation-control-positive", False, "Θ_rot must be > 0"))
    return AxiomReport(cps_check(cps).results + results)


def _name(data: RotatingFamilyData, x):
    if isinstance(x, tuple):
        for name, p in data.perms.items():
            if p == x:
                return name
    return x


# -- strong bounded geodesic image ---------------------------------------------------


def sbgi_check(adjacency: Mapping[str, Iterable[str]], data: CPSData, C) -> AxiomResult:
    """Strong bounded geodesic image for a given constant C.

    For every x, y, s with ``d_s(x, y) > C`` each geodesic from x to y must
    meet a vertex w with ``d(w, s) <= C`` and (w = s or w not active for s).
    A geodesic avoiding all such w exists iff the geodesic DAG has an
    avoiding path, so no geodesic is enumerated.
    """
    from .delta import as_adjacency, bfs_distances

    C = Fraction(C)
    adj = as_adjacency(adjacency)
    dist = {v: bfs_distances(adj, v) for v in adj}
    pts = data.points
    for s in pts:
        good = {w for w in adj if s in dist[w] and dist[w][s] <= C and (w == s or w not in data.act.get(s, ()))}
        for x in data.domain(s):
            for y in data.domain(s):
                val = data.d(s, x, y)
                if val is None or val <= C or y not in dist.get(x, {}):
                    continue
                if _avoiding_geodesic(adj, dist, x, y, good):
                    return AxiomResult("strong-bgi", False, f"C = {C}", (x, y, s))
    return AxiomResult("strong-bgi", True, f"C = {C}")


def _avoiding_geodesic(adj, dist, x, y, bad) -> bool:
    if x in bad or y in bad:
        return False
    total = dist[x][y]
    reach = {x}
    frontier = {x}
    for k in range(1, total + 1):
        nxt = set()
        for u in frontier:
            for w in adj[u]:
                if w not in bad and dist[x].get(w) == k and dist[w].get(y) == total - k:
                    nxt.add(w)
        frontier = nxt
        reach |= nxt
    return y in frontier


# -- file format -----------------------------------------------------------------------


def _frac(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise MalformedData(f"line {lineno}: {tok!r} is not a rational p/q") from None


def parse_cps(text: str):
    """Parse the CPS grammar; returns RotatingFamilyData when rotation lines are present.

    Besides ``colour``/``act``/``dist``/``theta`` the parser accepts
    ``default <p/q>`` to fill missing distance entries. A file without any
    ``act`` line makes every point active for every point.
    """
    colours: dict[str, list[str]] = {}
    act: dict[str, set] = {}
    dist: dict = {}
    theta = None
    default = None
    perms: dict[str, dict] = {}
    gamma: dict[str, list[str]] = {}
    theta_rot = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        head, rest = toks[0], toks[1:]
        if head == "colour" and rest:
            if rest[0] in colours:
                raise MalformedData(f"line {lineno}: colour {rest[0]} declared twice")
            colours[rest[0]] = rest[1:]
        elif head == "act" and rest:
            act.setdefault(rest[0], set()).update(rest[1:])
        elif head == "dist" and len(rest) == 4:
            key = tuple(rest[:3])
            if key in dist:
                raise MalformedData(f"line {lineno}: duplicate distance entry")
            dist[key] = _frac(rest[3], lineno)
        elif head == "theta" and len(rest) == 1:
            theta = _frac(rest[0], lineno)
        elif head == "default" and len(rest) == 1:
            default = _frac(rest[0], lineno)
        elif head == "thetarot" and len(rest) == 1:
            theta_rot = _frac(rest[0], lineno)
        elif head == "perm" and rest:
            name = rest[0]
            cycles = " ".join(rest[1:])
            perms[name] = _parse_cycles(cycles, lineno)
        elif head == "gamma" and rest:
            gamma.setdefault(rest[0], []).extend(rest[1:])
        else:
            raise MalformedData(f"line {lineno}: cannot parse {raw.strip()!r}")
    if theta is None:
        raise MalformedData("missing theta line")
    cols = tuple(tuple(colours[k]) for k in colours)
    pts = [p for c in cols for p in c]
    # no act lines at all means every point is active for every other one
    act_full = {p: frozenset(act.get(p, set())) for p in pts} if act else None
    for p in act:
        if p not in set(pts):
            raise MalformedData(f"act line for unknown point {p!r}")
    cps = CPSData.build(cols, theta, act_full, dist, default)
    if theta_rot is None and not perms and not gamma:
        return cps
    full_perms = {}
    for name, mapping in perms.items():
        for p in mapping:
            if p not in set(pts):
                raise MalformedData(f"permutation {name!r} moves unknown point {p!r}")
        full_perms[name] = {p: mapping.get(p, p) for p in pts}
    return RotatingFamilyData(cps, full_perms, {x: tuple(g) for x, g in gamma.items()}, theta_rot if theta_rot is not None else Fraction(0))


def _parse_cycles(text: str, lineno: int) -> dict:
    mapping: dict[str, str] = {}
    text = text.strip()
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] != "(":
            raise MalformedData(f"line {lineno}: expected '(' in cycle notation")
        end = text.find(")", pos)
        if end < 0:
            raise MalformedData(f"line {lineno}: unterminated cycle")
        cyc = text[pos + 1 : end].split()
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if a in mapping:
                raise MalformedData(f"line {lineno}: point {a!r} appears in two cycles")
            mapping[a] = b
        pos = end + 1
    return mapping
