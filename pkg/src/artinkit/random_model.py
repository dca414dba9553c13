"""Random Artin groups on complete graphs and Monte Carlo estimates.

Each edge of K_n draws uniformly from {inf, 2, ..., f}; an inf draw deletes
the edge. Trial ``t`` uses its own generator keyed by ``(seed, stream, t)``,
so estimates do not depend on execution order or worker count.
"""

from __future__ import annotations

import csv
import io
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import classify
from .graph import LabelledGraph, odd_subgraph

# stream tags keep the labelled model and G(n, p) draws independent
_LABEL_STREAM = 0
_ER_STREAM = 1


@dataclass(frozen=True)
class ModelConfig:
    n: int
    f_of_n: int
    seed: int
    trials: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.f_of_n < 2:
            raise ValueError("f(n) must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    @property
    def pool(self) -> tuple:
        """Label pool; None stands for infinity."""
        return (None,) + tuple(range(2, self.f_of_n + 1))


def _rng(seed: int, stream: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), stream, trial])))


def vertex_names(n: int) -> tuple[str, ...]:
    return tuple(f"v{i}" for i in range(1, n + 1))


def sample_labels(cfg: ModelConfig, trial_index: int) -> np.ndarray:
    """Raw draws for the edges of K_n in lexicographic order: 0 is inf, k >= 2 a label."""
    m = cfg.n * (cfg.n - 1) // 2
    draws = _rng(cfg.seed, _LABEL_STREAM, trial_index).integers(0, cfg.f_of_n, size=m)
    return np.where(draws == 0, 0, draws + 1)


def sample_graph(cfg: ModelConfig, trial_index: int) -> LabelledGraph:
    names = vertex_names(cfg.n)
    labels = sample_labels(cfg, trial_index)
    edges = {}
    for k, (i, j) in enumerate(_pairs(cfg.n)):
        if labels[k]:
            edges[frozenset((names[i], names[j]))] = int(labels[k])
    return LabelledGraph(names, edges)


def _pairs(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def odd_edge_probability(f_of_n: int) -> Fraction:
    if f_of_n < 2:
        raise ValueError("f(n) must be >= 2")
    return Fraction((f_of_n - 1) // 2, f_of_n)


# -- predicates ----------------------------------------------------------------


def _connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    parts = n
    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            parts -= 1
    return parts <= 1


def _single_odd(cfg: ModelConfig, t: int) -> bool:
    labels = sample_labels(cfg, t)
    pairs = _pairs(cfg.n)
    return _connected(cfg.n, (pairs[k] for k in np.flatnonzero(labels % 2 == 1)))


def _large(cfg: ModelConfig, t: int) -> bool:
    return not np.any(sample_labels(cfg, t) == 2)


def _extra_large(cfg: ModelConfig, t: int) -> bool:
    labels = sample_labels(cfg, t)
    return not np.any((labels == 2) | (labels == 3))


def _via_graph(pred: Callable[[LabelledGraph], bool], cheap_reject: Callable | None = None):
    def run(cfg: ModelConfig, t: int) -> bool:
        if cheap_reject is not None and cheap_reject(cfg, t):
            return False
        return pred(sample_graph(cfg, t))

    return run


PREDICATES: dict[str, Callable[[ModelConfig, int], bool]] = {
    "large": _large,
    "hyperbolic": _via_graph(lambda g: classify.type_flags(g).hyperbolic),
    "extra_large": _extra_large,
    "single_odd_component": _single_odd,
    # the verdict needs large type first, so a label 2 settles it without building the graph
    "theorem_applicable": _via_graph(classify.theorem_applicable, lambda c, t: not _large(c, t)),
    "hopf_verdict_hopfian": _via_graph(lambda g: classify.hopf_verdict(g).hopfian, lambda c, t: not _large(c, t)),
}


@dataclass(frozen=True)
class EstimateReport:
    predicate: str
    hits: int
    trials: int
    seed: int
    n: int | None = None
    f_of_n: int | None = None
    p: str | None = None

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def std_error(self) -> float:
        q = self.estimate
        return math.sqrt(q * (1 - q) / self.trials)

    @property
    def half_width(self) -> float:
        """95% normal-approximation half width; degenerate (0) at estimates 0 and 1."""
        return 1.96 * self.std_error

    @property
    def wilson(self) -> tuple[float, float]:
        z, n, q = 1.96, self.trials, self.estimate
        centre = (q + z * z / (2 * n)) / (1 + z * z / n)
        spread = z * math.sqrt(q * (1 - q) / n + z * z / (4 * n * n)) / (1 + z * z / n)
        return max(0.0, centre - spread), min(1.0, centre + spread)

    def to_dict(self) -> dict:
        lo, hi = self.wilson
        out = {
            "predicate": self.predicate,
            "hits": self.hits,
            "trials": self.trials,
            "estimate": self.estimate,
            "half_width": self.half_width,
            "wilson": [lo, hi],
            "seed": self.seed,
        }
        if self.n is not None:
            out["n"] = self.n
        if self.f_of_n is not None:
            out["f"] = self.f_of_n
        if self.p is not None:
            out["p"] = self.p
        return out


def _count(task) -> int:
    kind, args, lo, hi = task
    if kind == "model":
        cfg, name = args
        pred = PREDICATES[name]
        return sum(1 for t in range(lo, hi) if pred(cfg, t))
    n, p, seed = args
    return sum(1 for t in range(lo, hi) if _er_trial(n, p, seed, t))


def _run(kind: str, args, trials: int, jobs: int) -> int:
    jobs = max(1, jobs)
    step = -(-trials // jobs)
    tasks = [(kind, args, lo, min(lo + step, trials)) for lo in range(0, trials, step)]
    if jobs == 1 or len(tasks) == 1:
        return sum(_count(t) for t in tasks)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(_count, tasks))


def genericity_estimate(cfg: ModelConfig, predicate: str, jobs: int = 1) -> EstimateReport:
    if predicate not in PREDICATES:
        raise ValueError(f"unknown predicate {predicate!r}; choose from {sorted(PREDICATES)}")
    hits = _run("model", (cfg, predicate), cfg.trials, jobs)
    return EstimateReport(predicate, hits, cfg.trials, cfg.seed, cfg.n, cfg.f_of_n)


def _er_trial(n: int, p: Fraction, seed: int, t: int) -> bool:
    m = n * (n - 1) // 2
    if p == 1:
        return True
    if p == 0:
        return n <= 1
    # exact rational threshold: edge present iff draw < p * denominator
    draws = _rng(seed, _ER_STREAM, t).integers(0, p.denominator, size=m)
    pairs = _pairs(n)
    return _connected(n, (pairs[k] for k in np.flatnonzero(draws < p.numerator)))


def er_connectivity_estimate(n: int, p, trials: int, seed: int, jobs: int = 1) -> EstimateReport:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    hits = _run("er", (n, p, seed), trials, jobs)
    return EstimateReport("er_connected", hits, trials, seed, n, None, str(p))


# -- sweeps ----------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    ns: tuple[int, ...]
    f_expr: str
    trials: int
    seed: int
    predicates: tuple[str, ...]

    def f_of(self, n: int) -> int:
        return evaluate_f(self.f_expr, n)


def evaluate_f(expr: str, n: int) -> int:
    """f(n) for expressions ``n``, ``2n``, ``n^2``, ``k`` or ``const k``."""
    e = expr.replace(" ", "")
    if e == "n":
        return n
    if e == "2n":
        return 2 * n
    if e in ("n^2", "n**2"):
        return n * n
    m = re.fullmatch(r"(?:const)?(\d+)", e)
    if m:
        return int(m.group(1))
    raise ValueError(f"unsupported f expression {expr!r}; use n, 2n, n^2 or const k")


def parse_sweep(text: str, seed: int | None = None) -> SweepConfig:
    """``key=value`` items separated by ``;`` or newlines: n, f, trials, seed, predicates."""
    items = {}
    for part in re.split(r"[;\n]", text):
        part = part.split("#", 1)[0].strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {part!r}")
        items[key.strip()] = value.strip()
    try:
        ns = tuple(int(x) for x in re.split(r"[,\s]+", items["n"].strip("[]")) if x)
        f_expr = items.get("f", "n")
        trials = int(items.get("trials", "1000"))
        cfg_seed = int(items.get("seed", "0")) if seed is None else seed
        preds = tuple(p for p in re.split(r"[,\s]+", items.get("predicates", "single_odd_component")) if p)
    except KeyError as exc:
        raise ValueError(f"missing sweep key {exc}") from None
    for p in preds:
        if p not in PREDICATES:
            raise ValueError(f"unknown predicate {p!r}")
    for n in ns:
        evaluate_f(f_expr, n)
    return SweepConfig(ns, f_expr, trials, cfg_seed, preds)


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list[EstimateReport]:
    out = []
    for n in cfg.ns:
        mc = ModelConfig(n, cfg.f_of(n), cfg.seed, cfg.trials)
        for pred in cfg.predicates:
            out.append(genericity_estimate(mc, pred, jobs))
    return out


def sweep_csv(reports: list[EstimateReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "f", "predicate", "hits", "trials", "estimate", "half_width", "wilson_low", "wilson_high", "seed"])
    for r in reports:
        lo, hi = r.wilson
        w.writerow([r.n, r.f_of_n, r.predicate, r.hits, r.trials, f"{r.estimate:.6f}", f"{r.half_width:.6f}", f"{lo:.6f}", f"{hi:.6f}", r.seed])
    return buf.getvalue()


def single_odd_iff_odd_connected(g: LabelledGraph) -> bool:
    """The reduction behind the G(n, p) comparison, evaluated on one graph."""
    return (len(classify.odd_decomposition(g).components) == 1) == odd_subgraph(g).is_connected()
