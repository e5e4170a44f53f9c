"""Verification campaigns: each claim becomes a report of per-instance rows."""

from __future__ import annotations

import csv
import io
import json
import logging
import random
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from typing import Callable, Iterable

from . import generators as gen
from .game import GameState, Variant, new_game
from .graph import Claim, PartiallyPlayedGraph, build_graph, find_loci, stats
from .solver import CapExceeded, best_response_score, optimal_score
from .strategies import LemmaIsolator, TheoremIsolator, is_base_case
from .surgery import (
    SurgeryDelta,
    remove_isolator_subgraph,
    remove_length1_components,
    remove_toucher_edge,
    table_row_for_isolator_path,
    table_row_for_length1,
    table_row_for_toucher_edge,
)

log = logging.getLogger(__name__)

PATH_CYCLE_MAX_N = 14
TREE_MAX_N = 9
FOREST_MAX_M = 9


class HarnessCapError(CapExceeded):
    pass


@dataclass
class Row:
    instance: str
    expected: object
    actual: object
    passed: bool


@dataclass
class VerificationReport:
    experiment: str
    params: dict
    rows: list[Row] = field(default_factory=list)
    wall_ms: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[Row]:
        return [r for r in self.rows if not r.passed]

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": self.params,
            "rows": [asdict(r) for r in self.rows],
            "pass": self.passed,
            "wall_ms": self.wall_ms,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        rep = cls(d["experiment"], d["params"], [Row(**r) for r in d["rows"]], d["wall_ms"], d.get("notes", {}))
        if rep.passed != d["pass"]:
            raise ValueError("aggregate pass flag disagrees with the rows")
        return rep

    def summary(self) -> str:
        bad = len(self.failures())
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.experiment}: {len(self.rows) - bad}/{len(self.rows)} rows ({self.wall_ms / 1000:.1f}s)"


def reports_to_json(reports: Iterable[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


def reports_from_json(text: str) -> list[VerificationReport]:
    return [VerificationReport.from_dict(d) for d in json.loads(text)]


def reports_to_csv(reports: Iterable[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment", "instance", "expected", "actual", "pass"])
    for rep in reports:
        for r in rep.rows:
            w.writerow([rep.experiment, r.instance, r.expected, r.actual, int(r.passed)])
    return buf.getvalue()


# closed forms under test; module-level so they pickle for worker processes


def path_value(n: int) -> int:
    return (n + 3) // 5


def cycle_value(n: int) -> int:
    return (n + 1) // 5


def tree_lower(n: int) -> int:
    return (n + 3) // 5


def tree_weak_lower(n: int) -> int:
    return -(-(n + 2) // 8)


def tree_upper(n: int) -> int:
    return (n - 1) // 2


def lemma_bound(m: int, k: int, l: int) -> int:
    return (m + 4 * k - 3 * l + 4) // 5


def copies_of_p3(k: int) -> int:
    return k


def _shifted(f: Callable, delta: int, *args) -> int:
    return f(*args) + delta


@dataclass(frozen=True)
class Formulas:
    path: Callable[[int], int] = path_value
    cycle: Callable[[int], int] = cycle_value
    tree_lower: Callable[[int], int] = tree_lower
    tree_weak_lower: Callable[[int], int] = tree_weak_lower
    tree_upper: Callable[[int], int] = tree_upper
    lemma: Callable[[int, int, int], int] = lemma_bound
    kp3: Callable[[int], int] = copies_of_p3
    table_shift: int = 0
    equivalence_shift: int = 0

    def perturbed(self, name: str, delta: int = 1) -> "Formulas":
        """Copy with one formula moved by ``delta`` (negative controls)."""
        if name in ("table_shift", "equivalence_shift"):
            return replace(self, **{name: getattr(self, name) + delta})
        return replace(self, **{name: partial(_shifted, getattr(self, name), delta)})


PERTURBABLE = ("path", "cycle", "tree_lower", "tree_weak_lower", "tree_upper", "lemma", "kp3",
               "table_shift", "equivalence_shift")


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _timed(name: str, params: dict, body: Callable[[VerificationReport], None]) -> VerificationReport:
    rep = VerificationReport(name, params)
    t0 = time.perf_counter()
    body(rep)
    rep.wall_ms = round((time.perf_counter() - t0) * 1000, 1)
    return rep


def _check_cap(value: int, cap: int, what: str) -> None:
    if value > cap:
        raise HarnessCapError(f"{what}={value} exceeds the supported maximum {cap}")


def _solve_ti(g: PartiallyPlayedGraph) -> int:
    return optimal_score(g, Variant.TOUCHER_ISOLATOR)


def _solve_nl(g: PartiallyPlayedGraph) -> int:
    return optimal_score(g, Variant.NON_LEAF)


def verify_path_cycle(n_max: int = 12, formulas: Formulas = Formulas(), jobs: int = 1) -> VerificationReport:
    _check_cap(n_max, PATH_CYCLE_MAX_N, "n_max")

    def body(rep: VerificationReport) -> None:
        ns = list(range(3, n_max + 1))
        pv = _map(_solve_ti, [gen.path(n) for n in ns], jobs)
        cv = _map(_solve_ti, [gen.cycle(n) for n in ns], jobs)
        for n, v in zip(ns, pv):
            rep.rows.append(Row(f"P{n}", formulas.path(n), v, v == formulas.path(n)))
        for n, v in zip(ns, cv):
            rep.rows.append(Row(f"C{n}", formulas.cycle(n), v, v == formulas.cycle(n)))

    return _timed("path_cycle", {"n_max": n_max}, body)


def verify_tight_examples(k_max: int = 3, formulas: Formulas = Formulas()) -> VerificationReport:
    """The six-vertex path meets the (n+2)/8 bound; k disjoint P3 score k."""

    def body(rep: VerificationReport) -> None:
        if k_max >= 1:
            v = _solve_ti(gen.path(6))
            rep.rows.append(Row("P6 vs (n+2)/8", formulas.tree_weak_lower(6), v, v == formulas.tree_weak_lower(6)))
        for k in range(1, k_max + 1):
            v = _solve_ti(gen.k_copies_p3(k))
            rep.rows.append(Row(f"{k}P3", formulas.kp3(k), v, v == formulas.kp3(k)))

    return _timed("tight_examples", {"k_max": k_max}, body)


def verify_tree_bounds(n_max: int = 9, formulas: Formulas = Formulas(), jobs: int = 1) -> VerificationReport:
    _check_cap(n_max, TREE_MAX_N, "n_max")

    def body(rep: VerificationReport) -> None:
        for n in range(3, n_max + 1):
            trees = gen.all_trees(n)
            values = _map(_solve_ti, trees, jobs)
            lo, hi, weak = formulas.tree_lower(n), formulas.tree_upper(n), formulas.tree_weak_lower(n)
            for i, v in enumerate(values):
                ok = lo <= v <= hi and v >= weak
                rep.rows.append(Row(f"T{n}.{i}", f"[{max(lo, weak)}, {hi}]", v, ok))
            p = _solve_ti(gen.path(n))
            s = _solve_ti(gen.star(n))
            rep.rows.append(Row(f"min T{n} (=P{n})", p, min(values), min(values) == p and p == formulas.path(n)))
            rep.rows.append(Row(f"S{n}", hi, s, s == hi))
            rep.rows.append(Row(f"max T{n} (=S{n})", s, max(values), max(values) == s))

    return _timed("tree_bounds", {"n_max": n_max}, body)


def _forests(m_max: int) -> list[tuple[str, PartiallyPlayedGraph]]:
    out = []
    for m in range(1, m_max + 1):
        out += [(f"F{m}.{i}", g) for i, g in enumerate(gen.all_forests(m))]
    return out


def verify_lemma_bound(m_max: int = 9, formulas: Formulas = Formulas(), jobs: int = 1) -> VerificationReport:
    _check_cap(m_max, FOREST_MAX_M, "m_max")

    def body(rep: VerificationReport) -> None:
        forests = _forests(m_max)
        values = _map(_solve_nl, [g for _, g in forests], jobs)
        buckets: dict[str, int] = {}
        for (name, g), v in zip(forests, values):
            st = stats(g)
            bound = formulas.lemma(st.m, st.k, st.l)
            rep.rows.append(Row(name, f">= {bound}", v, v >= bound))
            key = f"{st.m},{st.k},{st.l}"
            buckets[key] = min(v, buckets.get(key, v))
            if is_base_case(g):
                cap = 3 * st.l - 4 * st.k
                rep.rows.append(Row(f"{name} base", f"m <= {cap}", st.m, st.m <= cap))
        rep.notes["min_value_by_mkl"] = buckets

    return _timed("lemma_bound", {"m_max": m_max}, body)


def _theorem_task(g: PartiallyPlayedGraph) -> tuple[int, int, list[tuple[int, int]]]:
    handoffs = []

    def leaf(_state, mem) -> None:
        if mem.handoff is not None:
            handoffs.append(mem.handoff[:2])

    score = best_response_score(g, Variant.TOUCHER_ISOLATOR, TheoremIsolator(), Claim.ISOLATOR, on_leaf=leaf)
    return score, _solve_ti(g), sorted(set(handoffs))


def _lemma_task(g: PartiallyPlayedGraph) -> tuple[int, int, int, int]:
    worst = [None, None]  # min profit sum with no passes, min slack

    def leaf(_state, mem) -> None:
        for c in mem.cycles:
            if c.passes == 0:
                worst[0] = c.profit_sum if worst[0] is None else min(worst[0], c.profit_sum)
            worst[1] = c.slack if worst[1] is None else min(worst[1], c.slack)

    score = best_response_score(g, Variant.NON_LEAF, LemmaIsolator(), Claim.ISOLATOR, on_leaf=leaf)
    return score, _solve_nl(g), worst[0], worst[1]


def verify_strategy_guarantees(
    n_max: int = 9, m_max: int = 9, formulas: Formulas = Formulas(), jobs: int = 1
) -> VerificationReport:
    _check_cap(n_max, TREE_MAX_N, "n_max")
    _check_cap(m_max, FOREST_MAX_M, "m_max")

    def body(rep: VerificationReport) -> None:
        trees = [(f"T{n}.{i}", n, g) for n in range(3, n_max + 1) for i, g in enumerate(gen.all_trees(n))]
        gaps: dict[int, int] = defaultdict(int)
        handoff_ok = handoff_strict = handoffs = 0
        for (name, n, g), (score, opt, hands) in zip(trees, _map(_theorem_task, [t[2] for t in trees], jobs)):
            bound = formulas.tree_lower(n)
            rep.rows.append(Row(f"theorem {name}", f">= {bound}", score, score >= bound and score <= opt))
            gaps[opt - score] += 1
            for r, l1 in hands:
                handoffs += 1
                handoff_ok += r + 1 >= l1
                handoff_strict += r - l1 - 1 >= 0
        forests = _forests(m_max)
        worst_sum = worst_slack = None
        for (name, g), (score, opt, psum, slack) in zip(forests, _map(_lemma_task, [f[1] for f in forests], jobs)):
            st = stats(g)
            bound = formulas.lemma(st.m, st.k, st.l)
            rep.rows.append(Row(f"lemma {name}", f">= {bound}", score, score >= bound and score <= opt))
            gaps[opt - score] += 1
            if psum is not None:
                worst_sum = psum if worst_sum is None else min(worst_sum, psum)
            if slack is not None:
                worst_slack = slack if worst_slack is None else min(worst_slack, slack)
        if forests:
            rep.rows.append(Row("cycle profit sum (no passes)", ">= 2", worst_sum,
                                worst_sum is None or worst_sum >= 2))
            rep.rows.append(Row("cycle slack 5r + change", ">= 0", worst_slack,
                                worst_slack is None or worst_slack >= 0))
        if trees:
            rep.rows.append(Row("handoffs with r + 1 >= l1", handoffs, handoff_ok, handoff_ok == handoffs))
        rep.notes["gap_to_optimum"] = {str(k): v for k, v in sorted(gaps.items())}
        rep.notes["handoffs"] = {"total": handoffs, "r+1>=l1": handoff_ok, "r-l1-1>=0": handoff_strict}

    return _timed("strategy_guarantees", {"n_max": n_max, "m_max": m_max}, body)


def _table_task(args: tuple[str, PartiallyPlayedGraph, int]) -> list[Row]:
    name, g, shift = args
    rows = []
    good = total = 0
    for e in range(g.m):
        marked = g.with_claims({e: Claim.TOUCHER})
        res = remove_toucher_edge(marked, e, check_table=False)
        row = table_row_for_toucher_edge(marked, e)
        total += 1
        good += (res.delta == row.delta and row.delta.dpotential + shift == res.delta.dpotential
                 and res.profit == row.profit and res.profit >= 0)
    rows.append(Row(f"{name} toucher", total, good, good == total))
    good = total = 0
    for loc in find_loci(g):
        marked = g.with_claims({e: Claim.ISOLATOR for e in loc.edges})
        res = remove_isolator_subgraph(marked, loc.edges)
        row = table_row_for_isolator_path(marked, loc.edges)
        r = loc.length - 1
        profit = res.delta.dpotential + r - 1
        total += 1
        good += (res.delta == row.delta and row.delta.dpotential + shift == res.delta.dpotential
                 and profit == row.profit and profit >= 0)
    rows.append(Row(f"{name} isolator", total, good, good == total))
    res = remove_length1_components(g)
    row = table_row_for_length1(g)
    ok = res.delta == row.delta and row.delta.dpotential + shift == res.q and res.profit == res.q >= 0
    rows.append(Row(f"{name} length1", row.delta.as_tuple(), res.delta.as_tuple(), ok))
    return rows


def random_relabel(g: PartiallyPlayedGraph, rng: random.Random) -> PartiallyPlayedGraph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    items = [(perm[u], perm[v]) if rng.random() < 0.5 else (perm[v], perm[u]) for u, v in g.edges]
    rng.shuffle(items)
    return build_graph(items, g.n)


def random_position(m: int, rng: random.Random) -> tuple[PartiallyPlayedGraph, Claim]:
    """A relabeled forest with m edges, random claims and a random side to move."""
    g = random_relabel(rng.choice(gen.all_forests(m)), rng)
    claims = {e: rng.choices((Claim.UNCLAIMED, Claim.TOUCHER, Claim.ISOLATOR), (2, 1, 1))[0] for e in range(g.m)}
    return g.with_claims(claims), rng.choice((Claim.TOUCHER, Claim.ISOLATOR))


def _value(g: PartiallyPlayedGraph, variant: Variant, side: Claim, leaves=None) -> int:
    return optimal_score(new_game(g, variant, to_move=side, leaves=leaves))


def _equivalence_task(args: tuple[int, int, int, int]) -> list[Row]:
    m, j, seed, shift = args
    rng = random.Random(f"{seed}:{m}:{j}")
    g, side = random_position(m, rng)
    tag = f"m{m}.s{j}"
    rows = []
    nl, ti = Variant.NON_LEAF, Variant.TOUCHER_ISOLATOR

    # Toucher edge split, non-leaf game
    e = rng.randrange(g.m)
    gt = g.with_claims({e: Claim.TOUCHER})
    a = _value(gt, nl, side)
    b = _value(remove_toucher_edge(gt, e).graph, nl, side) + shift
    rows.append(Row(f"{tag} split-toucher", a, b, a == b))

    # Isolator subgraph, ordinary game: any subgraph works
    h = sorted(rng.sample(range(g.m), rng.randint(1, g.m)))
    gi = g.with_claims({x: Claim.ISOLATOR for x in h})
    res = remove_isolator_subgraph(gi, h)
    a = _value(gi, ti, side)
    b = _value(res.graph, ti, side) + res.internal + shift
    rows.append(Row(f"{tag} isolator-subgraph ti", a, b, a == b))

    # same subgraph, non-leaf game, leaf set carried over
    carried = {res.vertex_map[v] for v in gi.leaves() if v in res.vertex_map}
    a = _value(gi, nl, side)
    b = _value(res.graph, nl, side, leaves=carried) + res.non_leaf_internal + shift
    rows.append(Row(f"{tag} isolator-subgraph nlit", a, b, a == b))

    # Isolator path, non-leaf game, leaves recomputed on the reduced graph
    loc = rng.choice(find_loci(g))
    gp = g.with_claims({x: Claim.ISOLATOR for x in loc.edges})
    res = remove_isolator_subgraph(gp, loc.edges)
    a = _value(gp, nl, side)
    b = _value(res.graph, nl, side) + res.non_leaf_internal + shift
    rows.append(Row(f"{tag} isolator-path nlit", a, b, a == b))

    # dropping single-edge components, non-leaf game
    a = _value(g, nl, side)
    b = _value(remove_length1_components(g).graph, nl, side) + shift
    rows.append(Row(f"{tag} drop-length1", a, b, a == b))
    return rows


def verify_surgery(
    m_max: int = 8,
    samples: int = 200,
    eq_m_max: int = 9,
    seed: int = 0,
    formulas: Formulas = Formulas(),
    jobs: int = 1,
) -> VerificationReport:
    _check_cap(m_max, FOREST_MAX_M, "m_max")
    _check_cap(eq_m_max, FOREST_MAX_M, "eq_m_max")

    def body(rep: VerificationReport) -> None:
        tasks = [(name, g, formulas.table_shift) for name, g in _forests(m_max)]
        for rows in _map(_table_task, tasks, jobs):
            rep.rows.extend(rows)
        tasks = [(m, j, seed, formulas.equivalence_shift) for m in range(1, eq_m_max + 1) for j in range(samples)]
        for rows in _map(_equivalence_task, tasks, jobs):
            rep.rows.extend(rows)

    return _timed("surgery", {"m_max": m_max, "samples": samples, "eq_m_max": eq_m_max, "seed": seed}, body)


CAMPAIGNS = ("paths", "tight", "trees", "lemma", "strategies", "surgery")


@dataclass(frozen=True)
class HarnessConfig:
    campaigns: tuple[str, ...] = CAMPAIGNS
    path_n_max: int = 12
    tight_k_max: int = 3
    tree_n_max: int = 9
    lemma_m_max: int = 9
    strategy_n_max: int = 9
    strategy_m_max: int = 9
    table_m_max: int = 8
    equivalence_m_max: int = 9
    samples: int = 200
    seed: int = 0
    jobs: int = 1
    formulas: Formulas = Formulas()

    @classmethod
    def zero(cls, **kw) -> "HarnessConfig":
        """Every cap at zero: campaigns run but check nothing."""
        return cls(path_n_max=0, tight_k_max=0, tree_n_max=0, lemma_m_max=0, strategy_n_max=0,
                   strategy_m_max=0, table_m_max=0, equivalence_m_max=0, samples=0, **kw)


def run_campaign(name: str, cfg: HarnessConfig) -> VerificationReport:
    f, jobs = cfg.formulas, cfg.jobs
    if name == "paths":
        return verify_path_cycle(cfg.path_n_max, f, jobs)
    if name == "tight":
        return verify_tight_examples(cfg.tight_k_max, f)
    if name == "trees":
        return verify_tree_bounds(cfg.tree_n_max, f, jobs)
    if name == "lemma":
        return verify_lemma_bound(cfg.lemma_m_max, f, jobs)
    if name == "strategies":
        return verify_strategy_guarantees(cfg.strategy_n_max, cfg.strategy_m_max, f, jobs)
    if name == "surgery":
        return verify_surgery(cfg.table_m_max, cfg.samples, cfg.equivalence_m_max, cfg.seed, f, jobs)
    raise ValueError(f"unknown campaign {name!r}; choose from {', '.join(CAMPAIGNS)}")


def run_all(cfg: HarnessConfig = HarnessConfig()) -> tuple[int, list[VerificationReport]]:
    """Run the configured campaigns; exit status 1 iff any row fails."""
    reports = []
    for name in cfg.campaigns:
        rep = run_campaign(name, cfg)
        log.info(rep.summary())
        reports.append(rep)
    if not any(rep.rows for rep in reports):
        log.warning("no instances were checked; every cap is zero")
    return (0 if all(r.passed for r in reports) else 1), reports
