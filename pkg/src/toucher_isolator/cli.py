"""Command-line entry point: solve, simulate, verify, enumerate, play."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Iterator, TextIO

from . import generators as gen
from . import harness
from .game import GameState, Variant, apply_move, final_score, format_transcript, new_game
from .graph import Claim, PartiallyPlayedGraph, format_graph, read_graph
from .solver import DEFAULT_CAP, CapExceeded, optimal_score, principal_variation
from .strategies import StrategyError, simulate, strategy_from_name

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_QUIT = 0, 1, 2, 3, 4

FORMATS = ("plain", "json", "csv")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    graph: str | None = None
    family: str | None = None
    n: int | None = None
    max_n: int | None = None
    max_m: int | None = None
    k: int | None = None
    variant: Variant = Variant.TOUCHER_ISOLATOR
    toucher: str = "greedy"
    isolator: str = "theorem"
    seed: int = 0
    jobs: int = 1
    fmt: str = "plain"
    out: str | None = None
    verbose: int = 0
    cap: int = DEFAULT_CAP
    campaign: str = "all"
    samples: int = 200
    save: str | None = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "CliConfig":
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__ and v is not None}
        if "variant" in fields:
            fields["variant"] = Variant.parse(fields["variant"])
        cfg = cls(**fields)
        if cfg.subcommand in ("solve", "simulate", "enumerate", "play"):
            if (cfg.graph is None) == (cfg.family is None):
                raise UsageError("give exactly one of --graph or --family")
        return cfg


def _family_name(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    return "k_copies_P3" if key == "k_copies_p3" else key


def load_graphs(cfg: CliConfig) -> Iterator[tuple[str, PartiallyPlayedGraph]]:
    if cfg.graph is not None:
        try:
            yield cfg.graph, read_graph(cfg.graph)
        except OSError as exc:
            raise UsageError(f"cannot read {cfg.graph}: {exc.strerror}") from None
        return
    family = _family_name(cfg.family)
    if cfg.n is None and cfg.max_n is not None and family in ("path", "cycle", "star", "all_trees", "random_tree"):
        lo = 3 if family == "cycle" else 1
        for n in range(lo, cfg.max_n + 1):
            yield from gen.make(gen.FamilySpec(family, n=n, seed=cfg.seed))
        return
    yield from gen.make(gen.FamilySpec(family, n=cfg.n, k=cfg.k, m=cfg.max_m, seed=cfg.seed))


def _single(cfg: CliConfig) -> tuple[str, PartiallyPlayedGraph]:
    graphs = list(load_graphs(cfg))
    if len(graphs) != 1:
        raise UsageError(f"this subcommand needs one graph, the input gives {len(graphs)}")
    return graphs[0]


def _emit(text: str, cfg: CliConfig, out: TextIO) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_solve(cfg: CliConfig, out: TextIO) -> int:
    results = []
    for name, g in load_graphs(cfg):
        state = new_game(g, cfg.variant)
        value = optimal_score(state, cap=cfg.cap)
        line = format_transcript(principal_variation(state, cap=cfg.cap)) if cfg.verbose else None
        results.append((name, value, line))
    if cfg.fmt == "json":
        _emit(json.dumps([{"instance": n, "value": v, "transcript": t} for n, v, t in results], indent=2) + "\n",
              cfg, out)
    elif cfg.fmt == "csv":
        _emit("instance,value\n" + "".join(f"{n},{v}\n" for n, v, _ in results), cfg, out)
    else:
        single = len(results) == 1
        text = ""
        for name, value, line in results:
            text += f"{value}\n" if single else f"{name} {value}\n"
            if line is not None:
                text += line
        _emit(text, cfg, out)
    return EXIT_OK


def cmd_simulate(cfg: CliConfig, out: TextIO) -> int:
    _, g = _single(cfg)
    state = new_game(g, cfg.variant)
    toucher = strategy_from_name(cfg.toucher, cfg.seed, cap=cfg.cap)
    isolator = strategy_from_name(cfg.isolator, cfg.seed, cap=cfg.cap)
    end = simulate(state, toucher, isolator)
    transcript = format_transcript(end, state)
    score = final_score(end)
    if cfg.fmt == "json":
        text = json.dumps({"transcript": transcript.splitlines(), "score": score}, indent=2) + "\n"
    else:
        text = transcript + f"score {score}\n"
    _emit(text, cfg, out)
    return EXIT_OK


def harness_config(cfg: CliConfig) -> harness.HarnessConfig:
    names = harness.CAMPAIGNS if cfg.campaign == "all" else (cfg.campaign,)
    base = harness.HarnessConfig(campaigns=names, seed=cfg.seed, jobs=cfg.jobs, samples=cfg.samples)
    over = {}
    if cfg.max_n is not None:
        over.update(path_n_max=cfg.max_n, tree_n_max=cfg.max_n, strategy_n_max=cfg.max_n)
    if cfg.max_m is not None:
        over.update(lemma_m_max=cfg.max_m, strategy_m_max=cfg.max_m, table_m_max=cfg.max_m,
                    equivalence_m_max=cfg.max_m)
    return harness.HarnessConfig(**{**base.__dict__, **over})


def cmd_verify(cfg: CliConfig, out: TextIO) -> int:
    if cfg.campaign != "all" and cfg.campaign not in harness.CAMPAIGNS:
        raise UsageError(f"unknown campaign {cfg.campaign!r}; choose from all, {', '.join(harness.CAMPAIGNS)}")
    status, reports = harness.run_all(harness_config(cfg))
    if cfg.fmt == "json":
        _emit(harness.reports_to_json(reports) + "\n", cfg, out)
    elif cfg.fmt == "csv":
        _emit(harness.reports_to_csv(reports), cfg, out)
    else:
        lines = []
        for rep in reports:
            lines.append(rep.summary())
            for row in rep.failures()[:20]:
                lines.append(f"  {row.instance}: expected {row.expected}, got {row.actual}")
            if cfg.verbose and rep.notes:
                lines.append("  notes " + json.dumps(rep.notes, sort_keys=True))
        _emit("\n".join(lines) + "\n", cfg, out)
    if cfg.out and cfg.fmt != "plain":
        out.write("\n".join(r.summary() for r in reports) + "\n")
    return EXIT_OK if status == 0 else EXIT_FAIL


def cmd_enumerate(cfg: CliConfig, out: TextIO) -> int:
    graphs = list(load_graphs(cfg))
    if cfg.fmt == "json":
        text = json.dumps([{"name": name, "n": g.n, "edges": [list(e) for e in g.edges]} for name, g in graphs],
                          indent=2) + "\n"
    elif cfg.fmt == "csv":
        text = "name,n,m\n" + "".join(f"{name},{g.n},{g.m}\n" for name, g in graphs)
    else:
        text = "\n".join(format_graph(g, name) for name, g in graphs)
    _emit(text, cfg, out)
    return EXIT_OK


def render_board(state: GameState) -> str:
    g = state.graph
    lines = ["edges:"]
    for e, ((u, v), c) in enumerate(zip(g.edges, g.claims)):
        lines.append(f"  e{e + 1}: {u}-{v} {c.letter}")
    lines.append("adjacency:")
    for v in range(g.n):
        lines.append(f"  {v}: " + " ".join(str(w) for w in g.neighbors(v)))
    return "\n".join(lines) + "\n"


def _read_edge(text: str, state: GameState) -> int | None:
    token = text.strip().lower().removeprefix("e")
    if not token.isdigit():
        return None
    e = int(token) - 1
    if 0 <= e < state.graph.m and state.graph.claims[e] == Claim.UNCLAIMED:
        return e
    return None


def cmd_play(cfg: CliConfig, out: TextIO, inp: TextIO) -> int:
    _, g = _single(cfg)
    start = state = new_game(g, cfg.variant)
    names = {Claim.TOUCHER: cfg.toucher, Claim.ISOLATOR: cfg.isolator}
    humans = {side for side, name in names.items() if name == "human"}
    if len(humans) != 1:
        raise UsageError("exactly one of --toucher/--isolator must be 'human'")
    engine_side = Claim.ISOLATOR if Claim.TOUCHER in humans else Claim.TOUCHER
    engine = strategy_from_name(names[engine_side], cfg.seed, cap=cfg.cap)
    memory = engine.start(state)

    def flush() -> None:
        transcript = format_transcript(state, start)
        out.write("transcript:\n" + transcript)
        if cfg.save:
            with open(cfg.save, "w") as fh:
                fh.write(transcript)

    while not state.is_terminal:
        out.write(render_board(state))
        if state.to_move == engine_side:
            e, memory = engine.move(state, memory)
            out.write(f"engine claims e{e + 1}\n")
            state = apply_move(state, e)
            continue
        while True:
            out.write(f"{state.to_move.name.lower()} to move (edge label or 'quit'): ")
            out.flush()
            line = inp.readline()
            if not line or line.strip().lower() in ("q", "quit", "exit"):
                out.write("\nquit\n")
                flush()
                return EXIT_QUIT
            e = _read_edge(line, state)
            if e is not None:
                break
            out.write(f"not a free edge: {line.strip()!r}\n")
        state = apply_move(state, e)
    out.write(render_board(state))
    out.write(f"score {final_score(state)}\n")
    flush()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--graph", metavar="FILE", help="graph in the edge-list text format")
    src.add_argument("--family", metavar="NAME", help=f"generated family: {', '.join(gen.FAMILIES)}")
    src.add_argument("--n", type=int, help="vertex count (or k for k_copies_P3)")
    src.add_argument("--k", type=int, help="copies for k_copies_P3")
    src.add_argument("--max-n", type=int, dest="max_n", help="largest vertex count")
    src.add_argument("--max-m", type=int, dest="max_m", help="edge count for forests / largest edge count")
    common.add_argument("--variant", choices=("ti", "nlit"), help="ti (default) or nlit")
    common.add_argument("--toucher", help="strategy for Toucher")
    common.add_argument("--isolator", help="strategy for Isolator")
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int)
    common.add_argument("--format", dest="fmt", choices=FORMATS)
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--cap", type=int, help=f"most unclaimed edges to search (default {DEFAULT_CAP})")
    common.add_argument("-v", "--verbose", action="count")

    p = argparse.ArgumentParser(prog="toucher-isolator", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("solve", parents=[common], help="optimal score of a graph")
    sub.add_parser("simulate", parents=[common], help="pit two named strategies against each other")
    v = sub.add_parser("verify", parents=[common], help="run verification campaigns")
    v.add_argument("campaign", nargs="?", default="all", help=f"all or one of {', '.join(harness.CAMPAIGNS)}")
    v.add_argument("--samples", type=int, help="random positions per size for the equivalence checks")
    sub.add_parser("enumerate", parents=[common], help="print the graphs of a family")
    pl = sub.add_parser("play", parents=[common], help="play against an engine in the terminal")
    pl.add_argument("--save", metavar="PATH", help="write the transcript here when the game ends")
    return p


def main(argv: list[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    inp = stdin or sys.stdin
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if ns.subcommand == "play":
        ns.toucher = ns.toucher or "human"
        ns.isolator = ns.isolator or "optimal"
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = CliConfig.from_args(ns)
        if cfg.subcommand == "solve":
            return cmd_solve(cfg, out)
        if cfg.subcommand == "simulate":
            return cmd_simulate(cfg, out)
        if cfg.subcommand == "verify":
            return cmd_verify(cfg, out)
        if cfg.subcommand == "enumerate":
            return cmd_enumerate(cfg, out)
        return cmd_play(cfg, out, inp)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, StrategyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
