"""Command-line entry point: ``gamesynth <command> FILE [options]``.

Every command prints one JSON report on standard output.  Exit status is 0
when the requested object was computed, 2 when a checked property does not
hold (or BWC synthesis finds nothing), 1 on any input error.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from fractions import Fraction
from pathlib import Path

from .admissibility import admissible_strategies, assume_admissible_check, dominates, win_hyp_solve
from .arena import ADAM, EVE, Arena, ArenaError, Player
from .bwc import BwcInstance, CapExceeded, NotFound, bwc_synthesize, certificate_report
from .io import ArenaBundle, DocumentError, load_document, resolve_state
from .mdp import SupportViolation, chain_expected_mp, induce_chain, optimal_expectation
from .mpgames import NonTotalRestriction, solve_mp_game
from .parity import solve_buchi
from .play import Lasso, PayoffKind
from .rational import as_fraction, fraction_str
from .regret import (
    PlayWitness,
    RegretReport,
    min_regret_arbitrary,
    min_regret_memoryless_adversary,
    regret_vs_arbitrary,
    regret_vs_memoryless,
)
from .sim import SimConfig, estimate_expected_mp
from .strategy import FiniteMemoryStrategy, enumerate_strategies, memoryless, strategy_from_table, strategy_table
from .words import LassoWord, WeightedAutomaton, WordStrategy, min_regret_words, positional_resolver, regret_vs_words

FORMAT_VERSION = 1


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


# -- JSON conversion ----------------------------------------------------


def _key(k) -> str:
    return k if isinstance(k, str) else str(k)


def to_json(x):
    """Plain JSON value; exact numbers become fraction strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, FiniteMemoryStrategy):
        table = strategy_table(x)
        if x.labels is not None:
            table["labels"] = [str(lab) for lab in x.labels]
        return table
    if isinstance(x, WordStrategy):
        return {
            "memory": x.memory_size,
            "initial_memory": x.initial_memory,
            "rows": [
                [m, q, a, t.dst, x.update.get((m, q, a), m)]
                for (m, q, a), t in sorted(x.choice.items(), key=lambda kv: repr(kv[0]))
            ],
        }
    if isinstance(x, Lasso):
        return {"stem": list(x.stem), "cycle": list(x.cycle)}
    if isinstance(x, LassoWord):
        return {"stem": "".join(x.stem), "cycle": "".join(x.cycle), "word": str(x)}
    if isinstance(x, PlayWitness):
        return {
            "achieved": to_json(x.achieved),
            "best_response": to_json(x.best_response),
            "deviation": to_json(x.deviation),
        }
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {_key(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [to_json(v) for v in items]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _emit(command: str, body: dict) -> None:
    report = {"format_version": FORMAT_VERSION, "command": command}
    report.update(to_json(body))
    print(json.dumps(report, indent=2))


# -- argument helpers ---------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact number: {text!r}") from None


def _load(path: str):
    try:
        return load_document(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _bundle(path: str) -> ArenaBundle:
    doc = _load(path)
    if not isinstance(doc, ArenaBundle):
        raise InputError(f"{path} is an automaton document, an arena is needed")
    return doc


def _automaton(path: str) -> WeightedAutomaton:
    doc = _load(path)
    if not isinstance(doc, WeightedAutomaton):
        raise InputError(f"{path} is an arena document, an automaton is needed")
    return doc


def parse_choices(arena: Arena, text: str) -> dict:
    """``"1->2,2->3"`` as a state-to-successor map."""
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "->" not in part:
            raise InputError(f"bad choice {part!r}; expected SRC->DST")
        a, b = (x.strip() for x in part.split("->", 1))
        out[resolve_state(arena, a)] = resolve_state(arena, b)
    return out


def strategy_arg(arena: Arena, player: Player, text: str) -> FiniteMemoryStrategy:
    """A memoryless choice list or the path of a JSON transducer table."""
    if text.strip().endswith(".json") or Path(text).is_file():
        try:
            table = json.loads(Path(text).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read {text}: {exc.strerror or exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{text}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        strat = strategy_from_table(arena, table)
        if strat.player is not player:
            raise InputError(f"{text} holds a {strat.player} strategy, {player} was expected")
        return strat
    choices = parse_choices(arena, text)
    for s, t in choices.items():
        if arena.owner[s] is not player:
            raise InputError(f"state {s!r} does not belong to {player}")
        if not arena.has_edge(s, t):
            raise InputError(f"{s!r}->{t!r} is not an edge")
    return memoryless(arena, player, choices)


def resolver_arg(aut: WeightedAutomaton, text: str) -> WordStrategy:
    """``"1:a->2,1:b->3"`` as a memoryless resolver."""
    table = {str(q): q for q in aut.states}
    pick = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            lhs, dst = part.split("->", 1)
            q, a = lhs.split(":", 1)
            pick[(table[q.strip()], a.strip())] = table[dst.strip()]
        except (ValueError, KeyError):
            raise InputError(f"bad resolver entry {part!r}; expected STATE:LETTER->STATE") from None
    for (q, a), t in pick.items():
        if a not in aut.alphabet or all(tr.dst != t for tr in aut.options(q, a)):
            raise InputError(f"no transition {q!r} -{a}-> {t!r}")
    return positional_resolver(aut, pick)


def _need_rnd(bundle: ArenaBundle):
    if bundle.rnd is None:
        raise InputError('the arena document has no "adversary" distribution')
    return bundle.rnd


def _need_objectives(bundle: ArenaBundle):
    pair = bundle.objective_pair
    if pair is None:
        raise InputError('the arena document needs "objectives" with "eve" and "adam" targets')
    return pair


# -- commands -----------------------------------------------------------


def cmd_solve_mp(args) -> int:
    arena = _bundle(args.file).arena
    rep = solve_mp_game(arena)
    _emit("solve-mp", {
        "values": {s: rep.value[s] for s in arena.states},
        "initial": arena.initial,
        "eve_strategy": rep.eve_strategy,
        "adam_strategy": rep.adam_strategy,
    })
    return 0


def cmd_mdp_expect(args) -> int:
    bundle = _bundle(args.file)
    arena, rnd = bundle.arena, _need_rnd(bundle)
    best, best_sigma = optimal_expectation(arena, rnd)
    body = {"optimal": {"expectation": best, "strategy": best_sigma}}
    if args.sigma:
        sigma = strategy_arg(arena, EVE, args.sigma)
        chain = induce_chain(arena, sigma, rnd)
        body["strategy"] = sigma
        body["expectation"] = chain_expected_mp(chain)
    else:
        body["strategy"] = best_sigma
        body["expectation"] = best
    _emit("mdp-expect", body)
    return 0


def cmd_bwc(args) -> int:
    bundle = _bundle(args.file)
    inst = BwcInstance(bundle.arena, _need_rnd(bundle), args.wc, args.exp)
    try:
        res = bwc_synthesize(inst, (args.kmax, args.lmax))
    except CapExceeded as exc:
        _emit("bwc", {"status": "cap_exceeded", "caps": {"kmax": args.kmax, "lmax": args.lmax},
                      "tried": exc.tried, "reason": str(exc)})
        return 2
    thresholds = {"worst_case": inst.lambda_wc, "expectation": inst.lambda_exp}
    if isinstance(res, NotFound):
        _emit("bwc", {"status": "not_found", "reason": res.reason, "witness": res.witness,
                      "thresholds": thresholds})
        return 2
    body = {"status": "certificate", "thresholds": thresholds, "caps": {"kmax": args.kmax, "lmax": args.lmax}}
    body.update(certificate_report(res))
    body["strategy"] = res.strategy
    _emit("bwc", body)
    return 0


def _regret_body(rep: RegretReport) -> dict:
    return {
        "regret": rep.regret,
        "best_response_value": rep.best_response_value,
        "achieved_value": rep.achieved_value,
        "adversary_class": rep.adversary_class,
        "witness_adversary": rep.witness_adversary,
        "bounds": rep.bounds,
    }


def cmd_regret(args) -> int:
    kind = PayoffKind.parse(args.kind)
    cls = args.adversary
    if cls == "words":
        aut = _automaton(args.file)
        if args.sigma:
            sigma = resolver_arg(aut, args.sigma)
            rep = regret_vs_words(aut, sigma, kind, args.lasso_bound)
        else:
            rep, sigma = min_regret_words(aut, kind, args.memory, args.lasso_bound)
    else:
        arena = _bundle(args.file).arena
        if args.sigma:
            sigma = strategy_arg(arena, EVE, args.sigma)
            fn = regret_vs_memoryless if cls == "memoryless" else regret_vs_arbitrary
            rep = fn(arena, sigma, kind)
        else:
            fn = min_regret_memoryless_adversary if cls == "memoryless" else min_regret_arbitrary
            rep, sigma = fn(arena, kind, args.memory)
    body = _regret_body(rep)
    body["kind"] = kind
    body["strategy"] = sigma
    status = 0
    if args.threshold is not None:
        ok = rep.regret <= args.threshold
        body["threshold"] = args.threshold
        body["within_threshold"] = ok
        status = 0 if ok else 2
    _emit("regret", body)
    return status


def cmd_admissible(args) -> int:
    bundle = _bundle(args.file)
    arena, obj = bundle.arena, _need_objectives(bundle)
    bounds = {"memory": args.memory, "adversary_memory": args.adversary_memory}
    if args.sigma:
        player = Player.parse(args.player)
        sigma = strategy_arg(arena, player, args.sigma)
        for other in enumerate_strategies(arena, player, args.memory):
            verdict = dominates(arena, obj, player, sigma, other, args.adversary_memory)
            if verdict.dominated:
                _emit("admissible", {"strategy": sigma, "admissible": False, "dominated_by": other,
                                     "witness_opponent": verdict.witness_tau_better, "bounds": bounds})
                return 2
        _emit("admissible", {"strategy": sigma, "admissible": True, "bounds": bounds})
        return 0
    eve = admissible_strategies(arena, obj, EVE, args.memory, args.adversary_memory)
    adam = admissible_strategies(arena, obj, ADAM, args.adversary_memory, args.memory)
    aa = assume_admissible_check(arena, obj, args.memory, args.adversary_memory)
    _emit("admissible", {
        "eve": eve,
        "adam": adam,
        "assume_admissible": {"holds": aa.holds, "witness": aa.witness},
        "bounds": bounds,
    })
    return 0 if aa.holds else 2


def cmd_win_hyp(args) -> int:
    bundle = _bundle(args.file)
    arena, obj = bundle.arena, _need_objectives(bundle)
    if args.buchi:
        sol = solve_buchi(arena, obj.eve)
    else:
        sol = win_hyp_solve(arena, obj)
    ok = arena.initial in sol.region
    _emit("win-hyp", {
        "objective": "buchi" if args.buchi else "win-hyp",
        "region": [s for s in arena.states if s in sol.region],
        "initial_winning": ok,
        "strategy": sol.strategy,
    })
    return 0 if ok else 2


def cmd_simulate(args) -> int:
    bundle = _bundle(args.file)
    arena = bundle.arena
    if args.tau:
        adversary = strategy_arg(arena, ADAM, args.tau)
    else:
        adversary = _need_rnd(bundle)
    if args.sigma:
        sigma = strategy_arg(arena, EVE, args.sigma)
    else:
        sigma = optimal_expectation(arena, _need_rnd(bundle))[1]
    try:
        cfg = SimConfig(args.steps, args.repeats, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rep = estimate_expected_mp(arena, sigma, adversary, cfg)
    body = {
        "strategy": sigma,
        "simulation": {
            "steps": cfg.steps,
            "repeats": cfg.repeats,
            "seed": cfg.seed,
            "empirical_mp": list(rep.empirical_mp),
            "mean": rep.mean,
            "sample_stddev": rep.sample_stddev,
        },
    }
    if not args.tau:
        body["exact_expectation"] = chain_expected_mp(induce_chain(arena, sigma, bundle.rnd))
    _emit("simulate", body)
    return 0


def cmd_validate(args) -> int:
    doc = _load(args.file)
    if isinstance(doc, WeightedAutomaton):
        _emit("validate", {"valid": True, "kind": "automaton", "states": len(doc.states),
                           "transitions": len(doc.transitions), "deterministic": doc.deterministic})
        return 0
    arena = doc.arena
    _emit("validate", {
        "valid": True,
        "kind": "arena",
        "states": len(arena.states),
        "edges": len(arena.edges),
        "objectives": sorted(doc.objectives),
        "adversary": doc.rnd is not None,
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gamesynth", description="Exact solvers for weighted two-player games.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve-mp", help="worst-case mean-payoff values and optimal strategies")
    s.add_argument("file")
    s.set_defaults(run=cmd_solve_mp)

    s = sub.add_parser("mdp-expect", help="expected mean payoff against the stochastic adversary")
    s.add_argument("file")
    s.add_argument("--sigma", help="Eve strategy: SRC->DST,... or a JSON transducer table")
    s.set_defaults(run=cmd_mdp_expect)

    s = sub.add_parser("bwc", help="beyond worst-case synthesis")
    s.add_argument("file")
    s.add_argument("--wc", type=_fraction, required=True, help="worst-case threshold")
    s.add_argument("--exp", type=_fraction, required=True, help="expectation threshold")
    s.add_argument("--kmax", type=int, default=64)
    s.add_argument("--lmax", type=int, default=64)
    s.set_defaults(run=cmd_bwc)

    s = sub.add_parser("regret", help="regret of a strategy, or least regret within a memory bound")
    s.add_argument("file")
    s.add_argument("--adversary", choices=["memoryless", "arbitrary", "words"], default="memoryless")
    s.add_argument("--memory", type=int, default=1, help="memory bound for Eve or the resolver")
    s.add_argument("--kind", default="MP", help="payoff: MP, Inf, Sup, LimInf, LimSup")
    s.add_argument("--sigma", help="strategy to evaluate instead of minimizing")
    s.add_argument("--lasso-bound", type=int, default=4)
    s.add_argument("--threshold", type=_fraction, help="exit 2 when the regret exceeds it")
    s.set_defaults(run=cmd_regret)

    s = sub.add_parser("admissible", help="bounded admissible strategies and assume-admissible check")
    s.add_argument("file")
    s.add_argument("--memory", type=int, default=1, help="Eve memory bound")
    s.add_argument("--adversary-memory", type=int, default=1, help="Adam memory bound")
    s.add_argument("--player", default="Eve", help="owner of --sigma")
    s.add_argument("--sigma", help="check whether this strategy is admissible")
    s.set_defaults(run=cmd_admissible)

    s = sub.add_parser("win-hyp", help="winning region for the Win-Hyp objective")
    s.add_argument("file")
    s.add_argument("--buchi", action="store_true", help="plain Büchi objective of Eve instead")
    s.set_defaults(run=cmd_win_hyp)

    s = sub.add_parser("simulate", help="seeded Monte Carlo estimate of the mean payoff")
    s.add_argument("file")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--steps", type=int, default=100000)
    s.add_argument("--repeats", type=int, default=1)
    s.add_argument("--sigma", help="Eve strategy (default: an expectation-optimal one)")
    s.add_argument("--tau", help="deterministic Adam strategy instead of the distribution")
    s.set_defaults(run=cmd_simulate)

    s = sub.add_parser("validate", help="check an arena or automaton document")
    s.add_argument("file")
    s.set_defaults(run=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        for name in ("memory", "adversary_memory", "lasso_bound", "kmax", "lmax"):
            if getattr(args, name, 1) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be at least 1")
        return args.run(args)
    except ArenaError as exc:
        for issue in exc.issues:
            print(f"{args.file}: {issue}", file=sys.stderr)
        return 1
    except (InputError, DocumentError, SupportViolation, NonTotalRestriction) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
