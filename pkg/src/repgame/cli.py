"""Command-line surface.

Exit codes: 0 success (and, for verify, every claim holds), 1 a verify claim
failed, 2 parse or usage error, 3 validation or precondition error, 4 a size
budget was exceeded. All outputs are JSON or CSV.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .core import (
    DEFAULT_BUDGET,
    Game,
    exact_value,
    exact_value_repeated,
    local_search_value,
    repeated_game,
)
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    DistributionNotNormalized,
    MaxPassesExceeded,
    MBlowup,
    NotLooselyConnected,
    NotProjection,
    NotUniformized,
    ParseError,
    PivotMismatch,
    PlayerOutOfRange,
    UncoveredVariable,
    UnknownLabel,
)
from .generators import BUNDLED, GeneratorParams, random_projection_game, random_split_game
from .jsonio import parse_game, serialize_game
from .structure import connectivity_report, graph_dot, is_projection
from .transforms import saturate, transform_seq, uniformize
from .verify import bundled_suite, decay_csv, decay_curve, reports_to_csv

_USAGE_ERRORS = (ParseError,)
_VALIDATION_ERRORS = (
    DistributionNotNormalized,
    ArityMismatch,
    UnknownLabel,
    PlayerOutOfRange,
    PivotMismatch,
    NotUniformized,
    NotLooselyConnected,
    NotProjection,
    UncoveredVariable,
    ValueError,
)
_BUDGET_ERRORS = (BudgetExceeded, MBlowup, MaxPassesExceeded)


def _load_game(path: str) -> Game:
    return parse_game(Path(path).read_text(encoding="utf-8"))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fraction_json(value: Fraction) -> dict:
    return {
        "num": value.numerator,
        "den": value.denominator,
        "str": f"{value.numerator}/{value.denominator}",
    }


def _budget(args: argparse.Namespace) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("REPGAME_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _cmd_check(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    witness = is_projection(game)
    report = connectivity_report(game)
    doc = {
        "projection": {
            "holds": witness.holds,
            "component_counts": {
                str(list(q)): labeling.component_count
                for (q, _), labeling in sorted(witness.labelings.items())
            },
            "counterexample": None
            if witness.counterexample is None
            else {
                "q": list(witness.counterexample.question),
                "predicate": witness.counterexample.predicate,
                "component": witness.counterexample.component,
                "missing_answers": list(witness.counterexample.missing),
            },
        },
        "connected": len(report.tuple_components) == 1,
        "player_wise_connected": all(
            len(parts) == 1 for parts in report.player_components
        ),
        "loosely_connected": len(report.loose_components) == 1,
        "tuple_components": len(report.tuple_components),
        "loose_components": len(report.loose_components),
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _cmd_value(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    result = exact_value(game, _budget(args))
    doc = {
        "value": _fraction_json(result.value),
        "strategy": [list(table) for table in result.strategy],
        "exact": True,
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _cmd_repeat_value(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    rep = repeated_game(game, args.n)
    if args.method == "exact":
        result = exact_value_repeated(rep, _budget(args))
    else:
        result = local_search_value(
            rep, seed=args.seed, iterations=args.iterations, budget=_budget(args)
        )
    doc = {
        "n": args.n,
        "value": _fraction_json(result.value),
        "exact": result.exact,
        "strategy": [list(table) for table in result.strategy],
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _cmd_transform(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    if args.seq:
        steps_doc = json.loads(Path(args.seq).read_text(encoding="utf-8"))
        steps = [(int(i), int(p)) for i, p in steps_doc]
    elif args.i is not None and args.p is not None:
        steps = [(args.i, args.p)]
    else:
        sys.stderr.write("transform needs --i and --p, or --seq FILE\n")
        return 2
    _emit(serialize_game(transform_seq(game, steps)), args.out)
    return 0


def _cmd_saturate(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    result = saturate(game, max_passes=args.max_passes)
    _emit(serialize_game(result.game), args.out)
    log_text = result.log_csv()
    if args.log:
        Path(args.log).write_text(log_text, encoding="utf-8")
    else:
        sys.stderr.write(log_text)
    sys.stderr.write(f"passes={result.passes} steps={result.steps}\n")
    return 0


def _cmd_uniformize(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    _emit(serialize_game(uniformize(game, m_cap=args.m_cap)), args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.suite != "bundled":
        sys.stderr.write(f"unknown suite {args.suite!r}\n")
        return 2
    reports = bundled_suite(budget=_budget(args), deep=args.deep)
    _emit(reports_to_csv(reports), args.out)
    failed = [r for r in reports if not r.holds]
    for report in failed:
        sys.stderr.write(report.describe() + "\n")
    return 1 if failed else 0


def _cmd_decay(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    points = decay_curve(
        game,
        n_max=args.n_max,
        method=args.method,
        seed=args.seed,
        budget=_budget(args),
        iterations=args.iterations,
    )
    _emit(decay_csv(points), args.out)
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.name in BUNDLED:
        game = BUNDLED[args.name]()
    elif args.name == "random":
        game = random_projection_game(_generator_params(args))
    elif args.name == "random-split":
        game = random_split_game(_generator_params(args))
    else:
        names = sorted(BUNDLED) + ["random", "random-split"]
        sys.stderr.write(f"unknown game {args.name!r}; choose from {names}\n")
        return 2
    _emit(serialize_game(game), args.out)
    return 0


def _generator_params(args: argparse.Namespace) -> GeneratorParams:
    return GeneratorParams(
        seed=args.seed,
        players=args.players,
        question_size=args.question_size,
        answer_size=args.answer_size,
        d_max=args.d_max,
    )


def _cmd_export_dot(args: argparse.Namespace) -> int:
    game = _load_game(args.game)
    _emit(graph_dot(game, kind=args.graph, player=args.player), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repgame",
        description="Exact analysis of finite k-player one-round games.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument(
        "--budget",
        type=int,
        default=None,
        help="strategy-count ceiling (default REPGAME_BUDGET or 2^28)",
    )
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help="reserved; results are identical for any value",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("check", parents=[common], help="projection and connectivity verdicts")
    cmd.add_argument("game")
    cmd.set_defaults(func=_cmd_check)

    cmd = sub.add_parser("value", parents=[common], help="exact value and witness strategy")
    cmd.add_argument("game")
    cmd.set_defaults(func=_cmd_value)

    cmd = sub.add_parser("repeat-value", parents=[common], help="value of the n-fold repetition")
    cmd.add_argument("game")
    cmd.add_argument("--n", type=int, required=True)
    cmd.add_argument("--method", choices=["exact", "local-search"], default="exact")
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--iterations", type=int, default=200)
    cmd.set_defaults(func=_cmd_repeat_value)

    cmd = sub.add_parser("transform", parents=[common], help="apply link transformations")
    cmd.add_argument("game")
    cmd.add_argument("--i", type=int, help="pivot player (1-based)")
    cmd.add_argument("--p", type=int, help="spliced player (1-based)")
    cmd.add_argument("--seq", help="JSON file with a list of [i, p] steps")
    cmd.set_defaults(func=_cmd_transform)

    cmd = sub.add_parser("saturate", parents=[common], help="sweep transforms to full support")
    cmd.add_argument("game")
    cmd.add_argument("--max-passes", type=int, default=None)
    cmd.add_argument("--log", help="write the support-growth CSV here")
    cmd.set_defaults(func=_cmd_saturate)

    cmd = sub.add_parser("uniformize", parents=[common], help="normalize the predicate mixture")
    cmd.add_argument("game")
    cmd.add_argument("--m-cap", type=int, default=10**6)
    cmd.set_defaults(func=_cmd_uniformize)

    cmd = sub.add_parser("verify", parents=[common], help="run the claim suite")
    cmd.add_argument("--suite", default="bundled")
    cmd.add_argument("--deep", action="store_true", help="include slow n=2 checks")
    cmd.set_defaults(func=_cmd_verify)

    cmd = sub.add_parser("decay", parents=[common], help="repeated-value decay series")
    cmd.add_argument("game")
    cmd.add_argument("--n-max", type=int, required=True)
    cmd.add_argument("--method", choices=["exact", "local-search"], default="exact")
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--iterations", type=int, default=200)
    cmd.set_defaults(func=_cmd_decay)

    cmd = sub.add_parser("gen", parents=[common], help="emit a bundled or random game")
    cmd.add_argument("name")
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--players", type=int, default=3)
    cmd.add_argument("--question-size", type=int, default=2)
    cmd.add_argument("--answer-size", type=int, default=2)
    cmd.add_argument("--d-max", type=int, default=2)
    cmd.set_defaults(func=_cmd_gen)

    cmd = sub.add_parser("export-dot", parents=[common], help="emit an analyzer graph")
    cmd.add_argument("game")
    cmd.add_argument("--graph", choices=["tuple", "loose", "player"], default="tuple")
    cmd.add_argument("--player", type=int, default=None)
    cmd.set_defaults(func=_cmd_export_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as err:
        sys.stderr.write(f"error: {err}\n")
        return 2
    except _VALIDATION_ERRORS as err:
        sys.stderr.write(f"error: {err}\n")
        return 3
    except _BUDGET_ERRORS as err:
        sys.stderr.write(f"error: {err}\n")
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
