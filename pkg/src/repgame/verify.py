"""Verification harness: exact reports for every inequality in the chain.

Each report pins one claim instance (game, parameters) with its exact left-
and right-hand sides; `holds` is the exact comparison. The bundled suite over
the example games is the package's primary regression gate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    DEFAULT_BUDGET,
    Game,
    all_strategies,
    evaluate,
    exact_value,
    exact_value_repeated,
    local_search_value,
    repeated_game,
    strategy_space_size,
)
from .errors import BudgetExceeded, NotProjection
from .generators import BUNDLED, GeneratorParams, random_projection_game
from .structure import decompose_loosely, is_connected, is_projection
from .transforms import (
    consistency_probability,
    diagonal_floor,
    link_distribution,
    product_link_distribution,
    saturate,
    to_plain_game,
    transform,
    uniformize,
)


@dataclass(frozen=True)
class VerificationReport:
    """One exactly checked claim instance."""

    claim: str
    game: str
    i: int | None
    p: int | None
    n: int | None
    lhs: Fraction
    rhs: Fraction
    relation: str
    holds: bool
    ms: float

    def describe(self) -> str:
        params = ",".join(
            f"{name}={value}"
            for name, value in (("i", self.i), ("p", self.p), ("n", self.n))
            if value is not None
        )
        status = "ok" if self.holds else "FAIL"
        return (
            f"[{status}] {self.claim} on {self.game}({params}): "
            f"{self.lhs} {self.relation} {self.rhs}"
        )


def _report(
    claim: str,
    game: str,
    lhs: Fraction,
    relation: str,
    rhs: Fraction,
    started: float,
    i: int | None = None,
    p: int | None = None,
    n: int | None = None,
) -> VerificationReport:
    holds = {
        "==": lhs == rhs,
        "<=": lhs <= rhs,
        ">=": lhs >= rhs,
    }[relation]
    return VerificationReport(
        claim=claim,
        game=game,
        i=i,
        p=p,
        n=n,
        lhs=lhs,
        rhs=rhs,
        relation=relation,
        holds=holds,
        ms=(time.perf_counter() - started) * 1000.0,
    )


def verify_link_identity(
    game: Game, name: str, i: int, n: int, atom_budget: int = 10**6
) -> VerificationReport:
    """Product of base links versus links of the repeated game, atom for atom.

    The left-hand side is the total variation distance between the two
    distributions, which must be exactly zero.
    """
    started = time.perf_counter()
    product = product_link_distribution(game, i, n, atom_budget)
    repeated = link_distribution(repeated_game(game, n), i)
    keys = set(product.atoms) | set(repeated.atoms)
    distance = sum(
        (
            abs(
                product.atoms.get(key, Fraction(0))
                - repeated.atoms.get(key, Fraction(0))
            )
            for key in keys
        ),
        start=Fraction(0),
    ) / 2
    return _report(
        "link-product-identity", name, distance, "==", Fraction(0), started, i=i, n=n
    )


def verify_path_bound(
    game: Game,
    name: str,
    i: int,
    mode: str = "exhaustive",
    space_cap: int = 1 << 16,
) -> VerificationReport:
    """Link consistency is at least the squared strategy value.

    Exhaustive mode checks every deterministic strategy and reports the one
    with the smallest margin; optimal-only checks just a value-attaining
    strategy.
    """
    started = time.perf_counter()
    if mode == "exhaustive":
        if strategy_space_size(game) > space_cap:
            raise BudgetExceeded(
                f"{strategy_space_size(game)} strategies exceed cap {space_cap}"
            )
        strategies = all_strategies(game)
    elif mode == "optimal-only":
        strategies = iter([exact_value(game).strategy])
    else:
        raise ValueError(f"unknown mode {mode!r}")

    worst: tuple[Fraction, Fraction] | None = None
    for strategy in strategies:
        consistency = consistency_probability(game, i, strategy)
        squared = evaluate(game, strategy) ** 2
        if worst is None or consistency - squared < worst[0] - worst[1]:
            worst = (consistency, squared)
    assert worst is not None
    return _report(
        "link-consistency-floor", name, worst[0], ">=", worst[1], started, i=i
    )


def verify_transform_bounds(
    game: Game,
    name: str,
    i: int,
    p: int,
    n_max: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> list[VerificationReport]:
    """Value ceiling and repeated-value floor for one transformation.

    The ceiling says the transformed value is at most 1 - eps*delta where eps
    is the original value gap and delta the smallest conditional re-draw
    probability. The floor (projection games only) says the transformed
    repeated value is at least the square of the original repeated value.
    """
    if not is_projection(game).holds:
        raise NotProjection(f"{name} is not a projection game")
    reports = []
    transformed = transform(game, i, p)

    started = time.perf_counter()
    value = exact_value(game, budget).value
    transformed_value = exact_value(transformed, budget).value
    ceiling = 1 - (1 - value) * diagonal_floor(game, i)
    reports.append(
        _report(
            "transform-value-ceiling",
            name,
            transformed_value,
            "<=",
            ceiling,
            started,
            i=i,
            p=p,
        )
    )
    for n in range(1, n_max + 1):
        started = time.perf_counter()
        if n == 1:
            lhs = transformed_value
            rhs = value**2
        else:
            lhs = exact_value_repeated(repeated_game(transformed, n), budget).value
            rhs = exact_value_repeated(repeated_game(game, n), budget).value ** 2
        reports.append(
            _report(
                "transform-repeated-floor", name, lhs, ">=", rhs, started, i=i, p=p, n=n
            )
        )
    return reports


def verify_projection_preserved(
    game: Game, name: str, i: int, p: int
) -> VerificationReport:
    """Transformation keeps the projection property (indicator comparison)."""
    started = time.perf_counter()
    before = Fraction(1 if is_projection(game).holds else 0)
    after = Fraction(1 if is_projection(transform(game, i, p)).holds else 0)
    return _report(
        "projection-preserved", name, after, ">=", before, started, i=i, p=p
    )


def verify_uniformize_preserved(
    game: Game, name: str, n: int = 1, budget: int = DEFAULT_BUDGET
) -> list[VerificationReport]:
    """Uniformization and predicate folding preserve exact values."""
    reports = []
    uniform = uniformize(game)
    plain = to_plain_game(uniform)
    base_values: dict[int, Fraction] = {}
    for rep in range(1, n + 1):
        base_values[rep] = (
            exact_value(game, budget).value
            if rep == 1
            else exact_value_repeated(repeated_game(game, rep), budget).value
        )
    for label, other in (("uniformize", uniform), ("plain-game", plain)):
        for rep in range(1, n + 1):
            started = time.perf_counter()
            lhs = (
                exact_value(other, budget).value
                if rep == 1
                else exact_value_repeated(repeated_game(other, rep), budget).value
            )
            reports.append(
                _report(
                    f"{label}-value-preserved",
                    name,
                    lhs,
                    "==",
                    base_values[rep],
                    started,
                    n=rep,
                )
            )
    return reports


@dataclass(frozen=True)
class PipelineComponent:
    """Saturation outcome for one loosely-connected component."""

    mass: Fraction
    support_before: int
    support_after: int
    passes: int
    steps: int
    saturated_connected: bool
    component_value: Fraction
    saturated_value: Fraction
    value_sign_consistent: bool
    chain_holds: bool


@dataclass(frozen=True)
class PipelineReport:
    """End-to-end outcome of decompose, saturate, and the exponent chain."""

    game: str
    components: tuple[PipelineComponent, ...]
    holds: bool


def run_theorem_pipeline(
    game: Game,
    name: str,
    budget: int = DEFAULT_BUDGET,
    exponent_cap: int = 2**22,
) -> PipelineReport:
    """Decompose loosely, saturate each component, verify the value chain.

    Per component the chain check cross-powers the single-round inequality:
    component value to the 2^steps is at most the saturated value, where steps
    counts the transformation steps performed during saturation. The report
    also records that the saturated game is connected and that its value is
    below one exactly when the component's value is.
    """
    if not is_projection(game).holds:
        raise NotProjection(f"{name} is not a projection game")
    components = []
    for piece, mass in decompose_loosely(game):
        result = saturate(piece)
        connected, _ = is_connected(result.game)
        component_value = exact_value(piece, budget).value
        saturated_value = exact_value(result.game, budget).value
        exponent = 2**result.steps
        if exponent > exponent_cap:
            raise BudgetExceeded(
                f"chain check needs exponent 2^{result.steps} > {exponent_cap}"
            )
        chain_holds = component_value**exponent <= saturated_value
        components.append(
            PipelineComponent(
                mass=mass,
                support_before=len(piece.mu),
                support_after=len(result.game.mu),
                passes=result.passes,
                steps=result.steps,
                saturated_connected=connected,
                component_value=component_value,
                saturated_value=saturated_value,
                value_sign_consistent=(
                    (saturated_value < 1) == (component_value < 1)
                ),
                chain_holds=chain_holds,
            )
        )
    holds = all(
        c.saturated_connected and c.value_sign_consistent and c.chain_holds
        for c in components
    )
    return PipelineReport(game=name, components=tuple(components), holds=holds)


@dataclass(frozen=True)
class DecayPoint:
    """One point of a value-decay series; `value` is None on budget misses."""

    n: int
    value: Fraction | None
    kind: str  # "exact", "lower_bound", or "budget_exceeded"


def decay_curve(
    game: Game,
    n_max: int,
    method: str = "exact",
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    iterations: int = 200,
) -> list[DecayPoint]:
    """Exact repeated values while feasible, optional search bounds beyond.

    With method "local-search", points past the exact budget are seeded greedy
    lower bounds and labeled as such; they are never presented as exact.
    """
    if method not in ("exact", "local-search"):
        raise ValueError(f"unknown method {method!r}")
    points = []
    for n in range(1, n_max + 1):
        rep = repeated_game(game, n)
        try:
            value = (
                exact_value(game, budget).value
                if n == 1
                else exact_value_repeated(rep, budget).value
            )
            points.append(DecayPoint(n=n, value=value, kind="exact"))
        except BudgetExceeded:
            if method == "local-search":
                bound = local_search_value(
                    rep, seed=seed, iterations=iterations, budget=budget
                )
                points.append(
                    DecayPoint(n=n, value=bound.value, kind="lower_bound")
                )
            else:
                points.append(DecayPoint(n=n, value=None, kind="budget_exceeded"))
    return points


def decay_csv(points: list[DecayPoint]) -> str:
    lines = ["n,num,den,kind"]
    for point in points:
        if point.value is None:
            lines.append(f"{point.n},,,{point.kind}")
        else:
            lines.append(
                f"{point.n},{point.value.numerator},{point.value.denominator},"
                f"{point.kind}"
            )
    return "\n".join(lines) + "\n"


def reports_to_csv(reports: list[VerificationReport]) -> str:
    lines = ["claim_id,game,i,p,n,lhs_num,lhs_den,rhs_num,rhs_den,holds,ms"]
    for r in sorted(reports, key=lambda r: (r.claim, r.game, r.i or 0, r.p or 0, r.n or 0)):
        lines.append(
            ",".join(
                [
                    r.claim,
                    r.game,
                    "" if r.i is None else str(r.i),
                    "" if r.p is None else str(r.p),
                    "" if r.n is None else str(r.n),
                    str(r.lhs.numerator),
                    str(r.lhs.denominator),
                    str(r.rhs.numerator),
                    str(r.rhs.denominator),
                    str(r.holds).lower(),
                    f"{r.ms:.1f}",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def bundled_suite(
    budget: int = DEFAULT_BUDGET, deep: bool = False, random_seeds: int = 5
) -> list[VerificationReport]:
    """The claim reports over the bundled example games.

    `deep` adds the slower n=2 repeated-floor checks. The suite is the CLI
    `verify --suite bundled` payload; exit status keys off every `holds` flag.
    """
    games = {name: BUNDLED[name]() for name in ("chsh", "chain3", "ghz", "diag3")}
    projection_games = {
        name: game for name, game in games.items() if is_projection(game).holds
    }
    reports: list[VerificationReport] = []

    for name, game in games.items():
        for i in range(1, game.k + 1):
            for n in (1, 2):
                reports.append(verify_link_identity(game, name, i, n))
            reports.append(verify_path_bound(game, name, i))

    for name, game in projection_games.items():
        for i in range(1, game.k + 1):
            for p in range(1, game.k + 1):
                reports.extend(
                    verify_transform_bounds(game, name, i, p, n_max=1, budget=budget)
                )
                reports.append(verify_projection_preserved(game, name, i, p))
    if deep:
        reports.extend(
            verify_transform_bounds(
                games["chain3"], "chain3", 1, 2, n_max=2, budget=budget
            )
        )
        reports.extend(
            verify_transform_bounds(
                games["chsh"], "chsh", 1, 2, n_max=2, budget=budget
            )
        )

    for seed in range(random_seeds):
        name = f"random-{seed}"
        game = random_projection_game(GeneratorParams(seed=seed))
        for i in range(1, game.k + 1):
            for p in range(1, game.k + 1):
                reports.append(verify_projection_preserved(game, name, i, p))

    for name in ("chain3", "chsh"):
        reports.extend(
            verify_uniformize_preserved(
                games[name], name, n=2 if deep else 1, budget=budget
            )
        )

    started = time.perf_counter()
    pieces = decompose_loosely(games["diag3"])
    mass_total = sum((mass for _, mass in pieces), start=Fraction(0))
    reports.append(
        _report("decomposition-mass", "diag3", mass_total, "==", Fraction(1), started)
    )
    started = time.perf_counter()
    minimum = min(exact_value(piece, budget).value for piece, _ in pieces)
    reports.append(
        _report(
            "decomposition-min-value",
            "diag3",
            minimum,
            "<=",
            exact_value(games["diag3"], budget).value,
            started,
        )
    )

    started = time.perf_counter()
    pipeline = run_theorem_pipeline(games["chain3"], "chain3", budget)
    reports.append(
        _report(
            "pipeline-chain",
            "chain3",
            Fraction(1 if pipeline.holds else 0),
            "==",
            Fraction(1),
            started,
        )
    )
    return reports
