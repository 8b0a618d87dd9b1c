"""Exact model of finite k-player one-round games and their values.

Every probability and value in this module is a `fractions.Fraction`; no
floating point enters any computation. Games are treated as immutable once
they pass `validate_game`. Players are numbered 1..k in the public API;
question and answer tuples hold 0-based indices into the alphabets.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Iterator, Sequence

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    DistributionNotNormalized,
    PlayerOutOfRange,
    UnknownLabel,
)

Label = int | str
QuestionTuple = tuple[int, ...]
AnswerTuple = tuple[int, ...]
Strategy = tuple[tuple[int, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)

#: Ceiling on the number of deterministic strategies an exact enumeration
#: may cover. Exceeding it raises BudgetExceeded instead of degrading.
DEFAULT_BUDGET = 2**28

#: Ceiling on materialized repeated-game question supports.
DEFAULT_SUPPORT_BUDGET = 10**6

ACCEPT_ALL = "accept_all"
BASE = "base"


@dataclass(frozen=True)
class PredicateAtom:
    """One verifier predicate: accept everything, or an explicit accepting set.

    Base atoms store the full set of accepted (question, answers) index pairs.
    """

    kind: str
    accepts: frozenset[tuple[QuestionTuple, AnswerTuple]] = frozenset()

    def accepts_pair(self, question: QuestionTuple, answers: AnswerTuple) -> bool:
        if self.kind == ACCEPT_ALL:
            return True
        return (question, answers) in self.accepts


def accept_all() -> PredicateAtom:
    return PredicateAtom(kind=ACCEPT_ALL)


def base_predicate(
    pairs: Iterable[tuple[Sequence[int], Sequence[int]]],
) -> PredicateAtom:
    return PredicateAtom(
        kind=BASE, accepts=frozenset((tuple(q), tuple(a)) for q, a in pairs)
    )


@dataclass(frozen=True, eq=True)
class Game:
    """A k-player one-round game with a weighted predicate mixture.

    `mu` maps supported question tuples to their probabilities and `mix[q]`
    gives the conditional distribution over `predicates` at q. `slots`, when
    present, is the explicit uniform predicate table attached by
    `transforms.uniformize`: M references per supported question, each slot
    drawn with probability 1/M.
    """

    question_alphabets: tuple[tuple[Label, ...], ...]
    answer_alphabets: tuple[tuple[Label, ...], ...]
    mu: dict[QuestionTuple, Fraction]
    predicates: tuple[PredicateAtom, ...]
    mix: dict[QuestionTuple, dict[int, Fraction]]
    slots: dict[QuestionTuple, tuple[int, ...]] | None = None

    @property
    def k(self) -> int:
        return len(self.question_alphabets)

    def support(self) -> tuple[QuestionTuple, ...]:
        return tuple(self.mu)

    def acceptance_weight(
        self, question: QuestionTuple, answers: AnswerTuple
    ) -> Fraction:
        """Probability that the verifier accepts `answers` at `question`."""
        total = ZERO
        for index, weight in self.mix[question].items():
            if self.predicates[index].accepts_pair(question, answers):
                total += weight
        return total


@dataclass(frozen=True)
class RepeatedGame:
    """Lazy n-fold parallel repetition of a base game.

    Each coordinate samples its (question, predicate) pair independently; the
    repeated verifier accepts iff every coordinate accepts. Product predicate
    tables are never materialized: acceptance weights multiply coordinate-wise.
    Vector questions and answers are identified with flat indices in
    lexicographic (mixed-radix) order over the base indices.
    """

    base: Game
    n: int

    @property
    def k(self) -> int:
        return self.base.k

    def question_counts(self) -> tuple[int, ...]:
        return tuple(len(x) ** self.n for x in self.base.question_alphabets)

    def answer_counts(self) -> tuple[int, ...]:
        return tuple(len(a) ** self.n for a in self.base.answer_alphabets)

    def support_weights(
        self, limit: int = DEFAULT_SUPPORT_BUDGET
    ) -> dict[tuple[QuestionTuple, ...], Fraction]:
        """Map each supported vector question tuple to its probability.

        A vector tuple is a k-tuple whose i-th component is the n-tuple of
        base question indices asked to player i.
        """
        size = len(self.base.mu) ** self.n
        if size > limit:
            raise BudgetExceeded(
                f"repeated support has {size} tuples, limit is {limit}"
            )
        out: dict[tuple[QuestionTuple, ...], Fraction] = {}
        k = self.k
        for coords in itertools.product(self.base.support(), repeat=self.n):
            vec = tuple(tuple(q[i] for q in coords) for i in range(k))
            mass = prod((self.base.mu[q] for q in coords), start=ONE)
            out[vec] = out.get(vec, ZERO) + mass
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class GameValue:
    """A game value together with the strategy that attains it.

    `exact` is False for local-search results, which are only lower bounds.
    """

    value: Fraction
    strategy: Strategy
    exact: bool


def _player_index(k: int, player: int) -> int:
    if not 1 <= player <= k:
        raise PlayerOutOfRange(f"player {player} not in 1..{k}")
    return player - 1


def _check_tuple(
    alphabets: tuple[tuple[Label, ...], ...], entry: tuple[int, ...], what: str
) -> None:
    if len(entry) != len(alphabets):
        raise ArityMismatch(
            f"{what} {entry} has {len(entry)} components, expected {len(alphabets)}"
        )
    for i, component in enumerate(entry):
        if not isinstance(component, int) or isinstance(component, bool):
            raise UnknownLabel(f"{what} {entry}: component {component!r} is not an index")
        if not 0 <= component < len(alphabets[i]):
            raise UnknownLabel(
                f"{what} {entry}: index {component} out of range for player {i + 1}"
            )


def validate_game(game: Game) -> Game:
    """Check every structural invariant and return a canonically ordered copy.

    Zero-weight mix entries are dropped and all tables are rebuilt in sorted
    order so that iteration, and therefore every downstream computation, is
    deterministic.
    """
    k = game.k
    if k < 2:
        raise ArityMismatch(f"need at least 2 players, got {k}")
    if len(game.answer_alphabets) != k:
        raise ArityMismatch(
            f"{len(game.answer_alphabets)} answer alphabets for {k} players"
        )
    for i, alphabet in enumerate(game.question_alphabets):
        if not alphabet:
            raise ArityMismatch(f"player {i + 1} has an empty question alphabet")
    for i, alphabet in enumerate(game.answer_alphabets):
        if not alphabet:
            raise ArityMismatch(f"player {i + 1} has an empty answer alphabet")

    total = ZERO
    for q, weight in game.mu.items():
        _check_tuple(game.question_alphabets, q, "question tuple")
        if not isinstance(weight, Fraction):
            raise DistributionNotNormalized(f"weight of {q} is not a Fraction")
        if weight <= 0:
            raise DistributionNotNormalized(f"question tuple {q} has weight {weight}")
        total += weight
    if total != 1:
        raise DistributionNotNormalized(f"question weights sum to {total}, not 1")

    for index, atom in enumerate(game.predicates):
        if atom.kind not in (ACCEPT_ALL, BASE):
            raise UnknownLabel(f"predicate {index} has unknown kind {atom.kind!r}")
        for q, a in atom.accepts:
            _check_tuple(game.question_alphabets, q, f"predicate {index} question")
            _check_tuple(game.answer_alphabets, a, f"predicate {index} answers")

    mix: dict[QuestionTuple, dict[int, Fraction]] = {}
    for q in sorted(game.mu):
        row = game.mix.get(q)
        if row is None:
            raise DistributionNotNormalized(f"no predicate mix for question {q}")
        row_total = ZERO
        clean: dict[int, Fraction] = {}
        for index in sorted(row):
            weight = row[index]
            if not isinstance(index, int) or not 0 <= index < len(game.predicates):
                raise UnknownLabel(f"mix at {q} uses invalid predicate index {index}")
            if weight < 0:
                raise DistributionNotNormalized(
                    f"mix at {q} has negative weight {weight} on predicate {index}"
                )
            row_total += weight
            if weight > 0:
                clean[index] = weight
        if row_total != 1:
            raise DistributionNotNormalized(
                f"mix at {q} sums to {row_total}, not 1"
            )
        mix[q] = clean

    slots = None
    if game.slots is not None:
        lengths = {len(row) for row in game.slots.values()}
        if len(lengths) > 1:
            raise DistributionNotNormalized(
                f"slot rows have differing lengths {sorted(lengths)}"
            )
        m = lengths.pop() if lengths else 1
        for q in sorted(game.mu):
            row = game.slots.get(q)
            if row is None:
                raise DistributionNotNormalized(f"no slot row for question {q}")
            counts: dict[int, int] = {}
            for index in row:
                if not 0 <= index < len(game.predicates):
                    raise UnknownLabel(f"slot row at {q} uses predicate index {index}")
                counts[index] = counts.get(index, 0) + 1
            derived = {index: Fraction(c, m) for index, c in counts.items()}
            if derived != mix[q]:
                raise DistributionNotNormalized(
                    f"slot row at {q} disagrees with the predicate mix"
                )
        slots = {q: tuple(game.slots[q]) for q in sorted(game.mu)}

    return Game(
        question_alphabets=tuple(tuple(x) for x in game.question_alphabets),
        answer_alphabets=tuple(tuple(a) for a in game.answer_alphabets),
        mu={q: game.mu[q] for q in sorted(game.mu)},
        predicates=tuple(game.predicates),
        mix=mix,
        slots=slots,
    )


def marginal(game: Game, player: int) -> dict[int, Fraction]:
    """Marginal question distribution of one player (1-based)."""
    p = _player_index(game.k, player)
    out: dict[int, Fraction] = {}
    for q, weight in game.mu.items():
        out[q[p]] = out.get(q[p], ZERO) + weight
    return dict(sorted(out.items()))


def check_strategy(game: Game | RepeatedGame, strategy: Strategy) -> None:
    """Verify that `strategy` is total: one in-range answer per question label."""
    if isinstance(game, RepeatedGame):
        q_counts = game.question_counts()
        a_counts = game.answer_counts()
    else:
        q_counts = tuple(len(x) for x in game.question_alphabets)
        a_counts = tuple(len(a) for a in game.answer_alphabets)
    if len(strategy) != len(q_counts):
        raise ArityMismatch(
            f"strategy has {len(strategy)} tables for {len(q_counts)} players"
        )
    for i, table in enumerate(strategy):
        if len(table) != q_counts[i]:
            raise ArityMismatch(
                f"player {i + 1} table has {len(table)} entries, expected {q_counts[i]}"
            )
        for answer in table:
            if not 0 <= answer < a_counts[i]:
                raise UnknownLabel(
                    f"player {i + 1} answers {answer}, alphabet size {a_counts[i]}"
                )


def answers_on(strategy: Strategy, question: QuestionTuple) -> AnswerTuple:
    """The answer tuple a strategy produces on one question tuple."""
    return tuple(strategy[i][question[i]] for i in range(len(question)))


def _flat_encode(digits: Sequence[int], radix: int) -> int:
    out = 0
    for digit in digits:
        out = out * radix + digit
    return out


def _flat_decode(index: int, radix: int, width: int) -> tuple[int, ...]:
    digits = []
    for _ in range(width):
        index, digit = divmod(index, radix)
        digits.append(digit)
    return tuple(reversed(digits))


def evaluate(game: Game | RepeatedGame, strategy: Strategy) -> Fraction:
    """Exact acceptance probability of a total strategy."""
    check_strategy(game, strategy)
    if isinstance(game, RepeatedGame):
        return _evaluate_repeated(game, strategy)
    total = ZERO
    for q, mass in game.mu.items():
        total += mass * game.acceptance_weight(q, answers_on(strategy, q))
    return total


def _evaluate_repeated(rep: RepeatedGame, strategy: Strategy) -> Fraction:
    base = rep.base
    n = rep.n
    k = base.k
    q_sizes = [len(x) for x in base.question_alphabets]
    a_sizes = [len(a) for a in base.answer_alphabets]
    total = ZERO
    for coords in itertools.product(base.support(), repeat=n):
        mass = prod((base.mu[q] for q in coords), start=ONE)
        answer_digits = []
        for i in range(k):
            flat_q = _flat_encode([q[i] for q in coords], q_sizes[i])
            answer_digits.append(_flat_decode(strategy[i][flat_q], a_sizes[i], n))
        weight = ONE
        for j in range(n):
            answers = tuple(answer_digits[i][j] for i in range(k))
            weight *= base.acceptance_weight(coords[j], answers)
            if weight == 0:
                break
        total += mass * weight
    return total


def repeated_game(game: Game, n: int) -> RepeatedGame:
    """The n-fold parallel repetition of `game` as a lazy wrapper."""
    if n < 1:
        raise ValueError(f"repetition count must be >= 1, got {n}")
    return RepeatedGame(base=game, n=n)


def strategy_space_size(game: Game | RepeatedGame) -> int:
    """Number of deterministic strategies (the budget guard quantity)."""
    if isinstance(game, RepeatedGame):
        q_counts = game.question_counts()
        a_counts = game.answer_counts()
    else:
        q_counts = tuple(len(x) for x in game.question_alphabets)
        a_counts = tuple(len(a) for a in game.answer_alphabets)
    return prod(a**q for a, q in zip(a_counts, q_counts))


def all_strategies(game: Game | RepeatedGame) -> Iterator[Strategy]:
    """All deterministic strategies in lexicographic order."""
    if isinstance(game, RepeatedGame):
        q_counts = game.question_counts()
        a_counts = game.answer_counts()
    else:
        q_counts = tuple(len(x) for x in game.question_alphabets)
        a_counts = tuple(len(a) for a in game.answer_alphabets)
    tables = [
        itertools.product(range(a), repeat=q) for a, q in zip(a_counts, q_counts)
    ]
    return itertools.product(*tables)


def lift_strategy(base_strategy: Strategy, game: Game, n: int) -> Strategy:
    """Play a base strategy independently in every coordinate of the repetition."""
    q_sizes = [len(x) for x in game.question_alphabets]
    a_sizes = [len(a) for a in game.answer_alphabets]
    lifted = []
    for i, table in enumerate(base_strategy):
        row = []
        for flat in range(q_sizes[i] ** n):
            digits = _flat_decode(flat, q_sizes[i], n)
            row.append(_flat_encode([table[d] for d in digits], a_sizes[i]))
        lifted.append(tuple(row))
    return tuple(lifted)


@dataclass
class _ValueProblem:
    """Integer-scaled tabulation of one value-maximization instance.

    `rows[t]` holds, for support tuple t and every flat answer combination,
    the tuple mass times the acceptance weight, scaled by `denom` so that all
    entries are integers. Scaling keeps the hot enumeration loop in plain
    integer arithmetic while remaining exact.
    """

    question_counts: tuple[int, ...]
    answer_counts: tuple[int, ...]
    tuple_questions: list[tuple[int, ...]]
    rows: list[list[int]]
    denom: int
    space: int


def _scale_rows(raw_rows: list[list[Fraction]]) -> tuple[list[list[int]], int]:
    denom = 1
    for row in raw_rows:
        for value in row:
            denom = lcm(denom, value.denominator)
    scaled = [
        [int(value * denom) for value in row] for row in raw_rows
    ]
    return scaled, denom


def _game_problem(game: Game) -> _ValueProblem:
    q_counts = tuple(len(x) for x in game.question_alphabets)
    a_counts = tuple(len(a) for a in game.answer_alphabets)
    tuple_questions = []
    raw_rows = []
    for q in game.support():
        tuple_questions.append(q)
        mass = game.mu[q]
        row = [
            mass * game.acceptance_weight(q, combo)
            for combo in itertools.product(*(range(a) for a in a_counts))
        ]
        raw_rows.append(row)
    rows, denom = _scale_rows(raw_rows)
    return _ValueProblem(
        question_counts=q_counts,
        answer_counts=a_counts,
        tuple_questions=tuple_questions,
        rows=rows,
        denom=denom,
        space=prod(a**q for a, q in zip(a_counts, q_counts)),
    )


def _repeated_problem(rep: RepeatedGame) -> _ValueProblem:
    base = rep.base
    n = rep.n
    k = base.k
    q_sizes = [len(x) for x in base.question_alphabets]
    a_sizes = [len(a) for a in base.answer_alphabets]
    q_counts = rep.question_counts()
    a_counts = rep.answer_counts()

    # Per-coordinate acceptance weights, looked up while expanding rows.
    base_weight: dict[tuple[QuestionTuple, AnswerTuple], Fraction] = {}
    for q in base.support():
        for combo in itertools.product(*(range(a) for a in a_sizes)):
            base_weight[(q, combo)] = base.acceptance_weight(q, combo)

    tuple_questions = []
    raw_rows = []
    for vec, mass in rep.support_weights().items():
        coords = [tuple(vec[i][j] for i in range(k)) for j in range(n)]
        tuple_questions.append(
            tuple(_flat_encode(vec[i], q_sizes[i]) for i in range(k))
        )
        row = []
        for combo in itertools.product(*(range(a) for a in a_counts)):
            digits = [_flat_decode(combo[i], a_sizes[i], n) for i in range(k)]
            weight = mass
            for j in range(n):
                weight *= base_weight[
                    (coords[j], tuple(digits[i][j] for i in range(k)))
                ]
                if weight == 0:
                    break
            row.append(weight)
        raw_rows.append(row)
    rows, denom = _scale_rows(raw_rows)
    return _ValueProblem(
        question_counts=q_counts,
        answer_counts=a_counts,
        tuple_questions=tuple_questions,
        rows=rows,
        denom=denom,
        space=prod(a**q for a, q in zip(a_counts, q_counts)),
    )


def _strides(answer_counts: tuple[int, ...]) -> list[int]:
    strides = [1] * len(answer_counts)
    for i in range(len(answer_counts) - 2, -1, -1):
        strides[i] = strides[i + 1] * answer_counts[i + 1]
    return strides


def _solve_exact(
    problem: _ValueProblem, budget: int, prefer_player: int | None = None
) -> tuple[Fraction, Strategy]:
    """Maximize over deterministic strategies.

    One player (the one with the largest table space unless `prefer_player`
    pins it) is optimized per question by best response; the remaining tables
    are enumerated outright. The witness tie-break is lexicographic over the
    enumerated tables first and the optimized player's table last, so results
    do not depend on how the outer space might be partitioned across workers.
    """
    if problem.space > budget:
        raise BudgetExceeded(
            f"strategy space {problem.space} exceeds budget {budget}"
        )
    k = len(problem.question_counts)
    table_sizes = [
        a**q for a, q in zip(problem.answer_counts, problem.question_counts)
    ]
    if prefer_player is not None:
        inner = prefer_player
    else:
        inner = max(range(k), key=lambda i: (table_sizes[i], i))
    strides = _strides(problem.answer_counts)
    stride_inner = strides[inner]
    n_inner = problem.answer_counts[inner]
    groups: list[list[int]] = [[] for _ in range(problem.question_counts[inner])]
    for t, qt in enumerate(problem.tuple_questions):
        groups[qt[inner]].append(t)
    outer_players = [i for i in range(k) if i != inner]
    outer_tables = [
        list(
            itertools.product(
                range(problem.answer_counts[i]), repeat=problem.question_counts[i]
            )
        )
        for i in outer_players
    ]
    rows = problem.rows
    tuple_questions = problem.tuple_questions
    count = len(tuple_questions)

    best_total = -1
    best_outer: tuple[tuple[int, ...], ...] = ()
    best_inner: tuple[int, ...] = ()
    for combo in itertools.product(*outer_tables):
        bases = []
        for t in range(count):
            qt = tuple_questions[t]
            offset = 0
            for ci, pi in enumerate(outer_players):
                offset += combo[ci][qt[pi]] * strides[pi]
            bases.append(offset)
        total = 0
        inner_table = []
        for ts in groups:
            if not ts:
                inner_table.append(0)
                continue
            best_a = 0
            best_s = -1
            for a in range(n_inner):
                shift = a * stride_inner
                s = 0
                for t in ts:
                    s += rows[t][bases[t] + shift]
                if s > best_s:
                    best_s = s
                    best_a = a
            total += best_s
            inner_table.append(best_a)
        if total > best_total:
            best_total = total
            best_outer = combo
            best_inner = tuple(inner_table)

    tables = list(best_outer)
    tables.insert(inner, best_inner)
    return Fraction(best_total, problem.denom), tuple(tables)


def exact_value(
    game: Game, budget: int | None = None, _prefer_player: int | None = None
) -> GameValue:
    """Exact value: the maximum acceptance probability over all strategies.

    Deterministic strategies suffice because the acceptance probability is
    affine in each player's randomization, so some vertex attains the maximum.
    """
    problem = _game_problem(game)
    value, strategy = _solve_exact(
        problem, DEFAULT_BUDGET if budget is None else budget, _prefer_player
    )
    return GameValue(value=value, strategy=strategy, exact=True)


def exact_value_repeated(
    rep: RepeatedGame, budget: int | None = None, _prefer_player: int | None = None
) -> GameValue:
    """Exact value of the repeated game over product-question strategies."""
    problem = _repeated_problem(rep)
    value, strategy = _solve_exact(
        problem, DEFAULT_BUDGET if budget is None else budget, _prefer_player
    )
    return GameValue(value=value, strategy=strategy, exact=True)


def _search_from(
    problem: _ValueProblem,
    tables: list[list[int]],
    step_limit: int,
) -> tuple[int, list[list[int]], int]:
    """Greedy single-cell improvement until a local optimum or the step cap.

    Moves are scanned in (player, question, answer) order and the best strict
    improvement is taken, so the walk is deterministic.
    """
    k = len(problem.question_counts)
    strides = _strides(problem.answer_counts)
    rows = problem.rows
    count = len(problem.tuple_questions)
    touches: list[list[list[int]]] = [
        [[] for _ in range(problem.question_counts[i])] for i in range(k)
    ]
    for t, qt in enumerate(problem.tuple_questions):
        for i in range(k):
            touches[i][qt[i]].append(t)
    flats = []
    for qt in problem.tuple_questions:
        flats.append(sum(tables[i][qt[i]] * strides[i] for i in range(k)))
    value = sum(rows[t][flats[t]] for t in range(count))

    steps = 0
    while steps < step_limit:
        best_delta = 0
        best_move: tuple[int, int, int] | None = None
        for i in range(k):
            stride = strides[i]
            for v in range(problem.question_counts[i]):
                ts = touches[i][v]
                if not ts:
                    continue
                old = tables[i][v]
                for a in range(problem.answer_counts[i]):
                    if a == old:
                        continue
                    shift = (a - old) * stride
                    delta = 0
                    for t in ts:
                        delta += rows[t][flats[t] + shift] - rows[t][flats[t]]
                    if delta > best_delta:
                        best_delta = delta
                        best_move = (i, v, a)
        if best_move is None:
            break
        i, v, a = best_move
        shift = (a - tables[i][v]) * strides[i]
        for t in touches[i][v]:
            flats[t] += shift
        tables[i][v] = a
        value += best_delta
        steps += 1
    return value, tables, steps


def local_search_value(
    game: Game | RepeatedGame,
    seed: int = 0,
    iterations: int = 200,
    budget: int | None = None,
) -> GameValue:
    """Seeded greedy lower bound on the value, with random restarts.

    The result is always attained by the returned strategy, hence never above
    the true value. For repeated games the first restart starts from the best
    base strategy played independently in every coordinate, so the bound is at
    least that strategy's repeated value. Deterministic for a fixed seed.
    """
    if isinstance(game, RepeatedGame):
        problem = _repeated_problem(game)
        try:
            base_best = exact_value(
                game.base, min(budget or DEFAULT_BUDGET, 2**20)
            ).strategy
        except BudgetExceeded:
            base_best = local_search_value(
                game.base, seed=seed, iterations=iterations
            ).strategy
        first = lift_strategy(base_best, game.base, game.n)
    else:
        problem = _game_problem(game)
        first = tuple(
            (0,) * q for q in problem.question_counts
        )
    rng = random.Random(seed)

    remaining = iterations
    best_value = -1
    best_tables: list[list[int]] | None = None
    start: list[list[int]] | None = [list(t) for t in first]
    while True:
        if start is None:
            start = [
                [rng.randrange(problem.answer_counts[i]) for _ in range(q)]
                for i, q in enumerate(problem.question_counts)
            ]
        value, tables, used = _search_from(problem, start, max(remaining, 0))
        if value > best_value:
            best_value = value
            best_tables = tables
        remaining -= max(used, 1)
        if remaining <= 0:
            break
        start = None

    assert best_tables is not None
    strategy = tuple(tuple(row) for row in best_tables)
    return GameValue(
        value=Fraction(best_value, problem.denom), strategy=strategy, exact=False
    )
