"""Link distributions and the support-growing game transformations.

A pivot-i link is an ordered pair of supported question tuples agreeing on
player i's question. The transformation for (i, p) asks the splice of a
random link (player p's question from the first tuple, the rest from the
second), accepting off-diagonal links by default and diagonal links via the
original predicates. Iterating all (i, p) saturates a loosely-connected game
to full support over its used labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod

from .core import (
    ACCEPT_ALL,
    AnswerTuple,
    Game,
    PredicateAtom,
    QuestionTuple,
    RepeatedGame,
    Strategy,
    accept_all,
    answers_on,
    check_strategy,
    marginal,
    validate_game,
)
from .errors import (
    BudgetExceeded,
    MaxPassesExceeded,
    MBlowup,
    NotLooselyConnected,
    NotUniformized,
    PivotMismatch,
    PlayerOutOfRange,
)
from .structure import is_loosely_connected

Link = tuple[QuestionTuple, QuestionTuple]

#: A transformation sequence: (pivot player, spliced player) pairs, 1-based.
TransformSpec = list[tuple[int, int]]


def _player_index(k: int, player: int) -> int:
    if not 1 <= player <= k:
        raise PlayerOutOfRange(f"player {player} not in 1..{k}")
    return player - 1


@dataclass(frozen=True)
class LinkDistribution:
    """Exact distribution over ordered same-pivot question pairs.

    The weight of (q, q') is mu(q) * mu(q') / marginal(pivot question); both
    tuples always share the pivot player's question and every supported tuple
    contributes a positive diagonal atom (q, q).
    """

    pivot: int
    atoms: dict[Link, Fraction]

    def diagonal_mass(self) -> Fraction:
        return sum(
            (w for (q, q2), w in self.atoms.items() if q == q2),
            start=Fraction(0),
        )


def _support_view(game: Game | RepeatedGame) -> dict:
    if isinstance(game, RepeatedGame):
        return game.support_weights()
    return game.mu


def link_distribution(game: Game | RepeatedGame, i: int) -> LinkDistribution:
    """The exact pivot-i link distribution of a game or repeated game."""
    pi = _player_index(game.k, i)
    support = _support_view(game)
    by_pivot: dict = {}
    for q, weight in support.items():
        by_pivot.setdefault(q[pi], []).append((q, weight))
    atoms: dict[Link, Fraction] = {}
    for _, entries in sorted(by_pivot.items()):
        pivot_mass = sum(w for _, w in entries)
        for (qa, wa), (qb, wb) in itertools.product(entries, repeat=2):
            atoms[(qa, qb)] = wa * wb / pivot_mass
    return LinkDistribution(pivot=i, atoms=dict(sorted(atoms.items())))


def product_link_distribution(
    game: Game, i: int, n: int, atom_budget: int = 10**6
) -> LinkDistribution:
    """The n-fold product of the base link distribution, keyed by vector tuples.

    Atom-for-atom equal to the link distribution of the n-fold repeated game.
    """
    _player_index(game.k, i)
    base = link_distribution(game, i)
    if len(base.atoms) ** n > atom_budget:
        raise BudgetExceeded(
            f"{len(base.atoms)}^{n} product atoms exceed budget {atom_budget}"
        )
    k = game.k
    atoms: dict[Link, Fraction] = {}
    for combo in itertools.product(sorted(base.atoms), repeat=n):
        weight = prod(
            (base.atoms[pair] for pair in combo), start=Fraction(1)
        )
        first = tuple(tuple(pair[0][i2] for pair in combo) for i2 in range(k))
        second = tuple(tuple(pair[1][i2] for pair in combo) for i2 in range(k))
        key = (first, second)
        atoms[key] = atoms.get(key, Fraction(0)) + weight
    return LinkDistribution(pivot=i, atoms=dict(sorted(atoms.items())))


def splice(link: Link, p: int) -> QuestionTuple:
    """Player p's question from the first tuple, everyone else's from the second."""
    q, q2 = link
    pp = _player_index(len(q), p)
    return q2[:pp] + (q[pp],) + q2[pp + 1 :]


def is_link_consistent(
    link: Link,
    predicate: PredicateAtom,
    answers: tuple[AnswerTuple, AnswerTuple],
    i: int,
) -> bool:
    """Both link endpoints accepted by `predicate`, with equal pivot answers."""
    q, q2 = link
    pi = _player_index(len(q), i)
    if q[pi] != q2[pi]:
        raise PivotMismatch(f"link {link} does not share player {i}'s question")
    a, a2 = answers
    return (
        a[pi] == a2[pi]
        and predicate.accepts_pair(q, a)
        and predicate.accepts_pair(q2, a2)
    )


def _accepted_spans(
    game: Game, q: QuestionTuple, answers: AnswerTuple
) -> list[tuple[Fraction, Fraction]]:
    """Sub-intervals of [0, 1) whose predicate accepts `answers` at `q`.

    The unit interval is cut into blocks per predicate index in ascending
    order, mirroring the slot layout `uniformize` materializes. Sampling one
    common point for both endpoints of a link realizes the shared predicate
    draw exactly, with no slot table needed.
    """
    spans = []
    position = Fraction(0)
    for index in sorted(game.mix[q]):
        weight = game.mix[q][index]
        end = position + weight
        if game.predicates[index].accepts_pair(q, answers):
            if spans and spans[-1][1] == position:
                spans[-1] = (spans[-1][0], end)
            else:
                spans.append((position, end))
        position = end
    return spans


def _span_overlap(
    left: list[tuple[Fraction, Fraction]], right: list[tuple[Fraction, Fraction]]
) -> Fraction:
    total = Fraction(0)
    for lo1, hi1 in left:
        for lo2, hi2 in right:
            lo = max(lo1, lo2)
            hi = min(hi1, hi2)
            if hi > lo:
                total += hi - lo
    return total


def consistency_probability(game: Game, i: int, strategy: Strategy) -> Fraction:
    """Probability that a random pivot-i link is consistent under a strategy.

    The predicate is drawn once for both endpoints, uniformly over the
    canonical slot layout; pivot answers agree automatically because a
    strategy is a function of the question.
    """
    check_strategy(game, strategy)
    links = link_distribution(game, i)
    spans = {
        q: _accepted_spans(game, q, answers_on(strategy, q))
        for q in game.support()
    }
    total = Fraction(0)
    for (q, q2), weight in links.atoms.items():
        total += weight * _span_overlap(spans[q], spans[q2])
    return total


def diagonal_mass(game: Game, i: int) -> Fraction:
    """Total probability that a pivot-i link repeats the same tuple."""
    return link_distribution(game, i).diagonal_mass()


def diagonal_floor(game: Game, i: int) -> Fraction:
    """Smallest conditional re-draw probability over supported tuples.

    This is the largest coefficient c such that the transformed game contains
    a c-weighted copy of the original game (original questions with original
    predicates): min over q of mu(q) / marginal_i(pivot of q). The transformed
    value is therefore at most 1 - c * (1 - value).
    """
    pi = _player_index(game.k, i)
    margin = marginal(game, i)
    return min(weight / margin[q[pi]] for q, weight in game.mu.items())


def transform(game: Game, i: int, p: int) -> Game:
    """One link-splice transformation step.

    The new question is the splice of a random pivot-i link; off-diagonal
    links accept by default while the diagonal re-uses the original predicate
    mixture, so the predicate set stays inside accept-all plus the original
    atoms and the support never shrinks.
    """
    _player_index(game.k, i)
    _player_index(game.k, p)
    links = link_distribution(game, i)

    predicates = list(game.predicates)
    try:
        aa_index = next(
            index for index, atom in enumerate(predicates) if atom.kind == ACCEPT_ALL
        )
    except StopIteration:
        predicates.append(accept_all())
        aa_index = len(predicates) - 1

    mu: dict[QuestionTuple, Fraction] = {}
    shares: dict[QuestionTuple, dict[int, Fraction]] = {}
    for (q, q2), weight in links.atoms.items():
        target = splice((q, q2), p)
        mu[target] = mu.get(target, Fraction(0)) + weight
        row = shares.setdefault(target, {})
        if q == q2:
            for index, mix_weight in game.mix[q].items():
                row[index] = row.get(index, Fraction(0)) + weight * mix_weight
        else:
            row[aa_index] = row.get(aa_index, Fraction(0)) + weight

    mix = {
        target: {index: share / mu[target] for index, share in row.items()}
        for target, row in shares.items()
    }
    return validate_game(
        Game(
            question_alphabets=game.question_alphabets,
            answer_alphabets=game.answer_alphabets,
            mu=mu,
            predicates=tuple(predicates),
            mix=mix,
        )
    )


def uniformize(game: Game, m_cap: int = 10**6) -> Game:
    """Attach the explicit uniform predicate slot table.

    M is the least common multiple of all mix denominators; each question gets
    M slot references, predicate j repeated weight*M times in ascending index
    order, each slot drawn with probability 1/M. Values of the game and of its
    repetitions are unchanged.
    """
    m = 1
    for row in game.mix.values():
        for weight in row.values():
            m = lcm(m, weight.denominator)
    if m > m_cap:
        raise MBlowup(f"uniformization needs M={m} slots, cap is {m_cap}")
    slots = {}
    for q, row in game.mix.items():
        layout: list[int] = []
        for index in sorted(row):
            layout.extend([index] * int(row[index] * m))
        slots[q] = tuple(layout)
    return validate_game(
        Game(
            question_alphabets=game.question_alphabets,
            answer_alphabets=game.answer_alphabets,
            mu=dict(game.mu),
            predicates=game.predicates,
            mix={q: dict(row) for q, row in game.mix.items()},
            slots=slots,
        )
    )


def dedup_predicates(game: Game, answer_space_cap: int = 1 << 16) -> Game:
    """Merge predicates that are extensionally equal question by question.

    Per question, mix weight moves onto the smallest index of each behavior
    class; predicates left with no weight anywhere are dropped and the rest
    reindexed. Values are unchanged. Questions whose answer space exceeds the
    cap are left untouched.
    """
    sizes = [len(a) for a in game.answer_alphabets]
    checkable = prod(sizes) <= answer_space_cap
    combos = (
        list(itertools.product(*(range(s) for s in sizes))) if checkable else []
    )

    mix: dict[QuestionTuple, dict[int, Fraction]] = {}
    for q, row in game.mix.items():
        if not checkable:
            mix[q] = dict(row)
            continue
        representative: dict[frozenset, int] = {}
        merged: dict[int, Fraction] = {}
        for index in sorted(row):
            atom = game.predicates[index]
            behavior = frozenset(
                combo for combo in combos if atom.accepts_pair(q, combo)
            )
            rep = representative.setdefault(behavior, index)
            merged[rep] = merged.get(rep, Fraction(0)) + row[index]
        mix[q] = merged

    used = sorted({index for row in mix.values() for index in row})
    remap = {old: new for new, old in enumerate(used)}
    return validate_game(
        Game(
            question_alphabets=game.question_alphabets,
            answer_alphabets=game.answer_alphabets,
            mu=dict(game.mu),
            predicates=tuple(game.predicates[old] for old in used),
            mix={
                q: {remap[index]: weight for index, weight in row.items()}
                for q, row in mix.items()
            },
        )
    )


def check_transform_spec(steps: TransformSpec, k: int) -> None:
    if not steps:
        raise ValueError("transformation sequence must be non-empty")
    for i, p in steps:
        _player_index(k, i)
        _player_index(k, p)


def default_sweep(k: int) -> TransformSpec:
    """Row-major enumeration of all (pivot, spliced) pairs."""
    return [(i, p) for i in range(1, k + 1) for p in range(1, k + 1)]


def transform_seq(game: Game, steps: TransformSpec) -> Game:
    """Apply transformation steps left to right, deduplicating after each."""
    check_transform_spec(steps, game.k)
    current = game
    for i, p in steps:
        current = dedup_predicates(transform(current, i, p))
    return current


def support_closure(
    support: frozenset[QuestionTuple] | set[QuestionTuple], i: int, p: int
) -> frozenset[QuestionTuple]:
    """Support after one (i, p) step, as a pure set computation."""
    tuples = sorted(support)
    if not tuples:
        return frozenset()
    k = len(tuples[0])
    pi = _player_index(k, i)
    out = set(tuples)
    by_pivot: dict[int, list[QuestionTuple]] = {}
    for q in tuples:
        by_pivot.setdefault(q[pi], []).append(q)
    for group in by_pivot.values():
        for q, q2 in itertools.product(group, repeat=2):
            out.add(splice((q, q2), p))
    return frozenset(out)


@dataclass(frozen=True)
class SaturationResult:
    """Saturated game, pass count, and the per-step support-growth log.

    `passes` counts executed sweeps including the final no-growth one;
    `steps` is the number of transformation steps that produced `game`. Log
    rows are (pass, step, support size, slot count M after the step).
    """

    game: Game
    passes: int
    steps: int
    log: tuple[tuple[int, int, int, int], ...]

    def log_csv(self) -> str:
        lines = ["pass,step,support_size,M"]
        for row in self.log:
            lines.append(",".join(str(x) for x in row))
        return "\n".join(lines) + "\n"


def _mix_slot_count(game: Game) -> int:
    m = 1
    for row in game.mix.values():
        for weight in row.values():
            m = lcm(m, weight.denominator)
    return m


def saturate(
    game: Game,
    beta: TransformSpec | None = None,
    max_passes: int | None = None,
) -> SaturationResult:
    """Sweep transformations until a full pass adds no supported question.

    Requires a loosely-connected input (decompose first otherwise). The result
    has full support over the product of per-player used question labels and
    is connected; by the support-growth argument the pass count is bounded by
    the product of the question alphabet sizes, so exceeding `max_passes`
    indicates a bug rather than slow convergence.
    """
    loose, _ = is_loosely_connected(game)
    if not loose:
        raise NotLooselyConnected(
            "input is not loosely connected; decompose it first"
        )
    sweep = default_sweep(game.k) if beta is None else beta
    check_transform_spec(sweep, game.k)
    if max_passes is None:
        max_passes = prod(len(x) for x in game.question_alphabets) + 1

    log: list[tuple[int, int, int, int]] = []
    current = game
    passes = 0
    while True:
        if passes >= max_passes:
            raise MaxPassesExceeded(
                f"no fixed point after {max_passes} sweeps of {len(sweep)} steps"
            )
        passes += 1
        before = set(current.mu)
        candidate = current
        for step, (i, p) in enumerate(sweep, start=1):
            candidate = dedup_predicates(transform(candidate, i, p))
            log.append(
                (passes, step, len(candidate.mu), _mix_slot_count(candidate))
            )
        if set(candidate.mu) == before:
            return SaturationResult(
                game=current,
                passes=passes,
                steps=(passes - 1) * len(sweep),
                log=tuple(log),
            )
        current = candidate


def to_plain_game(game: Game, pair_budget: int = 10**7) -> Game:
    """Fold the predicate randomness into one extra player.

    The new player is asked a uniform slot index, independent of the first k
    questions, and has a single dummy answer; the unique predicate applies the
    indexed slot to the original players' answers. Requires the explicit slot
    table from `uniformize`. Values of the game and its repetitions carry over.
    """
    if game.slots is None:
        raise NotUniformized("attach slot tables with uniformize() first")
    m = len(next(iter(game.slots.values())))
    sizes = [len(a) for a in game.answer_alphabets]
    work = len(game.mu) * m * prod(sizes)
    if work > pair_budget:
        raise BudgetExceeded(
            f"materializing the folded predicate needs {work} checks,"
            f" budget is {pair_budget}"
        )
    accepts = []
    for q in game.support():
        layout = game.slots[q]
        for slot, index in enumerate(layout):
            atom = game.predicates[index]
            for combo in itertools.product(*(range(s) for s in sizes)):
                if atom.accepts_pair(q, combo):
                    accepts.append((q + (slot,), combo + (0,)))
    mu = {
        q + (slot,): weight / m
        for q, weight in game.mu.items()
        for slot in range(m)
    }
    mix = {key: {0: Fraction(1)} for key in mu}
    return validate_game(
        Game(
            question_alphabets=game.question_alphabets + (tuple(range(m)),),
            answer_alphabets=game.answer_alphabets + ((0,),),
            mu=mu,
            predicates=(PredicateAtom("base", frozenset(accepts)),),
            mix=mix,
        )
    )
