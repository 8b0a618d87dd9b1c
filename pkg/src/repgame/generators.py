"""Deterministic generators for the bundled example games.

Includes the fixed desk-scale examples used throughout the test and
verification suites, a simultaneous clause-consistency game builder, and a
seeded random projection-game generator.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Game,
    PredicateAtom,
    accept_all,
    base_predicate,
    validate_game,
)
from .errors import UncoveredVariable

#: A literal is (variable index, True for positive occurrence).
Literal = tuple[int, bool]
Clause = tuple[Literal, Literal, Literal]


def chsh() -> Game:
    """Two players, binary questions and answers, accept iff a1 xor a2 = x1 and x2."""
    questions = ((0, 1), (0, 1))
    answers = ((0, 1), (0, 1))
    mu = {
        q: Fraction(1, 4) for q in itertools.product(range(2), repeat=2)
    }
    accepts = []
    for x, y in mu:
        for a, b in itertools.product(range(2), repeat=2):
            if (a ^ b) == (x & y):
                accepts.append(((x, y), (a, b)))
    atom = base_predicate(accepts)
    mix = {q: {0: Fraction(1)} for q in mu}
    return validate_game(
        Game(questions, answers, mu, (atom,), mix)
    )


def chain3() -> Game:
    """Three players on a three-tuple support that is loosely connected only.

    The first two supported questions demand equal answers; the third demands
    the first two answers equal and the third flipped. Any two constraints are
    satisfiable, all three are not, so the exact value is 2/3.
    """
    questions = ((0, 1), (0, 1), (0, 1))
    answers = ((0, 1), (0, 1), (0, 1))
    support = [(0, 0, 0), (0, 1, 1), (1, 1, 0)]
    mu = {q: Fraction(1, 3) for q in support}
    equal = base_predicate(
        [(q, (a, a, a)) for q in support[:2] for a in range(2)]
    )
    flipped = base_predicate(
        [((1, 1, 0), (a, a, 1 - a)) for a in range(2)]
    )
    mix = {
        (0, 0, 0): {0: Fraction(1)},
        (0, 1, 1): {0: Fraction(1)},
        (1, 1, 0): {1: Fraction(1)},
    }
    return validate_game(Game(questions, answers, mu, (equal, flipped), mix))


def ghz() -> Game:
    """The standard three-player parity game; not a projection game."""
    questions = ((0, 1), (0, 1), (0, 1))
    answers = ((0, 1), (0, 1), (0, 1))
    support = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    mu = {q: Fraction(1, 4) for q in support}
    accepts = []
    for q in support:
        target = q[0] | q[1] | q[2]
        for a in itertools.product(range(2), repeat=3):
            if (a[0] ^ a[1] ^ a[2]) == target:
                accepts.append((q, a))
    mix = {q: {0: Fraction(1)} for q in support}
    return validate_game(
        Game(questions, answers, mu, (base_predicate(accepts),), mix)
    )


def diag3(
    weights: tuple[Fraction, Fraction] = (Fraction(1, 2), Fraction(1, 2)),
) -> Game:
    """Three players asked either all-zero or all-one; not loosely connected."""
    questions = ((0, 1), (0, 1), (0, 1))
    answers = ((0, 1), (0, 1), (0, 1))
    support = [(0, 0, 0), (1, 1, 1)]
    mu = {support[0]: weights[0], support[1]: weights[1]}
    equal = base_predicate(
        [(q, (a, a, a)) for q in support for a in range(2)]
    )
    mix = {q: {0: Fraction(1)} for q in support}
    return validate_game(Game(questions, answers, mu, (equal,), mix))


def _clause_variables(clause: Clause) -> tuple[int, ...]:
    seen = []
    for var, _ in clause:
        if var not in seen:
            seen.append(var)
    return tuple(seen)


def _assignment_value(clause: Clause, bits: tuple[int, int, int], var: int) -> int:
    for position, (v, _) in enumerate(clause):
        if v == var:
            return bits[position]
    raise KeyError(var)


def _is_satisfying(clause: Clause, bits: tuple[int, int, int]) -> bool:
    # Positions of a repeated variable must agree, otherwise the bits do not
    # describe an assignment at all.
    value: dict[int, int] = {}
    for position, (var, _) in enumerate(clause):
        if var in value and value[var] != bits[position]:
            return False
        value[var] = bits[position]
    return any(
        value[var] == (1 if positive else 0) for var, positive in clause
    )


def sat_consistency(clause_lists: list[list[Clause]], num_variables: int) -> Game:
    """Simultaneous clause-consistency game over a shared variable set.

    The verifier picks a variable uniformly, then for each player an
    independent uniformly random clause of that player's list containing the
    variable. Answers are bit triples assigning the clause positions; a
    non-satisfying or internally inconsistent answer is rejected outright, and
    the verifier additionally requires all answers to agree on the chosen
    variable.
    """
    k = len(clause_lists)
    clause_lists = [list(clauses) for clauses in clause_lists]
    for i, clauses in enumerate(clause_lists):
        covered = {var for clause in clauses for var, _ in clause}
        for var in range(num_variables):
            if var not in covered:
                raise UncoveredVariable(
                    f"player {i + 1} has no clause containing variable {var}"
                )

    questions = tuple(tuple(range(len(clauses))) for clauses in clause_lists)
    answers = tuple(
        tuple(range(8)) for _ in range(k)
    )
    bit_triples = list(itertools.product(range(2), repeat=3))

    by_variable = [
        {
            var: [ci for ci, clause in enumerate(clauses)
                  if var in _clause_variables(clause)]
            for var in range(num_variables)
        }
        for clauses in clause_lists
    ]

    # Joint weight of (question tuple, pivot variable); the per-question
    # predicate mixture is this joint conditioned on the question.
    joint: dict[tuple[tuple[int, ...], int], Fraction] = {}
    for var in range(num_variables):
        var_weight = Fraction(1, num_variables)
        pools = [by_variable[i][var] for i in range(k)]
        for q in itertools.product(*pools):
            weight = var_weight
            for pool in pools:
                weight /= len(pool)
            joint[(q, var)] = joint.get((q, var), Fraction(0)) + weight

    mu: dict[tuple[int, ...], Fraction] = {}
    for (q, _), weight in joint.items():
        mu[q] = mu.get(q, Fraction(0)) + weight

    atoms = []
    mix: dict[tuple[int, ...], dict[int, Fraction]] = {q: {} for q in mu}
    for var in range(num_variables):
        accepts = []
        for (q, pivot), _ in joint.items():
            if pivot != var:
                continue
            clauses = [clause_lists[i][q[i]] for i in range(k)]
            for bits_combo in itertools.product(bit_triples, repeat=k):
                if not all(
                    _is_satisfying(clauses[i], bits_combo[i]) for i in range(k)
                ):
                    continue
                values = [
                    _assignment_value(clauses[i], bits_combo[i], var)
                    for i in range(k)
                ]
                if len(set(values)) != 1:
                    continue
                a = tuple(
                    bits_combo[i][0] * 4 + bits_combo[i][1] * 2 + bits_combo[i][2]
                    for i in range(k)
                )
                accepts.append((q, a))
        atoms.append(base_predicate(accepts))
    for (q, var), weight in joint.items():
        row = mix[q]
        row[var] = row.get(var, Fraction(0)) + weight / mu[q]

    return validate_game(Game(questions, answers, mu, tuple(atoms), mix))


def sat_demo() -> Game:
    """Three clause lists that are pairwise satisfiable but jointly not.

    Variables x (0) and y (1); the lists are {x or y}, {not-x or y} and
    {not-y, plus a tautology covering x}. Every two-player restriction has
    value 1 while the full game does not.
    """
    x, y = 0, 1
    phi1 = [((x, True), (y, True), (y, True))]
    phi2 = [((x, False), (y, True), (y, True))]
    phi3 = [
        ((y, False), (y, False), (y, False)),
        ((x, True), (x, False), (y, True)),
    ]
    return sat_consistency([phi1, phi2, phi3], num_variables=2)


@dataclass(frozen=True)
class GeneratorParams:
    """Parameters for the seeded random projection-game generator."""

    seed: int
    players: int = 3
    question_size: int = 2
    answer_size: int = 2
    support_density: Fraction = Fraction(3, 5)
    d_min: int = 1
    d_max: int = 2
    weight_cap: int = 4


def _random_support(
    rng: random.Random, sizes: list[int], density: Fraction
) -> list[tuple[int, ...]]:
    tuples = list(itertools.product(*(range(s) for s in sizes)))
    chosen = [
        q for q in tuples
        if rng.randrange(density.denominator) < density.numerator
    ]
    if not chosen:
        chosen = [tuples[rng.randrange(len(tuples))]]
    return chosen


def _projection_atom(
    rng: random.Random,
    q: tuple[int, ...],
    answer_sizes: list[int],
    d_min: int,
    d_max: int,
) -> PredicateAtom:
    d_cap = min([d_max] + answer_sizes)
    d = rng.randint(min(d_min, d_cap), d_cap)
    labelings = []
    for size in answer_sizes:
        order = list(range(size))
        rng.shuffle(order)
        labels = [0] * size
        for rank, answer in enumerate(order):
            labels[answer] = rank if rank < d else rng.randrange(d)
        labelings.append(labels)
    accepts = [
        (q, combo)
        for combo in itertools.product(*(range(s) for s in answer_sizes))
        if len({labelings[i][combo[i]] for i in range(len(combo))}) == 1
    ]
    return base_predicate(accepts)


def random_projection_game(params: GeneratorParams) -> Game:
    """A seeded random game that satisfies the projection property by design.

    Each supported question gets its own predicate built from random
    surjective answer labelings; acceptance means all labels agree.
    """
    rng = random.Random(params.seed)
    k = params.players
    q_sizes = [params.question_size] * k
    a_sizes = [params.answer_size] * k
    support = _random_support(rng, q_sizes, params.support_density)
    weights = {q: Fraction(rng.randint(1, params.weight_cap)) for q in support}
    total = sum(weights.values())
    mu = {q: w / total for q, w in weights.items()}
    atoms = []
    mix = {}
    for index, q in enumerate(sorted(support)):
        atoms.append(
            _projection_atom(rng, q, a_sizes, params.d_min, params.d_max)
        )
        mix[q] = {index: Fraction(1)}
    return validate_game(
        Game(
            tuple(tuple(range(s)) for s in q_sizes),
            tuple(tuple(range(s)) for s in a_sizes),
            mu,
            tuple(atoms),
            mix,
        )
    )


def random_split_game(params: GeneratorParams) -> Game:
    """A seeded projection game whose support splits into two disjoint blocks.

    Every player's question labels are cut in half and each block only ever
    appears with its own half, so the game is never loosely connected. Useful
    as input for decomposition checks.
    """
    if params.question_size < 2:
        raise ValueError("need at least two question labels per player to split")
    rng = random.Random(params.seed)
    k = params.players
    q_sizes = [params.question_size] * k
    a_sizes = [params.answer_size] * k
    halves = [params.question_size // 2] * k

    mu: dict[tuple[int, ...], Fraction] = {}
    atoms: list[PredicateAtom] = []
    mix: dict[tuple[int, ...], dict[int, Fraction]] = {}
    block_mass = Fraction(rng.randint(1, 3), 4)
    for block, mass in enumerate((block_mass, 1 - block_mass)):
        sizes = [
            halves[i] if block == 0 else q_sizes[i] - halves[i] for i in range(k)
        ]
        offsets = [0 if block == 0 else halves[i] for i in range(k)]
        local = _random_support(rng, sizes, params.support_density)
        support = sorted(
            tuple(component + offsets[i] for i, component in enumerate(q))
            for q in local
        )
        weights = {q: Fraction(rng.randint(1, params.weight_cap)) for q in support}
        total = sum(weights.values())
        for q in support:
            mu[q] = mass * weights[q] / total
            atoms.append(
                _projection_atom(rng, q, a_sizes, params.d_min, params.d_max)
            )
            mix[q] = {len(atoms) - 1: Fraction(1)}
    return validate_game(
        Game(
            tuple(tuple(range(s)) for s in q_sizes),
            tuple(tuple(range(s)) for s in a_sizes),
            mu,
            tuple(atoms),
            mix,
        )
    )


def single_tuple_game() -> Game:
    """A one-question game that accepts everything; handy fixed point."""
    questions = ((0,), (0,))
    answers = ((0, 1), (0, 1))
    mu = {(0, 0): Fraction(1)}
    mix = {(0, 0): {0: Fraction(1)}}
    return validate_game(Game(questions, answers, mu, (accept_all(),), mix))


#: The fixed example games shipped with the package, by CLI name.
BUNDLED = {
    "chsh": chsh,
    "chain3": chain3,
    "ghz": ghz,
    "diag3": diag3,
    "sat-demo": sat_demo,
}
