"""Static analyzers: projection property, connectivity notions, decomposition.

All analyzers run on validated games and are pure; outputs are ordered
deterministically (questions lexicographically, components by first member).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from .core import (
    ACCEPT_ALL,
    AnswerTuple,
    Game,
    QuestionTuple,
    validate_game,
)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def add(self, item) -> None:
        if item not in self.parent:
            self.parent[item] = item

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b) -> None:
        self.add(a)
        self.add(b)
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def groups(self) -> list[list]:
        out: dict = {}
        for item in self.parent:
            out.setdefault(self.find(item), []).append(item)
        return [sorted(members) for members in out.values()]


@dataclass(frozen=True)
class QuestionLabeling:
    """Per-question projection maps: every answer gets a component label.

    A tuple is accepted iff all players' labels agree, which makes
    `component_count` the number of distinct labels in use.
    """

    component_count: int
    sigma: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ProjectionCounterexample:
    """A cross tuple missing from an otherwise connected accepting component."""

    question: QuestionTuple
    predicate: int
    component: int
    missing: AnswerTuple


@dataclass(frozen=True)
class ProjectionWitness:
    """Outcome of the projection check.

    When positive, `labelings` maps every (question, predicate index) with
    positive weight to maps that reproduce the accepting set exactly. When
    negative, `counterexample` names a concrete missing tuple.
    """

    holds: bool
    labelings: dict[tuple[QuestionTuple, int], QuestionLabeling]
    counterexample: ProjectionCounterexample | None = None


def _atom_labeling(
    game: Game, q: QuestionTuple, index: int
) -> QuestionLabeling | ProjectionCounterexample:
    """Component-label one predicate at one question, or find a missing tuple.

    Components of the accepting answer hypergraph are labeled in first-seen
    order scanning accepting tuples lexicographically; answers accepted in no
    tuple get fresh labels afterwards in (player, answer) order.
    """
    sizes = [len(a) for a in game.answer_alphabets]
    atom = game.predicates[index]
    if atom.kind == ACCEPT_ALL:
        return QuestionLabeling(
            component_count=1, sigma=tuple((0,) * size for size in sizes)
        )
    accepting = sorted(a for (qq, a) in atom.accepts if qq == q)
    uf = _UnionFind()
    for a in accepting:
        vertices = [(i, a[i]) for i in range(len(sizes))]
        for vertex in vertices[1:]:
            uf.union(vertices[0], vertex)

    label_of_root: dict = {}
    next_label = 0
    for a in accepting:
        root = uf.find((0, a[0]))
        if root not in label_of_root:
            label_of_root[root] = next_label
            next_label += 1

    sigma = [[-1] * size for size in sizes]
    members: dict[int, list[tuple[int, int]]] = {}
    for i in range(len(sizes)):
        for answer in range(sizes[i]):
            vertex = (i, answer)
            if vertex in uf.parent:
                label = label_of_root[uf.find(vertex)]
                sigma[i][answer] = label
                members.setdefault(label, []).append(vertex)
    for i in range(len(sizes)):
        for answer in range(sizes[i]):
            if sigma[i][answer] == -1:
                sigma[i][answer] = next_label
                next_label += 1

    accepted_set = set(accepting)
    for label in sorted(members):
        per_player: list[list[int]] = [[] for _ in sizes]
        for i, answer in members[label]:
            per_player[i].append(answer)
        for combo in itertools.product(*per_player):
            if combo not in accepted_set:
                return ProjectionCounterexample(
                    question=q, predicate=index, component=label, missing=combo
                )
    return QuestionLabeling(
        component_count=next_label, sigma=tuple(tuple(row) for row in sigma)
    )


def is_projection(game: Game) -> ProjectionWitness:
    """Check that every positively weighted predicate is a projection check.

    For each supported question and each predicate with positive weight there,
    the accepting answer hypergraph must have only complete cross-product
    components; equivalently there are per-player labelings whose agreement
    reproduces acceptance exactly.
    """
    labelings: dict[tuple[QuestionTuple, int], QuestionLabeling] = {}
    for q in game.support():
        for index in sorted(game.mix[q]):
            outcome = _atom_labeling(game, q, index)
            if isinstance(outcome, ProjectionCounterexample):
                return ProjectionWitness(
                    holds=False, labelings={}, counterexample=outcome
                )
            labelings[(q, index)] = outcome
    return ProjectionWitness(holds=True, labelings=labelings)


@dataclass(frozen=True)
class ConnectivityReport:
    """Component partitions of the question support under three edge notions.

    `tuple_components` uses differ-in-exactly-one-coordinate edges,
    `player_components[i]` the per-player shared-context graph on that
    player's used question labels, and `loose_components` the share-any-
    coordinate relation.
    """

    tuple_components: tuple[tuple[QuestionTuple, ...], ...]
    player_components: tuple[tuple[tuple[int, ...], ...], ...]
    loose_components: tuple[tuple[QuestionTuple, ...], ...]


def connectivity_report(game: Game) -> ConnectivityReport:
    support = sorted(game.mu)
    k = game.k

    tuple_uf = _UnionFind()
    for q in support:
        tuple_uf.add(q)
    for qa, qb in itertools.combinations(support, 2):
        if sum(1 for i in range(k) if qa[i] != qb[i]) == 1:
            tuple_uf.union(qa, qb)

    player_components = []
    for i in range(k):
        uf = _UnionFind()
        for q in support:
            uf.add(q[i])
        rest: dict[tuple[int, ...], list[int]] = {}
        for q in support:
            rest.setdefault(q[:i] + q[i + 1 :], []).append(q[i])
        for labels in rest.values():
            for label in labels[1:]:
                uf.union(labels[0], label)
        player_components.append(tuple(tuple(g) for g in sorted(uf.groups())))

    loose_uf = _UnionFind()
    for q in support:
        loose_uf.add(q)
    coordinate_owner: dict[tuple[int, int], QuestionTuple] = {}
    for q in support:
        for i in range(k):
            key = (i, q[i])
            if key in coordinate_owner:
                loose_uf.union(coordinate_owner[key], q)
            else:
                coordinate_owner[key] = q

    return ConnectivityReport(
        tuple_components=tuple(tuple(g) for g in sorted(tuple_uf.groups())),
        player_components=tuple(player_components),
        loose_components=tuple(tuple(g) for g in sorted(loose_uf.groups())),
    )


def is_connected(game: Game) -> tuple[bool, ConnectivityReport]:
    """True iff differ-in-one-coordinate moves connect the whole support."""
    report = connectivity_report(game)
    return len(report.tuple_components) == 1, report


def is_player_wise_connected(game: Game) -> tuple[bool, ConnectivityReport]:
    """True iff every player's used question labels form one shared-context component."""
    report = connectivity_report(game)
    return all(len(parts) == 1 for parts in report.player_components), report


def is_loosely_connected(game: Game) -> tuple[bool, ConnectivityReport]:
    """True iff the support cannot be split into coordinate-disjoint blocks.

    Implemented as connectivity of the share-a-coordinate graph on supported
    tuples, which is equivalent when both sides of a candidate split must
    contain supported tuples (unused labels can go to either side).
    """
    report = connectivity_report(game)
    return len(report.loose_components) == 1, report


def decompose_loosely(game: Game) -> list[tuple[Game, Fraction]]:
    """Split into loosely-connected components with renormalized weights.

    Returns (component game, mass) pairs ordered by first supported tuple;
    masses sum to one and mixing the components back with their masses
    reproduces the original question distribution exactly.
    """
    _, report = is_loosely_connected(game)
    out = []
    for component in report.loose_components:
        mass = sum((game.mu[q] for q in component), start=Fraction(0))
        mu = {q: game.mu[q] / mass for q in component}
        mix = {q: dict(game.mix[q]) for q in component}
        piece = validate_game(
            replace(game, mu=mu, mix=mix, slots=None)
        )
        out.append((piece, mass))
    return out


def _dot_name(game: Game, q: QuestionTuple) -> str:
    labels = [str(game.question_alphabets[i][q[i]]) for i in range(len(q))]
    return '"(' + ",".join(labels) + ')"'


def graph_dot(game: Game, kind: str = "tuple", player: int | None = None) -> str:
    """Render one of the analyzer graphs in DOT format.

    `kind` is "tuple" (differ-in-one edges), "loose" (share-a-coordinate
    edges) or "player" (requires `player`, 1-based).
    """
    support = sorted(game.mu)
    k = game.k
    lines = ["graph {"]
    if kind == "player":
        if player is None:
            raise ValueError("player graph needs a player number")
        i = player - 1
        if not 0 <= i < k:
            raise ValueError(f"player {player} not in 1..{k}")
        labels = sorted({q[i] for q in support})
        for label in labels:
            lines.append(f'  "{game.question_alphabets[i][label]}";')
        edges = set()
        rest: dict[tuple[int, ...], list[int]] = {}
        for q in support:
            rest.setdefault(q[:i] + q[i + 1 :], []).append(q[i])
        for group in rest.values():
            for a, b in itertools.combinations(sorted(set(group)), 2):
                edges.add((a, b))
        for a, b in sorted(edges):
            lines.append(
                f'  "{game.question_alphabets[i][a]}" -- '
                f'"{game.question_alphabets[i][b]}";'
            )
    elif kind in ("tuple", "loose"):
        for q in support:
            lines.append(f"  {_dot_name(game, q)};")
        for qa, qb in itertools.combinations(support, 2):
            difference = sum(1 for i in range(k) if qa[i] != qb[i])
            wanted = difference == 1 if kind == "tuple" else difference < k
            if wanted:
                lines.append(f"  {_dot_name(game, qa)} -- {_dot_name(game, qb)};")
    else:
        raise ValueError(f"unknown graph kind {kind!r}")
    lines.append("}")
    return "\n".join(lines) + "\n"
