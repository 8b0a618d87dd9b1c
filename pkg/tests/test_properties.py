"""Property-based checks of the spec invariants on random small games."""

from dataclasses import replace
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from repgame import (
    Game,
    PredicateAtom,
    accept_all,
    all_strategies,
    base_predicate,
    consistency_probability,
    decompose_loosely,
    evaluate,
    exact_value,
    exact_value_repeated,
    is_connected,
    is_loosely_connected,
    is_player_wise_connected,
    is_projection,
    link_distribution,
    parse_game,
    repeated_game,
    serialize_game,
    strategy_space_size,
    support_closure,
    transform,
    validate_game,
)


@st.composite
def small_games(draw, max_players=3, max_labels=2):
    k = draw(st.integers(2, max_players))
    q_sizes = [draw(st.integers(1, max_labels)) for _ in range(k)]
    a_sizes = [draw(st.integers(1, max_labels)) for _ in range(k)]

    all_questions = []
    def build(prefix):
        if len(prefix) == k:
            all_questions.append(tuple(prefix))
            return
        for label in range(q_sizes[len(prefix)]):
            build(prefix + [label])
    build([])

    support = draw(
        st.sets(st.sampled_from(all_questions), min_size=1, max_size=min(4, len(all_questions)))
    )
    weights = {q: draw(st.integers(1, 4)) for q in support}
    total = sum(weights.values())
    mu = {q: Fraction(w, total) for q, w in weights.items()}

    atom_count = draw(st.integers(1, 2))
    atoms: list[PredicateAtom] = []
    for _ in range(atom_count):
        if draw(st.booleans()):
            atoms.append(accept_all())
        else:
            pairs = []
            for q in sorted(support):
                answer_space = []
                def build_answers(prefix):
                    if len(prefix) == k:
                        answer_space.append(tuple(prefix))
                        return
                    for label in range(a_sizes[len(prefix)]):
                        build_answers(prefix + [label])
                build_answers([])
                chosen = draw(
                    st.sets(st.sampled_from(answer_space), max_size=len(answer_space))
                )
                pairs.extend((q, a) for a in chosen)
            atoms.append(base_predicate(pairs))

    mix = {}
    for q in support:
        shares = {j: draw(st.integers(0, 3)) for j in range(atom_count)}
        if sum(shares.values()) == 0:
            shares[0] = 1
        share_total = sum(shares.values())
        mix[q] = {
            j: Fraction(s, share_total) for j, s in shares.items() if s > 0
        }

    return validate_game(
        Game(
            question_alphabets=tuple(tuple(range(s)) for s in q_sizes),
            answer_alphabets=tuple(tuple(range(s)) for s in a_sizes),
            mu=mu,
            predicates=tuple(atoms),
            mix=mix,
        )
    )


@settings(max_examples=60, deadline=None)
@given(small_games())
def test_value_bounds_and_strategy_dominance(game):
    result = exact_value(game)
    assert 0 <= result.value <= 1
    if strategy_space_size(game) <= 256:
        for strategy in all_strategies(game):
            assert evaluate(game, strategy) <= result.value


@settings(max_examples=25, deadline=None)
@given(small_games(max_players=2))
def test_tensoring_and_restriction(game):
    base = exact_value(game).value
    rep2 = exact_value_repeated(repeated_game(game, 2)).value
    assert base**2 <= rep2 <= base


@settings(max_examples=40, deadline=None)
@given(small_games(), st.integers(1, 3))
def test_consistency_floor_for_every_strategy(game, pivot):
    i = 1 + (pivot - 1) % game.k
    if strategy_space_size(game) > 256:
        return
    for strategy in all_strategies(game):
        value = evaluate(game, strategy)
        assert consistency_probability(game, i, strategy) >= value**2


@settings(max_examples=40, deadline=None)
@given(small_games(), st.integers(1, 3), st.integers(1, 3))
def test_transform_support_and_projection(game, i_raw, p_raw):
    i = 1 + (i_raw - 1) % game.k
    p = 1 + (p_raw - 1) % game.k
    out = transform(game, i, p)
    assert set(out.mu) >= set(game.mu)
    assert frozenset(out.mu) == support_closure(frozenset(game.mu), i, p)
    assert sum(out.mu.values()) == 1
    if is_projection(game).holds:
        assert is_projection(out).holds


@settings(max_examples=60, deadline=None)
@given(small_games())
def test_connectivity_implication_chain(game):
    connected = is_connected(game)[0]
    player_wise = is_player_wise_connected(game)[0]
    loose = is_loosely_connected(game)[0]
    if connected:
        assert player_wise
    if player_wise:
        assert loose


@settings(max_examples=60, deadline=None)
@given(small_games())
def test_decomposition_reconstructs(game):
    pieces = decompose_loosely(game)
    assert sum((mass for _, mass in pieces), start=Fraction(0)) == 1
    rebuilt = {}
    for piece, mass in pieces:
        assert is_loosely_connected(piece)[0]
        for q, weight in piece.mu.items():
            rebuilt[q] = rebuilt.get(q, Fraction(0)) + mass * weight
    assert rebuilt == game.mu
    values = [exact_value(piece).value for piece, _ in pieces]
    assert min(values) <= exact_value(game).value


@settings(max_examples=60, deadline=None)
@given(small_games(), st.integers(1, 3))
def test_link_distribution_is_normalized(game, pivot):
    i = 1 + (pivot - 1) % game.k
    links = link_distribution(game, i)
    assert sum(links.atoms.values()) == 1
    for q in game.mu:
        assert links.atoms[(q, q)] > 0
    for (q, q2) in links.atoms:
        assert q[i - 1] == q2[i - 1]


@settings(max_examples=60, deadline=None)
@given(small_games())
def test_serialization_round_trip(game):
    text = serialize_game(game)
    back = parse_game(text)
    assert back == replace(game, slots=None)
    assert serialize_game(back) == text
