"""Game model, validation, evaluation, and exact/heuristic values."""

from dataclasses import replace
from fractions import Fraction

import pytest

from repgame import (
    ArityMismatch,
    BudgetExceeded,
    DistributionNotNormalized,
    Game,
    PlayerOutOfRange,
    UnknownLabel,
    accept_all,
    all_strategies,
    chain3,
    chsh,
    evaluate,
    exact_value,
    exact_value_repeated,
    ghz,
    lift_strategy,
    local_search_value,
    marginal,
    repeated_game,
    single_tuple_game,
    strategy_space_size,
    validate_game,
)
from oracles import brute_force_value

ZERO3 = ((0, 0), (0, 0), (0, 0))
ZERO2 = ((0, 0), (0, 0))


def test_validate_accepts_bundled_games(chsh_game, chain3_game, ghz_game):
    for game in (chsh_game, chain3_game, ghz_game):
        assert validate_game(game) == game


def test_validate_rejects_unnormalized_mu(chsh_game):
    broken = replace(
        chsh_game,
        mu={q: Fraction(9, 40) for q in chsh_game.mu},
    )
    with pytest.raises(DistributionNotNormalized):
        validate_game(broken)


def test_validate_rejects_zero_weight(chsh_game):
    mu = dict(chsh_game.mu)
    q = next(iter(mu))
    mu[q] = Fraction(0)
    mu[(1, 1)] = mu[(1, 1)] + Fraction(1, 4)
    with pytest.raises(DistributionNotNormalized):
        validate_game(replace(chsh_game, mu=mu))


def test_validate_rejects_short_tuple(chsh_game):
    mu = dict(chsh_game.mu)
    del mu[(1, 1)]
    mu[(0,)] = Fraction(1, 4)
    with pytest.raises(ArityMismatch):
        validate_game(replace(chsh_game, mu=mu))


def test_validate_rejects_out_of_range_label(chsh_game):
    mu = dict(chsh_game.mu)
    del mu[(1, 1)]
    mu[(1, 7)] = Fraction(1, 4)
    with pytest.raises(UnknownLabel):
        validate_game(replace(chsh_game, mu=mu))


def test_validate_rejects_missing_mix(chsh_game):
    mix = dict(chsh_game.mix)
    del mix[(0, 0)]
    with pytest.raises(DistributionNotNormalized):
        validate_game(replace(chsh_game, mix=mix))


def test_marginals(chsh_game, chain3_game):
    assert marginal(chsh_game, 1) == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert marginal(chain3_game, 1) == {0: Fraction(2, 3), 1: Fraction(1, 3)}
    assert marginal(chain3_game, 2) == {0: Fraction(1, 3), 1: Fraction(2, 3)}
    single = single_tuple_game()
    assert marginal(single, 1) == {0: Fraction(1)}
    with pytest.raises(PlayerOutOfRange):
        marginal(chsh_game, 3)
    with pytest.raises(PlayerOutOfRange):
        marginal(chsh_game, 0)


def test_evaluate_known_strategies(chsh_game, chain3_game):
    assert evaluate(chsh_game, ZERO2) == Fraction(3, 4)
    assert evaluate(chain3_game, ZERO3) == Fraction(2, 3)
    assert evaluate(single_tuple_game(), ((0,), (0,))) == 1


def test_evaluate_accept_all_game():
    game = single_tuple_game()
    for strategy in all_strategies(game):
        assert evaluate(game, strategy) == 1


def test_evaluate_rejects_partial_strategy(chain3_game):
    with pytest.raises(ArityMismatch):
        evaluate(chain3_game, (((0,)), (0, 0), (0, 0)))


def test_exact_values_match_brute_force(chsh_game, chain3_game, ghz_game):
    for game in (chsh_game, chain3_game, ghz_game):
        oracle_value, _ = brute_force_value(game)
        assert exact_value(game).value == oracle_value


def test_exact_values_frozen(chsh_game, chain3_game, ghz_game):
    assert exact_value(chsh_game).value == Fraction(3, 4)
    assert exact_value(chain3_game).value == Fraction(2, 3)
    assert exact_value(ghz_game).value == Fraction(3, 4)
    assert exact_value(single_tuple_game()).value == 1


def test_exact_value_witness_attains_value(chsh_game, chain3_game, ghz_game):
    for game in (chsh_game, chain3_game, ghz_game):
        result = exact_value(game)
        assert evaluate(game, result.strategy) == result.value


def test_exact_value_witness_is_lex_smallest(chsh_game):
    result = exact_value(chsh_game)
    attaining = [
        s
        for s in all_strategies(chsh_game)
        if evaluate(chsh_game, s) == result.value
    ]
    assert result.strategy == min(attaining)


def test_budget_guard(chain3_game):
    assert strategy_space_size(chain3_game) == 64
    with pytest.raises(BudgetExceeded):
        exact_value(chain3_game, budget=63)
    rep = repeated_game(chain3_game, 3)
    with pytest.raises(BudgetExceeded):
        exact_value_repeated(rep)


def test_repeated_game_support(chsh_game, chain3_game):
    chsh_weights = repeated_game(chsh_game, 2).support_weights()
    assert len(chsh_weights) == 16
    assert set(chsh_weights.values()) == {Fraction(1, 16)}
    weights = repeated_game(chain3_game, 2).support_weights()
    assert len(weights) == 9
    assert all(w == Fraction(1, 9) for w in weights.values())


def test_repeated_n1_equals_base(chsh_game, chain3_game):
    for game in (chsh_game, chain3_game):
        base = exact_value(game)
        rep = exact_value_repeated(repeated_game(game, 1))
        assert rep.value == base.value
        assert rep.strategy == base.strategy


def test_repeated_n1_value_equivalent_under_every_strategy(chain3_game):
    rep = repeated_game(chain3_game, 1)
    for strategy in all_strategies(chain3_game):
        assert evaluate(rep, strategy) == evaluate(chain3_game, strategy)


def test_repeated_values_frozen(chsh_game, chain3_game):
    # 5/8 re-derived by the plain enumeration oracle in
    # test_chsh_repeated_matches_brute_force; 5/9 cross-checked below by a
    # second enumeration order.
    assert exact_value_repeated(repeated_game(chsh_game, 2)).value == Fraction(5, 8)
    assert exact_value_repeated(repeated_game(chain3_game, 2)).value == Fraction(5, 9)


def test_chain3_repeated_value_independent_order(chain3_game):
    rep = repeated_game(chain3_game, 2)
    values = {
        exact_value_repeated(rep, _prefer_player=player).value
        for player in (0, 1, 2)
    }
    assert values == {Fraction(5, 9)}


def test_chsh_repeated_matches_brute_force(chsh_game):
    oracle_value, _ = brute_force_value(repeated_game(chsh_game, 2))
    assert oracle_value == Fraction(5, 8)


def test_tensoring_and_restriction_bounds(chsh_game, chain3_game, ghz_game):
    for game in (chsh_game, chain3_game, ghz_game):
        base = exact_value(game).value
        rep2 = exact_value_repeated(repeated_game(game, 2)).value
        assert base**2 <= rep2 <= base


def test_accept_all_repeated_value():
    game = single_tuple_game()
    for n in (1, 2, 3):
        assert exact_value_repeated(repeated_game(game, n)).value == 1


def test_lifted_strategy_value_is_power(chain3_game):
    best = exact_value(chain3_game)
    lifted = lift_strategy(best.strategy, chain3_game, 2)
    assert evaluate(repeated_game(chain3_game, 2), lifted) == best.value**2


def test_local_search_finds_chsh_optimum(chsh_game):
    for seed in (0, 1, 17):
        result = local_search_value(chsh_game, seed=seed, iterations=100)
        assert result.value == Fraction(3, 4)
        assert not result.exact


def test_local_search_accept_all():
    assert local_search_value(single_tuple_game(), seed=0).value == 1


def test_local_search_repeated_beats_power(chain3_game):
    rep = repeated_game(chain3_game, 3)
    result = local_search_value(rep, seed=11, iterations=50)
    assert result.value >= Fraction(2, 3) ** 3
    assert evaluate(rep, result.strategy) == result.value


def test_local_search_never_exceeds_exact(chain3_game, ghz_game):
    for game in (chain3_game, ghz_game):
        exact = exact_value(game).value
        for seed in range(3):
            assert local_search_value(game, seed=seed).value <= exact


def test_determinism(chain3_game):
    first = exact_value(chain3_game)
    second = exact_value(chain3_game)
    assert first == second
    search1 = local_search_value(repeated_game(chain3_game, 2), seed=5)
    search2 = local_search_value(repeated_game(chain3_game, 2), seed=5)
    assert search1 == search2


def test_repeated_game_requires_positive_n(chsh_game):
    with pytest.raises(ValueError):
        repeated_game(chsh_game, 0)


def test_game_needs_predicate_mix_summing_to_one(chsh_game):
    mix = {q: {0: Fraction(1, 2)} for q in chsh_game.mu}
    with pytest.raises(DistributionNotNormalized):
        validate_game(replace(chsh_game, mix=mix))


def test_accept_all_only_game_mixed_weights():
    game = validate_game(
        Game(
            question_alphabets=((0, 1), (0, 1)),
            answer_alphabets=((0, 1), (0, 1)),
            mu={(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)},
            predicates=(accept_all(), accept_all()),
            mix={
                (0, 0): {0: Fraction(1, 4), 1: Fraction(3, 4)},
                (1, 1): {0: Fraction(1)},
            },
        )
    )
    assert exact_value(game).value == 1
