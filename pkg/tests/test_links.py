"""Link distributions, splices, and consistency probabilities."""

from fractions import Fraction

import pytest

from repgame import (
    BudgetExceeded,
    PivotMismatch,
    PlayerOutOfRange,
    accept_all,
    all_strategies,
    consistency_probability,
    evaluate,
    is_link_consistent,
    link_distribution,
    product_link_distribution,
    repeated_game,
    single_tuple_game,
    splice,
)
from oracles import consistency_by_slots, link_atoms_formula, repeated_link_atoms_formula

ZERO3 = ((0, 0), (0, 0), (0, 0))
ZERO2 = ((0, 0), (0, 0))


def test_link_atoms_single_tuple():
    game = single_tuple_game()
    for i in (1, 2):
        links = link_distribution(game, i)
        assert links.atoms == {(((0, 0)), ((0, 0))): Fraction(1)}


def test_link_atoms_chain3(chain3_game):
    links = link_distribution(chain3_game, 1)
    sixth = Fraction(1, 6)
    assert links.atoms == {
        ((0, 0, 0), (0, 0, 0)): sixth,
        ((0, 0, 0), (0, 1, 1)): sixth,
        ((0, 1, 1), (0, 0, 0)): sixth,
        ((0, 1, 1), (0, 1, 1)): sixth,
        ((1, 1, 0), (1, 1, 0)): Fraction(1, 3),
    }
    assert links.diagonal_mass() == Fraction(2, 3)


def test_link_atoms_chsh(chsh_game):
    links = link_distribution(chsh_game, 1)
    assert len(links.atoms) == 8
    assert set(links.atoms.values()) == {Fraction(1, 8)}


def test_link_atoms_match_formula(chsh_game, chain3_game, ghz_game):
    for game in (chsh_game, chain3_game, ghz_game):
        for i in range(1, game.k + 1):
            assert link_distribution(game, i).atoms == link_atoms_formula(game, i)


def test_link_weights_sum_to_one_with_positive_diagonal(chain3_game, ghz_game):
    for game in (chain3_game, ghz_game):
        for i in range(1, game.k + 1):
            links = link_distribution(game, i)
            assert sum(links.atoms.values()) == 1
            for q in game.mu:
                assert links.atoms[(q, q)] > 0


def test_player_out_of_range(chain3_game):
    with pytest.raises(PlayerOutOfRange):
        link_distribution(chain3_game, 4)


def test_product_link_identity(chsh_game, chain3_game):
    for game in (chsh_game, chain3_game):
        for i in range(1, game.k + 1):
            for n in (1, 2):
                product = product_link_distribution(game, i, n)
                repeated = link_distribution(repeated_game(game, n), i)
                assert product.atoms == repeated.atoms


def test_product_link_matches_direct_formula(chain3_game):
    product = product_link_distribution(chain3_game, 1, 2)
    assert len(product.atoms) == 25
    assert product.atoms == repeated_link_atoms_formula(chain3_game, 1, 2)


def test_product_link_n1_is_base(chain3_game):
    base = link_distribution(chain3_game, 1)
    product = product_link_distribution(chain3_game, 1, 1)
    rebuilt = {
        (first, second): weight
        for ((first, second)), weight in product.atoms.items()
    }
    # n=1 vector tuples wrap each label in a singleton tuple.
    unwrapped = {
        (
            tuple(x[0] for x in first),
            tuple(y[0] for y in second),
        ): weight
        for (first, second), weight in rebuilt.items()
    }
    assert unwrapped == base.atoms


def test_product_link_budget(chain3_game):
    with pytest.raises(BudgetExceeded):
        product_link_distribution(chain3_game, 1, 9, atom_budget=10)


def test_single_tuple_product_links():
    game = single_tuple_game()
    product = product_link_distribution(game, 1, 3)
    assert list(product.atoms.values()) == [Fraction(1)]


def test_splice():
    assert splice(((0, 0, 0), (0, 1, 1)), 2) == (0, 0, 1)
    assert splice(((1, 1, 0), (0, 1, 1)), 1) == (1, 1, 1)
    q = (1, 0, 1)
    for p in (1, 2, 3):
        assert splice((q, q), p) == q
    with pytest.raises(PlayerOutOfRange):
        splice(((0, 0), (0, 0)), 3)


def test_is_link_consistent(chain3_game):
    equal_atom = chain3_game.predicates[0]
    link = ((0, 0, 0), (0, 1, 1))
    zeros = ((0, 0, 0), (0, 0, 0))
    assert is_link_consistent(link, equal_atom, zeros, 1)
    mixed = ((0, 0, 0), (1, 1, 1))
    assert not is_link_consistent(link, equal_atom, mixed, 1)
    assert is_link_consistent(link, accept_all(), zeros, 1)
    with pytest.raises(PivotMismatch):
        is_link_consistent(((0, 0, 0), (1, 1, 0)), equal_atom, zeros, 1)


def test_diagonal_link_consistency_matches_acceptance(chain3_game):
    # On a diagonal link, consistency is exactly double acceptance of the
    # same tuple, so any accepted assignment repeated is consistent.
    atom = chain3_game.predicates[0]
    q = (0, 0, 0)
    assignment = ((0, 0, 0), (0, 0, 0))
    assert is_link_consistent((q, q), atom, assignment, 2)


def test_consistency_probability_frozen(chsh_game, chain3_game):
    assert consistency_probability(chain3_game, 1, ZERO3) == Fraction(2, 3)
    assert consistency_probability(chsh_game, 1, ZERO2) == Fraction(5, 8)


def test_consistency_accept_all_game():
    game = single_tuple_game()
    for strategy in all_strategies(game):
        for i in (1, 2):
            assert consistency_probability(game, i, strategy) == 1


def test_consistency_matches_slot_oracle(chsh_game, chain3_game):
    for game in (chsh_game, chain3_game):
        for i in range(1, game.k + 1):
            for strategy in all_strategies(game):
                assert consistency_probability(
                    game, i, strategy
                ) == consistency_by_slots(game, i, strategy)


def test_consistency_floor_exhaustive(chsh_game, chain3_game, ghz_game):
    for game in (chsh_game, chain3_game, ghz_game):
        for i in range(1, game.k + 1):
            for strategy in all_strategies(game):
                value = evaluate(game, strategy)
                assert consistency_probability(game, i, strategy) >= value**2
