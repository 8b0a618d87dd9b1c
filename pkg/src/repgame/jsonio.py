"""Game file parsing and canonical serialization.

Probabilities travel as {"num": N, "den": D} integer pairs; floats are
rejected outright so files stay bit-exact. Serialization sorts every table,
making canonical files diff-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .core import ACCEPT_ALL, BASE, Game, PredicateAtom, validate_game
from .errors import ParseError


def _reject_float(text: str) -> None:
    raise ParseError(f"float literal {text!r}: weights must be num/den integer pairs")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def _as_int(value: Any, where: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool),
             f"{where}: expected an integer, got {value!r}")
    return value


def _as_list(value: Any, where: str) -> list:
    _require(isinstance(value, list), f"{where}: expected a list")
    return value


def _as_dict(value: Any, where: str) -> dict:
    _require(isinstance(value, dict), f"{where}: expected an object")
    return value


def _fraction(entry: dict, where: str) -> Fraction:
    num = _as_int(entry.get("num"), f"{where}.num")
    den = _as_int(entry.get("den"), f"{where}.den")
    _require(den > 0, f"{where}: denominator must be positive, got {den}")
    return Fraction(num, den)


def _index_tuple(value: Any, where: str) -> tuple[int, ...]:
    return tuple(_as_int(x, where) for x in _as_list(value, where))


def parse_game(text: str | bytes) -> Game:
    """Parse and validate a game file; floats are a parse error."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON: {err}") from err
    doc = _as_dict(doc, "top level")

    players = _as_int(doc.get("players"), "players")
    questions = _as_list(doc.get("questions"), "questions")
    answers = _as_list(doc.get("answers"), "answers")
    _require(len(questions) == players,
             f"questions: {len(questions)} alphabets for {players} players")
    _require(len(answers) == players,
             f"answers: {len(answers)} alphabets for {players} players")
    for where, alphabets in (("questions", questions), ("answers", answers)):
        for i, alphabet in enumerate(alphabets):
            for label in _as_list(alphabet, f"{where}[{i}]"):
                _require(
                    isinstance(label, (int, str)) and not isinstance(label, bool),
                    f"{where}[{i}]: label {label!r} must be an integer or string",
                )

    mu: dict[tuple[int, ...], Fraction] = {}
    for row_number, entry in enumerate(_as_list(doc.get("mu"), "mu")):
        where = f"mu[{row_number}]"
        entry = _as_dict(entry, where)
        q = _index_tuple(entry.get("q"), f"{where}.q")
        _require(q not in mu, f"{where}: duplicate question tuple {q}")
        mu[q] = _fraction(entry, where)

    predicates = []
    for p_number, entry in enumerate(_as_list(doc.get("predicates"), "predicates")):
        where = f"predicates[{p_number}]"
        entry = _as_dict(entry, where)
        kind = entry.get("kind")
        if kind == ACCEPT_ALL:
            predicates.append(PredicateAtom(kind=ACCEPT_ALL))
        elif kind == BASE:
            pairs = []
            for pair_number, pair in enumerate(
                _as_list(entry.get("accepts"), f"{where}.accepts")
            ):
                pair_where = f"{where}.accepts[{pair_number}]"
                pair = _as_dict(pair, pair_where)
                pairs.append(
                    (
                        _index_tuple(pair.get("q"), f"{pair_where}.q"),
                        _index_tuple(pair.get("a"), f"{pair_where}.a"),
                    )
                )
            predicates.append(PredicateAtom(kind=BASE, accepts=frozenset(pairs)))
        else:
            raise ParseError(f"{where}: unknown predicate kind {kind!r}")

    if "mix" in doc:
        mix: dict[tuple[int, ...], dict[int, Fraction]] = {}
        for row_number, entry in enumerate(_as_list(doc.get("mix"), "mix")):
            where = f"mix[{row_number}]"
            entry = _as_dict(entry, where)
            q = _index_tuple(entry.get("q"), f"{where}.q")
            _require(q not in mix, f"{where}: duplicate question tuple {q}")
            row: dict[int, Fraction] = {}
            for w_number, weight in enumerate(
                _as_list(entry.get("weights"), f"{where}.weights")
            ):
                w_where = f"{where}.weights[{w_number}]"
                weight = _as_dict(weight, w_where)
                index = _as_int(weight.get("p"), f"{w_where}.p")
                _require(index not in row, f"{w_where}: duplicate predicate {index}")
                row[index] = _fraction(weight, w_where)
            mix[q] = row
    else:
        _require(
            len(predicates) > 0,
            "mix omitted but there is no predicate 0 to default to",
        )
        mix = {q: {0: Fraction(1)} for q in mu}

    game = Game(
        question_alphabets=tuple(tuple(a) for a in questions),
        answer_alphabets=tuple(tuple(a) for a in answers),
        mu=mu,
        predicates=tuple(predicates),
        mix=mix,
    )
    return validate_game(game)


def game_to_dict(game: Game) -> dict:
    """The canonical JSON-ready form: sorted tables, reduced fractions."""
    return {
        "players": game.k,
        "questions": [list(a) for a in game.question_alphabets],
        "answers": [list(a) for a in game.answer_alphabets],
        "mu": [
            {"q": list(q), "num": w.numerator, "den": w.denominator}
            for q, w in sorted(game.mu.items())
        ],
        "predicates": [
            {"kind": ACCEPT_ALL}
            if atom.kind == ACCEPT_ALL
            else {
                "kind": BASE,
                "accepts": [
                    {"q": list(q), "a": list(a)} for q, a in sorted(atom.accepts)
                ],
            }
            for atom in game.predicates
        ],
        "mix": [
            {
                "q": list(q),
                "weights": [
                    {"p": index, "num": w.numerator, "den": w.denominator}
                    for index, w in sorted(row.items())
                ],
            }
            for q, row in sorted(game.mix.items())
        ],
    }


def serialize_game(game: Game) -> str:
    """Canonical text form; slot tables are in-memory only and not emitted."""
    return json.dumps(game_to_dict(game), indent=2, sort_keys=True) + "\n"
