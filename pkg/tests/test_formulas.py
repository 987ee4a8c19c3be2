"""Concrete syntax: precedence, associativity, errors, printing, metrics."""

import random

import pytest

from qtlab.formulas import (
    And,
    ArityError,
    Atom,
    Count,
    DiamondFuture,
    DiamondPast,
    FalseConst,
    FormulaSyntaxError,
    Implies,
    LexicalError,
    Not,
    Or,
    ParseError,
    Pnueli,
    Since,
    TrueConst,
    Until,
    format_formula,
    metrics,
    parse_formula,
)
from gen import random_formula

P, Q, R = Atom("P"), Atom("Q"), Atom("R")


# -------------------------------------------------------------------- parsing

def test_precedence_ladder():
    f = parse_formula("!P & Q -> R | Q2")
    assert f == Implies(And(Not(P), Q), Or(R, Atom("Q2")))


def test_temporal_binds_tighter_than_and():
    assert parse_formula("P & Q U R") == And(P, Until(Q, R))
    assert parse_formula("P U Q & R") == And(Until(P, Q), R)


def test_until_since_right_associative_same_level():
    assert parse_formula("P U Q S R") == Until(P, Since(Q, R))
    assert parse_formula("P S Q U R") == Since(P, Until(Q, R))


def test_implies_right_associative():
    assert parse_formula("P -> Q -> R") == Implies(P, Implies(Q, R))


def test_unary_operators_stack():
    assert parse_formula("!F1 O1 P") == Not(DiamondFuture(DiamondPast(P)))


def test_calls():
    assert parse_formula("C2(P)") == Count(2, P)
    assert parse_formula("C12(P U Q)") == Count(12, Until(P, Q))
    assert parse_formula("Pn3(P, Q, R)") == Pnueli((P, Q, R))
    assert parse_formula("Pn1(true)") == Pnueli((TrueConst(),))


def test_constants_and_identifiers():
    assert parse_formula("true | false") == Or(TrueConst(), FalseConst())
    assert parse_formula("F1x") == Atom("F1x")  # not the F1 keyword
    assert parse_formula("C2x") == Atom("C2x")


def test_reserved_call_shapes_are_not_atoms():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("Pn2")
    assert exc.value.expected == frozenset({"("})


def test_syntax_errors_carry_position_and_expected():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("P U")
    assert exc.value.position == 3
    assert "atom" in exc.value.expected and "(" in exc.value.expected

    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("(P")
    assert exc.value.position == 2
    assert exc.value.expected == frozenset({")"})

    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("P Q")
    assert exc.value.position == 2


def test_lexical_error_position():
    with pytest.raises(LexicalError) as exc:
        parse_formula("P @ Q")
    assert exc.value.position == 2


def test_arity_errors():
    with pytest.raises(ArityError):
        parse_formula("C0(P)")
    with pytest.raises(ArityError):
        parse_formula("Pn0(P)")
    with pytest.raises(ArityError):
        parse_formula("Pn2(P)")
    with pytest.raises(ArityError):
        parse_formula("Pn2(P, Q, R)")
    with pytest.raises(ArityError):
        Count(0, P)


def test_all_parse_errors_are_parse_errors():
    for bad in ["", ")", "P |", "C2(P", "P & & Q", "Pn2(P,)"]:
        with pytest.raises(ParseError):
            parse_formula(bad)


# ------------------------------------------------------------------- printing

def test_print_minimal_parens():
    cases = [
        (Not(Until(P, Q)), "!(P U Q)"),
        (DiamondFuture(Not(P)), "F1 !P"),
        (Not(DiamondFuture(P)), "!F1 P"),
        (Until(Until(P, Q), R), "(P U Q) U R"),
        (Until(P, Until(Q, R)), "P U Q U R"),
        (And(P, Until(Q, R)), "P & Q U R"),
        (Or(And(P, Q), R), "P & Q | R"),
        (And(P, Or(Q, R)), "P & (Q | R)"),
        (Or(P, Or(Q, R)), "P | (Q | R)"),
        (Implies(Implies(P, Q), R), "(P -> Q) -> R"),
        (Implies(P, Implies(Q, R)), "P -> Q -> R"),
        (Count(2, Until(P, Q)), "C2(P U Q)"),
        (Pnueli((P, Not(Q))), "Pn2(P,!Q)"),
        (Until(DiamondFuture(P), Q), "F1 P U Q"),
    ]
    for ast, text in cases:
        assert format_formula(ast) == text
        assert parse_formula(text) == ast


def test_print_parse_roundtrip_fuzz():
    rng = random.Random(2024)
    for _ in range(300):
        f = random_formula(rng, modal_budget=3, atoms=("P", "Q", "R"), size=10)
        assert parse_formula(format_formula(f)) == f


# -------------------------------------------------------------------- metrics

def test_metrics_examples():
    depth, atoms = metrics(parse_formula("F1 (P U Q)"))
    assert depth == 2 and atoms == frozenset({"P", "Q"})
    assert metrics(parse_formula("true"))[0] == 0
    assert metrics(parse_formula("!P & Q"))[0] == 0
    assert metrics(parse_formula("Pn3(P, F1 Q, R)")) == (2, frozenset({"P", "Q", "R"}))
    assert metrics(parse_formula("C4(P)"))[0] == 1
