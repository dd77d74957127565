import io
import itertools
import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posat.dimacs import (
    MAX_LINE,
    DimacsError,
    RawFormula,
    Verdict,
    format_cnf,
    parse_cnf,
    verify_model,
    write_result,
)
from posat.errors import ContractError
from posat.generators import random_ksat

from oracles import count_models_mask, falsifying_assignments


def test_parse_basic():
    f = parse_cnf("p cnf 2 2\n1 -2 0\n2 0\n")
    assert f.num_vars == 2
    assert f.clauses == [[1, -2], [2]]


def test_parse_empty_clause():
    f = parse_cnf("p cnf 1 1\n0\n")
    assert f.clauses == [[]]


def test_literal_out_of_range_names_line():
    with pytest.raises(DimacsError, match="exceeds declared 2") as info:
        parse_cnf("p cnf 2 1\n3 0\n")
    assert info.value.line == 2


@pytest.mark.parametrize(
    "text, line",
    [
        ("p cnf x 1\n1 0\n", 1),
        ("p dnf 1 1\n1 0\n", 1),
        ("p cnf 1\n1 0\n", 1),
        ("p cnf 2 1\n1 a 0\n", 2),
        ("p cnf 2 1\n1 2\n", 2),
        ("c only a comment\n1 0\n", 2),
        ("p cnf 1 1\np cnf 1 1\n1 0\n", 2),
        ("c nothing\n", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(DimacsError) as info:
        parse_cnf(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_comments_multiline_clauses_and_percent():
    text = "c hi\np cnf 3 2\n1 2\n 3 0 -1\n0\n%\n0\n"
    assert parse_cnf(text).clauses == [[1, 2, 3], [-1]]


def test_clause_count_mismatch_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="posat.dimacs"):
        f = parse_cnf("p cnf 2 3\n1 0\n2 0\n")
    assert len(f.clauses) == 2
    assert "declares 3" in caplog.text


def test_sources_bytes_and_files():
    text = "p cnf 2 1\n1 2 0\n"
    expected = parse_cnf(text)
    assert parse_cnf(text.encode()) == expected
    assert parse_cnf(io.BytesIO(text.encode())) == expected
    assert parse_cnf(io.StringIO(text)) == expected


def test_raw_formula_validates_range():
    with pytest.raises(ContractError):
        RawFormula(2, [[1, 3]])


formulas = st.integers(1, 8).flatmap(
    lambda n: st.builds(
        RawFormula,
        st.just(n),
        st.lists(
            st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])), max_size=5),
            max_size=12,
        ),
    )
)


@given(formulas)
def test_round_trip(f):
    assert parse_cnf(format_cnf(f, comments=["generated"])) == f


@settings(max_examples=200)
@given(st.binary(max_size=200))
def test_garbage_never_crashes_differently(data):
    # either a formula or a DimacsError, never anything else
    try:
        f = parse_cnf(b"p cnf 3 2\n" + data)
    except DimacsError:
        return
    assert isinstance(f, RawFormula)


def test_verify_model_examples():
    assert verify_model(RawFormula(1, [[1]]), [True])
    contradiction = RawFormula(1, [[1], [-1]])
    assert not verify_model(contradiction, [True])
    assert not verify_model(contradiction, [False])
    assert verify_model(RawFormula(2, [[1, -2]]), {1: False, 2: False})


def test_verify_model_missing_variable():
    with pytest.raises(ContractError):
        verify_model(RawFormula(2, [[1]]), [True])
    with pytest.raises(ContractError):
        verify_model(RawFormula(2, [[1]]), {1: True})


@settings(max_examples=60)
@given(formulas.filter(lambda f: f.num_vars <= 4))
def test_verify_model_against_falsifying_set(f):
    bad = falsifying_assignments(f.num_vars, f.clauses)
    for model in itertools.product([False, True], repeat=f.num_vars):
        assert verify_model(f, list(model)) == (model not in bad)


def _first_model(num_vars, clauses):
    for w, word in enumerate(count_models_mask(num_vars, clauses).tolist()):
        if word:
            x = w * 64 + (word & -word).bit_length() - 1
            return [bool(x >> (v - 1) & 1) for v in range(1, num_vars + 1)]
    return None


def test_verify_model_on_enumerated_models():
    rng = random.Random(11)
    checked = 0
    while checked < 20:
        f = random_ksat(10, 40, rng=rng)
        model = _first_model(10, f.clauses)
        if model is None:
            continue
        assert verify_model(f, model)
        checked += 1


def test_write_result_examples():
    assert write_result(Verdict.sat([True, False])) == "s SATISFIABLE\nv 1 -2 0\n"
    assert write_result(Verdict.unsat()) == "s UNSATISFIABLE\n"
    assert write_result(Verdict.unknown("budget-exhausted")) == "s UNKNOWN\n"


def test_write_result_splits_long_value_lines():
    model = [i % 3 == 0 for i in range(5000)]
    text = write_result(Verdict.sat(model))
    lines = text.splitlines()
    assert lines[0] == "s SATISFIABLE"
    assert all(len(line) <= MAX_LINE and line.startswith("v ") for line in lines[1:])
    values = [int(t) for line in lines[1:] for t in line.split()[1:]]
    assert values[-1] == 0
    assert values[:-1] == Verdict.sat(model).model_literals()


def test_exit_codes():
    assert Verdict.sat([]).exit_code == 10
    assert Verdict.unsat().exit_code == 20
    assert Verdict.unknown().exit_code == 0
