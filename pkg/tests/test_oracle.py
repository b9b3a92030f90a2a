import itertools

import pytest

from overflow_repair import M4, M32, CapExceeded, Interval
from overflow_repair.linear import preprocess
from overflow_repair.oracle import (
    all_safe_paths,
    brute_force_paths,
    brute_force_permutations,
    exhaustive_concrete_check,
)
from overflow_repair.parse import parse_bool, parse_grouped, parse_linear
from worked import MOVES, MOVES_ENV, MOVES_PUBLISHED, SEVEN, SEVEN_ENV, SEVEN_PUBLISHED, XYZ, XYZ_ENV


def prefixes_ok(bounds, m):
    lo = hi = 0
    for b in bounds:
        lo, hi = lo + b.lo, hi + b.hi
        if not (m.min <= lo and hi <= m.max):
            return False
    return True


def test_seven_term_sum_has_a_safe_order():
    units = preprocess(SEVEN, SEVEN_ENV)
    verdict = brute_force_permutations(units, M4)
    assert verdict.safe_order_exists
    assert prefixes_ok([units[i].bound for i in verdict.witness], M4)
    published = [2, 6, 3, 4, 1, 5, 0]
    assert prefixes_ok([units[i].bound for i in published], M4)


def test_witness_is_the_first_in_lexicographic_order():
    units = preprocess(SEVEN, SEVEN_ENV)
    bounds = [u.bound for u in units]
    first = next(p for p in itertools.permutations(range(7)) if prefixes_ok([bounds[i] for i in p], M4))
    assert brute_force_permutations(units, M4).witness == first


def test_permutation_cap():
    with pytest.raises(CapExceeded):
        brute_force_permutations([Interval(0, 0)] * 9, M4)


def test_negation_of_minimum_has_no_order():
    assert not brute_force_permutations([Interval(1, 2**31)], M32).safe_order_exists


def test_safe_paths_of_three_variable_sum():
    units = preprocess(XYZ, XYZ_ENV)
    x, y, z = (u.index for u in units)
    paths = set(all_safe_paths(units, XYZ_ENV, M4))
    assert any(p[0] == (x,) and len(p) == 2 and set(p[1]) == {y, z} for p in paths)
    assert any(len(p) == 2 and set(p[0]) == {x, y} and p[1] == (z,) for p in paths)
    # y first and then the x+z fact reaches [-2, 8]
    assert not any(p[0] == (y,) and len(p) == 2 and set(p[1]) == {x, z} for p in paths)
    assert brute_force_paths(units, XYZ_ENV, M4).safe_order_exists


def test_no_paths_without_pair_facts():
    env = XYZ_ENV.without_relations()
    assert not brute_force_paths(preprocess(XYZ, env), env, M4).safe_order_exists


def test_path_cap():
    units = preprocess(parse_linear("x + y + z + x + y + z"), XYZ_ENV)
    with pytest.raises(CapExceeded):
        brute_force_paths(units, XYZ_ENV, M4)


def test_concrete_check_accepts_good_repairs():
    assert exhaustive_concrete_check(SEVEN, SEVEN_PUBLISHED, SEVEN_ENV, M4).safe_order_exists
    assert exhaustive_concrete_check(XYZ, parse_grouped("x + (y + z)"), XYZ_ENV, M4).safe_order_exists
    assert exhaustive_concrete_check(MOVES, MOVES_PUBLISHED, MOVES_ENV, M4).safe_order_exists


def test_concrete_check_finds_overflow():
    verdict = exhaustive_concrete_check(SEVEN, SEVEN, SEVEN_ENV, M4)
    assert not verdict.safe_order_exists
    assert verdict.counterexample is not None


def test_abstract_guard_is_conservative():
    # the interval guard rejects y + (x + z), yet the pair facts rule out
    # every state on which it would actually overflow
    assert exhaustive_concrete_check(XYZ, parse_grouped("y + (x + z)"), XYZ_ENV, M4).safe_order_exists


def test_concrete_check_finds_wrong_values_and_truths():
    wrong = parse_linear("x3 + x7 + x4 + x5 + x2 + x6")
    assert not exhaustive_concrete_check(SEVEN, wrong, SEVEN_ENV, M4).safe_order_exists
    flipped = parse_bool("x1 - x5 >= x3 + x4 - x2")
    assert not exhaustive_concrete_check(MOVES, flipped, MOVES_ENV, M4).safe_order_exists


def test_concrete_state_cap():
    with pytest.raises(CapExceeded):
        exhaustive_concrete_check(SEVEN, SEVEN_PUBLISHED, SEVEN_ENV, M4, cap=100)
