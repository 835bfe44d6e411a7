"""Tests for the lift construction against a definition-level oracle."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sre_workbench.families import arbdef_family, matching_family
from sre_workbench.lifting import (
    LiftedProblem, format_lifted, lift, lift_black_holds, lift_white_holds,
)
from sre_workbench.problems import (
    BLACK, compute_diagram, config_of, make_problem, parse_problem,
    right_closed_sets, set_label_name,
)


def brute_black(base, config_members, rank):
    r = base.black_arity
    for idx in itertools.combinations(range(rank), r):
        for choice in itertools.product(*(config_members[i] for i in idx)):
            if config_of(choice) not in base.black:
                return False
    return True


def brute_white(base, config_members, delta):
    d = base.white_arity
    for idx in itertools.combinations(range(delta), d):
        if not any(config_of(choice) in base.white
                   for choice in itertools.product(*(config_members[i]
                                                     for i in idx))):
            return False
    return True


def test_alphabet_is_right_closed_sets():
    base = matching_family(2, 0, 1)
    lp = lift(base, 4, 4)
    want = {set_label_name(sorted(s))
            for s in right_closed_sets(compute_diagram(base, BLACK))}
    assert set(lp.alphabet) == want


def test_right_closed_sets_of_matching_base():
    # O and X are interchangeable in the black constraint of the matching
    # family (the condensed lines overlap), so every right-closed set
    # containing one contains the other; exactly 5 sets remain
    base = matching_family(2, 0, 1)
    lp = lift(base, 8, 2)
    assert len(lp.alphabet) == 5
    members = {frozenset(v) for v in lp.members.values()}
    assert members == {
        frozenset("OX"), frozenset("OPX"), frozenset("MOX"),
        frozenset("MOPX"), frozenset("MOPXZ"),
    }


def test_precondition_violations():
    base = matching_family(2, 0, 1)
    with pytest.raises(ValueError):
        lift(base, 1, 2)
    with pytest.raises(ValueError):
        lift(base, 2, 1)
    lp = lift(base, 3, 2)
    with pytest.raises(ValueError):
        lift_black_holds(lp, [lp.alphabet[0]] * 3)
    with pytest.raises(ValueError):
        lift_white_holds(lp, [lp.alphabet[0]] * 2)
    with pytest.raises(ValueError):
        lift_black_holds(lp, ["(Q)", "(Q)"])


def test_white_trivially_true_when_base_white_full():
    labs = ["A", "B"]
    base = make_problem(
        [c for c in itertools.combinations_with_replacement(labs, 2)],
        [("A", "A"), ("A", "B")])
    lp = lift(base, 3, 3)
    for cfg in itertools.combinations_with_replacement(lp.alphabet, 3):
        assert lift_white_holds(lp, cfg)


def test_black_pair_witness_false():
    # two singleton sets with a base-forbidden pair
    base = arbdef_family(3, 2)
    lp = lift(base, 3, 2)
    l1 = set_label_name(["L1"])
    l12 = set_label_name(["L12"])
    if l1 in lp.members and l12 in lp.members:
        assert not lift_black_holds(lp, [l1, l12])


def test_arbdef_all_X_black_ok():
    base = arbdef_family(3, 2)
    lp = lift(base, 3, 2)
    x = set_label_name(["X"])
    assert x in lp.members
    assert lift_black_holds(lp, [x, x])


labels = st.sampled_from(["A", "B"])


@st.composite
def small_bases(draw):
    wc = draw(st.sets(st.tuples(labels, labels).map(config_of), min_size=1,
                      max_size=3))
    bc = draw(st.sets(st.tuples(labels, labels).map(config_of), min_size=1,
                      max_size=3))
    return make_problem(wc, bc, alphabet={"A", "B"})


@given(small_bases())
@settings(max_examples=60, deadline=None)
def test_predicates_match_brute_force(base):
    lp = lift(base, 3, 3)
    for cfg in itertools.combinations_with_replacement(lp.alphabet, 3):
        mem = [lp.members[l] for l in cfg]
        assert lift_black_holds(lp, cfg) == brute_black(base, mem, 3)
        assert lift_white_holds(lp, cfg) == brute_white(base, mem, 3)


@given(small_bases())
@settings(max_examples=40, deadline=None)
def test_black_monotone_under_member_removal(base):
    lp = lift(base, 3, 3)
    by_members = {frozenset(v): k for k, v in lp.members.items()}
    for cfg in itertools.combinations_with_replacement(lp.alphabet, 3):
        if not lift_black_holds(lp, cfg):
            continue
        for i, lab in enumerate(cfg):
            for drop in lp.members[lab]:
                smaller = frozenset(lp.members[lab]) - {drop}
                # only right-closed shrinkages stay inside the alphabet
                if smaller in by_members:
                    cfg2 = list(cfg)
                    cfg2[i] = by_members[smaller]
                    assert lift_black_holds(lp, cfg2)


@given(small_bases())
@settings(max_examples=40, deadline=None)
def test_white_monotone_under_member_addition(base):
    lp = lift(base, 3, 3)
    by_members = {frozenset(v): k for k, v in lp.members.items()}
    for cfg in itertools.combinations_with_replacement(lp.alphabet, 3):
        if not lift_white_holds(lp, cfg):
            continue
        for i, lab in enumerate(cfg):
            for add in base.alphabet:
                larger = frozenset(lp.members[lab]) | {add}
                if larger in by_members:
                    cfg2 = list(cfg)
                    cfg2[i] = by_members[larger]
                    assert lift_white_holds(lp, cfg2)


@given(small_bases())
@settings(max_examples=30, deadline=None)
def test_materialized_agrees_with_predicates(base):
    lp = lift(base, 4, 3)
    white, black = lp.materialize()
    for cfg in itertools.combinations_with_replacement(lp.alphabet, 4):
        assert (config_of(cfg) in white) == lift_white_holds(lp, cfg)
    for cfg in itertools.combinations_with_replacement(lp.alphabet, 3):
        assert (config_of(cfg) in black) == lift_black_holds(lp, cfg)


def test_format_lifted_round_trips_through_dsl():
    base = matching_family(2, 0, 1)
    lp = lift(base, 3, 2)
    text = format_lifted(lp)
    assert "# legend:" in text
    p = parse_problem(text)
    white, black = lp.materialize()
    assert p.white.configs == frozenset(white)
    assert p.black.configs == frozenset(black)
