from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3sextic.quadbody import (CosetConstraint, OneVarImage, QuadraticForm, QuadraticFormError,
                               format_form, interval_points, jpi, parse_form, project, search,
                               stationary_point)

from oracles import COSET_PATTERNS, brute_force, coset_reps, evaluate, random_definite_form


def grad(q: QuadraticForm, x, i) -> Fraction:
    return 2 * sum(q.quad[i][j] * x[j] for j in range(q.n)) + q.lin[i]


def test_search_matches_box_scan():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 3)
        g, lin, c = random_definite_form(rng, n)
        q = QuadraticForm(g, lin, c)
        for pattern in COSET_PATTERNS:
            reps = coset_reps(pattern, n)
            got = search(q, CosetConstraint(reps)).points
            assert got == brute_force(g, lin, c, reps)


def test_search_with_target():
    rng = random.Random(12)
    for _ in range(12):
        n = rng.randint(1, 3)
        g, lin, c = random_definite_form(rng, n, bound=6)
        q = QuadraticForm(g, lin, c)
        for target in (0, 2):
            got = search(q, target=target).points
            assert got == brute_force(g, lin, c, (0,) * n, target=target)


def test_elimination_order_does_not_change_points():
    rng = random.Random(13)
    for _ in range(15):
        g, lin, c = random_definite_form(rng, 3)
        q = QuadraticForm(g, lin, c - 20)
        base = search(q).points
        for order in ([2, 1, 0], [1, 2, 0]):
            assert search(q, order=order).points == base


def test_rejects_indefinite_and_bad_input():
    with pytest.raises(QuadraticFormError):
        QuadraticForm([[1, 2], [2, 1]])
    with pytest.raises(QuadraticFormError):
        QuadraticForm([[1, 0], [1, 1]])
    with pytest.raises(QuadraticFormError):
        CosetConstraint.parse("0,1/3")
    with pytest.raises(QuadraticFormError):
        search(QuadraticForm([[1]]), CosetConstraint.parse("0,0"))


def test_unit_disc_points():
    q = QuadraticForm([[1, 0], [0, 1]], [0, 0], -1)
    pts = search(q).points
    assert pts == [(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]
    assert search(q, CosetConstraint.parse("1/2,1/2")).points == [
        (Fraction(-1, 2), Fraction(-1, 2)), (Fraction(-1, 2), Fraction(1, 2)),
        (Fraction(1, 2), Fraction(-1, 2)), (Fraction(1, 2), Fraction(1, 2))]


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_projection_is_consistent(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    g, lin, c = random_definite_form(rng, n)
    q = QuadraticForm(g, lin, c)
    s = sorted(rng.sample(range(n), rng.randint(1, n)))
    t = sorted(rng.sample(s, rng.randint(1, len(s))))
    # projecting in two steps equals projecting at once
    ps = project(q, s)
    local = [s.index(i) for i in t]
    assert project(ps, local) == project(q, t)
    # idempotence
    assert project(ps, range(len(s))) == ps
    assert project(q, range(n)) == q
    # the projected form is the minimum over the dropped coordinates
    x_s = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in s]
    rest = stationary_point(q, s, x_s)
    full = [None] * n
    for i, v in zip(s, x_s):
        full[i] = v
    for i, v in rest.items():
        full[i] = v
    assert q(full) == ps(x_s)
    # stationarity of the eliminated variables
    for i in rest:
        assert grad(q, full, i) == 0
    # and it really is a minimum: perturbing a dropped coordinate never lowers Q
    for i in rest:
        for eps in (Fraction(1, 7), Fraction(-1, 3)):
            moved = list(full)
            moved[i] += eps
            assert q(moved) > q(full)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_jpi_contains_every_body_point(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    g, lin, c = random_definite_form(rng, n, bound=6)
    c -= 5
    q = QuadraticForm(g, lin, c)
    pts = brute_force(g, lin, c, (0,) * n)
    for nu in range(n):
        img = jpi(q, nu)
        for x in pts:
            assert img.contains(x[nu])
        # the projected minimum sits at the interval center
        assert img.value(img.center) == q.minimum
        assert {x[nu] for x in pts} <= set(interval_points(img))


def test_jpi_with_pinned_variables():
    q = QuadraticForm([[2, 1, 0], [1, 2, 1], [0, 1, 2]], [0, 0, 0], -4)
    img = jpi(q, 2, {0: 1})
    sub, keep = q.substitute({0: 1})
    assert keep == [1, 2]
    assert img == jpi(sub, 1)
    with pytest.raises(QuadraticFormError):
        jpi(q, 0, {0: 1})


def test_interval_points_exact_endpoints():
    # t^2 - 4 <= 0 has endpoints exactly at +-2
    img = OneVarImage(1, 0, -4)
    assert img.center == 0 and img.half_width_sq == 4
    assert interval_points(img) == [-2, -1, 0, 1, 2]
    assert interval_points(img, Fraction(1, 2)) == [Fraction(k, 2) for k in (-3, -1, 1, 3)]
    empty = OneVarImage(1, 0, 1)
    assert empty.is_empty and interval_points(empty) == []
    with pytest.raises(QuadraticFormError):
        OneVarImage(0, 1, 1)


def test_minimum_matches_box_scan_lower_bound():
    rng = random.Random(5)
    for _ in range(20):
        g, lin, c = random_definite_form(rng, 3)
        q = QuadraticForm(g, lin, c)
        for x in brute_force(g, lin, c + 30, (0, 0, 0)):
            assert evaluate(g, lin, c, x) >= q.minimum


def test_form_text_round_trip():
    q = QuadraticForm([[2, Fraction(1, 2)], [Fraction(1, 2), 3]], [1, Fraction(-1, 3)], -5)
    assert parse_form(format_form(q)) == q
    assert parse_form("# header\n1\n1/2\n0\n-2\n") == QuadraticForm([[Fraction(1, 2)]], [0], -2)
    with pytest.raises(QuadraticFormError):
        parse_form("2\n1 0\n0 1\n0 0\n")
