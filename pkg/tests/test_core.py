import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gammaforms.core import (
    CmPoint,
    Form,
    GammaLevel,
    GroupElement,
    IDENTITY,
    S,
    T,
    act,
    cm_point,
    form_from_cm,
    ker_chi,
    kronecker,
    moebius,
    moebius_rational,
    representation_values,
    units_mod,
)
from gammaforms.errors import ValidationError
from conftest import random_form, random_gamma0, random_sl2

import random


words = st.lists(st.sampled_from("TtS"), min_size=0, max_size=8)
DISCS = [-3, -4, -7, -8, -11, -15, -20, -23, -24, -40]


def word_to_matrix(w):
    g = IDENTITY
    for ch in w:
        g = g * {"T": T, "t": T.inverse(), "S": S}[ch]
    return g


def test_group_element_validates_det():
    with pytest.raises(ValidationError):
        GroupElement(1, 0, 0, 2)
    assert (T * S).as_tuple() == (1, -1, 1, 0)
    assert S.inverse() * S == IDENTITY


def test_gamma_level():
    lvl = GammaLevel(2)
    assert lvl.contains(GroupElement(1, 0, 2, 1))
    assert not lvl.contains(S)
    with pytest.raises(ValidationError):
        GammaLevel(0)


def test_form_basics():
    q = Form(2, 2, 1)
    assert q.disc == -4
    assert q.is_qf()
    assert not Form(2, 0, 2).is_primitive()
    assert str(Form.from_string("2,-1,1")) == "2,-1,1"
    with pytest.raises(ValidationError):
        Form.qf(1, 0, -1)
    with pytest.raises(ValidationError):
        Form.from_string("1;0;1")


def test_act_examples():
    q = Form(1, 0, 1)
    assert act(q, IDENTITY) == q
    assert act(q, T) == Form(1, 2, 2)
    assert act(Form(2, 2, 1), GroupElement(1, 0, -1, 1)) == Form(1, 0, 1)


@given(words, words, st.sampled_from(DISCS))
@settings(max_examples=150, deadline=None)
def test_act_is_right_action_and_keeps_disc(w1, w2, d):
    rng = random.Random(1)
    q = random_form(rng, d)
    g, h = word_to_matrix(w1), word_to_matrix(w2)
    assert act(act(q, g), h) == act(q, g * h)
    out = act(q, g)
    assert out.disc == q.disc
    assert out.is_qf()


def test_cm_point_examples():
    assert cm_point(Form(1, 0, 1)) == CmPoint(0, 2, -4)
    t = cm_point(Form(2, 2, 1))
    assert (t.re, t.im_sq) == (Fraction(-1, 2), Fraction(1, 4))
    with pytest.raises(ValidationError):
        cm_point(Form(1, 4, 1))  # disc 12 > 0


def test_cm_point_equality_is_numeric():
    assert CmPoint(0, 2, -4) == CmPoint(0, 4, -16)
    assert CmPoint(0, 2, -4) != CmPoint(0, 2, -8)


def test_form_from_cm_round_trip():
    rng = random.Random(2)
    for d in DISCS:
        for _ in range(20):
            q = random_form(rng, d)
            assert form_from_cm(cm_point(q)) == q


def test_moebius_examples():
    i = CmPoint(0, 2, -4)
    assert moebius(IDENTITY, i) == i
    assert moebius(S, i) == i
    half = cm_point(Form(2, 2, 1))  # (-1 + i)/2
    assert moebius(T, half) == CmPoint(2, 4, -4)  # (1 + i)/2


def test_moebius_rational_cusps():
    assert moebius_rational(S, Fraction(0)) is None
    assert moebius_rational(S, None) == Fraction(0)
    assert moebius_rational(T, Fraction(1, 2)) == Fraction(3, 2)


@given(words, st.sampled_from(DISCS))
@settings(max_examples=150, deadline=None)
def test_equivariance(w, d):
    rng = random.Random(3)
    q = random_form(rng, d)
    g = word_to_matrix(w)
    assert cm_point(act(q, g)) == moebius(g.inverse(), cm_point(q))


def test_equivariance_bulk(rng):
    for _ in range(100):
        d = rng.choice(DISCS)
        q = random_form(rng, d)
        g = random_sl2(rng)
        assert cm_point(act(q, g)) == moebius(g.inverse(), cm_point(q))


# ---------------------------------------------------------------------------
# kronecker


def test_kronecker_reference_values():
    assert kronecker(-28, 9) == 1
    assert kronecker(-28, 3) == -1
    assert kronecker(-7, 1) == 1
    assert kronecker(-4, 5) == 1
    assert kronecker(5, 5) == 0


def test_kronecker_against_euler_criterion():
    primes = [p for p in range(3, 500) if all(p % q for q in range(2, p))]
    for d in DISCS + [-163, -67, 5, 8, 12]:
        for p in primes:
            if d % p == 0:
                continue
            euler = pow(d % p, (p - 1) // 2, p)
            expected = 1 if euler == 1 else -1
            assert kronecker(d, p) == expected, (d, p)


@given(st.integers(-300, 300), st.integers(-300, 300), st.sampled_from(DISCS))
@settings(max_examples=300, deadline=None)
def test_kronecker_multiplicative(m1, m2, d):
    assert kronecker(d, m1 * m2) == kronecker(d, m1) * kronecker(d, m2)


def test_chi_well_defined_on_units():
    for d in DISCS:
        for m in units_mod(d):
            assert kronecker(d, m) == kronecker(d, m + abs(d))
        assert 1 in ker_chi(d)


# ---------------------------------------------------------------------------
# representation values


def test_representation_values_reference():
    units = units_mod(-28)
    assert representation_values(Form(1, 0, 7), 2, 28) & units == {1, 9, 25}
    assert representation_values(Form(7, 0, 1), 2, 28) & units == {11, 15, 23}
    assert representation_values(Form(1, 0, 7), 1, 1) == {0}


def test_representation_values_gamma0_invariant(rng):
    for _ in range(25):
        d = rng.choice(DISCS)
        n = rng.choice([1, 2, 3, 5])
        q = random_form(rng, d)
        q2 = act(q, random_gamma0(rng, n))
        for modulus in (4, 7, 12, 28):
            assert representation_values(q, n, modulus) == representation_values(
                q2, n, modulus
            )
