import math
import random

import pytest

from gammaforms.core import Form, GroupElement, IDENTITY, S, T, act
from gammaforms.errors import DiscriminantMismatch, UnsupportedLevelError, ValidationError
from gammaforms.reduction import (
    CosetSystem,
    automorphs,
    canonical_rep,
    coset_reps,
    enumerate_reduced,
    equivalent_gamma0,
    gamma0_class_representatives,
    is_reduced_gamma0_p,
    is_reduced_gamma0_small,
    is_reduced_sl2,
    p1_label,
    reduce_sl2,
)
from conftest import random_form, random_gamma0, random_sl2


def test_reduce_sl2_examples():
    r = reduce_sl2(Form(1, 2, 2))
    assert r.reduced == Form(1, 0, 1)
    assert r.transform == GroupElement(1, -1, 0, 1)
    assert reduce_sl2(Form(3, 2, 1)).reduced == Form(1, 0, 2)
    assert reduce_sl2(Form(1, 1, 1)).reduced == Form(1, 1, 1)


def test_reduce_sl2_witness_and_idempotence(rng):
    for _ in range(200):
        d = rng.choice([-3, -4, -7, -8, -11, -15, -20, -23, -24, -163])
        q = random_form(rng, d)
        r = reduce_sl2(q)
        assert act(q, r.transform) == r.reduced
        assert is_reduced_sl2(r.reduced)
        assert reduce_sl2(r.reduced).reduced == r.reduced


def test_reduce_sl2_unique_over_small_words():
    # brute force: every word image of (3,2,1) reduces to the same form,
    # and the only reduced form among the images is (1,0,2)
    q = Form(3, 2, 1)
    seen = {q}
    frontier = [q]
    for _ in range(6):
        frontier = [
            act(f, g) for f in frontier for g in (T, T.inverse(), S) if act(f, g) not in seen
        ]
        seen.update(frontier)
    reduced_images = {f for f in seen if is_reduced_sl2(f)}
    assert reduced_images == {Form(1, 0, 2)}


def test_reduce_rejects_bad_input():
    with pytest.raises(ValidationError):
        reduce_sl2(Form(1, 4, 1))
    with pytest.raises(ValidationError):
        reduce_sl2(Form(2, 0, 2))


def test_is_reduced_gamma0_small_examples():
    assert is_reduced_gamma0_small(Form(2, 2, 1), 2)
    assert not is_reduced_gamma0_small(Form(1, 2, 2), 2)
    assert is_reduced_gamma0_small(Form(3, 2, 1), 2)
    with pytest.raises(ValidationError):
        is_reduced_gamma0_small(Form(1, 0, 1), 5)


def test_is_reduced_gamma0_p_examples():
    assert is_reduced_gamma0_p(Form(1, 1, 1), 5)
    # b = -p*c violates the arc condition at k = 1
    assert not is_reduced_gamma0_p(Form(7, -5, 1), 5)
    with pytest.raises(ValidationError):
        is_reduced_gamma0_p(Form(1, 0, 1), 4)
    with pytest.raises(ValidationError):
        is_reduced_gamma0_p(Form(1, 0, 1), 3)


# ---------------------------------------------------------------------------
# cosets


def test_coset_counts():
    assert len(coset_reps(1).reps) == 1
    assert len(coset_reps(5).reps) == 6
    assert len(coset_reps(6).reps) == 12
    assert len(coset_reps(12).reps) == 24


def test_coset_reps_are_distinct_and_complete(rng):
    for n in (2, 3, 5, 6, 7, 10):
        system = coset_reps(n)
        labels = {system.label_of(g) for g in system.reps}
        assert len(labels) == len(system.reps)
        # a random matrix lands in exactly one coset
        for _ in range(20):
            g = random_sl2(rng)
            i = system.index_of(g)
            # gamma = g * rep^-1 must then be in Gamma0(n)
            gamma = g * system.reps[i].inverse()
            assert gamma.in_gamma0(n)


def test_p1_label_rejects_non_points():
    with pytest.raises(ValidationError):
        p1_label(4, 2, 2)


# ---------------------------------------------------------------------------
# enumeration


PAPER_TABLES = {
    -3: {(1, 1, 1)},
    -4: {(1, 0, 1), (2, 2, 1)},
    -7: {(1, 1, 2), (2, 1, 1), (2, -1, 1)},
    -8: {(1, 0, 2), (2, 0, 1), (3, 2, 1)},
}


def test_enumerate_level2_reference_tables():
    for d, expected in PAPER_TABLES.items():
        got = {(f.a, f.b, f.c) for f in enumerate_reduced(d, 2)}
        assert got == expected, d


def test_enumerate_is_sorted_and_validates():
    forms = enumerate_reduced(-28, 2)
    assert list(forms) == sorted(forms, key=lambda f: (f.a, f.b, f.c))
    with pytest.raises(UnsupportedLevelError):
        enumerate_reduced(-4, 4)
    with pytest.raises(ValidationError):
        enumerate_reduced(-5, 2)


def test_enumerate_matches_class_count_for_primes():
    # |Gamma0(p)-RF(D)| agrees with the translate covering at higher levels
    for p in (5, 7, 11):
        for d in (-3, -4, -7, -8, -11):
            forms = enumerate_reduced(d, p)
            assert len(forms) == len(gamma0_class_representatives(d, p))


def test_count_stable_under_other_coset_systems(rng):
    # the number of classes does not depend on the chosen coset system
    for d, n in [(-4, 2), (-8, 2), (-3, 5), (-7, 3)]:
        base = coset_reps(n)
        twisted = CosetSystem(
            n,
            tuple(random_gamma0(rng, n, 4) * g for g in reversed(base.reps)),
        )
        assert len(gamma0_class_representatives(d, n, twisted)) == len(
            enumerate_reduced(d, n)
        )


def test_finiteness_bound_for_prime_levels():
    for p in (5, 7, 13):
        for d in (-3, -4, -7, -8, -15, -20, -23, -24):
            for f in enumerate_reduced(d, p):
                a, b, c = f.a, f.b, f.c
                case1 = 3 * a * a <= p * p * (-d)
                case2 = abs(b) * p <= a and abs(b) <= p * c and 3 * a * c <= -d
                assert case1 or case2, (p, d, f)
                if not case1:
                    assert 4 * a * c == b * b - d and a * c <= -d // 3


# ---------------------------------------------------------------------------
# automorphisms and equivalence


def test_automorph_sizes():
    assert len(automorphs(Form(1, 1, 1))) == 6
    assert len(automorphs(Form(1, 0, 1))) == 4
    assert len(automorphs(Form(1, 0, 2))) == 2
    assert len(automorphs(Form(2, 2, 3))) == 2  # disc -20


def test_automorphs_fix_form_and_match_word_ball():
    # exhaustive stabilizer inside the ball of word length <= 10
    ball = {IDENTITY}
    frontier = [IDENTITY]
    for _ in range(10):
        new = []
        for g in frontier:
            for h in (T, T.inverse(), S):
                k = g * h
                if k not in ball:
                    ball.add(k)
                    new.append(k)
        frontier = new
    for q in (Form(1, 0, 1), Form(1, 1, 1), Form(1, 0, 2), Form(2, 2, 3)):
        auts = set(automorphs(q))
        for g in auts:
            assert act(q, g) == q
        assert {g for g in ball if act(q, g) == q} == auts


def test_equivalent_gamma0_examples(rng):
    q = Form(2, 1, 1)
    g = equivalent_gamma0(q, q, 3)
    assert g is not None and act(q, g) == q

    # distinct reduced forms at level 2 are inequivalent, but merge at level 1
    assert equivalent_gamma0(Form(1, 0, 1), Form(2, 2, 1), 2) is None
    g = equivalent_gamma0(Form(1, 0, 1), Form(2, 2, 1), 1)
    assert g is not None and act(Form(1, 0, 1), g) == Form(2, 2, 1)

    with pytest.raises(DiscriminantMismatch):
        equivalent_gamma0(Form(1, 0, 1), Form(1, 0, 2), 1)


def test_equivalent_gamma0_detects_translates(rng):
    for _ in range(100):
        d = rng.choice([-3, -4, -7, -8, -11, -15, -20])
        n = rng.choice([1, 2, 3, 5, 7])
        q = random_form(rng, d)
        gamma = random_gamma0(rng, n)
        q2 = act(q, gamma)
        g = equivalent_gamma0(q, q2, n)
        assert g is not None and g.in_gamma0(n) and act(q, g) == q2


def test_enumerated_forms_pairwise_inequivalent():
    for d, n in [(-4, 2), (-8, 2), (-28, 2), (-3, 5), (-4, 5), (-7, 7)]:
        forms = enumerate_reduced(d, n)
        for i, f in enumerate(forms):
            for g in forms[i + 1 :]:
                assert equivalent_gamma0(f, g, n) is None, (d, n, f, g)


def test_canonical_rep():
    assert canonical_rep(Form(1, 2, 2), 2) == Form(1, 0, 1)
    q = Form(3, 2, 1)
    assert canonical_rep(q, 1) == reduce_sl2(q).reduced
    c = canonical_rep(q, 2)
    assert canonical_rep(c, 2) == c


def test_canonical_rep_general_level(rng):
    # composite level uses the coset-translate convention
    for _ in range(30):
        q = random_form(rng, -4)
        base = canonical_rep(q, 4)
        translated = act(q, random_gamma0(rng, 4))
        assert canonical_rep(translated, 4) == base
