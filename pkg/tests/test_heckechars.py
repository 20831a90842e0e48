import random

import pytest

from twistparity.errors import ExplosionGuard, ZeroElement
from twistparity.heckechars import (
    character_group_generators,
    count_characters,
    enumerate_characters,
    localization_profile,
    make_char,
    surjectivity_check,
    trivial_char,
)
from twistparity.localfields import completion, eval_local_char, hilbert_symbol
from twistparity.numberfield import archimedean_places, is_squarefree, places_above

from .conftest import place
from .oracles import rational_char_norm


# ----------------------------------------------------------------------------
# make_char


def test_make_char_square_is_trivial(Q):
    chi = make_char(Q, Q.elem(4))
    assert chi.is_trivial() and chi.norm == 1 and not chi.ramified


def test_make_char_5(Q):
    chi = make_char(Q, Q.elem(5))
    assert [str(v) for v in chi.ramified] == ["(5)"]
    assert chi.norm == 5


def test_make_char_minus_one(Q):
    chi = make_char(Q, Q.elem(-1))
    kinds = [(v.kind, v.p) for v in chi.ramified]
    assert ("real", None) in kinds and ("finite", 2) in kinds
    assert chi.norm == 2


def test_make_char_minus_three(Q):
    chi = make_char(Q, Q.elem(-3))
    assert {str(v) for v in chi.ramified} == {"oo_1", "(3)"}
    assert chi.norm == 3


def test_make_char_zero_rejected(Q):
    with pytest.raises(ZeroElement):
        make_char(Q, Q.elem(0))


def test_canonicalization_mod_squares(Q, Qi):
    rng = random.Random(9)
    for K in (Q, Qi):
        for _ in range(40):
            d = K.elem(rng.randint(-40, 40), rng.randint(-10, 10) if K.m else 0)
            s = K.elem(rng.randint(1, 9), rng.randint(0, 5) if K.m else 0)
            if d.is_zero() or s.is_zero():
                continue
            assert make_char(K, d) == make_char(K, d * s * s)


def test_canonical_norm_matches_naive(Q):
    for n in range(-80, 81):
        if n == 0 or not is_squarefree(n):
            continue
        assert make_char(Q, Q.elem(n)).norm == rational_char_norm(n), n


def test_global_minus_one_product(Q, Qi):
    # prod over all places of chi_v(-1) = +1 (Hilbert reciprocity for (-1, delta))
    for K, deltas in ((Q, [-1, 2, -2, 3, 5, -30, 77]), (Qi, None)):
        if deltas is None:
            chars = enumerate_characters(K, 10)
        else:
            chars = [make_char(K, K.elem(d)) for d in deltas]
        for chi in chars:
            prod = 1
            seen = set()
            places = list(chi.ramified_finite()) + list(places_above(K, 2))
            for v in places:
                if v.key() in seen:
                    continue
                seen.add(v.key())
                prod *= hilbert_symbol(K.elem(-1), chi.delta, completion(K, v))
            for v in archimedean_places(K):
                if v.kind == "real" and chi.delta.sign_at_real(v.index) < 0:
                    prod *= -1
            assert prod == 1, str(chi)


# ----------------------------------------------------------------------------
# localization


def test_localize_trivial_everywhere(Q):
    chi = trivial_char(Q)
    for p in (2, 3, 11):
        assert chi.localize(place(Q, p)).is_trivial()


def test_localize_5_at_2_unramified(Q):
    chi = make_char(Q, Q.elem(5))
    loc = chi.localize(place(Q, 2))
    assert loc.is_unramified() and not loc.is_trivial()


def test_localize_minus_one_at_11(Q):
    chi = make_char(Q, Q.elem(-1))
    loc = chi.localize(place(Q, 11))
    assert eval_local_char(loc, Q.elem(11)) == -1


# ----------------------------------------------------------------------------
# enumeration


def test_enumerate_q_x5(Q):
    chars = enumerate_characters(Q, 5)
    deltas = sorted(int(c.delta.a) for c in chars)
    expect = sorted(s * n for s in (1, -1) for n in (1, 2, 3, 5, 6, 10, 15, 30))
    assert deltas == expect


def test_enumerate_q_x1(Q):
    chars = enumerate_characters(Q, 1)
    assert len(chars) == 1 and chars[0].is_trivial()


def test_enumerate_no_duplicates(Q, Qi):
    for K, X in ((Q, 13), (Qi, 9)):
        chars = enumerate_characters(K, X)
        assert len({c.delta for c in chars}) == len(chars)
        assert all(c.norm <= X for c in chars)


def test_enumerate_brute_force_cross_check(Q):
    # independent sieve over rational squarefree deltas
    for X in (3, 5, 7):
        bound = 1
        for p in (2, 3, 5, 7):
            if p <= X:
                bound *= p
        brute = {n for n in range(-bound, bound + 1)
                 if n and is_squarefree(n) and rational_char_norm(n) <= X}
        got = {int(c.delta.a) for c in enumerate_characters(Q, X)}
        assert got == brute


def test_enumerate_gaussian_x2(Qi):
    chars = enumerate_characters(Qi, 2)
    # trivial, the i unit class, and the two (1+i)-supported classes
    assert len(chars) == 4
    assert sum(c.is_trivial() for c in chars) == 1
    assert {c.norm for c in chars} == {1, 2}


def test_enumeration_guard(Q):
    with pytest.raises(ExplosionGuard):
        enumerate_characters(Q, 10 ** 4, guard=1 << 10)


def test_count_characters_matches_enumeration(Q, Qi):
    for K, X in ((Q, 5), (Q, 13), (Qi, 9), (Qi, 25)):
        assert count_characters(K, X) == len(enumerate_characters(K, X))


def test_generators_independent(Q):
    gens = character_group_generators(Q, 13)
    # deltas -1, 2, 3, 5, 7, 11, 13 are independent in Q^x/(Q^x)^2
    assert len(gens) == 7
    assert count_characters(Q, 13) == 2 ** 7


# ----------------------------------------------------------------------------
# surjectivity


def test_surjectivity_real_place_only(Q):
    rep = surjectivity_check(Q, [archimedean_places(Q)[0]], 2)
    assert rep.gamma_size == 2 and rep.surjective


def test_surjectivity_full_256(Q):
    places = [archimedean_places(Q)[0]] + [place(Q, p) for p in (2, 3, 5)]
    rep = surjectivity_check(Q, places, 17)
    assert rep.gamma_size == 256
    assert rep.surjective
    assert rep.min_fiber >= 1


def test_surjectivity_empty_places(Q):
    rep = surjectivity_check(Q, [], 3)
    assert rep.gamma_size == 1 and rep.surjective


def test_localization_profile_shape(Q):
    chi = make_char(Q, Q.elem(-15))
    places = [place(Q, p) for p in (2, 3, 5)]
    prof = localization_profile(chi, places)
    assert len(prof) == 3
    assert all(isinstance(i, int) for i in prof)


def test_count_characters_real_quadratic():
    # the unit transversal {1, -1, eps, -eps} spans only a 2-dimensional space
    from twistparity.numberfield import quadratic_field

    K2 = quadratic_field(2)
    for X in (5, 9):
        assert count_characters(K2, X) == len(enumerate_characters(K2, X)), X


def test_enumerated_characters_differ_at_some_place(Q):
    from twistparity.numberfield import places_of_norm_up_to

    chars = enumerate_characters(Q, 5)
    probes = [archimedean_places(Q)[0]] + places_of_norm_up_to(Q, 30)
    profiles = [localization_profile(c, probes) for c in chars]
    assert len(set(profiles)) == len(chars)
