import itertools
import random
from fractions import Fraction

import pytest

from twistparity.errors import ZeroElement
from twistparity.localfields import (
    completion,
    eval_local_char,
    hilbert_symbol,
    is_square_local,
    is_unramified_class,
    local_quadratic_characters,
    square_class_index,
    valuation,
)
from twistparity.numberfield import archimedean_places, places_above

from .conftest import place
from .oracles import (
    brute_legendre,
    brute_square_2adic,
    hilbert_q2_formula,
    hilbert_qp_formula,
    hilbert_real,
    support_primes,
)


def lf(K, p, idx=1):
    return completion(K, place(K, p, idx))


def lf_real(K, idx=1):
    for v in archimedean_places(K):
        if v.kind == "real" and v.index == idx:
            return completion(K, v)
    raise LookupError


# ----------------------------------------------------------------------------
# valuation


def test_valuation_examples(Q, Qi):
    assert valuation(Q.elem(50), lf(Q, 5)) == 2
    assert valuation(Q.elem(1), lf(Q, 7)) == 0
    # (1+i)^2 = 2i, so v(2) = 2 and v(1+i) = 1 at the ramified place
    w2 = lf(Qi, 2)
    assert valuation(Qi.elem(1, 1), w2) == 1
    assert valuation(Qi.elem(2), w2) == 2
    assert Qi.elem(1, 1).norm() == 2


def test_valuation_split_conjugates(Qi):
    v1, v2 = places_above(Qi, 5)
    g = v1.generator
    assert valuation(g, completion(Qi, v1)) == 1
    assert valuation(g, completion(Qi, v2)) == 0
    assert valuation(g.conj(), completion(Qi, v2)) == 1
    assert valuation(Qi.elem(5), completion(Qi, v1)) == 1


def test_valuation_inert(Qi):
    v3 = lf(Qi, 3)
    assert valuation(Qi.elem(3), v3) == 1
    assert valuation(Qi.elem(1, 1), v3) == 0
    assert valuation(Qi.elem(9), v3) == 2


def test_valuation_zero_raises(Q):
    with pytest.raises(ZeroElement):
        valuation(Q.elem(0), lf(Q, 5))


def test_valuation_additive(Q, Qi):
    rng = random.Random(5)
    for v in (lf(Q, 3), lf(Qi, 2), lf(Qi, 3), lf(Qi, 5)):
        K = v.field
        for _ in range(200):
            x = K.elem(rng.randint(-40, 40), rng.randint(-40, 40) if K.m else 0)
            y = K.elem(rng.randint(-40, 40), rng.randint(-40, 40) if K.m else 0)
            if x.is_zero() or y.is_zero():
                continue
            assert valuation(x * y, v) == valuation(x, v) + valuation(y, v)


# ----------------------------------------------------------------------------
# is_square_local


def test_square_2adic_examples(Q):
    v2 = lf(Q, 2)
    # brute: y^2 = 17 mod 32 solvable; y^2 = 5 mod 8 not
    assert brute_square_2adic(17)
    assert is_square_local(Q.elem(17), v2)
    assert not brute_square_2adic(5, 8)
    assert not is_square_local(Q.elem(5), v2)
    assert is_square_local(Q.elem(4), lf(Q, 3))


def test_square_2adic_matches_brute(Q):
    v2 = lf(Q, 2)
    for u in range(-31, 32, 2):
        assert is_square_local(Q.elem(u), v2) == brute_square_2adic(u % 32)


def test_square_odd_matches_legendre(Q):
    for p in (3, 5, 7, 13):
        v = lf(Q, p)
        for a in range(1, p):
            assert is_square_local(Q.elem(a), v) == (brute_legendre(a, p) == 1)
        assert not is_square_local(Q.elem(p), v)
        assert is_square_local(Q.elem(p * p), v)


def test_square_real_and_complex(Q, Qi):
    vR = lf_real(Q)
    assert is_square_local(Q.elem(2), vR)
    assert not is_square_local(Q.elem(-2), vR)
    vC = completion(Qi, archimedean_places(Qi)[0])
    assert is_square_local(Qi.elem(-3, 1), vC)


def test_square_class_invariance(Q, Qi):
    rng = random.Random(17)
    for v in (lf(Q, 2), lf(Q, 7), lf(Qi, 2), lf(Qi, 3)):
        K = v.field
        for _ in range(100):
            x = K.elem(rng.randint(-30, 30), rng.randint(-30, 30) if K.m else 0)
            s = K.elem(rng.randint(1, 12), rng.randint(0, 12) if K.m else 0)
            if x.is_zero() or s.is_zero():
                continue
            assert is_square_local(x, v) == is_square_local(x * s * s, v)


# ----------------------------------------------------------------------------
# hilbert symbols


def test_hilbert_trivial_first_argument(Q):
    for p in (2, 3, 5):
        assert hilbert_symbol(Q.elem(1), Q.elem(-p), lf(Q, p)) == 1


def test_hilbert_real(Q):
    vR = lf_real(Q)
    assert hilbert_symbol(Q.elem(-1), Q.elem(-1), vR) == -1
    assert hilbert_symbol(Q.elem(-1), Q.elem(2), vR) == 1


def test_hilbert_examples(Q):
    assert hilbert_symbol(Q.elem(2), Q.elem(5), lf(Q, 5)) == -1
    assert hilbert_symbol(Q.elem(-1), Q.elem(-1), lf(Q, 2)) == -1
    assert hilbert_symbol(Q.elem(11), Q.elem(-1), lf(Q, 11)) == -1


def test_hilbert_q2_matches_closed_formula(Q):
    v2 = lf(Q, 2)
    vals = [1, -1, 2, -2, 3, 5, -5, 6, 10, -10, 7, 14]
    for x, y in itertools.product(vals, vals):
        assert hilbert_symbol(Q.elem(x), Q.elem(y), v2) == hilbert_q2_formula(
            Fraction(x), Fraction(y)), (x, y)


def test_hilbert_qp_matches_closed_formula(Q):
    for p in (3, 5, 13):
        v = lf(Q, p)
        vals = [1, -1, 2, 3, 5, p, -p, 2 * p, p * 3]
        for x, y in itertools.product(vals, vals):
            assert hilbert_symbol(Q.elem(x), Q.elem(y), v) == hilbert_qp_formula(
                Fraction(x), Fraction(y), p), (p, x, y)


def _random_elem(rng, K, span=40):
    while True:
        x = K.elem(rng.randint(-span, span), rng.randint(-span, span) if K.m else 0)
        if not x.is_zero():
            return x


@pytest.mark.parametrize("field_kind,pspec", [
    ("Q", ("real", 1)), ("Q", ("finite", 7)), ("Q", ("finite", 2)),
    ("Qi", ("finite", 2)), ("Qi", ("finite", 3)), ("Qi", ("finite", 5)),
    ("K5", ("finite", 2)),
])
def test_hilbert_properties(field_kind, pspec, Q, Qi, K5):
    K = {"Q": Q, "Qi": Qi, "K5": K5}[field_kind]
    if pspec[0] == "real":
        v = lf_real(K, pspec[1])
    else:
        v = lf(K, pspec[1])
    rng = random.Random(hash((field_kind, pspec)) & 0xFFFF)
    n = 120 if (v.p == 2 and K.m is not None) else 400
    for _ in range(n):
        x = _random_elem(rng, K, 20)
        y = _random_elem(rng, K, 20)
        z = _random_elem(rng, K, 20)
        sxy = hilbert_symbol(x, y, v)
        assert sxy == hilbert_symbol(y, x, v)
        assert hilbert_symbol(x * z, y, v) == hilbert_symbol(x, y, v) * hilbert_symbol(z, y, v)
        assert hilbert_symbol(x, -x, v) == 1
        s = _random_elem(rng, K, 9)
        assert hilbert_symbol(x * s * s, y, v) == sxy


def test_hilbert_product_formula(Q):
    rng = random.Random(23)
    vR = lf_real(Q)
    for _ in range(400):
        x = Fraction(rng.randint(-60, 60) or 1, rng.randint(1, 40))
        y = Fraction(rng.randint(-60, 60) or 1, rng.randint(1, 40))
        prod = hilbert_real(x, y)
        for p in sorted(support_primes(x, y) | {2}):
            prod *= hilbert_symbol(Q.elem(x), Q.elem(y), lf(Q, p))
        assert prod == 1, (x, y)


# ----------------------------------------------------------------------------
# character groups


def test_character_counts(Q, Qi, K5):
    assert len(local_quadratic_characters(lf(Q, 7))) == 4
    assert len(local_quadratic_characters(lf(Q, 2))) == 8
    assert len(local_quadratic_characters(lf(Qi, 2))) == 16
    assert len(local_quadratic_characters(lf(Qi, 3))) == 4
    assert len(local_quadratic_characters(lf(K5, 2))) == 16
    vC = completion(Qi, archimedean_places(Qi)[0])
    assert len(local_quadratic_characters(vC)) == 1
    vR = lf_real(Q)
    assert len(local_quadratic_characters(vR)) == 2


def test_character_classes_at_7(Q):
    v = lf(Q, 7)
    reps = [c.delta for c in local_quadratic_characters(v)]
    assert reps[0] == Q.elem(1)
    # classes {1, u, 7, 7u} with u a non-residue mod 7
    u = reps[1]
    assert not is_square_local(u, v)
    assert valuation(reps[2], v) % 2 == 1
    assert valuation(reps[3], v) % 2 == 1


def test_character_classes_at_2(Q):
    v = lf(Q, 2)
    reps = [c.delta.a for c in local_quadratic_characters(v)]
    assert set(reps) == {1, -1, 5, -5, 2, -2, 10, -10}


def test_characters_pairwise_distinct_and_closed(Q, Qi):
    for v in (lf(Q, 2), lf(Q, 5), lf(Qi, 2), lf(Qi, 5)):
        chars = local_quadratic_characters(v)
        idx = {square_class_index(c.delta, v) for c in chars}
        assert len(idx) == len(chars)
        # closure under product
        for c1, c2 in itertools.product(chars[:6], chars[:6]):
            prod = c1 * c2
            assert square_class_index(prod.delta, v) in idx
        # trivial character first
        assert chars[0].is_trivial()


def test_character_nondegeneracy(Q, Qi):
    for v in (lf(Q, 2), lf(Q, 5), lf(Qi, 2)):
        chars = local_quadratic_characters(v)
        for chi in chars[1:]:
            hit = any(
                eval_local_char(chi, x.delta) == -1
                for x in chars
            )
            assert hit, f"character {chi} is degenerate"


def test_eval_local_char_examples(Q):
    v11 = lf(Q, 11)
    chars = local_quadratic_characters(v11)
    triv = chars[0]
    assert all(eval_local_char(triv, Q.elem(x)) == 1 for x in (2, 3, 11, -1))
    # 11 = 3 mod 4: (11, -1)_11 = (-1/11) = -1
    from twistparity.localfields import LocalCharacter, LocalSquareClass

    chi_m1 = LocalCharacter(v11, LocalSquareClass(v11, Q.elem(-1)))
    assert eval_local_char(chi_m1, Q.elem(11)) == -1
    v5 = lf(Q, 5)
    chi_ram = LocalCharacter(v5, LocalSquareClass(v5, Q.elem(10)))
    assert eval_local_char(chi_ram, Q.elem(-1)) == brute_legendre(-1, 5)


def test_unramified_classification(Q, Qi):
    v2 = lf(Q, 2)
    assert is_unramified_class(Q.elem(5), v2)
    assert is_unramified_class(Q.elem(1), v2)
    for d in (-1, 2, -2, 10, 3):
        assert not is_unramified_class(Q.elem(d), v2)
    v5 = lf(Q, 5)
    assert is_unramified_class(Q.elem(2), v5)
    assert not is_unramified_class(Q.elem(5), v5)
    # Q(i) at (1+i): exactly half the classes are unramified? No: 4 of 16
    w2 = lf(Qi, 2)
    unram = [d for d in w2.square_class_reps() if is_unramified_class(d, w2)]
    assert len(unram) == 2  # trivial and the unramified-quadratic unit class


def test_working_precision_invariant(Q, Qi):
    assert lf(Q, 2).working_precision >= 2 * 1 * 1 + 5
    assert lf(Qi, 2).working_precision >= 2 * 2 * 2 + 5
    assert lf(Q, 7).working_precision >= 5


def test_completion_data(Q, Qi):
    v7 = lf(Q, 7)
    assert (v7.e, v7.f, v7.q) == (1, 1, 7) and v7.uniformizer == Q.elem(7)
    v3 = lf(Qi, 3)
    assert (v3.e, v3.f, v3.q) == (1, 2, 9) and v3.uniformizer == Qi.elem(3)
    w2 = lf(Qi, 2)
    assert (w2.e, w2.f, w2.q) == (2, 1, 2)
    assert valuation(w2.uniformizer, w2) == 1
    assert abs(w2.uniformizer.norm()) == 2


def test_split_dyadic_matches_q2_formula():
    # regression: at a split place over 2 the uniformizer is not 2 itself, but
    # rational arguments must still get their Q_2 symbol values
    from twistparity.numberfield import quadratic_field

    for m in (-7, 17):
        K = quadratic_field(m)
        v = completion(K, places_above(K, 2)[0])
        assert v.place.splitting == "split"
        vals = [1, -1, 5, -5, 3, 2, 6, -2, 10, -14]
        for x, y in itertools.product(vals, vals):
            assert hilbert_symbol(K.elem(x), K.elem(y), v) == hilbert_q2_formula(
                Fraction(x), Fraction(y)), (m, x, y)


def test_hilbert_reciprocity_over_quadratic_fields():
    # prod over all places of (x, y)_v = 1; exercises split/inert/ramified and
    # all three dyadic completion shapes against each other
    from sympy import factorint

    from twistparity.numberfield import quadratic_field

    rng = random.Random(41)
    for m in (-7, 17, -1, 5):
        K = quadratic_field(m)
        checked = 0
        while checked < 25:
            x = K.elem(rng.randint(-25, 25), rng.randint(-25, 25))
            y = K.elem(rng.randint(-25, 25), rng.randint(-25, 25))
            if x.is_zero() or y.is_zero():
                continue
            checked += 1
            prod = 1
            for v in archimedean_places(K):
                prod *= hilbert_symbol(x, y, completion(K, v))
            primes = {2}
            for z in (x, y):
                nd = z.norm()
                for n in (nd.numerator, nd.denominator):
                    primes.update(factorint(abs(n)).keys())
            for p in sorted(primes):
                for v in places_above(K, p):
                    prod *= hilbert_symbol(x, y, completion(K, v))
            assert prod == 1, (m, str(x), str(y))
