"""Global quadratic Hecke characters of K as square classes delta in K^x/(K^x)^2.

A character is stored by its canonical squarefree representative
(unit-transversal element times distinct prime generators), its ramified
places, and the ordering norm Nchi = max residue norm over ramified finite
places (1 when none).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .errors import ExplosionGuard, ZeroElement
from .localfields import (
    LocalCharacter,
    LocalSquareClass,
    completion,
    is_unramified_class,
    valuation,
)
from .numberfield import (
    Field,
    NFElem,
    Place,
    archimedean_places,
    global_sqrt,
    places_above,
    places_of_norm_up_to,
)

ENUMERATION_GUARD = 1 << 22


@dataclass(frozen=True, eq=False)
class QuadChar:
    field: Field
    delta: NFElem                   # canonical squarefree representative
    support: tuple                  # finite places with odd valuation of delta
    ramified: tuple                 # ramified places (finite and real)
    norm: int                       # Nchi

    def is_trivial(self) -> bool:
        return self.delta == self.field.one()

    def ramified_finite(self):
        return tuple(v for v in self.ramified if v.is_finite())

    def localize(self, v: Place) -> LocalCharacter:
        lv = completion(self.field, v)
        return LocalCharacter(lv, LocalSquareClass(lv, self.delta))

    def __mul__(self, other: "QuadChar") -> "QuadChar":
        return make_char(self.field, self.delta * other.delta)

    def __eq__(self, other):
        return isinstance(other, QuadChar) and self.delta == other.delta \
            and self.field.key == other.field.key

    def __hash__(self):
        return hash((self.field.key, self.delta))

    def __str__(self):
        return f"chi[delta={self.delta}]"

    __repr__ = __str__


def _support_places(delta: NFElem) -> list[tuple[Place, int]]:
    """(place, valuation) over primes dividing the norm of delta."""
    K = delta.field
    nd = delta.norm() if K.m is not None else delta.a
    primes = set()
    for n in (nd.numerator, nd.denominator):
        primes.update(factorint(abs(n)).keys())
    out = []
    for p in sorted(primes):
        for v in places_above(K, p):
            lv = completion(K, v)
            n = valuation(delta, lv)
            if n != 0:
                out.append((v, n))
    return out


def _unit_class_rep(u: NFElem) -> NFElem:
    """The unit-transversal element representing u modulo squares."""
    K = u.field
    for c in K.unit_square_classes:
        if global_sqrt(u / c) is not None:
            return c
    raise AssertionError(f"unit {u} matched no transversal class")


def make_char(K: Field, delta: NFElem) -> QuadChar:
    """Canonicalize delta and compute ramified places and the norm."""
    if not isinstance(delta, NFElem):
        delta = K.elem(delta)
    if delta.is_zero():
        raise ZeroElement("character of delta = 0")
    sup = _support_places(delta)
    sqfree = K.one()
    for v, n in sup:
        if n % 2 != 0:
            sqfree = sqfree * v.generator
    t = delta / sqfree
    # t has even valuation everywhere: strip its square part to a unit
    g = K.one()
    for v, n in _support_places(t):
        assert n % 2 == 0, "square part with odd valuation"
        g = g * v.generator ** (n // 2)
    u = t / (g * g)
    canonical = _unit_class_rep(u) * sqfree
    support = tuple(v for v, n in sup if n % 2 != 0)

    ram = []
    seen = set()
    for v in support:
        ram.append(v)
        seen.add(v.key())
    for v in places_above(K, 2):
        if v.key() in seen:
            continue
        lv = completion(K, v)
        if not is_unramified_class(canonical, lv):
            ram.append(v)
    for v in archimedean_places(K):
        if v.kind == "real" and canonical.sign_at_real(v.index) < 0:
            ram.append(v)
    ram.sort(key=lambda v: v.sort_key())
    norm = max((v.residue_norm for v in ram if v.is_finite()), default=1)
    return QuadChar(K, canonical, support, tuple(ram), norm)


def trivial_char(K: Field) -> QuadChar:
    return make_char(K, K.one())


def localize(chi: QuadChar, v: Place) -> LocalCharacter:
    return chi.localize(v)


# ----------------------------------------------------------------------------
# Enumeration of C(K, X)


def _independent_unit_classes(K: Field) -> list[NFElem]:
    """Greedy F_2-basis of the unit square classes (the transversal is a full
    group: for real quadratic fields -eps = (-1)*eps is dependent)."""
    basis = []
    span = [K.one()]
    for u in K.unit_square_classes[1:]:
        if any(global_sqrt(u / s) is not None for s in span):
            continue
        basis.append(u)
        span = span + [u * s for s in span]
    return basis


def character_group_generators(K: Field, X: int) -> list[QuadChar]:
    """Independent generators of C(K, X): a unit-class basis and primes of
    norm <= X, each filtered by its own norm."""
    gens = []
    for u in _independent_unit_classes(K):
        chi = make_char(K, u)
        if chi.norm <= X:
            gens.append(chi)
    for v in places_of_norm_up_to(K, X):
        chi = make_char(K, v.generator)
        if chi.norm <= X:
            gens.append(chi)
    return gens


def _enum_key(chi: QuadChar):
    K = chi.field
    u_index = 0
    for i, u in enumerate(K.unit_square_classes):
        if global_sqrt(chi.delta / (u * _prime_part(chi))) is not None:
            u_index = i
            break
    norms = tuple(sorted(v.residue_norm for v in chi.support))
    gens = tuple(str(v.generator) for v in sorted(chi.support, key=lambda v: v.sort_key()))
    return (u_index, norms, gens)


def _prime_part(chi: QuadChar) -> NFElem:
    g = chi.field.one()
    for v in chi.support:
        g = g * v.generator
    return g


def enumerate_characters(K: Field, X: int, guard: int = ENUMERATION_GUARD) -> list[QuadChar]:
    """All characters with Nchi <= X, each once, in deterministic order."""
    if X < 1:
        raise ValueError("X must be >= 1")
    units = K.unit_square_classes
    primes = places_of_norm_up_to(K, X)
    total = len(units) * (1 << len(primes))
    if guard is not None and total > guard:
        raise ExplosionGuard(total, guard)
    out = []
    for u in units:
        for rset in _subsets(primes):
            delta = u
            for v in rset:
                delta = delta * v.generator
            chi = make_char(K, delta)
            if chi.norm <= X:
                out.append(chi)
    out.sort(key=_enum_key)
    return out


def _subsets(seq):
    for r in range(len(seq) + 1):
        yield from itertools.combinations(seq, r)


def count_characters(K: Field, X: int) -> int:
    """|C(K, X)| without enumeration (exact; exponential-size group)."""
    if X < 4:
        return len(enumerate_characters(K, X))
    n = len(character_group_generators(K, X))
    return 1 << n


# ----------------------------------------------------------------------------
# Surjectivity of localization onto a finite product of local character groups


@dataclass
class SurjectivityReport:
    places: tuple
    X: int
    gamma_size: int
    hit_count: int
    coverage: Fraction
    min_fiber: int
    fibers: dict

    @property
    def surjective(self) -> bool:
        return self.hit_count == self.gamma_size


def localization_profile(chi: QuadChar, places) -> tuple:
    """Tuple of local square-class indices of delta at the given places."""
    from .localfields import square_class_index

    out = []
    for v in places:
        lv = completion(chi.field, v)
        out.append(square_class_index(chi.delta, lv))
    return tuple(out)


def surjectivity_check(K: Field, places, X: int, guard: int = ENUMERATION_GUARD) -> SurjectivityReport:
    """Localize every chi in C(K, X) at the given places; tally the image tuples."""
    places = list(places)
    gamma_size = 1
    for v in places:
        gamma_size *= completion(K, v).num_quadratic_characters
    fibers: dict = {}
    for chi in enumerate_characters(K, X, guard=guard):
        key = localization_profile(chi, places)
        fibers[key] = fibers.get(key, 0) + 1
    hit = len(fibers)
    min_fiber = min(fibers.values()) if hit == gamma_size else 0
    return SurjectivityReport(tuple(places), X, gamma_size, hit,
                              Fraction(hit, gamma_size), min_fiber, fibers)


# ----------------------------------------------------------------------------
# Twist parameter streams (oracle corpora)


def squarefree_deltas(K: Field, bound: int):
    """Rational squarefree twist parameters delta with 1 <= |delta| <= bound."""
    from .numberfield import is_squarefree

    for n in range(1, bound + 1):
        if is_squarefree(n):
            yield K.elem(n)
            yield K.elem(-n)
