"""Weierstrass models over K: reduction classification, twists, root numbers.

Only the coarse local data the twist calculus consumes is computed: minimal
v(Delta), v(c4), v(j), and node splitness. Kodaira symbols and conductor
exponents are deliberately out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from sympy import factorint

from .errors import (
    SingularCurve,
    UnsupportedRepresentation,
    ZeroElement,
    ZeroTwistParameter,
)
from .localfields import (
    LocalField,
    completion,
    hilbert_symbol,
    is_unramified_class,
    valuation,
)
from .numberfield import Field, NFElem, Place, archimedean_places, parse_element, places_above

INF = math.inf

# reduction types
GOOD = "good"
SPLIT_MULT = "split_mult"
NONSPLIT_MULT = "nonsplit_mult"
ADDITIVE_POT_MULT = "additive_pot_mult"
ADDITIVE_POT_GOOD = "additive_pot_good"

# local GL(2) representation types
PRINCIPAL_UNRAMIFIED = "principal_unramified"
PRINCIPAL_RAMIFIED_QUAD = "principal_ramified_quad_twist_of_good"
SPECIAL_UNRAMIFIED = "special_unramified"
SPECIAL_RAMIFIED_QUAD = "special_ramified_quadratic"
UNSUPPORTED = "unsupported"


class EllipticCurve:
    """[a1, a2, a3, a4, a6] over K with the usual derived quantities."""

    def __init__(self, field: Field, a1, a2, a3, a4, a6, check=True):
        self.field = field
        mk = lambda z: z if isinstance(z, NFElem) else field.elem(z)
        self.a1, self.a2, self.a3, self.a4, self.a6 = map(mk, (a1, a2, a3, a4, a6))
        if check and self.disc.is_zero():
            raise SingularCurve(f"discriminant 0 for {self}")

    @cached_property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @cached_property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @cached_property
    def b8(self):
        return (self.a1 * self.a1 * self.a6 + 4 * self.a2 * self.a6
                - self.a1 * self.a3 * self.a4 + self.a2 * self.a3 * self.a3
                - self.a4 * self.a4)

    @cached_property
    def c4(self):
        return self.b2 * self.b2 - 24 * self.b4

    @cached_property
    def c6(self):
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @cached_property
    def disc(self):
        return (-self.b2 * self.b2 * self.b8 - 8 * self.b4 ** 3
                - 27 * self.b6 * self.b6 + 9 * self.b2 * self.b4 * self.b6)

    @cached_property
    def j(self):
        return self.c4 ** 3 / self.disc

    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def key(self):
        return (self.field.key,) + tuple((z.a, z.b) for z in self.ainvs())

    def transform(self, u=1, r=0, s=0, t=0) -> "EllipticCurve":
        """Coordinate change (x, y) -> (u^2 x + r, u^3 y + s u^2 x + t)."""
        K = self.field
        mk = lambda z: z if isinstance(z, NFElem) else K.elem(z)
        u, r, s, t = map(mk, (u, r, s, t))
        if u.is_zero():
            raise ZeroElement("transform with u = 0")
        a1, a2, a3, a4, a6 = self.ainvs()
        na1 = (a1 + 2 * s) / u
        na2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
        na3 = (a3 + r * a1 + 2 * t) / u ** 3
        na4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u ** 4
        na6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1) / u ** 6
        return EllipticCurve(K, na1, na2, na3, na4, na6, check=False)

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.ainvs()) + "]"

    __repr__ = __str__


def curve(K: Field, coeffs) -> EllipticCurve:
    """Build a curve from [a1,a2,a3,a4,a6] or the short form [a4,a6]."""
    coeffs = list(coeffs)
    if len(coeffs) == 2:
        coeffs = [0, 0, 0] + coeffs
    if len(coeffs) != 5:
        raise ValueError("expected 2 or 5 coefficients")
    return EllipticCurve(K, *coeffs)


def parse_curve(K: Field, text: str) -> EllipticCurve:
    from .errors import Malformed

    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise Malformed(f"curve literal must be [..]: {text!r}")
    parts = [p for p in text[1:-1].split(",") if p.strip()]
    if len(parts) not in (2, 5):
        raise Malformed(f"curve literal needs 2 or 5 entries: {text!r}")
    return curve(K, [parse_element(K, p) for p in parts])


def invariants(E: EllipticCurve):
    """(c4, c6, Delta, j)."""
    return (E.c4, E.c6, E.disc, E.j)


def quadratic_twist(E: EllipticCurve, delta: NFElem) -> EllipticCurve:
    """Twist by the square class of delta: (c4, c6) -> (delta^2 c4, delta^3 c6)."""
    if not isinstance(delta, NFElem):
        delta = E.field.elem(delta)
    if delta.is_zero():
        raise ZeroTwistParameter("twist by 0")
    c4, c6 = E.c4, E.c6
    return EllipticCurve(E.field, 0, 0, 0, -27 * c4 * delta * delta,
                         -54 * c6 * delta ** 3)


# ----------------------------------------------------------------------------
# Reduction classification


@dataclass
class ReductionData:
    place: Place
    red_type: str
    v_disc: int
    v_c4: object  # int or math.inf
    split_sign: Optional[int]  # +1 split / -1 nonsplit, multiplicative only
    minimal_model: EllipticCurve

    def is_good(self):
        return self.red_type == GOOD

    def is_multiplicative(self):
        return self.red_type in (SPLIT_MULT, NONSPLIT_MULT)

    def is_additive(self):
        return self.red_type in (ADDITIVE_POT_MULT, ADDITIVE_POT_GOOD)


_REDUCTION_CACHE: dict = {}


def _val0(z: NFElem, lv: LocalField):
    return INF if z.is_zero() else valuation(z, lv)


def reduction_type(E: EllipticCurve, v: Place) -> ReductionData:
    lv = completion(E.field, v)
    key = (E.field.key, v.key(), E.key())
    hit = _REDUCTION_CACHE.get(key)
    if hit is not None:
        return hit
    if lv.p in (2, 3):
        rd = _tate_reduction(E, v, lv)
    else:
        rd = _fast_reduction(E, v, lv)
    _REDUCTION_CACHE[key] = rd
    return rd


def _pot_kind(E: EllipticCurve, lv: LocalField) -> str:
    if E.c4.is_zero():
        return ADDITIVE_POT_GOOD  # j = 0
    return ADDITIVE_POT_MULT if valuation(E.j, lv) < 0 else ADDITIVE_POT_GOOD


def _fast_reduction(E: EllipticCurve, v: Place, lv: LocalField) -> ReductionData:
    """Residue characteristic >= 5: minimality from (c4, c6, Delta) valuations."""
    vd = valuation(E.disc, lv)
    vc4 = _val0(E.c4, lv)
    vc6 = _val0(E.c6, lv)
    ks = [vd // 12]
    if vc4 is not INF:
        ks.append(vc4 // 4)
    if vc6 is not INF:
        ks.append(vc6 // 6)
    k = min(ks)
    pi = lv.uniformizer
    c4m = E.c4 / pi ** (4 * k)
    c6m = E.c6 / pi ** (6 * k)
    Emin = EllipticCurve(E.field, 0, 0, 0, -27 * c4m, -54 * c6m, check=False)
    vdm = vd - 12 * k
    vc4m = INF if c4m.is_zero() else vc4 - 4 * k
    if vdm == 0:
        return ReductionData(v, GOOD, 0, vc4m, None, Emin)
    if vc4m == 0:
        split = lv.residue_field().is_square(lv.residue(-c6m))
        return ReductionData(v, SPLIT_MULT if split else NONSPLIT_MULT,
                             vdm, 0, 1 if split else -1, Emin)
    return ReductionData(v, _pot_kind(E, lv), vdm, vc4m, None, Emin)


# -- Tate's algorithm for residue characteristic 2 and 3 ----------------------


def _tate_reduction(E: EllipticCurve, v: Place, lv: LocalField) -> ReductionData:
    K = E.field
    pi = lv.uniformizer
    rf = lv.residue_field()
    p = lv.p
    lifts = [lv.lift(el) for el in rf.elements()]

    # make the model v-integral
    kmin = 0
    for a, w in zip(E.ainvs(), (1, 2, 3, 4, 6)):
        if not a.is_zero():
            kmin = min(kmin, valuation(a, lv) // w)
    if kmin < 0:
        E = E.transform(u=pi ** kmin)

    while True:
        n = valuation(E.disc, lv)
        if n == 0:
            return ReductionData(v, GOOD, 0, _val0(E.c4, lv), None, E)

        # move the singular point of the reduced curve to the origin
        res = [lv.residue(a) for a in E.ainvs()]
        sing = None
        for xb in rf.elements():
            for yb in rf.elements():
                fx = rf.add(rf.mul(res[0], yb),
                            rf.neg(rf.add(rf.add(_rmul(rf, 3, rf.mul(xb, xb)),
                                                 _rmul(rf, 2, rf.mul(res[1], xb))), res[3])))
                if not rf.is_zero(fx):
                    continue
                fy = rf.add(rf.add(_rmul(rf, 2, yb), rf.mul(res[0], xb)), res[2])
                if not rf.is_zero(fy):
                    continue
                fval = rf.add(
                    rf.add(rf.mul(yb, yb), rf.add(rf.mul(res[0], rf.mul(xb, yb)), rf.mul(res[2], yb))),
                    rf.neg(rf.add(rf.add(rf.mul(xb, rf.mul(xb, xb)), rf.mul(res[1], rf.mul(xb, xb))),
                                  rf.add(rf.mul(res[3], xb), res[4]))),
                )
                if rf.is_zero(fval):
                    sing = (xb, yb)
                    break
            if sing:
                break
        assert sing is not None, "no singular point despite v(disc) > 0"
        E = E.transform(r=lv.lift(sing[0]), t=lv.lift(sing[1]))

        if _val0(E.c4, lv) == 0:
            # multiplicative: tangent-cone quadratic T^2 + a1 T - a2 over k
            A1 = lv.residue(E.a1)
            A2 = lv.residue(E.a2)
            split = any(
                rf.is_zero(rf.add(rf.mul(tb, tb), rf.add(rf.mul(A1, tb), rf.neg(A2))))
                for tb in rf.elements()
            )
            return ReductionData(v, SPLIT_MULT if split else NONSPLIT_MULT,
                                 n, 0, 1 if split else -1, E)

        pot = _pot_kind(E, lv)
        if _val0(E.a6, lv) < 2:  # type II
            return ReductionData(v, pot, n, _val0(E.c4, lv), None, E)
        if _val0(E.b8, lv) < 3:  # type III
            return ReductionData(v, pot, n, _val0(E.c4, lv), None, E)
        if _val0(E.b6, lv) < 3:  # type IV
            return ReductionData(v, pot, n, _val0(E.c4, lv), None, E)

        # normalize so that pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
        E = _tate_normalize(E, lv, pi, lifts)

        # cubic P(T) = T^3 + (a2/pi) T^2 + (a4/pi^2) T + a6/pi^3 over k:
        # continue only past a triple root, i.e. P == (T - c)^3
        P = [lv.residue(E.a6 / pi ** 3), lv.residue(E.a4 / pi ** 2),
             lv.residue(E.a2 / pi), rf.one()]
        c = None
        for cb in rf.elements():
            m3c = rf.neg(_rmul(rf, 3, cb))
            p3c2 = _rmul(rf, 3, rf.mul(cb, cb))
            mc3 = rf.neg(rf.mul(cb, rf.mul(cb, cb)))
            if P[2] == m3c and P[1] == p3c2 and P[0] == mc3:
                c = cb
                break
        if c is None:  # I0* or In*
            return ReductionData(v, pot, n, _val0(E.c4, lv), None, E)
        E = E.transform(r=pi * lv.lift(c))
        assert _val0(E.a2, lv) >= 2 and _val0(E.a4, lv) >= 3 and _val0(E.a6, lv) >= 4

        # quadratic Y^2 + (a3/pi^2) Y - a6/pi^4 over k: continue past a double root
        A3 = lv.residue(E.a3 / pi ** 2)
        A6 = lv.residue(E.a6 / pi ** 4)
        y0 = None
        for yb in rf.elements():
            if A3 == rf.neg(_rmul(rf, 2, yb)) and rf.neg(A6) == rf.mul(yb, yb):
                y0 = yb
                break
        if y0 is None:  # IV*
            return ReductionData(v, pot, n, _val0(E.c4, lv), None, E)
        E = E.transform(t=pi * pi * lv.lift(y0))
        assert _val0(E.a3, lv) >= 3 and _val0(E.a6, lv) >= 5

        if _val0(E.a4, lv) < 4:  # III*
            return ReductionData(v, pot, n, _val0(E.c4, lv), None, E)
        if _val0(E.a6, lv) < 6:  # II*
            return ReductionData(v, pot, n, _val0(E.c4, lv), None, E)

        # non-minimal: rescale and loop
        E = E.transform(u=pi)


def _rmul(rf, k: int, x):
    acc = rf.zero()
    for _ in range(k):
        acc = rf.add(acc, x)
    return acc


def _tate_normalize(E: EllipticCurve, lv: LocalField, pi: NFElem, lifts) -> EllipticCurve:
    """Find (s, t) with pi | a1', a2'; pi^2 | a3', a4'; pi^3 | a6'."""
    if lv.p != 2:
        cand = E.transform(s=-E.a1 / 2, t=-E.a3 / 2)
        assert _tate_normalized(cand, lv)
        return cand
    t_digits = [l0 + pi * l1 for l0 in lifts for l1 in lifts]
    for sb in lifts:
        for td in t_digits:
            cand = E.transform(s=sb, t=pi * td)
            if _tate_normalized(cand, lv):
                return cand
    raise AssertionError("tate normalization search failed")


def _tate_normalized(E: EllipticCurve, lv: LocalField) -> bool:
    return (_val0(E.a1, lv) >= 1 and _val0(E.a2, lv) >= 1
            and _val0(E.a3, lv) >= 2 and _val0(E.a4, lv) >= 2
            and _val0(E.a6, lv) >= 3)


def minimal_model_at(E: EllipticCurve, v: Place) -> EllipticCurve:
    return reduction_type(E, v).minimal_model


# ----------------------------------------------------------------------------
# Local representation types and root numbers


@dataclass
class LocalRepType:
    kind: str
    place: Place
    split_sign: Optional[int] = None  # special unramified
    # special ramified quadratic: the two multiplicative-making ramified classes
    split_twist: Optional[NFElem] = None      # eta with E^eta split multiplicative
    nonsplit_twist: Optional[NFElem] = None
    good_twist: Optional[NFElem] = None       # principal ramified: eta with E^eta good
    detail: str = ""

    def is_supported(self):
        return self.kind != UNSUPPORTED


def _ramified_classes(lv: LocalField) -> list[NFElem]:
    return [d for d in lv.square_class_reps() if not is_unramified_class(d, lv)]


def local_rep_type(E: EllipticCurve, v: Place) -> LocalRepType:
    rd = reduction_type(E, v)
    lv = completion(E.field, v)
    if rd.red_type == GOOD:
        return LocalRepType(PRINCIPAL_UNRAMIFIED, v)
    if rd.is_multiplicative():
        return LocalRepType(SPECIAL_UNRAMIFIED, v, split_sign=rd.split_sign)
    if rd.red_type == ADDITIVE_POT_MULT:
        split_tw = nonsplit_tw = None
        for eta in _ramified_classes(lv):
            rde = reduction_type(quadratic_twist(E, eta), v)
            if rde.red_type == SPLIT_MULT:
                split_tw = eta
            elif rde.red_type == NONSPLIT_MULT:
                nonsplit_tw = eta
        assert split_tw is not None and nonsplit_tw is not None, \
            "potentially multiplicative place without its two multiplicative twists"
        return LocalRepType(SPECIAL_RAMIFIED_QUAD, v,
                            split_twist=split_tw, nonsplit_twist=nonsplit_tw)
    # additive, potentially good: certified only when a quadratic twist is good
    for eta in _ramified_classes(lv):
        if reduction_type(quadratic_twist(E, eta), v).red_type == GOOD:
            return LocalRepType(PRINCIPAL_RAMIFIED_QUAD, v, good_twist=eta)
    return LocalRepType(UNSUPPORTED, v,
                        detail="no ramified quadratic twist with good reduction")


def local_root_number(E: EllipticCurve, v: Place) -> int:
    """w_v(E); archimedean places contribute -1 (weight-2 convention)."""
    if v.kind in ("real", "complex"):
        return -1
    rep = local_rep_type(E, v)
    lv = completion(E.field, v)
    if rep.kind == PRINCIPAL_UNRAMIFIED:
        return 1
    if rep.kind == SPECIAL_UNRAMIFIED:
        return -rep.split_sign  # split -> -1, nonsplit -> +1
    if rep.kind == SPECIAL_RAMIFIED_QUAD:
        return hilbert_symbol(E.field.elem(-1), rep.split_twist, lv)
    if rep.kind == PRINCIPAL_RAMIFIED_QUAD:
        return hilbert_symbol(E.field.elem(-1), rep.good_twist, lv)
    raise UnsupportedRepresentation(v, rep.detail)


def bad_place_candidates(E: EllipticCurve) -> list[Place]:
    """Finite places that could carry bad reduction (support of Delta and denominators)."""
    K = E.field
    primes = set()
    nd = E.disc.norm() if K.m is not None else E.disc.a
    for n in (nd.numerator, nd.denominator):
        primes.update(factorint(abs(n)).keys())
    for a in E.ainvs():
        if not a.is_zero():
            _, _, D = a.as_integer_triple()
            primes.update(factorint(D).keys())
    out = []
    for p in sorted(primes):
        out.extend(places_above(K, p))
    return out


def bad_places(E: EllipticCurve) -> list[Place]:
    return [v for v in bad_place_candidates(E) if not reduction_type(E, v).is_good()]


def root_number(E: EllipticCurve) -> int:
    """Global root number w(E) as a product of local terms (supported curves only)."""
    w = 1
    for v in archimedean_places(E.field):
        w *= -1
    for v in bad_places(E):
        w *= local_root_number(E, v)
    return w


def rank_parity(E: EllipticCurve) -> str:
    """Parity of the analytic rank: 'even' iff w(E) = +1."""
    return "even" if root_number(E) == 1 else "odd"
