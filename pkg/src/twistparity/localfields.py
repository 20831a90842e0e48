"""Exact arithmetic in completions K_v: valuations, square classes, Hilbert symbols.

Local elements are global field elements read v-adically; all decisions are
finite and exact (Euler criterion at odd residue characteristic, bounded
Hensel-threshold searches at dyadic places).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import PrecisionExhausted, ZeroElement
from .numberfield import (
    Field,
    NFElem,
    Place,
    dyadic_root_of_m,
    odd_root_of_m,
)


# ----------------------------------------------------------------------------
# Residue fields F_q, q = p^f with f <= 2; elements are ints (f=1) or pairs (f=2)


class ResidueField:
    def __init__(self, p: int, f: int, omega_trace: int = 0, omega_norm: int = 0):
        self.p = p
        self.f = f
        self.q = p ** f
        # omega^2 = t*omega - n in the field when f=2
        self.t = omega_trace % p
        self.n = omega_norm % p

    def zero(self):
        return 0 if self.f == 1 else (0, 0)

    def one(self):
        return 1 if self.f == 1 else (1, 0)

    def is_zero(self, x) -> bool:
        return x == self.zero()

    def add(self, x, y):
        if self.f == 1:
            return (x + y) % self.p
        return ((x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p)

    def neg(self, x):
        if self.f == 1:
            return (-x) % self.p
        return ((-x[0]) % self.p, (-x[1]) % self.p)

    def mul(self, x, y):
        if self.f == 1:
            return (x * y) % self.p
        c = x[1] * y[1]
        return (
            (x[0] * y[0] - self.n * c) % self.p,
            (x[0] * y[1] + x[1] * y[0] + self.t * c) % self.p,
        )

    def pow(self, x, k: int):
        r = self.one()
        while k:
            if k & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            k >>= 1
        return r

    def is_square(self, x) -> bool:
        if self.is_zero(x):
            return True
        if self.p == 2:
            return True  # Frobenius is onto in characteristic 2
        return self.pow(x, (self.q - 1) // 2) == self.one()

    def elements(self):
        if self.f == 1:
            return list(range(self.p))
        return [(a, b) for a in range(self.p) for b in range(self.p)]

    def nonsquare(self):
        """Deterministic quadratic non-residue (odd q only)."""
        assert self.p != 2
        if self.f == 1:
            for a in range(2, self.p):
                if not self.is_square(a):
                    return a
        else:
            for b in range(1, self.p):
                for a in range(self.p):
                    if not self.is_square((a, b)):
                        return (a, b)
        raise AssertionError("no non-residue found")


# ----------------------------------------------------------------------------
# Local fields


class LocalField:
    """A completion of K: R, C, Q_p, or a quadratic extension of Q_p."""

    def __init__(self, K: Field, place: Place):
        self.field = K
        self.place = place
        self.place_kind = place.kind
        if place.kind != "finite":
            self.p = None
            self.e = self.f = 0
            self.q = None
            self.uniformizer = None
            self.working_precision = 0
        else:
            self.p = place.p
            if place.splitting == "inert":
                self.e, self.f = 1, 2
            elif place.splitting == "ramified":
                self.e, self.f = 2, 1
            else:  # place of Q, or split
                self.e, self.f = 1, 1
            self.q = self.p ** self.f
            if place.splitting == "inert":
                self.uniformizer = K.elem(self.p)
            else:
                self.uniformizer = place.generator if place.generator is not None else K.elem(self.p)
            v2 = self.e if self.p == 2 else 0
            self.working_precision = 2 * self.e * v2 + 5
        self._residue_field: Optional[ResidueField] = None
        self._square_classes: Optional[list] = None
        self._characters: Optional[list] = None
        self._hilbert_cache: dict = {}
        self._class_index_cache: dict = {}

    # -- identification -------------------------------------------------------
    @property
    def degree_over_qp(self) -> int:
        return self.e * self.f

    @property
    def num_quadratic_characters(self) -> int:
        if self.place_kind == "real":
            return 2
        if self.place_kind == "complex":
            return 1
        if self.p != 2:
            return 4
        return 2 ** (self.degree_over_qp + 2)

    def __str__(self):
        if self.place_kind != "finite":
            return "R" if self.place_kind == "real" else "C"
        return f"{self.field} at {self.place}"

    __repr__ = __str__

    # -- residue machinery ----------------------------------------------------
    def residue_field(self) -> ResidueField:
        if self._residue_field is None:
            K = self.field
            if self.f == 2:
                t, n = K.omega_trace_norm()
                self._residue_field = ResidueField(self.p, 2, t, n)
            else:
                self._residue_field = ResidueField(self.p, 1)
        return self._residue_field

    def lift(self, el) -> NFElem:
        """Lift a residue-field element to O_K."""
        K = self.field
        if self.f == 1:
            return K.elem(el)
        return K.elem(el[0]) + K.elem(el[1]) * K.omega()

    def _omega_bar(self) -> int:
        """Image of omega in the residue field of a ramified place (f = 1, e = 2)."""
        t, n = self.field.omega_trace_norm()
        if self.p == 2:
            return n % 2
        return (t * pow(2, -1, self.p)) % self.p

    def residue(self, x: NFElem):
        """Residue of a v-integral x."""
        if self.place_kind != "finite":
            raise ValueError("residue at an archimedean place")
        K = self.field
        p = self.p
        if K.m is None:
            fr = x.a
            return fr.numerator * pow(fr.denominator, -1, p) % p
        if self.place.splitting == "split":
            y = x if self.place.index == 1 else x.conj()
            A, B, D = y.as_integer_triple()
            d = 0
            while D % p == 0:
                D //= p
                d += 1
            bits = d + 2
            if p == 2:
                r = dyadic_root_of_m(K.m, bits + 2)
                mod = 1 << (bits + 2)
            else:
                r = odd_root_of_m(K.m, p, bits)
                mod = p ** bits
            t = (A + B * r) % mod
            if t % (p ** d) != 0:
                raise PrecisionExhausted("residue of non-integral element")
            t //= p ** d
            return t * pow(D, -1, p) % p
        c0, c1 = x.omega_coords()
        r0 = c0.numerator * pow(c0.denominator, -1, p) % p
        r1 = c1.numerator * pow(c1.denominator, -1, p) % p
        if self.place.splitting == "inert":
            return (r0, r1)
        # ramified: f = 1
        return (r0 + r1 * self._omega_bar()) % p

    # -- square classes / characters -------------------------------------------
    def square_class_reps(self) -> list[NFElem]:
        if self._square_classes is None:
            self._square_classes = _build_square_classes(self)
        return self._square_classes

    def characters(self) -> list["LocalCharacter"]:
        if self._characters is None:
            self._characters = [LocalCharacter(self, LocalSquareClass(self, d))
                                for d in self.square_class_reps()]
        return self._characters


@dataclass(frozen=True, eq=False)
class LocalSquareClass:
    """A class of K_v^x modulo squares, named by a global representative."""

    local_field: LocalField
    rep: NFElem

    def index(self) -> int:
        return square_class_index(self.rep, self.local_field)

    def __eq__(self, other):
        if not isinstance(other, LocalSquareClass):
            return NotImplemented
        return self.local_field is other.local_field and self.index() == other.index()

    def __hash__(self):
        return hash((id(self.local_field), self.index()))


@dataclass(frozen=True, eq=False)
class LocalCharacter:
    """Quadratic character x -> (x, delta)_v of K_v^x."""

    local_field: LocalField
    cls: LocalSquareClass

    @property
    def delta(self) -> NFElem:
        return self.cls.rep

    def __call__(self, x: NFElem) -> int:
        return eval_local_char(self, x)

    def is_trivial(self) -> bool:
        v = self.local_field
        if v.place_kind == "complex":
            return True
        if v.place_kind == "real":
            return self.delta.sign_at_real(v.place.index) > 0
        return self.cls.index() == 0

    def is_unramified(self) -> bool:
        return is_unramified_class(self.delta, self.local_field)

    def __mul__(self, other: "LocalCharacter") -> "LocalCharacter":
        assert self.local_field is other.local_field
        prod = self.delta * other.delta
        v = self.local_field
        if v.place_kind == "finite":
            reps = v.square_class_reps()
            prod = reps[square_class_index(prod, v)]
        return LocalCharacter(v, LocalSquareClass(v, prod))

    def __eq__(self, other):
        if not isinstance(other, LocalCharacter):
            return NotImplemented
        return self.cls == other.cls

    def __hash__(self):
        return hash(self.cls)

    def __str__(self):
        return f"chi[{self.delta}]@{self.local_field}"


# ----------------------------------------------------------------------------
# Core operations


def completion(K: Field, v: Place) -> LocalField:
    return _completion_cached(K.key, v.key())


@lru_cache(maxsize=None)
def _completion_cached(field_key, place_key) -> LocalField:
    from .numberfield import _make_field, archimedean_places, places_above

    K = _make_field(*field_key)
    if place_key[0] in ("real", "complex"):
        for v in archimedean_places(K):
            if v.key() == place_key:
                return LocalField(K, v)
        raise ValueError(f"no archimedean place {place_key} in {K}")
    _, p, index = place_key
    for v in places_above(K, p):
        if v.key() == place_key:
            return LocalField(K, v)
    raise ValueError(f"no place {place_key} in {K}")


def valuation(x: NFElem, v: LocalField) -> int:
    """Normalized v-adic valuation (v(uniformizer) = 1)."""
    if x.is_zero():
        raise ZeroElement("valuation of 0")
    if v.place_kind != "finite":
        raise ValueError("valuation at an archimedean place")
    p = v.p
    K = x.field
    if K.m is None:
        return _vp_fraction(x.a, p)
    spl = v.place.splitting
    nval = _vp_fraction(x.norm(), p)
    if spl == "inert":
        assert nval % 2 == 0
        return nval // 2
    if spl == "ramified":
        return nval
    # split
    y = x if v.place.index == 1 else x.conj()
    A, B, D = y.as_integer_triple()
    num = A * A - K.m * B * B
    vn = 0
    while num % p == 0:
        num //= p
        vn += 1
    bits = vn + 4
    if p == 2:
        r = dyadic_root_of_m(K.m, bits)
        mod = 1 << bits
    else:
        r = odd_root_of_m(K.m, p, bits)
        mod = p ** bits
    t = (A + B * r) % mod
    vt = 0
    while vt <= vn and t % p == 0:
        t //= p
        vt += 1
    if vt > vn:
        raise PrecisionExhausted("split valuation did not resolve")
    vd = _vp_int(D, p)
    return vt - vd


def _vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ZeroElement("valuation of integer 0")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _vp_fraction(fr: Fraction, p: int) -> int:
    if fr == 0:
        raise ZeroElement("valuation of 0")
    return _vp_int(fr.numerator, p) - _vp_int(fr.denominator, p)


def unit_part(x: NFElem, v: LocalField) -> tuple[int, NFElem]:
    n = valuation(x, v)
    return n, x / v.uniformizer ** n


def is_square_local(x: NFElem, v: LocalField) -> bool:
    """Is x a square in K_v?"""
    if x.is_zero():
        raise ZeroElement("is_square_local(0)")
    if v.place_kind == "complex":
        return True
    if v.place_kind == "real":
        return x.sign_at_real(v.place.index) > 0
    n, u = unit_part(x, v)
    if n % 2 != 0:
        return False
    if v.p != 2:
        return v.residue_field().is_square(v.residue(u))
    return _dyadic_unit_is_square(u, v)


def _dyadic_unit_is_square(u: NFElem, v: LocalField) -> bool:
    """Finite search: u a unit, test y^2 = u mod pi^(2 v(2) + 1)."""
    e = v.e
    need = 2 * e + 1
    K = u.field
    if v.degree_over_qp == 1:
        # Q_2: classic criterion u = 1 mod 8
        return _dyadic_int_image(u, v, 3) % 8 == 1
    om = K.omega()
    for y0 in range(8):
        for y1 in range(8):
            y = K.elem(y0) + K.elem(y1) * om
            w = y * y - u
            if w.is_zero() or _pi_valuation_at_least(w, v, need):
                return True
    return False


def _pi_valuation_at_least(w: NFElem, v: LocalField, bound: int) -> bool:
    if w.is_zero():
        return True
    return valuation(w, v) >= bound


def _dyadic_int_image(x: NFElem, v: LocalField, bits: int) -> int:
    """Image of x in Z/2^bits for a place with K_v = Q_2 (x v-integral)."""
    K = x.field
    if K.m is None:
        fr = x.a
        num, den = fr.numerator, fr.denominator
        d = _vp_int(den, 2) if den % 2 == 0 else 0
        assert d == 0, "non-integral input"
        return num * pow(den, -1, 1 << bits) % (1 << bits)
    y = x if v.place.index == 1 else x.conj()
    A, B, D = y.as_integer_triple()
    d = _vp_int(D, 2) if D % 2 == 0 else 0
    r = dyadic_root_of_m(K.m, bits + d + 2)
    mod = 1 << (bits + d + 2)
    t = (A + B * r) % mod
    assert t % (1 << d) == 0 or t == 0
    t >>= d
    Dp = D >> d
    return t * pow(Dp, -1, 1 << bits) % (1 << bits)


# ----------------------------------------------------------------------------
# Hilbert symbols


def hilbert_symbol(x: NFElem, y: NFElem, v: LocalField) -> int:
    """(x, y)_v = +1 iff z^2 = x u^2 + y w^2 has a nontrivial K_v-solution."""
    if x.is_zero() or y.is_zero():
        raise ZeroElement("hilbert symbol with zero argument")
    if v.place_kind == "complex":
        return 1
    if v.place_kind == "real":
        i = v.place.index
        return -1 if (x.sign_at_real(i) < 0 and y.sign_at_real(i) < 0) else 1
    if v.p != 2:
        return _hilbert_tame(x, y, v)
    ix = square_class_index(x, v)
    iy = square_class_index(y, v)
    key = (ix, iy) if ix <= iy else (iy, ix)
    cached = v._hilbert_cache.get(key)
    if cached is None:
        reps = v.square_class_reps()
        cached = _hilbert_dyadic_search(reps[key[0]], reps[key[1]], v)
        v._hilbert_cache[key] = cached
    return cached


def _hilbert_tame(x: NFElem, y: NFElem, v: LocalField) -> int:
    a, u = unit_part(x, v)
    b, w = unit_part(y, v)
    rf = v.residue_field()
    sign = 1
    if (a * b) % 2 == 1 and (v.q - 1) // 2 % 2 == 1:
        sign = -sign
    if b % 2 == 1 and not rf.is_square(v.residue(u)):
        sign = -sign
    if a % 2 == 1 and not rf.is_square(v.residue(w)):
        sign = -sign
    return sign


def _hilbert_dyadic_search(x: NFElem, y: NFElem, v: LocalField) -> int:
    """Finite search for a primitive zero of z^2 - x u^2 - y w^2 mod pi^(2 v(4) + 1)."""
    e = v.e
    need = 4 * e + 1
    if v.degree_over_qp == 1:
        return _dyadic_search_q2(x, y, v, need)
    if v.e == 1:
        return _dyadic_search_inert(x, y, v, need)
    return _dyadic_search_ramified(x, y, v, need)


def _strip_even_valuation(x: NFElem, v: LocalField) -> NFElem:
    n = valuation(x, v)
    k = n - (n % 2)
    return x / v.uniformizer ** k


def _dyadic_search_q2(x: NFElem, y: NFElem, v: LocalField, need: int) -> int:
    # strip even uniformizer powers, then embed directly: at a split place the
    # uniformizer's 2-adic image is 2*(odd unit), so images cannot be rebuilt
    # from the unit part by bit shifts
    x = _strip_even_valuation(x, v)
    y = _strip_even_valuation(y, v)
    mod = 1 << need
    xi = _dyadic_int_image(x, v, need) % mod
    yi = _dyadic_int_image(y, v, need) % mod
    rng = np.arange(mod, dtype=np.int64)
    u2 = (rng * rng) % mod
    # case z = 1
    f = (1 - xi * u2[:, None] - yi * u2[None, :]) % mod
    if np.any(f == 0):
        return 1
    # case u = 1: z = 2 z'
    zz = (4 * u2) % mod
    f = (zz[:, None] - xi - yi * u2[None, :]) % mod
    if np.any(f == 0):
        return 1
    # case w = 1: z = 2 z', u = 2 u'
    f = (zz[:, None] - (xi * zz[None, :]) % mod - yi) % mod
    if np.any(f == 0):
        return 1
    return -1


def _coords_mod(x: NFElem, modulus: int) -> tuple[int, int]:
    c0, c1 = x.omega_coords()
    r0 = c0.numerator * pow(c0.denominator, -1, modulus) % modulus
    r1 = c1.numerator * pow(c1.denominator, -1, modulus) % modulus
    return r0, r1


def _dyadic_search_inert(x: NFElem, y: NFElem, v: LocalField, need: int) -> int:
    """Inert place over 2, f = 2: pi = 2, work in (O/2^need) with omega reduction."""
    x = _strip_even_valuation(x, v)
    y = _strip_even_valuation(y, v)
    K = x.field
    t, n = K.omega_trace_norm()
    M = 1 << need

    x0, x1 = _coords_mod(x, M)
    y0, y1 = _coords_mod(y, M)

    a = np.arange(M, dtype=np.int64)
    A, B = np.meshgrid(a, a, indexing="ij")
    # squares (A + B om)^2 = A^2 - n B^2 + (2AB + t B^2) om
    sq0 = (A * A - n * B * B) % M
    sq1 = (2 * A * B + t * B * B) % M
    sq0 = sq0.ravel()
    sq1 = sq1.ravel()

    def times(c0, c1, d0, d1):
        e0 = (c0 * d0 - n * c1 * d1) % M
        e1 = (c0 * d1 + c1 * d0 + t * c1 * d1) % M
        return e0, e1

    xu0, xu1 = times(x0, x1, sq0, sq1)
    yw0, yw1 = times(y0, y1, sq0, sq1)

    # case z = 1
    f0 = (1 - xu0[:, None] - yw0[None, :]) % M
    f1 = (-xu1[:, None] - yw1[None, :]) % M
    if np.any((f0 == 0) & (f1 == 0)):
        return 1
    # case u = 1: z = 2 z'
    z0 = (4 * sq0) % M
    z1 = (4 * sq1) % M
    f0 = (z0[:, None] - x0 - yw0[None, :]) % M
    f1 = (z1[:, None] - x1 - yw1[None, :]) % M
    if np.any((f0 == 0) & (f1 == 0)):
        return 1
    # case w = 1: z = 2 z', u = 2 u'
    xz0, xz1 = times(x0, x1, (4 * sq0) % M, (4 * sq1) % M)
    f0 = (z0[:, None] - xz0[None, :] - y0) % M
    f1 = (z1[:, None] - xz1[None, :] - y1) % M
    if np.any((f0 == 0) & (f1 == 0)):
        return 1
    return -1


def _dyadic_search_ramified(x: NFElem, y: NFElem, v: LocalField, need: int) -> int:
    """Ramified place over 2 (e = 2): coords mod 2^5 cover O/pi^need, test via norms."""
    x = _strip_even_valuation(x, v)
    y = _strip_even_valuation(y, v)
    K = x.field
    m = K.m
    C = 5  # 2^5 = pi^10 covers pi^9
    M = 1 << C
    mask = (1 << need) - 1

    x0, x1 = _coords_mod(x, M)
    y0, y1 = _coords_mod(y, M)

    a = np.arange(M, dtype=np.int64)
    A, B = np.meshgrid(a, a, indexing="ij")
    sq0 = (A * A + m * B * B) % M  # omega = sqrt(m): (A + B w)^2 = A^2 + m B^2 + 2AB w
    sq1 = (2 * A * B) % M
    sq0 = sq0.ravel()
    sq1 = sq1.ravel()

    def times(c0, c1, d0, d1):
        e0 = (c0 * d0 + m * c1 * d1) % M
        e1 = (c0 * d1 + c1 * d0) % M
        return e0, e1

    def any_zero(f0, f1):
        # v_pi(f) >= need  <=>  2^need | N(f) = f0^2 - m f1^2, computed exactly
        N = f0 * f0 - m * f1 * f1
        return np.any(N & mask == 0)

    xu0, xu1 = times(x0, x1, sq0, sq1)
    yw0, yw1 = times(y0, y1, sq0, sq1)

    f0 = (1 - xu0[:, None] - yw0[None, :]) % M
    f1 = (-xu1[:, None] - yw1[None, :]) % M
    if any_zero(f0, f1):
        return 1
    # u = 1 case: z ranges over pi * box; pi * (A + B w) coords via times with pi coords
    p0, p1 = _coords_mod(v.uniformizer, M)
    piA0, piA1 = times(p0, p1, A.ravel() % M, B.ravel() % M)
    zsq0, zsq1 = times(piA0, piA1, piA0, piA1)  # (pi t)^2
    f0 = (zsq0[:, None] - x0 - yw0[None, :]) % M
    f1 = (zsq1[:, None] - x1 - yw1[None, :]) % M
    if any_zero(f0, f1):
        return 1
    # w = 1 case: z = pi t, u = pi s
    xz0, xz1 = times(x0, x1, zsq0, zsq1)
    f0 = (zsq0[:, None] - xz0[None, :] - y0) % M
    f1 = (zsq1[:, None] - xz1[None, :] - y1) % M
    if any_zero(f0, f1):
        return 1
    return -1


# ----------------------------------------------------------------------------
# Square classes and character groups


def _unit_candidates(K: Field, bound: int = 6):
    """Deterministic stream of small nonzero elements of O_K."""
    om = K.omega()
    seen = []
    for radius in range(1, bound + 1):
        for c0 in range(-radius, radius + 1):
            for c1 in range(-radius, radius + 1):
                if max(abs(c0), abs(c1)) != radius:
                    continue
                if c1 == 0 and c0 == 0:
                    continue
                el = K.elem(c0) + K.elem(c1) * om
                if not el.is_zero():
                    seen.append(el)
    return seen


def _build_square_classes(v: LocalField) -> list[NFElem]:
    K = v.field
    if v.place_kind == "complex":
        return [K.one()]
    if v.place_kind == "real":
        return [K.one(), K.elem(-1)]
    p = v.p
    pi = v.uniformizer
    if p != 2:
        rf = v.residue_field()
        ns = rf.nonsquare()
        u = v.lift(ns)
        return [K.one(), u, pi, u * pi]
    if v.degree_over_qp == 1:
        units = [K.one(), K.elem(-1), K.elem(5), K.elem(-5)]
        return units + [r * pi for r in units]
    # quadratic extension of Q_2: greedy unit classes, then times pi
    target = v.num_quadratic_characters // 2
    unit_reps = [K.one()]
    for cand in _unit_candidates(K):
        if len(unit_reps) >= target:
            break
        if valuation(cand, v) != 0:
            continue
        if any(is_square_local(cand / r, v) for r in unit_reps):
            continue
        unit_reps.append(cand)
    assert len(unit_reps) == target, f"found only {len(unit_reps)} unit classes at {v}"
    return unit_reps + [r * pi for r in unit_reps]


def square_class_index(x: NFElem, v: LocalField) -> int:
    """Index of the square class of x in square_class_reps(v)."""
    if x.is_zero():
        raise ZeroElement("square class of 0")
    key = (x.a, x.b)
    hit = v._class_index_cache.get(key)
    if hit is not None:
        return hit
    if v.place_kind == "real":
        idx = 0 if x.sign_at_real(v.place.index) > 0 else 1
    elif v.place_kind == "complex":
        idx = 0
    elif v.p != 2:
        n, u = unit_part(x, v)
        res_sq = v.residue_field().is_square(v.residue(u))
        idx = (0 if res_sq else 1) + (0 if n % 2 == 0 else 2)
    else:
        reps = v.square_class_reps()
        idx = None
        n = valuation(x, v)
        parity = n % 2
        half = len(reps) // 2
        rng = range(half) if parity == 0 else range(half, len(reps))
        xs = x / v.uniformizer ** (n - parity)
        for i in rng:
            if is_square_local(xs / reps[i], v):
                idx = i
                break
        assert idx is not None, "element matched no square class"
    v._class_index_cache[key] = idx
    return idx


def local_quadratic_characters(v: LocalField) -> list[LocalCharacter]:
    """All quadratic characters of K_v^x, trivial first, closed under product."""
    return v.characters()


def eval_local_char(chi: LocalCharacter, x: NFElem) -> int:
    if x.is_zero():
        raise ZeroElement("character evaluated at 0")
    return hilbert_symbol(x, chi.delta, chi.local_field)


def is_unramified_class(delta: NFElem, v: LocalField) -> bool:
    """True iff (., delta)_v is trivial on local units (K_v(sqrt delta)/K_v unramified)."""
    if v.place_kind == "complex":
        return True
    if v.place_kind == "real":
        return delta.sign_at_real(v.place.index) > 0
    if v.p != 2:
        return valuation(delta, v) % 2 == 0
    reps = v.square_class_reps()
    half = len(reps) // 2
    for i in range(1, half):
        if hilbert_symbol(reps[i], delta, v) != 1:
            return False
    return True
