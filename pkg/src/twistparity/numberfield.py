"""Base fields: Q and quadratic fields Q(sqrt m) with class number 1.

Elements are kept as exact global objects a + b*sqrt(m) with Fraction
coordinates; places carry their splitting data and a principal generator
(class number 1 makes one exist).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from sympy import divisors, isprime, primerange

from .errors import (
    ClassNumberNotOne,
    GeneratorSearchExhausted,
    Malformed,
    NotSquarefree,
    ZeroElement,
)

# Imaginary quadratic fields with class number one (Baker-Heegner-Stark list).
IMAGINARY_CLASS_NUMBER_ONE = (-1, -2, -3, -7, -11, -19, -43, -67, -163)

UNIT_SEARCH_BOUND = 10 ** 6
GENERATOR_SEARCH_BOUND = 10 ** 6


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers, n != 0."""
    if n == 0:
        raise ZeroElement("kronecker symbol with n = 0")
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker(a, -n)
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol for odd prime p via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 1
    return True


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a rational, or None."""
    if q < 0:
        return None
    if q == 0:
        return Fraction(0)
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def dyadic_root_of_m(m: int, bits: int) -> int:
    """The 2-adic square root r of m (m = 1 mod 8) with r = 1 mod 4, modulo 2^bits."""
    assert m % 8 == 1
    r = 1
    for k in range(3, bits):
        if (r * r - m) % (1 << (k + 1)) != 0:
            r += 1 << (k - 1)
    return r % (1 << bits)


def odd_root_of_m(m: int, p: int, bits: int) -> int:
    """Hensel-lifted root of x^2 = m mod p^bits for odd p with the smaller residue mod p."""
    r = None
    for t in range(p):
        if (t * t - m) % p == 0:
            r = t
            break
    assert r is not None, "no root mod p (non-split prime?)"
    r = min(r, (p - r) % p) if r != 0 else 0
    mod = p
    for _ in range(bits - 1):
        mod *= p
        # Newton step: r <- r - (r^2 - m)/(2r)
        inv = pow(2 * r % mod, -1, mod)
        r = (r - (r * r - m) * inv) % mod
    return r


# ----------------------------------------------------------------------------
# Field elements


class NFElem:
    """a + b*sqrt(m) with Fraction coordinates; b = 0 identically over Q."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: "Field", a, b=0):
        self.field = field
        self.a = Fraction(a)
        self.b = Fraction(b)
        if field.m is None and self.b != 0:
            raise Malformed("nonzero sqrt coordinate over Q")

    # -- basic predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, NFElem):
            if other.field.key != self.field.key:
                raise Malformed("elements of different fields")
            return other
        return NFElem(self.field, Fraction(other))

    def __add__(self, other):
        o = self._coerce(other)
        return NFElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NFElem(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return NFElem(self.field, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        m = self.field.m or 0
        return NFElem(
            self.field,
            self.a * o.a + self.b * o.b * m,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroElement("division by zero element")
        if self.field.m is None:
            return NFElem(self.field, self.a / o.a)
        n = o.norm()
        num = self * o.conj()
        return NFElem(self.field, num.a / n, num.b / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (NFElem(self.field, 1) / self) ** (-n)
        result = NFElem(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "NFElem":
        return NFElem(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        if self.field.m is None:
            return self.a
        return self.a * self.a - self.field.m * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    # -- comparisons / hashing --------------------------------------------
    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (Malformed, ValueError, TypeError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.field.key, self.a, self.b))

    # -- embeddings --------------------------------------------------------
    def sign_at_real(self, index: int = 1) -> int:
        """Exact sign of the image under the real embedding (index 1: sqrt(m) > 0)."""
        a, b = self.a, self.b
        if index == 2:
            b = -b
        if b == 0:
            return 0 if a == 0 else (1 if a > 0 else -1)
        m = self.field.m
        if m is None or m < 0:
            raise Malformed("real embedding of a non-real element")
        if a == 0:
            return 1 if b > 0 else -1
        sa = 1 if a > 0 else -1
        sb = 1 if b > 0 else -1
        if sa == sb:
            return sa
        return sa if a * a > m * b * b else sb

    # -- integral coordinates ----------------------------------------------
    def as_integer_triple(self) -> tuple[int, int, int]:
        """(A, B, D) with self = (A + B*sqrt(m)) / D, D > 0, gcd(A, B, D) = 1."""
        d = math.lcm(self.a.denominator, self.b.denominator)
        A = int(self.a * d)
        B = int(self.b * d)
        g = math.gcd(math.gcd(abs(A), abs(B)), d)
        return A // g, B // g, d // g

    def omega_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates in the integral basis {1, omega} of O_K."""
        K = self.field
        if K.m is None:
            return self.a, Fraction(0)
        if K.m % 4 == 1:
            # omega = (1 + sqrt m)/2, so sqrt m = 2*omega - 1
            return self.a - self.b, 2 * self.b
        return self.a, self.b

    # -- formatting ----------------------------------------------------------
    def __repr__(self):
        return f"NFElem({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        bt = "w" if self.b == 1 else ("-w" if self.b == -1 else f"{self.b}*w")
        if self.a == 0:
            return bt
        sign = "+" if self.b > 0 else ""
        return f"{self.a}{sign}{bt}"


# ----------------------------------------------------------------------------
# Places


@dataclass(frozen=True, eq=False)
class Place:
    """A place of K: a real embedding, the complex place, or a finite prime."""

    kind: str  # "real" | "complex" | "finite"
    # real places: embedding index; finite split places: conjugate index
    index: int = 1
    p: Optional[int] = None
    splitting: Optional[str] = None  # None over Q, else split | inert | ramified
    generator: Optional[NFElem] = None
    residue_norm: Optional[int] = None

    def is_finite(self) -> bool:
        return self.kind == "finite"

    def sort_key(self):
        if self.kind == "finite":
            return (1, self.p, self.index)
        return (0, 0, self.index)

    def key(self):
        if self.kind == "finite":
            return ("finite", self.p, self.index)
        return (self.kind, self.index)

    def __str__(self):
        if self.kind == "real":
            return f"oo_{self.index}"
        if self.kind == "complex":
            return "oo_C"
        if self.generator is not None and not self.generator.is_rational():
            return f"({self.generator})"
        return f"({self.p})"

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, Place) and self.key() == other.key()


# ----------------------------------------------------------------------------
# Field


@dataclass(frozen=True, eq=False)
class Field:
    """Q (kind='rational') or a class-number-1 quadratic field Q(sqrt m)."""

    kind: str
    m: Optional[int] = None
    disc: int = 1
    class_number: int = 1
    unit_square_classes: tuple = ()  # transversal of O_K^x / (O_K^x)^2, trivial first
    fundamental_unit: Optional[NFElem] = None

    @property
    def key(self):
        return (self.kind, self.m)

    @property
    def degree(self) -> int:
        return 1 if self.m is None else 2

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return "Q" if self.m is None else f"Q(sqrt {self.m})"

    # -- element helpers -----------------------------------------------------
    def one(self) -> NFElem:
        return NFElem(self, 1)

    def zero(self) -> NFElem:
        return NFElem(self, 0)

    def elem(self, a, b=0) -> NFElem:
        return NFElem(self, a, b)

    def sqrt_m(self) -> NFElem:
        if self.m is None:
            raise Malformed("sqrt(m) does not exist over Q")
        return NFElem(self, 0, 1)

    def omega(self) -> NFElem:
        """Generator of O_K over Z."""
        if self.m is None:
            return self.one()
        if self.m % 4 == 1:
            return NFElem(self, Fraction(1, 2), Fraction(1, 2))
        return self.sqrt_m()

    def omega_trace_norm(self) -> tuple[int, int]:
        """(t, n) with omega^2 = t*omega - n."""
        if self.m is None:
            return (2, 1)
        if self.m % 4 == 1:
            return (1, (1 - self.m) // 4)
        return (0, -self.m)

    def is_totally_real(self) -> bool:
        return self.m is None or self.m > 0

    def is_imaginary(self) -> bool:
        return self.m is not None and self.m < 0


# ----------------------------------------------------------------------------
# Class number machinery (desk scale, exact)


def pell_fundamental_unit(m: int) -> tuple[int, int, bool]:
    """Smallest unit > 1 of O_K for real quadratic K as (x, y, half)."""
    for y in range(1, UNIT_SEARCH_BOUND):
        my2 = m * y * y
        if m % 4 == 1:
            xs = []
            for target in (my2 + 4, my2 - 4):
                if target >= 0:
                    x = math.isqrt(target)
                    if x * x == target and (x - y) % 2 == 0:
                        xs.append(x)
            if xs:
                return (min(xs), y, True)
        xs = []
        for target in (my2 + 1, my2 - 1):
            if target >= 0:
                x = math.isqrt(target)
                if x * x == target:
                    xs.append(x)
        if xs:
            return (min(xs), y, False)
    raise GeneratorSearchExhausted(f"fundamental unit of Q(sqrt {m})", UNIT_SEARCH_BOUND)


def _reduced_indefinite_forms(D: int) -> set:
    """All reduced forms (a,b,c) with b^2-4ac = D > 0 non-square."""
    sq = math.isqrt(D)

    def reduced(a, b):
        if not (0 < b <= sq):
            return False
        t = 2 * abs(a)
        lhs = D + t * t - b * b
        if lhs >= 0 and lhs * lhs >= 4 * t * t * D:
            return False
        return True

    forms = set()
    for b in range(1, sq + 1):
        if (D - b * b) % 4 != 0:
            continue
        prod = (D - b * b) // 4  # = |a*c|, a*c < 0
        if prod == 0:
            continue
        for absa in divisors(prod):
            if not reduced(absa, b):
                continue
            for a in (absa, -absa):
                c = (b * b - D) // (4 * a)
                forms.add((a, b, c))
    return forms


def _rho(form, D, sq):
    a, b, c = form
    t = 2 * abs(c)
    b2 = sq - ((sq + b) % t)
    c2 = (b2 * b2 - D) // (4 * c)
    return (c, b2, c2)


def narrow_class_number(D: int) -> int:
    """Cycle count of reduced indefinite forms = narrow class number h+(D)."""
    forms = _reduced_indefinite_forms(D)
    sq = math.isqrt(D)
    cycles = 0
    seen = set()
    for f in forms:
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, D, sq)
            assert g in forms, f"rho left the reduced set: {g}"
    return cycles


def real_quadratic_class_number(m: int) -> int:
    D = m if m % 4 == 1 else 4 * m
    h_plus = narrow_class_number(D)
    x, y, half = pell_fundamental_unit(m)
    denom = 4 if half else 1
    norm = (x * x - m * y * y) // denom
    return h_plus if norm == -1 else h_plus // 2


# ----------------------------------------------------------------------------
# Field construction / parsing


@lru_cache(maxsize=None)
def _make_field(kind: str, m: Optional[int]) -> Field:
    if kind == "rational":
        K = Field(kind="rational", m=None, disc=1)
        object.__setattr__(K, "unit_square_classes", (K.one(), K.elem(-1)))
        return K
    assert m is not None
    if m in (0, 1):
        raise NotSquarefree(f"m = {m} is not allowed")
    if not is_squarefree(m):
        raise NotSquarefree(f"m = {m} is not squarefree")
    disc = m if m % 4 == 1 else 4 * m
    if m < 0:
        if m not in IMAGINARY_CLASS_NUMBER_ONE:
            raise ClassNumberNotOne(m)
        K = Field(kind="quadratic", m=m, disc=disc)
        if m == -1:
            units = (K.one(), K.sqrt_m())  # i generates O^x modulo squares
        else:
            # -1 represents the nontrivial class (for m = -3 it lies in the zeta class)
            units = (K.one(), K.elem(-1))
        object.__setattr__(K, "unit_square_classes", units)
        return K
    h = real_quadratic_class_number(m)
    if h != 1:
        raise ClassNumberNotOne(m, h)
    K = Field(kind="quadratic", m=m, disc=disc)
    x, y, half = pell_fundamental_unit(m)
    denom = 2 if half else 1
    eps = NFElem(K, Fraction(x, denom), Fraction(y, denom))
    object.__setattr__(K, "fundamental_unit", eps)
    object.__setattr__(K, "unit_square_classes", (K.one(), K.elem(-1), eps, -eps))
    return K


def rational_field() -> Field:
    return _make_field("rational", None)


def quadratic_field(m: int) -> Field:
    return _make_field("quadratic", int(m))


_FIELD_RE = re.compile(r"^\s*Q\s*(?:\(\s*sqrt\s*(-?\d+)\s*\))?\s*$")


def parse_field(spec: str) -> Field:
    """Parse "Q" or "Q(sqrt m)"."""
    mt = _FIELD_RE.match(spec)
    if not mt:
        raise Malformed(f"cannot parse field spec {spec!r}")
    if mt.group(1) is None:
        return rational_field()
    return quadratic_field(int(mt.group(1)))


_RAT = r"-?\d+(?:/\d+)?"
_ELEM_RE = re.compile(
    rf"^\s*(?:(?P<a>{_RAT})\s*)?(?:(?P<sign>[+-])?\s*(?:(?P<b>{_RAT})\s*\*\s*)?(?P<w>w))?\s*$"
)


def parse_element(K: Field, text: str) -> NFElem:
    """Parse "<rational>" or "<rational>+<rational>*w" (w = sqrt m)."""
    mt = _ELEM_RE.match(text)
    if not mt or (mt.group("a") is None and mt.group("w") is None):
        raise Malformed(f"cannot parse element {text!r}")
    a = Fraction(mt.group("a")) if mt.group("a") else Fraction(0)
    b = Fraction(0)
    if mt.group("w"):
        b = Fraction(mt.group("b")) if mt.group("b") else Fraction(1)
        if mt.group("sign") == "-":
            b = -b
        if mt.group("a") is not None and mt.group("sign") is None:
            raise Malformed(f"missing sign between terms in {text!r}")
    if b != 0 and K.m is None:
        raise Malformed("element mentions w but the field is Q")
    return NFElem(K, a, b)


# ----------------------------------------------------------------------------
# Places of K


def archimedean_places(K: Field) -> list[Place]:
    if K.m is None:
        return [Place(kind="real", index=1)]
    if K.m < 0:
        return [Place(kind="complex", index=1)]
    return [Place(kind="real", index=1), Place(kind="real", index=2)]


def _find_prime_generator(K: Field, p: int) -> NFElem:
    """Element of norm +-p by bounded search (half coords allowed for m = 1 mod 4)."""
    m = K.m
    assert m is not None
    for b in range(GENERATOR_SEARCH_BOUND):
        mb2 = m * b * b
        candidates = []
        for target in (mb2 + p, mb2 - p):
            if target >= 0:
                a = math.isqrt(target)
                if a * a == target:
                    candidates.append((Fraction(a), Fraction(b)))
        if m % 4 == 1:
            for target in (mb2 + 4 * p, mb2 - 4 * p):
                if target >= 0:
                    a = math.isqrt(target)
                    if a * a == target and (a - b) % 2 == 0:
                        candidates.append((Fraction(a, 2), Fraction(b, 2)))
        if candidates:
            a, bb = sorted(candidates)[0]
            return NFElem(K, a, bb)
    raise GeneratorSearchExhausted(f"generator of a prime above {p} in {K}", GENERATOR_SEARCH_BOUND)


def split_embedding_valuation(x: NFElem, p: int) -> int:
    """v(x) at the index-1 place of a split prime, via the canonical root of m."""
    if x.is_zero():
        raise ZeroElement("valuation of 0")
    m = x.field.m
    A, B, D = x.as_integer_triple()
    n = A * A - m * B * B
    vn = 0
    while n % p == 0:
        n //= p
        vn += 1
    bits = vn + 4
    if p == 2:
        r = dyadic_root_of_m(m, bits)
        mod = 1 << bits
    else:
        r = odd_root_of_m(m, p, bits)
        mod = p ** bits
    t = (A + B * r) % mod
    vt = 0
    while t % p == 0 and vt < vn + 1:
        t //= p
        vt += 1
    vd = 0
    d = D
    while d % p == 0:
        d //= p
        vd += 1
    return vt - vd


@lru_cache(maxsize=None)
def _places_above_cached(field_key, p: int) -> tuple:
    K = _make_field(*field_key)
    return tuple(_places_above(K, p))


def places_above(K: Field, p: int) -> list[Place]:
    """The 1 or 2 places of K over the rational prime p."""
    if not isprime(p):
        raise Malformed(f"{p} is not prime")
    return list(_places_above_cached(K.key, p))


def _places_above(K: Field, p: int) -> list[Place]:
    if K.m is None:
        return [
            Place(kind="finite", index=1, p=p, splitting=None,
                  generator=K.elem(p), residue_norm=p)
        ]
    sym = kronecker(K.disc, p)
    if sym == -1:
        return [
            Place(kind="finite", index=1, p=p, splitting="inert",
                  generator=K.elem(p), residue_norm=p * p)
        ]
    if sym == 0:
        gen = _find_prime_generator(K, p)
        return [
            Place(kind="finite", index=1, p=p, splitting="ramified",
                  generator=gen, residue_norm=p)
        ]
    gen = _find_prime_generator(K, p)
    first = split_embedding_valuation(gen, p) == 1
    g1, g2 = (gen, gen.conj()) if first else (gen.conj(), gen)
    return [
        Place(kind="finite", index=1, p=p, splitting="split", generator=g1, residue_norm=p),
        Place(kind="finite", index=2, p=p, splitting="split", generator=g2, residue_norm=p),
    ]


def all_finite_places(K: Field, primes: Iterable[int]) -> list[Place]:
    out = []
    for p in primes:
        out.extend(places_above(K, p))
    return out


def places_of_norm_up_to(K: Field, X: int) -> list[Place]:
    """Finite places with residue norm <= X, sorted by (norm, p, index)."""
    out = []
    for p in primerange(2, X + 1):
        for v in places_above(K, p):
            if v.residue_norm <= X:
                out.append(v)
    out.sort(key=lambda v: (v.residue_norm, v.p, v.index))
    return out


def global_sqrt(x: NFElem) -> Optional[NFElem]:
    """A square root of x in K, or None."""
    K = x.field
    if x.is_zero():
        return K.zero()
    if K.m is None:
        r = rational_sqrt(x.a)
        return K.elem(r) if r is not None else None
    s0, s1 = x.a, x.b
    if s1 == 0:
        r = rational_sqrt(s0)
        if r is not None:
            return K.elem(r)
        r = rational_sqrt(s0 / K.m)
        if r is not None:
            return NFElem(K, 0, r)
        return None
    t = rational_sqrt(s0 * s0 - K.m * s1 * s1)
    if t is None:
        return None
    for branch in (t, -t):
        c2 = (s0 + branch) / 2
        c = rational_sqrt(c2)
        if c is not None and c != 0:
            d = s1 / (2 * c)
            cand = NFElem(K, c, d)
            if cand * cand == x:
                return cand
    return None


def is_global_square(x: NFElem) -> bool:
    return global_sqrt(x) is not None
