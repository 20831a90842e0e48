"""Exception types shared across the package."""


class TwistParityError(Exception):
    """Base class for all package errors."""


class Malformed(TwistParityError):
    """Unparseable field, element or curve literal."""


class ZeroElement(TwistParityError):
    """An operation received 0 where a nonzero field element is required."""


class PrecisionExhausted(TwistParityError):
    """A v-adic computation could not distinguish a value from 0 at working precision."""


class NotSquarefree(TwistParityError):
    """Field constructor got m that is not squarefree (or m in {0, 1})."""


class ClassNumberNotOne(TwistParityError):
    def __init__(self, m, h=None):
        self.m = m
        self.h = h
        msg = f"Q(sqrt {m}) has class number {h}" if h else f"Q(sqrt {m}) does not have class number 1"
        super().__init__(msg)


class GeneratorSearchExhausted(TwistParityError):
    """Bounded search for a prime-ideal generator or fundamental unit failed."""

    def __init__(self, what, bound):
        self.what = what
        self.bound = bound
        super().__init__(f"search for {what} exhausted at bound {bound}")


class SingularCurve(TwistParityError):
    """Weierstrass equation with discriminant 0."""


class ZeroTwistParameter(TwistParityError):
    """quadratic_twist called with delta = 0."""


class UnsupportedRepresentation(TwistParityError):
    """A local representation is supercuspidal or cannot be certified from reduction data."""

    def __init__(self, place=None, detail=""):
        self.place = place
        where = f" at {place}" if place is not None else ""
        super().__init__(f"unsupported (supercuspidal or unknown) local representation{where}. {detail}".rstrip())


class SupercuspidalOrUnknown(UnsupportedRepresentation):
    """Alias kept for the classification layer."""


class WrongRepClass(TwistParityError):
    """m_v asked for a representation outside the multiplicative / potentially multiplicative classes."""


class ParityUnavailable(TwistParityError):
    """Rank parity is not computable and no override was supplied."""


class ExplosionGuard(TwistParityError):
    """An exhaustive enumeration would exceed the configured size bound."""

    def __init__(self, size, bound):
        self.size = size
        self.bound = bound
        super().__init__(f"enumeration of size {size} exceeds guard {bound}")
