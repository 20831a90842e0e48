"""Root-number change under quadratic twist: the local sign table, parity
products, local averages kappa_v, and the predicted even-rank density.

Signs live in {+1, -1} as plain ints. The table rows are multiplied by
entries of TABLE_SIGN_HOOKS so a test harness can flip a single row and
watch the twisted-parity oracle break (all hooks are +1 in production).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .curves import (
    EllipticCurve,
    PRINCIPAL_RAMIFIED_QUAD,
    PRINCIPAL_UNRAMIFIED,
    SPECIAL_RAMIFIED_QUAD,
    SPECIAL_UNRAMIFIED,
    UNSUPPORTED,
    LocalRepType,
    bad_places,
    local_rep_type,
    rank_parity,
)
from .errors import (
    ExplosionGuard,
    ParityUnavailable,
    UnsupportedRepresentation,
    WrongRepClass,
)
from .heckechars import QuadChar
from .localfields import (
    LocalCharacter,
    completion,
    eval_local_char,
    is_unramified_class,
    local_quadratic_characters,
    square_class_index,
)
from .numberfield import NFElem, Place, archimedean_places, legendre

# Mutation hooks: one multiplicative sign per implemented nontrivial table row.
TABLE_SIGN_HOOKS = {2: 1, 4: 1, 5: 1, 6: 1, 7: 1, 8: 1, 9: 1}


def _chi_minus_one(chi: LocalCharacter) -> int:
    return eval_local_char(chi, chi.local_field.field.elem(-1))


def _chi_pi(chi: LocalCharacter) -> int:
    return eval_local_char(chi, chi.local_field.uniformizer)


def _same_class(chi: LocalCharacter, delta: NFElem) -> bool:
    v = chi.local_field
    return square_class_index(chi.delta, v) == square_class_index(delta, v)


def n_v(rep: LocalRepType, chi: LocalCharacter) -> int:
    """Local root-number change n_v(chi_v) for the given representation type."""
    if rep.kind == UNSUPPORTED:
        raise UnsupportedRepresentation(rep.place, rep.detail)
    h = TABLE_SIGN_HOOKS
    unram = chi.is_unramified()
    if rep.kind == PRINCIPAL_UNRAMIFIED:
        if unram:
            return 1                                    # row 1
        return h[2] * _chi_minus_one(chi)               # row 2
    if rep.kind == PRINCIPAL_RAMIFIED_QUAD:
        if unram:
            return 1                                    # row 3
        v = chi.local_field
        mu_chi_unram = is_unramified_class(chi.delta * rep.good_twist, v)
        if mu_chi_unram:
            return h[4] * _chi_minus_one(chi)           # row 4
        return h[5] * _chi_minus_one(chi)               # row 5
    if rep.kind == SPECIAL_UNRAMIFIED:
        if unram:
            return h[6] * _chi_pi(chi)                  # row 6
        return h[7] * (-_chi_minus_one(chi) * rep.split_sign)   # row 7
    if rep.kind == SPECIAL_RAMIFIED_QUAD:
        if unram:
            return 1                                    # row 10
        v = chi.local_field
        if is_unramified_class(chi.delta * rep.split_twist, v):
            # row 9: -chi(-pi) mu(pi) = chi(-1) * (-(chi mu)(pi)), and
            # (chi mu)(pi) = +1 iff the chi-twist is split multiplicative
            twist_split = 1 if _same_class(chi, rep.split_twist) else -1
            return h[9] * (_chi_minus_one(chi) * (-twist_split))
        return h[8] * _chi_minus_one(chi)               # row 8
    raise WrongRepClass(f"unknown representation kind {rep.kind}")


def m_v(rep: LocalRepType, chi: LocalCharacter) -> int:
    """The simplified factor m_v = chi_v(-1) * n_v on multiplicative and
    potentially multiplicative places."""
    if rep.kind not in (SPECIAL_UNRAMIFIED, SPECIAL_RAMIFIED_QUAD):
        raise WrongRepClass(f"m_v undefined for {rep.kind}")
    return _chi_minus_one(chi) * n_v(rep, chi)


# ----------------------------------------------------------------------------
# Place partition and parity change


@dataclass
class PlacePartition:
    real_places: tuple
    sigma1: tuple          # (place, LocalRepType) multiplicative
    sigma2: tuple          # (place, LocalRepType) potentially multiplicative
    other_bad: tuple       # principal places (kappa_v = 1)


def place_partition(E: EllipticCurve, assume_principal_series: bool = False) -> PlacePartition:
    real = tuple(v for v in archimedean_places(E.field) if v.kind == "real")
    s1, s2, other = [], [], []
    for v in bad_places(E):
        rep = local_rep_type(E, v)
        if rep.kind == SPECIAL_UNRAMIFIED:
            s1.append((v, rep))
        elif rep.kind == SPECIAL_RAMIFIED_QUAD:
            s2.append((v, rep))
        elif rep.kind == UNSUPPORTED:
            if not assume_principal_series:
                raise UnsupportedRepresentation(v, rep.detail)
            other.append((v, rep))
        else:
            other.append((v, rep))
    return PlacePartition(real, tuple(s1), tuple(s2), tuple(other))


def parity_change(E: EllipticCurve, chi: QuadChar,
                  assume_principal_series: bool = False) -> int:
    """n(chi) = prod over finite places of n_v(chi_v): +1 iff parity preserved."""
    K = E.field
    places = {v.key(): v for v in bad_places(E)}
    for v in chi.ramified_finite():
        places.setdefault(v.key(), v)
    sign = 1
    for v in places.values():
        rep = local_rep_type(E, v)
        lv = completion(K, v)
        chi_v = chi.localize(v)
        if rep.kind == UNSUPPORTED and assume_principal_series:
            sign *= _chi_minus_one(chi_v) if not chi_v.is_unramified() else 1
            continue
        sign *= n_v(rep, chi_v)
    return sign


def parity_change_simplified(E: EllipticCurve, chi: QuadChar,
                             assume_principal_series: bool = False) -> int:
    """The reduced product: real chi_v(-1) times m_v over special places only."""
    part = place_partition(E, assume_principal_series)
    sign = 1
    for v in part.real_places:
        sign *= 1 if chi.delta.sign_at_real(v.index) > 0 else -1
    for v, rep in part.sigma1 + part.sigma2:
        sign *= m_v(rep, chi.localize(v))
    return sign


# ----------------------------------------------------------------------------
# Local factors kappa_v and the global kappa


REAL = "real"
COMPLEX = "complex"
SPLIT = "split"
NONSPLIT = "nonsplit"
POT_MULT_QUADRATIC = "pot_mult_quadratic"
POT_MULT_NONQUADRATIC = "pot_mult_nonquadratic"
OTHER = "other"

SCENARIO_KINDS = (REAL, SPLIT, NONSPLIT, POT_MULT_QUADRATIC, POT_MULT_NONQUADRATIC)


def kappa_v_closed(kind: str, c_size: int = 4) -> Fraction:
    """Closed-form local average of the parity factor over the local characters."""
    if kind == REAL:
        return Fraction(0)
    if kind == COMPLEX:
        return Fraction(1)
    if kind == SPLIT:
        return Fraction(2, c_size) - 1
    if kind == NONSPLIT:
        return 1 - Fraction(2, c_size)
    if kind == POT_MULT_QUADRATIC:
        return 1 - Fraction(2, c_size)
    if kind in (POT_MULT_NONQUADRATIC, OTHER):
        return Fraction(1)
    raise ValueError(f"unknown scenario kind {kind!r}")


def _scenario_of(rep: LocalRepType) -> str:
    if rep.kind == SPECIAL_UNRAMIFIED:
        return SPLIT if rep.split_sign == 1 else NONSPLIT
    if rep.kind == SPECIAL_RAMIFIED_QUAD:
        return POT_MULT_QUADRATIC
    return OTHER


def kappa_v_at(E: EllipticCurve, v: Place) -> Fraction:
    """kappa_v for a place of E (real places give 0, complex 1)."""
    if v.kind == "real":
        return Fraction(0)
    if v.kind == "complex":
        return Fraction(1)
    rep = local_rep_type(E, v)
    if rep.kind == UNSUPPORTED:
        raise UnsupportedRepresentation(v, rep.detail)
    c = completion(E.field, v).num_quadratic_characters
    return kappa_v_closed(_scenario_of(rep), c)


def kappa_v_average(E: EllipticCurve, v: Place) -> Fraction:
    """Direct averaging of m_v over the full local character group."""
    if v.kind == "real":
        lv = completion(E.field, v)
        vals = [_chi_minus_one(chi) for chi in local_quadratic_characters(lv)]
        return Fraction(sum(vals), len(vals))
    if v.kind == "complex":
        return Fraction(1)
    rep = local_rep_type(E, v)
    lv = completion(E.field, v)
    chars = local_quadratic_characters(lv)
    if rep.kind in (SPECIAL_UNRAMIFIED, SPECIAL_RAMIFIED_QUAD):
        vals = [m_v(rep, chi) for chi in chars]
        return Fraction(sum(vals), len(vals))
    return Fraction(1)


@dataclass
class KappaReport:
    curve: str
    field: str
    factors: tuple              # ((place str, scenario kind, Fraction), ...)
    kappa: Fraction
    parity: Optional[str] = None
    predicted_even_density: Optional[Fraction] = None

    def factor_lines(self):
        return [f"kappa_{p} = {k}  ({kind})" for p, kind, k in self.factors]


def kappa(E: EllipticCurve, assume_principal_series: bool = False) -> KappaReport:
    """Global kappa = product over real places and special places."""
    part = place_partition(E, assume_principal_series)
    factors = []
    prod = Fraction(1)
    for v in part.real_places:
        factors.append((str(v), REAL, Fraction(0)))
        prod *= 0
    for v, rep in part.sigma1 + part.sigma2:
        c = completion(E.field, v).num_quadratic_characters
        kind = _scenario_of(rep)
        kv = kappa_v_closed(kind, c)
        factors.append((str(v), kind, kv))
        prod *= kv
    report = KappaReport(str(E), str(E.field), tuple(factors), prod)
    try:
        report.parity = rank_parity(E)
        w = 1 if report.parity == "even" else -1
        report.predicted_even_density = (1 + w * prod) / 2
    except UnsupportedRepresentation:
        pass
    return report


def predicted_even_density(E: EllipticCurve,
                           parity_override: Optional[str] = None,
                           assume_principal_series: bool = False) -> Fraction:
    """(1 + (-1)^rk * kappa)/2 as an exact rational."""
    try:
        rep = kappa(E, assume_principal_series)
    except UnsupportedRepresentation as e:
        if parity_override is None:
            raise ParityUnavailable(
                f"rank parity not computable: {e}; pass parity_override "
                f"(and assume_principal_series for the kappa factors)") from e
        raise
    if parity_override is not None:
        parity = parity_override
    elif rep.parity is not None:
        parity = rep.parity
    else:
        raise ParityUnavailable(
            "rank parity not computable for this curve; pass parity_override")
    w = 1 if parity == "even" else -1
    return (1 + w * rep.kappa) / 2


# ----------------------------------------------------------------------------
# The counting lemma on abstract local-scenario products


@dataclass(frozen=True)
class Scenario:
    kind: str
    c_size: int = 4

    def factor_distribution(self) -> list[tuple[int, int]]:
        """(parity-factor value, multiplicity) over the local character group."""
        c = self.c_size
        if self.kind == REAL:
            assert c == 2
            return [(1, 1), (-1, 1)]
        if self.kind == SPLIT:
            return [(1, 1), (-1, 1), (-1, c - 2)]
        if self.kind == NONSPLIT:
            return [(1, 1), (-1, 1), (1, c - 2)]
        if self.kind == POT_MULT_QUADRATIC:
            return [(1, c - 1), (-1, 1)]
        if self.kind in (POT_MULT_NONQUADRATIC, OTHER, COMPLEX):
            return [(1, c)]
        raise ValueError(f"unknown scenario kind {self.kind!r}")

    def kappa_v(self) -> Fraction:
        return kappa_v_closed(self.kind, self.c_size)


@dataclass(frozen=True)
class GammaConfig:
    scenarios: tuple

    @property
    def gamma_size(self) -> int:
        n = 1
        for s in self.scenarios:
            n *= s.c_size
        return n


@dataclass
class CountingReport:
    gamma_size: int
    plus_count: int
    fraction: Fraction
    predicted: Fraction
    equal: bool


COUNTING_GUARD = 10 ** 8


def counting_check(config: GammaConfig, guard: int = COUNTING_GUARD) -> CountingReport:
    """Exact fraction of Gamma with parity product +1 versus (1 + prod kappa)/2."""
    if config.gamma_size > guard:
        raise ExplosionGuard(config.gamma_size, guard)
    plus, minus = 1, 0
    kprod = Fraction(1)
    for sc in config.scenarios:
        dist = sc.factor_distribution()
        p = sum(mult for val, mult in dist if val == 1)
        q = sum(mult for val, mult in dist if val == -1)
        assert p + q == sc.c_size
        plus, minus = plus * p + minus * q, plus * q + minus * p
        kprod *= sc.kappa_v()
    total = plus + minus
    assert total == config.gamma_size
    fraction = Fraction(plus, total)
    predicted = (1 + kprod) / 2
    return CountingReport(total, plus, fraction, predicted, fraction == predicted)


def random_gamma_config(rng, max_places: int = 6) -> GammaConfig:
    """Randomized mixed scenario list for lemma testing."""
    n = rng.randint(1, max_places)
    scs = []
    for _ in range(n):
        kind = rng.choice(SCENARIO_KINDS)
        if kind == REAL:
            scs.append(Scenario(REAL, 2))
        else:
            scs.append(Scenario(kind, rng.choice((4, 8))))
    return GammaConfig(tuple(scs))


# ----------------------------------------------------------------------------
# Gauss sum spot check


def gauss_sum_check(p: int, tol: float = 1e-6) -> bool:
    """tau(chi)^2 = p * chi(-1) for the quadratic character mod an odd prime p."""
    if p == 2 or p >= 10 ** 4:
        raise ValueError("p must be an odd prime < 10^4")
    tau = 0 + 0j
    for a in range(1, p):
        tau += legendre(a, p) * cmath.exp(2j * math.pi * a / p)
    target = p * legendre(-1, p)
    return abs(tau * tau - target) < tol
