"""Desk-scale verification: density scans over C(K, X), the reduction-theoretic
twist oracle, and machine-readable reports.

Density scans are exact. For small X the family is enumerated character by
character; beyond that the scan counts fibers of the localization homomorphism
C(K, X) -> prod c_v over the finitely many places that can change the root
number. Both paths return the same exact rationals (the map is a group
homomorphism with equal fibers), so reports stay deterministic at any X.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .curves import (
    EllipticCurve,
    bad_place_candidates,
    bad_places,
    curve,
    local_root_number,
    quadratic_twist,
    reduction_type,
    root_number,
    SPLIT_MULT,
    NONSPLIT_MULT,
)
from .errors import UnsupportedRepresentation
from .heckechars import (
    character_group_generators,
    count_characters,
    enumerate_characters,
    localization_profile,
    make_char,
    squarefree_deltas,
)
from .localfields import completion, LocalCharacter, LocalSquareClass, square_class_index
from .numberfield import Field, NFElem, archimedean_places, parse_field, places_above
from .parity import (
    kappa,
    m_v,
    parity_change,
    place_partition,
    rank_parity,
)

EXHAUSTIVE_CAP = 4096


# ----------------------------------------------------------------------------
# Reports


@dataclass(eq=True)
class BucketRow:
    x_bucket: int
    total: int
    even: int
    fraction: Fraction
    predicted: Fraction


@dataclass(eq=True)
class DensityReport:
    curve: str
    field: str
    X: int
    parity: str
    kappa: Fraction
    predicted: Fraction
    total: int
    even: int
    fraction: Fraction
    buckets: tuple
    method: str
    oracle_mismatches: Optional[int] = None

    def final_bucket(self) -> Optional[BucketRow]:
        return self.buckets[-1] if self.buckets else None


def _frac_json(fr: Fraction):
    return {"num": fr.numerator, "den": fr.denominator}


def _frac_from_json(obj) -> Fraction:
    return Fraction(obj["num"], obj["den"])


def report_to_json(report: DensityReport) -> str:
    doc = {
        "curve": report.curve,
        "field": report.field,
        "X": report.X,
        "parity": report.parity,
        "kappa": _frac_json(report.kappa),
        "predicted": _frac_json(report.predicted),
        "total": report.total,
        "even": report.even,
        "fraction": _frac_json(report.fraction),
        "method": report.method,
        "oracle_mismatches": report.oracle_mismatches,
        "buckets": [
            {
                "X_bucket": b.x_bucket,
                "total": b.total,
                "even": b.even,
                "fraction": _frac_json(b.fraction),
                "predicted": _frac_json(b.predicted),
            }
            for b in report.buckets
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def report_from_json(text: str) -> DensityReport:
    doc = json.loads(text)
    buckets = tuple(
        BucketRow(b["X_bucket"], b["total"], b["even"],
                  _frac_from_json(b["fraction"]), _frac_from_json(b["predicted"]))
        for b in doc["buckets"]
    )
    return DensityReport(
        curve=doc["curve"], field=doc["field"], X=doc["X"], parity=doc["parity"],
        kappa=_frac_from_json(doc["kappa"]), predicted=_frac_from_json(doc["predicted"]),
        total=doc["total"], even=doc["even"], fraction=_frac_from_json(doc["fraction"]),
        buckets=buckets, method=doc["method"],
        oracle_mismatches=doc["oracle_mismatches"],
    )


CSV_HEADER = "X_bucket,total,even,fraction_num,fraction_den,predicted_num,predicted_den"


def report_to_csv(report: DensityReport) -> str:
    lines = [CSV_HEADER]
    for b in report.buckets:
        lines.append(
            f"{b.x_bucket},{b.total},{b.even},{b.fraction.numerator},"
            f"{b.fraction.denominator},{b.predicted.numerator},{b.predicted.denominator}"
        )
    return "\n".join(lines) + "\n"


def emit_report(report: DensityReport, fmt: str, path: str) -> str:
    if fmt == "json":
        text = report_to_json(report)
    elif fmt == "csv":
        text = report_to_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w") as fh:
        fh.write(text)
    return path


# ----------------------------------------------------------------------------
# Exact density scan


def _parity_factor_tables(E: EllipticCurve, assume_principal_series=False):
    """Per relevant place: (place, class-index -> parity factor, multiplication table)."""
    part = place_partition(E, assume_principal_series)
    tables = []
    for v in part.real_places:
        lv = completion(E.field, v)
        reps = lv.square_class_reps()
        values = [1 if r.sign_at_real(v.index) > 0 else -1 for r in reps]
        tables.append((v, lv, values))
    for v, rep in part.sigma1 + part.sigma2:
        lv = completion(E.field, v)
        reps = lv.square_class_reps()
        values = [m_v(rep, LocalCharacter(lv, LocalSquareClass(lv, r))) for r in reps]
        tables.append((v, lv, values))
    return tables


def _class_mult_table(lv) -> list[list[int]]:
    reps = lv.square_class_reps()
    n = len(reps)
    table = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            k = square_class_index(reps[i] * reps[j], lv)
            table[i][j] = table[j][i] = k
    return table


def _subgroup_closure(gens_profiles, mult_tables):
    """Closure of the identity under the generator tuples (componentwise class products)."""
    identity = tuple(0 for _ in mult_tables)
    group = {identity}
    for g in gens_profiles:
        if g in group:
            continue
        new = [tuple(mult_tables[i][h[i]][g[i]] for i in range(len(h))) for h in group]
        group.update(new)
    return group


def scan_density(E: EllipticCurve, X: int,
                 parity_override: Optional[str] = None,
                 method: str = "auto",
                 exhaustive_cap: int = EXHAUSTIVE_CAP,
                 assume_principal_series: bool = False,
                 oracle_sample: int = 0) -> DensityReport:
    """Exact even-rank fraction among twists ordered by Nchi, with convergence buckets."""
    if X < 1:
        raise ValueError("X must be >= 1")
    K = E.field
    if parity_override is not None:
        parity = parity_override
    else:
        parity = rank_parity(E)  # raises UnsupportedRepresentation when uncertifiable
    w = 1 if parity == "even" else -1
    krep = kappa(E, assume_principal_series)
    predicted = (1 + w * krep.kappa) / 2

    tables = _parity_factor_tables(E, assume_principal_series)
    places = [t[0] for t in tables]
    values = [t[2] for t in tables]

    thresholds = sorted({max(1, (k * X) // 10) for k in range(1, 11)})

    def even_of_sign(p_sign: int) -> bool:
        # rk(E^chi) even  <=>  (w = +1) xor (parity flips)
        return (w == 1) == (p_sign == 1)

    chosen = method
    if method == "auto":
        chosen = "exhaustive" if count_characters(K, X) <= exhaustive_cap else "fibers"
    if chosen not in ("exhaustive", "fibers"):
        raise ValueError(f"unknown scan method {method!r}")

    buckets = []
    if chosen == "exhaustive":
        chars = enumerate_characters(K, X)
        profiles = [localization_profile(chi, places) for chi in chars]
        norms = [chi.norm for chi in chars]
        for b in thresholds:
            total = even = 0
            for chi_norm, prof in zip(norms, profiles):
                if chi_norm > b:
                    continue
                total += 1
                sign = 1
                for vals, idx in zip(values, prof):
                    sign *= vals[idx]
                if even_of_sign(sign):
                    even += 1
            if total:
                buckets.append(BucketRow(b, total, even, Fraction(even, total), predicted))
    else:
        mult_tables = [_class_mult_table(t[1]) for t in tables]
        for b in thresholds:
            if b < 4:
                # small norms: the generator description may not cover C(K, b)
                chars = enumerate_characters(K, b)
                total = len(chars)
                even = 0
                for chi in chars:
                    prof = localization_profile(chi, places)
                    sign = 1
                    for vals, idx in zip(values, prof):
                        sign *= vals[idx]
                    if even_of_sign(sign):
                        even += 1
            else:
                gens = character_group_generators(K, b)
                gprofiles = [localization_profile(chi, places) for chi in gens]
                group = _subgroup_closure(gprofiles, mult_tables)
                plus = 0
                for h in group:
                    sign = 1
                    for vals, idx in zip(values, h):
                        sign *= vals[idx]
                    if even_of_sign(sign):
                        plus += 1
                total = 1 << len(gens)
                even = total // len(group) * plus
            if total:
                buckets.append(BucketRow(b, total, even, Fraction(even, total), predicted))

    last = buckets[-1] if buckets else BucketRow(X, 0, 0, Fraction(0), predicted)
    mismatches = None
    if oracle_sample > 0:
        sample_chars = enumerate_characters(K, min(X, 20))[:oracle_sample]
        mismatches = len(oracle_crosscheck(E, deltas=[c.delta for c in sample_chars]).mismatches)
    return DensityReport(
        curve=str(E), field=str(K), X=X, parity=parity, kappa=krep.kappa,
        predicted=predicted, total=last.total, even=last.even,
        fraction=last.fraction if last.total else Fraction(0),
        buckets=tuple(buckets), method=chosen, oracle_mismatches=mismatches,
    )


# ----------------------------------------------------------------------------
# Twist-parity oracle: recompute w(E^delta) from the twisted reduction data


class TwistRootNumberOracle:
    """w(E^delta) by reduction classification of the twisted curve.

    Local root numbers of E^delta depend only on the square class of delta at
    each place, so we classify once per (place, class) using the small class
    representative; the result equals classifying the literal twisted model.
    """

    def __init__(self, E: EllipticCurve):
        self.E = E
        self.K = E.field
        self.arch = archimedean_places(self.K)
        self.base_places = {v.key(): v for v in bad_place_candidates(E)}
        for v in places_above(self.K, 2):
            self.base_places.setdefault(v.key(), v)
        self.memo: dict = {}

    def local_w(self, v, delta: NFElem) -> int:
        lv = completion(self.K, v)
        idx = square_class_index(delta, lv)
        key = (v.key(), idx)
        hit = self.memo.get(key)
        if hit is None:
            rep_delta = lv.square_class_reps()[idx]
            hit = local_root_number(quadratic_twist(self.E, rep_delta), v)
            self.memo[key] = hit
        return hit

    def root_number_of_twist(self, delta: NFElem) -> int:
        w = 1
        for _ in self.arch:
            w *= -1
        places = dict(self.base_places)
        chi = make_char(self.K, delta)
        for v in chi.support:
            places.setdefault(v.key(), v)
        for v in chi.ramified_finite():
            places.setdefault(v.key(), v)
        for v in places.values():
            w *= self.local_w(v, delta)
        return w


@dataclass
class MismatchRecord:
    delta: str
    table_path: int
    reduction_path: int


@dataclass
class OracleReport:
    curve: str
    field: str
    tested: int
    mismatches: list
    unsupported: int

    @property
    def clean(self) -> bool:
        return not self.mismatches


def oracle_crosscheck(E: EllipticCurve,
                      X: Optional[int] = None,
                      deltas: Optional[Iterable[NFElem]] = None,
                      delta_bound: Optional[int] = None,
                      workers: int = 1) -> OracleReport:
    """Compare parity_change * w(E) against w(E^delta) recomputed from scratch.

    The family is C(K, X) when X is given, rational squarefree |delta| <=
    delta_bound when that is given, or an explicit delta iterable.
    """
    K = E.field
    if deltas is None:
        if delta_bound is not None:
            deltas = list(squarefree_deltas(K, delta_bound))
        elif X is not None:
            deltas = [chi.delta for chi in enumerate_characters(K, X)]
        else:
            raise ValueError("need X, delta_bound, or deltas")
    else:
        deltas = list(deltas)

    wE = root_number(E)
    oracle = TwistRootNumberOracle(E)
    mismatches = []
    unsupported = 0
    tested = 0

    def check_one(delta):
        nonlocal unsupported, tested
        chi = make_char(K, delta)
        try:
            a = parity_change(E, chi) * wE
            b = oracle.root_number_of_twist(delta)
        except UnsupportedRepresentation:
            unsupported += 1
            return
        tested += 1
        if a != b:
            mismatches.append(MismatchRecord(str(delta), a, b))

    if workers <= 1:
        for d in deltas:
            check_one(d)
    else:
        chunks = [deltas[i::workers] for i in range(workers)]
        args = [(str(K), str(E), [str(d) for d in ch]) for ch in chunks if ch]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for sub_tested, sub_unsup, sub_mm in pool.map(_oracle_worker, args):
                tested += sub_tested
                unsupported += sub_unsup
                mismatches.extend(MismatchRecord(*m) for m in sub_mm)
        mismatches.sort(key=lambda m: m.delta)

    return OracleReport(str(E), str(K), tested, mismatches, unsupported)


def _oracle_worker(args):
    from .curves import parse_curve
    from .numberfield import parse_element

    field_spec, curve_text, delta_texts = args
    K = parse_field(field_spec)
    E = parse_curve(K, curve_text)
    wE = root_number(E)
    oracle = TwistRootNumberOracle(E)
    tested = unsupported = 0
    mismatches = []
    for dt in delta_texts:
        delta = parse_element(K, dt)
        chi = make_char(K, delta)
        try:
            a = parity_change(E, chi) * wE
            b = oracle.root_number_of_twist(delta)
        except UnsupportedRepresentation:
            unsupported += 1
            continue
        tested += 1
        if a != b:
            mismatches.append((dt, a, b))
    return tested, unsupported, mismatches


# ----------------------------------------------------------------------------
# Demonstration-curve search


def find_demo_curve(K: Field, target: str = SPLIT_MULT, coeff_bound: int = 3) -> EllipticCurve:
    """Smallest integer-coefficient curve over K whose only bad place is a
    single finite place of odd residue norm with the requested multiplicative type."""
    assert target in (SPLIT_MULT, NONSPLIT_MULT)
    for bound in range(1, coeff_bound + 1):
        rng = range(-bound, bound + 1)
        for a1 in (0, 1):
            for a2 in rng:
                for a3 in (0, 1):
                    for a4 in rng:
                        for a6 in rng:
                            try:
                                E = curve(K, [a1, a2, a3, a4, a6])
                            except Exception:
                                continue
                            if _demo_profile_matches(E, target):
                                return E
    raise ValueError(f"no demo curve with coefficients up to {coeff_bound}")


def _demo_profile_matches(E: EllipticCurve, target: str) -> bool:
    bad = bad_places(E)
    if len(bad) != 1:
        return False
    v = bad[0]
    if v.residue_norm % 2 == 0:
        return False
    return reduction_type(E, v).red_type == target
