"""Scanner for complex cubic fields: hypothesis filters, fundamental units,
the z-invariant, and the refined ordinarity test.

A record describes K = Q(theta) for a monic cubic f with negative field
discriminant Delta (so Z[theta] is the maximal order and the unit rank
is 1).  For an inert prime p that passes the hypothesis filter, the residue
ring O/p is the field with p^3 elements, and the fundamental unit eps
satisfies eps^(p^3-1) = 1 + z*p mod p^2 for a unique z in O/p.  The
invariant z decides the two tests: degree-two cohomology vanishes iff
z != 0, and for p = 1 mod 3 the ordinary subspace is nonzero iff
z^(3(p-1)) = 1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from math import log

from ._data import DataFileError, data_path, read_table_rows
from ._parallel import run_chunked
from .order_arith import OrderSpec, frobenius_order, pow3
from .primes import PrimeRange, primes_in
from .report import CLEAR, EXCLUDED, HIT, ScanReport, Verdict, assemble_report

__all__ = [
    "MODE_H2",
    "MODE_ORDINARY",
    "CubicFieldRecord",
    "ZValue",
    "prime_divisors",
    "h5_set",
    "h5_reduced",
    "hyp_filter",
    "element_norm",
    "invert_unit",
    "real_root",
    "find_fundamental_unit",
    "z_value",
    "h2_vanishing_test",
    "ordinary_test",
    "classify_cubic_prime",
    "scan_cubic",
    "load_cubic_fields",
]

MODE_H2 = "h2"
MODE_ORDINARY = "ordinary"

# Artin: a complex cubic field with fundamental unit u > 1 has |disc| < 4u^3 + 24,
# so a found unit u with 4u^(3/2) + 24 <= |disc| cannot be a proper power.
_ARTIN_SLACK = 1e-9


def prime_divisors(n: int) -> frozenset[int]:
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


@lru_cache(maxsize=None)
def h5_set(ramified: frozenset[int]) -> frozenset[int]:
    """Primes dividing l^2 - 1 for some ramified l (the small-prime exclusion set)."""
    if not ramified:
        raise ValueError("ramified set must be nonempty")
    out = set()
    for l in ramified:
        out |= prime_divisors(l * l - 1)
    return frozenset(out)


def h5_reduced(ramified: frozenset[int]) -> frozenset[int]:
    return h5_set(ramified) - {2, 3}


# -- exact arithmetic on unit triples ------------------------------------------

def _mulz3(a, b, f):
    """Product of two triples in Z[x]/(f), exact integers (no modulus)."""
    f0, f1, f2 = f
    a0, a1, a2 = a
    b0, b1, b2 = b
    c0 = a0 * b0
    c1 = a0 * b1 + a1 * b0
    c2 = a0 * b2 + a1 * b1 + a2 * b0
    c3 = a1 * b2 + a2 * b1
    c4 = a2 * b2
    return (
        c0 - c3 * f0 + c4 * f2 * f0,
        c1 - c3 * f1 + c4 * (f2 * f1 - f0),
        c2 - c3 * f2 + c4 * (f2 * f2 - f1),
    )


def _mult_matrix(spec: OrderSpec, g):
    f = spec.reduction
    cols = [g, _mulz3(g, (0, 1, 0), f), _mulz3(g, (0, 0, 1), f)]
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def element_norm(spec: OrderSpec, g) -> int:
    """Field norm of a + b*theta + c*theta^2 as the determinant of its
    multiplication matrix (equals the resultant of f and the triple)."""
    m = _mult_matrix(spec, g)
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def invert_unit(spec: OrderSpec, g) -> tuple[int, int, int]:
    """Inverse of a unit triple, exact (the multiplication matrix has det +-1)."""
    m = _mult_matrix(spec, g)
    det = element_norm(spec, g)
    if det not in (1, -1):
        raise ValueError("not a unit")
    c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1]
    c01 = -(m[1][0] * m[2][2] - m[1][2] * m[2][0])
    c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0]
    return (c00 * det, c01 * det, c02 * det)


def real_root(spec: OrderSpec) -> float:
    """The unique real root of f (disc < 0), by bisection."""
    f0, f1, f2 = spec.reduction

    def g(x):
        return ((x + f2) * x + f1) * x + f0

    bound = 1.0 + max(abs(f0), abs(f1), abs(f2))
    lo, hi = -bound, bound
    for _ in range(200):
        mid = (lo + hi) / 2
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _embed(triple, root: float) -> float:
    a, b, c = triple
    return a + b * root + c * root * root


def _normalize_unit(spec: OrderSpec, triple, root: float):
    """Representative with real embedding > 1 (negate and/or invert)."""
    v = _embed(triple, root)
    if v < 0:
        triple = (-triple[0], -triple[1], -triple[2])
        v = -v
    if v < 1:
        triple = invert_unit(spec, triple)
        v = _embed(triple, root)
    if v <= 1:
        raise ArithmeticError("unit normalization failed")
    return triple, v


def _unit_candidates(spec: OrderSpec, bound: int, root: float):
    best = None
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            for c in range(-bound, bound + 1):
                if b == 0 and c == 0:
                    continue  # rational integers: only the torsion +-1
                if element_norm(spec, (a, b, c)) in (1, -1):
                    lg = abs(log(abs(_embed((a, b, c), root))))
                    if lg > 1e-12 and (best is None or lg < best[0] - 1e-12):
                        best = (lg, (a, b, c))
    return best


def find_fundamental_unit(spec: OrderSpec, coeff_bound: int = 10):
    """Fundamental unit of Z[theta] by box search, with a certificate.

    Enumerates triples with entries up to coeff_bound, keeps those of norm
    +-1, and takes the one of smallest nonzero |log| in the real embedding,
    normalized to value > 1.  Certificate is "artin" when the Artin
    inequality rules out any proper-power decomposition, otherwise
    "exhaustive" after re-checking minimality over an enlarged box.
    Returns (triple, certificate).
    """
    if spec.degree != 3 or spec.discriminant >= 0:
        raise ValueError("needs a cubic order of negative discriminant (unit rank 1)")
    root = real_root(spec)
    absd = -spec.discriminant
    best = _unit_candidates(spec, coeff_bound, root)
    if best is None:
        raise ValueError(
            f"no unit with coefficients up to {coeff_bound}; retry with a larger bound"
        )
    triple, val = _normalize_unit(spec, best[1], root)
    if absd > 28 and 4 * val**1.5 + 24 <= absd - _ARTIN_SLACK:
        return triple, "artin"
    enlarged = max(coeff_bound + 5, (3 * coeff_bound) // 2)
    best2 = _unit_candidates(spec, enlarged, root)
    triple2, val2 = _normalize_unit(spec, best2[1], root)
    if absd > 28 and 4 * val2**1.5 + 24 <= absd - _ARTIN_SLACK:
        return triple2, "artin"
    return triple2, "exhaustive"


# -- field records --------------------------------------------------------------

@dataclass(frozen=True)
class CubicFieldRecord:
    delta: int
    spec: OrderSpec
    ramified: frozenset[int]
    class_number_e: int | None
    unit: tuple[int, int, int]
    unit_certificate: str = "shipped"

    def __post_init__(self):
        if self.delta >= 0:
            raise ValueError("field discriminant must be negative")
        if self.spec.discriminant != self.delta:
            raise ValueError("disc(f) must equal the field discriminant")
        if self.ramified != prime_divisors(self.delta):
            raise ValueError("ramified set must be the prime divisors of the discriminant")
        if self.class_number_e is not None and self.class_number_e < 1:
            raise ValueError("class number must be positive")
        a, b, c = self.unit
        if b == 0 and c == 0:
            raise ValueError("unit must not be rational (+-1)")
        if element_norm(self.spec, self.unit) not in (1, -1):
            raise ValueError("unit norm is not +-1")


def cubic_field_record(
    delta: int,
    poly,
    class_number_e: int | None = None,
    unit: tuple[int, int, int] | None = None,
    certificate: str = "shipped",
) -> CubicFieldRecord:
    spec = OrderSpec.from_poly(poly)
    if unit is None:
        unit, certificate = find_fundamental_unit(spec)
    return CubicFieldRecord(delta, spec, prime_divisors(delta), class_number_e, unit, certificate)


def load_cubic_fields(data_dir=None) -> dict[int, CubicFieldRecord]:
    """Field data file rows: delta c2 c1 c0 S h_E u0 u1 u2 certificate.

    S is the comma-separated ramified set and must equal the prime divisors
    of delta.  h_E is '?' when the class number of the Galois closure is not
    bundled; scans then skip that exclusion and attach a warning.
    """
    records = {}
    for row in read_table_rows(data_path("cubic_fields.txt", data_dir)):
        try:
            if len(row) != 10:
                raise ValueError("expected 'delta c2 c1 c0 S h_E u0 u1 u2 cert'")
            delta = int(row[0])
            poly = (int(row[3]), int(row[2]), int(row[1]), 1)
            ramified = frozenset(int(l) for l in row[4].split(","))
            if ramified != prime_divisors(delta):
                raise ValueError("S does not equal the prime divisors of delta")
            h_e = None if row[5] == "?" else int(row[5])
            unit = (int(row[6]), int(row[7]), int(row[8]))
            records[delta] = cubic_field_record(delta, poly, h_e, unit, row[9])
        except (ValueError, IndexError) as exc:
            raise DataFileError(f"bad cubic field row {row}: {exc}") from exc
    if not records:
        raise DataFileError("no cubic field records found")
    return records


# -- hypotheses and the z-invariant ---------------------------------------------

def hyp_filter(rec: CubicFieldRecord, p: int) -> str | None:
    """None when p passes all five hypotheses, else the first failure in
    their listed order (p coprime to 6, unramified, coprime to the closure
    class number, odd, outside the small exclusion set)."""
    if p in (2, 3):
        return "hyp1_divides_6"
    if rec.delta % p == 0:
        return "hyp2_ramified"
    if rec.class_number_e is not None and rec.class_number_e % p == 0:
        return "hyp3_class_number"
    if p % 2 == 0:
        return "hyp4_even"
    if p in h5_set(rec.ramified):
        return "hyp5_in_H5"
    return None


@dataclass(frozen=True)
class ZValue:
    """z in O/p (three residues), defined by eps^(p^3-1) = 1 + z*p mod p^2."""

    p: int
    coeffs: tuple[int, int, int]

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0, 0, 0)


def _z_coeffs(unit, f, p: int) -> tuple[int, int, int]:
    m = p * p
    fm = (f[0] % m, f[1] % m, f[2] % m)
    u = pow3((unit[0] % m, unit[1] % m, unit[2] % m), p * p * p - 1, fm, m)
    d0 = u[0] - 1
    if d0 % p or u[1] % p or u[2] % p:
        raise ArithmeticError(
            f"unit power is not 1 mod {p}: impossible for an inert prime, "
            "this indicates corrupt inputs"
        )
    return (d0 // p % p, u[1] // p % p, u[2] // p % p)


def z_value(rec: CubicFieldRecord, p: int) -> ZValue:
    """The invariant z at an inert prime passing the hypothesis filter."""
    reason = hyp_filter(rec, p)
    if reason is not None:
        raise ValueError(f"p={p} rejected by the hypothesis filter ({reason})")
    if frobenius_order(rec.spec, p) != 3:
        raise ValueError(f"p={p} is not inert (Frobenius order is not 3)")
    return ZValue(p, _z_coeffs(rec.unit, rec.spec.reduction, p))


def h2_vanishing_test(rec: CubicFieldRecord, p: int) -> bool:
    """True (the obstruction space vanishes) exactly when z != 0."""
    return not z_value(rec, p).is_zero


def ordinary_test(rec: CubicFieldRecord, p: int) -> bool:
    """True iff z^(3(p-1)) = 1 in O/p; needs p = 1 mod 3 and z != 0."""
    if p % 3 != 1:
        raise ValueError(f"p={p} is not 1 mod 3; the ordinary test is not defined over F_p")
    z = z_value(rec, p)
    if z.is_zero:
        raise ValueError(f"z = 0 at p={p}; the ordinary test needs z != 0")
    f = rec.spec.reduction
    fp = (f[0] % p, f[1] % p, f[2] % p)
    return pow3(z.coeffs, 3 * (p - 1), fp, p) == (1, 0, 0)


def classify_cubic_prime(rec: CubicFieldRecord, p: int, mode: str) -> Verdict:
    """Per-prime verdict used by the scans (readable reference path)."""
    reason = hyp_filter(rec, p)
    if reason is not None:
        return Verdict(p, EXCLUDED, reason=reason)
    if mode == MODE_ORDINARY and p % 3 == 2:
        return Verdict(p, EXCLUDED, reason="p_2_mod_3")
    if frobenius_order(rec.spec, p) != 3:
        return Verdict(p, EXCLUDED, reason="frob_order_not_3")
    z = z_value(rec, p)
    if mode == MODE_H2:
        if z.is_zero:
            return Verdict(p, HIT, aux=z.coeffs)
        return Verdict(p, CLEAR)
    if mode == MODE_ORDINARY:
        if z.is_zero:
            return Verdict(p, EXCLUDED, reason="z_zero")
        if ordinary_test(rec, p):
            return Verdict(p, HIT, aux=z.coeffs)
        return Verdict(p, CLEAR)
    raise ValueError(f"unknown mode {mode!r}")


def _cubic_chunk(args, lo: int, hi: int) -> list[Verdict]:
    rec, mode = args
    f = rec.spec.reduction
    f0, f1, f2 = f
    delta = rec.delta
    h5 = h5_set(rec.ramified)
    h_e = rec.class_number_e
    unit = rec.unit
    ordinary = mode == MODE_ORDINARY
    out = []
    x = (0, 1, 0)
    for p in primes_in(PrimeRange(lo, hi)):
        if p == 2 or p == 3:
            out.append(Verdict(p, EXCLUDED, reason="hyp1_divides_6"))
            continue
        if delta % p == 0:
            out.append(Verdict(p, EXCLUDED, reason="hyp2_ramified"))
            continue
        if h_e is not None and h_e % p == 0:
            out.append(Verdict(p, EXCLUDED, reason="hyp3_class_number"))
            continue
        if p in h5:
            out.append(Verdict(p, EXCLUDED, reason="hyp5_in_H5"))
            continue
        if ordinary and p % 3 == 2:
            out.append(Verdict(p, EXCLUDED, reason="p_2_mod_3"))
            continue
        # Frobenius order 3 means p inert: quadratic residue discriminant
        # (rules out order 2), then x^p != x mod f (rules out order 1).
        if pow(delta % p, (p - 1) >> 1, p) != 1:
            out.append(Verdict(p, EXCLUDED, reason="frob_order_not_3"))
            continue
        fp = (f0 % p, f1 % p, f2 % p)
        if pow3(x, p, fp, p) == x:
            out.append(Verdict(p, EXCLUDED, reason="frob_order_not_3"))
            continue
        z = _z_coeffs(unit, f, p)
        if ordinary:
            if z == (0, 0, 0):
                out.append(Verdict(p, EXCLUDED, reason="z_zero"))
            elif pow3(z, 3 * (p - 1), fp, p) == (1, 0, 0):
                out.append(Verdict(p, HIT, aux=z))
            else:
                out.append(Verdict(p, CLEAR))
        else:
            if z == (0, 0, 0):
                out.append(Verdict(p, HIT, aux=z))
            else:
                out.append(Verdict(p, CLEAR))
    return out


def scan_cubic(
    rec: CubicFieldRecord,
    rng: PrimeRange,
    mode: str = MODE_ORDINARY,
    full_verdicts: bool = False,
    workers: int = 1,
    chunk_span: int = 1 << 14,
) -> ScanReport:
    """Ascending hits over the range.

    Ordinary mode lists primes where the ordinarity congruence holds (a
    nonzero ordinary piece); h2 mode lists primes with z = 0 (an
    obstruction), expected empty.  Non-qualifying primes are skipped
    silently unless full verdicts are requested.
    """
    if mode not in (MODE_H2, MODE_ORDINARY):
        raise ValueError(f"unknown mode {mode!r}")
    warnings = []
    if rec.class_number_e is None:
        warnings.append(
            f"h_E unknown for delta={rec.delta}: the class-number exclusion was not applied"
        )
    t0 = time.perf_counter()
    verdicts = run_chunked(_cubic_chunk, (rec, mode), rng.lo, rng.hi, workers, chunk_span)
    return assemble_report(
        field_id=f"cubic(delta={rec.delta})",
        mode=mode,
        lo=rng.lo,
        hi=rng.hi,
        verdicts=verdicts,
        full_verdicts=full_verdicts,
        warnings=warnings,
        wall_time=time.perf_counter() - t0,
        workers=workers,
    )
