"""Real-quadratic scanner: fundamental units and the mod-p^2 congruence test.

For squarefree D >= 2 the maximal order of Q(sqrt(D)) is Z[omega] with
omega = sqrt(D) for D = 2, 3 mod 4 and omega = (1+sqrt(D))/2 for D = 1 mod 4.
The fundamental unit eps is found from the periodic continued fraction of
omega; a prime p is a hit when eps^(p^2-1) = 1 in Z[omega]/p^2, which is the
unit-theoretic criterion for the relevant degree-two cohomology not to vanish.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import isqrt

from ._data import DataFileError, data_path, read_table_rows
from ._parallel import run_chunked
from .order_arith import OrderSpec, pow2
from .primes import PrimeRange, primes_in
from .report import CLEAR, EXCLUDED, HIT, ScanReport, Verdict, assemble_report

__all__ = [
    "MIN_SCAN_PRIME",
    "QuadUnit",
    "QuadFieldRecord",
    "is_squarefree",
    "order_spec_for",
    "unit_norm",
    "fundamental_unit_quadratic",
    "quad_field_record",
    "load_quad_fields",
    "quad_unit_test",
    "classify_quad_prime",
    "scan_quadratic",
]

# p = 2 is outside the scan policy; ramified p and p | h are reported as
# excluded, never as clear.
MIN_SCAN_PRIME = 3

SQRT = "sqrt"
HALF = "half"

MODE_QUAD = "quad"


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        while n % d == 0:
            n //= d
        d += 1
    return True


def basis_kind(d: int) -> str:
    return HALF if d % 4 == 1 else SQRT


def order_spec_for(d: int) -> OrderSpec:
    """Defining polynomial of Z[omega]: x^2-D, or x^2-x-(D-1)/4 in the half case."""
    if d % 4 == 1:
        return OrderSpec.from_poly((-(d - 1) // 4, -1, 1))
    return OrderSpec.from_poly((-d, 0, 1))


def unit_norm(d: int, a: int, b: int) -> int:
    if d % 4 == 1:
        return a * a + a * b - b * b * ((d - 1) // 4)
    return a * a - d * b * b


@dataclass(frozen=True)
class QuadUnit:
    """eps = a + b*omega with norm +1 or -1."""

    a: int
    b: int
    norm_sign: int


@dataclass(frozen=True)
class QuadFieldRecord:
    d: int
    basis_kind: str
    field_disc: int
    class_number: int
    unit: QuadUnit

    def __post_init__(self):
        if not is_squarefree(self.d) or self.d < 2:
            raise ValueError(f"D={self.d} must be squarefree and >= 2")
        if self.basis_kind != basis_kind(self.d):
            raise ValueError("basis kind does not match D mod 4")
        want_disc = self.d if self.d % 4 == 1 else 4 * self.d
        if self.field_disc != want_disc:
            raise ValueError("field discriminant inconsistent with D")
        if self.class_number < 1:
            raise ValueError("class number must be positive")
        u = self.unit
        if (u.a, u.b) in ((1, 0), (-1, 0)):
            raise ValueError("unit must not be +-1")
        if unit_norm(self.d, u.a, u.b) != u.norm_sign or u.norm_sign not in (1, -1):
            raise ValueError("unit norm is not +-1")


def fundamental_unit_quadratic(d: int) -> QuadUnit:
    """Fundamental unit of Z[omega] via the continued fraction of omega.

    Runs the quadratic-irrational (P, Q) recurrence from omega itself.  At
    the first index k >= 1 with Q_k = Q_0 the convergent p_{k-1}/q_{k-1}
    yields the unit eps = p_{k-1} - q_{k-1} * conj(omega) of norm (-1)^k,
    and this first return is the fundamental one.
    """
    if d < 2:
        raise ValueError("D must be at least 2")
    if not is_squarefree(d):
        raise ValueError(f"D={d} is not squarefree")
    s = isqrt(d)
    if d % 4 == 1:
        pP, q0, tr = 1, 2, 1
    else:
        pP, q0, tr = 0, 1, 0
    qQ = q0
    a = (pP + s) // qQ
    p_cur, p_prev = a, 1
    q_cur, q_prev = 1, 0
    k = 0
    while True:
        k += 1
        pP = a * qQ - pP
        qn, rem = divmod(d - pP * pP, qQ)
        if rem or qn <= 0:
            raise ArithmeticError(f"continued fraction state corrupt for D={d}")
        qQ = qn
        if qQ == q0:
            aa, bb = p_cur - tr * q_cur, q_cur
            sign = -1 if k % 2 else 1
            if unit_norm(d, aa, bb) != sign:
                raise ArithmeticError(f"norm check failed for D={d}")
            return QuadUnit(aa, bb, sign)
        a = (pP + s) // qQ
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur


def quad_field_record(d: int, class_number: int, unit: QuadUnit | None = None) -> QuadFieldRecord:
    if unit is None:
        unit = fundamental_unit_quadratic(d)
    disc = d if d % 4 == 1 else 4 * d
    return QuadFieldRecord(d, basis_kind(d), disc, class_number, unit)


def load_quad_fields(data_dir=None) -> dict[int, QuadFieldRecord]:
    """Field data file: one row per D with its class number and an optional
    explicit unit override (a b)."""
    records = {}
    for row in read_table_rows(data_path("quad_fields.txt", data_dir)):
        try:
            d, h = int(row[0]), int(row[1])
            unit = None
            if len(row) == 4:
                a, b = int(row[2]), int(row[3])
                unit = QuadUnit(a, b, unit_norm(d, a, b))
            elif len(row) != 2:
                raise ValueError("expected 'D h [a b]'")
            records[d] = quad_field_record(d, h, unit)
        except (ValueError, IndexError) as exc:
            raise DataFileError(f"bad quadratic field row {row}: {exc}") from exc
    if not records:
        raise DataFileError("no quadratic field records found")
    return records


def quad_unit_test(rec: QuadFieldRecord, p: int) -> bool:
    """True exactly when eps^(p^2-1) = 1 mod p^2 Z[omega].

    Valid for odd unramified p coprime to the class number; anything else is
    rejected so the scan can report it as excluded rather than silently skip.
    """
    if p < MIN_SCAN_PRIME:
        raise ValueError(f"p={p} below the minimum scan prime {MIN_SCAN_PRIME}")
    if rec.field_disc % p == 0:
        raise ValueError(f"p={p} ramifies in Q(sqrt({rec.d}))")
    if rec.class_number % p == 0:
        raise ValueError(f"p={p} divides the class number")
    m = p * p
    f = order_spec_for(rec.d).reduction
    fm = (f[0] % m, f[1] % m)
    r = pow2((rec.unit.a % m, rec.unit.b % m), m - 1, fm, m)
    return r == (1, 0)


def classify_quad_prime(rec: QuadFieldRecord, p: int) -> Verdict:
    if p < MIN_SCAN_PRIME:
        return Verdict(p, EXCLUDED, reason="below_min_p")
    if rec.field_disc % p == 0:
        return Verdict(p, EXCLUDED, reason="ramified")
    if rec.class_number % p == 0:
        return Verdict(p, EXCLUDED, reason="divides_class_number")
    return Verdict(p, HIT if quad_unit_test(rec, p) else CLEAR)


def _quad_chunk(rec: QuadFieldRecord, lo: int, hi: int) -> list[Verdict]:
    f = order_spec_for(rec.d).reduction
    f0, f1 = f
    ua, ub = rec.unit.a, rec.unit.b
    disc, h = rec.field_disc, rec.class_number
    out = []
    for p in primes_in(PrimeRange(lo, hi)):
        if p < MIN_SCAN_PRIME:
            out.append(Verdict(p, EXCLUDED, reason="below_min_p"))
        elif disc % p == 0:
            out.append(Verdict(p, EXCLUDED, reason="ramified"))
        elif h % p == 0:
            out.append(Verdict(p, EXCLUDED, reason="divides_class_number"))
        else:
            m = p * p
            r = pow2((ua % m, ub % m), m - 1, (f0 % m, f1 % m), m)
            out.append(Verdict(p, HIT if r == (1, 0) else CLEAR))
    return out


def scan_quadratic(
    rec: QuadFieldRecord,
    rng: PrimeRange,
    full_verdicts: bool = False,
    workers: int = 1,
    chunk_span: int = 1 << 14,
) -> ScanReport:
    """Ascending verdicts over the range; hit iff the unit congruence holds."""
    t0 = time.perf_counter()
    verdicts = run_chunked(_quad_chunk, rec, rng.lo, rng.hi, workers, chunk_span)
    return assemble_report(
        field_id=f"quad(D={rec.d})",
        mode=MODE_QUAD,
        lo=rng.lo,
        hi=rng.hi,
        verdicts=verdicts,
        full_verdicts=full_verdicts,
        wall_time=time.perf_counter() - t0,
        workers=workers,
    )
