"""Exact arithmetic in quotient rings O/p^k O of monogenic orders O = Z[theta].

The order is described by the monic integer polynomial f that theta
satisfies (degree 2 or 3).  Ring elements are coefficient vectors on the
power basis 1, theta, theta^2, with entries reduced into [0, m) for
m = p^k.  Reduction by f is hard-coded per degree (closed forms for x^2,
x^3, x^4), which keeps the power maps used by the scanners cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .primes import is_prime

__all__ = [
    "OrderSpec",
    "Modulus",
    "OrderElem",
    "poly_discriminant",
    "elem_add",
    "elem_mul",
    "elem_pow",
    "root_count_mod_p",
    "frobenius_order",
]


def poly_discriminant(poly: tuple[int, ...]) -> int:
    """Discriminant of a monic polynomial, coefficients ascending.

    Supports degree 2 (c1^2 - 4 c0) and degree 3 (the standard resultant
    formula 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2 for x^3 + ax^2 + bx + c).
    """
    if poly[-1] != 1:
        raise ValueError("polynomial must be monic")
    if len(poly) == 3:
        c0, c1 = poly[0], poly[1]
        return c1 * c1 - 4 * c0
    if len(poly) == 4:
        c, b, a = poly[0], poly[1], poly[2]
        return 18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c
    raise ValueError("only degrees 2 and 3 are supported")


@dataclass(frozen=True)
class OrderSpec:
    """A monogenic order Z[theta], theta a root of the stored monic polynomial."""

    degree: int
    defining_poly: tuple[int, ...]  # ascending, length degree+1, leading 1
    discriminant: int

    def __post_init__(self):
        if self.degree not in (2, 3):
            raise ValueError("degree must be 2 or 3")
        if len(self.defining_poly) != self.degree + 1 or self.defining_poly[-1] != 1:
            raise ValueError("defining polynomial must be monic of the stated degree")
        if poly_discriminant(self.defining_poly) != self.discriminant:
            raise ValueError(
                f"stored discriminant {self.discriminant} does not match the polynomial"
            )

    @classmethod
    def from_poly(cls, poly) -> "OrderSpec":
        poly = tuple(int(c) for c in poly)
        return cls(len(poly) - 1, poly, poly_discriminant(poly))

    @property
    def reduction(self) -> tuple[int, ...]:
        """Non-leading coefficients (f0, f1[, f2]), as consumed by the mul/pow kernels."""
        return self.defining_poly[:-1]


@dataclass(frozen=True)
class Modulus:
    """Prime-power modulus m = p^k with k in {1, 2}."""

    p: int
    k: int
    m: int

    def __post_init__(self):
        if self.k not in (1, 2):
            raise ValueError("exponent k must be 1 or 2")
        if self.p >= 1 << 32:
            raise ValueError("p must be below 2^32")
        if self.m != self.p**self.k:
            raise ValueError("m must equal p^k")
        if self.m >= 1 << 63:
            raise ValueError("modulus must stay below 2^63")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def make(cls, p: int, k: int) -> "Modulus":
        return cls(p, k, p**k)


@dataclass(frozen=True)
class OrderElem:
    """Ring element as a residue vector on the power basis."""

    coeffs: tuple[int, ...]

    @classmethod
    def reduce(cls, coeffs, mod: Modulus) -> "OrderElem":
        return cls(tuple(int(c) % mod.m for c in coeffs))


def _check(a: OrderElem, spec: OrderSpec, mod: Modulus) -> None:
    if len(a.coeffs) != spec.degree:
        raise ValueError("element length does not match the order degree")
    if any(c < 0 or c >= mod.m for c in a.coeffs):
        raise ValueError("element coefficients must be reduced into [0, m)")


# -- low-level kernels on plain tuples (shared with the scanners) ------------

def mul2(a, b, f, m):
    """(a0+a1 x)(b0+b1 x) mod (x^2 + f1 x + f0, m); f = (f0, f1)."""
    a0, a1 = a
    b0, b1 = b
    t = a1 * b1
    return (a0 * b0 - f[0] * t) % m, (a0 * b1 + a1 * b0 - f[1] * t) % m


def mul3(a, b, f, m):
    """Product in (Z/m)[x]/(x^3 + f2 x^2 + f1 x + f0); f = (f0, f1, f2)."""
    f0, f1, f2 = f
    a0, a1, a2 = a
    b0, b1, b2 = b
    c0 = a0 * b0
    c1 = a0 * b1 + a1 * b0
    c2 = a0 * b2 + a1 * b1 + a2 * b0
    c3 = a1 * b2 + a2 * b1
    c4 = a2 * b2
    # x^3 = -(f2 x^2 + f1 x + f0), x^4 = (f2^2-f1) x^2 + (f2 f1-f0) x + f2 f0
    return (
        (c0 - c3 * f0 + c4 * f2 * f0) % m,
        (c1 - c3 * f1 + c4 * (f2 * f1 - f0)) % m,
        (c2 - c3 * f2 + c4 * (f2 * f2 - f1)) % m,
    )


def pow2(a, e, f, m):
    f0, f1 = f
    r0, r1 = 1 % m, 0
    b0, b1 = a[0] % m, a[1] % m
    while e:
        if e & 1:
            t = r1 * b1
            r0, r1 = (r0 * b0 - f0 * t) % m, (r0 * b1 + r1 * b0 - f1 * t) % m
        e >>= 1
        if e:
            t = b1 * b1
            b0, b1 = (b0 * b0 - f0 * t) % m, (2 * b0 * b1 - f1 * t) % m
    return r0, r1


def pow3(a, e, f, m):
    """Binary exponentiation in (Z/m)[x]/(f); exponents of any size."""
    f0, f1, f2 = f
    t2 = f2 * f2 - f1
    t1 = f2 * f1 - f0
    t0 = f2 * f0
    r0, r1, r2 = 1 % m, 0, 0
    b0, b1, b2 = a[0] % m, a[1] % m, a[2] % m
    while e:
        if e & 1:
            c0 = r0 * b0
            c1 = r0 * b1 + r1 * b0
            c2 = r0 * b2 + r1 * b1 + r2 * b0
            c3 = r1 * b2 + r2 * b1
            c4 = r2 * b2
            r0 = (c0 - c3 * f0 + c4 * t0) % m
            r1 = (c1 - c3 * f1 + c4 * t1) % m
            r2 = (c2 - c3 * f2 + c4 * t2) % m
        e >>= 1
        if e:
            c0 = b0 * b0
            c1 = 2 * b0 * b1
            c2 = 2 * b0 * b2 + b1 * b1
            c3 = 2 * b1 * b2
            c4 = b2 * b2
            b0 = (c0 - c3 * f0 + c4 * t0) % m
            b1 = (c1 - c3 * f1 + c4 * t1) % m
            b2 = (c2 - c3 * f2 + c4 * t2) % m
    return r0, r1, r2


# -- public ring operations ---------------------------------------------------

def elem_add(a: OrderElem, b: OrderElem, spec: OrderSpec, mod: Modulus) -> OrderElem:
    _check(a, spec, mod)
    _check(b, spec, mod)
    return OrderElem(tuple((x + y) % mod.m for x, y in zip(a.coeffs, b.coeffs)))


def elem_mul(a: OrderElem, b: OrderElem, spec: OrderSpec, mod: Modulus) -> OrderElem:
    """Product in (Z/m)[x]/(f), coefficients reduced into [0, m)."""
    _check(a, spec, mod)
    _check(b, spec, mod)
    if spec.degree == 2:
        return OrderElem(mul2(a.coeffs, b.coeffs, spec.reduction, mod.m))
    return OrderElem(mul3(a.coeffs, b.coeffs, spec.reduction, mod.m))


def elem_pow(a: OrderElem, e: int, spec: OrderSpec, mod: Modulus) -> OrderElem:
    """a**e by binary exponentiation; a**0 = 1.  e may exceed 128 bits."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    _check(a, spec, mod)
    if spec.degree == 2:
        return OrderElem(pow2(a.coeffs, e, spec.reduction, mod.m))
    return OrderElem(pow3(a.coeffs, e, spec.reduction, mod.m))


# -- factorization type mod p -------------------------------------------------

def _poly_mod_trim(coeffs, p):
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_divmod_fp(a, b, p):
    """Remainder of a by b over F_p; both ascending coefficient lists, b != 0."""
    b_inv = pow(b[-1], p - 2, p)
    r = list(a)
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        q = r[-1] * b_inv % p
        shift = len(r) - 1 - db
        for i, c in enumerate(b):
            r[i + shift] = (r[i + shift] - q * c) % p
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_gcd_fp(a, b, p):
    """Monic gcd over F_p of two ascending coefficient lists."""
    a = _poly_mod_trim(a, p)
    b = _poly_mod_trim(b, p)
    while b:
        a, b = b, _poly_divmod_fp(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def xpow_p_mod(spec_poly: tuple[int, ...], p: int) -> tuple[int, ...]:
    """x^p mod (f, p) by repeated squaring, as a residue vector."""
    f = tuple(c % p for c in spec_poly[:-1])
    deg = len(spec_poly) - 1
    if deg == 2:
        return pow2((0, 1), p, f, p)
    return pow3((0, 1, 0), p, f, p)


def root_count_mod_p(spec: OrderSpec, p: int) -> int:
    """Number of distinct roots of f mod p, as deg gcd(x^p - x, f) over F_p.

    Requires p prime to disc(f), so that f is squarefree mod p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if spec.discriminant % p == 0:
        raise ValueError(f"p={p} divides disc(f); factorization type is degenerate")
    xp = xpow_p_mod(spec.defining_poly, p)
    g = list(xp)
    g[1] = (g[1] - 1) % p  # x^p - x
    d = poly_gcd_fp(list(spec.defining_poly), g, p)
    return len(d) - 1 if d else 0


def frobenius_order(spec: OrderSpec, p: int) -> int:
    """Order of Frobenius at p for a cubic order: 3 roots -> 1, 1 root -> 2, 0 roots -> 3."""
    if spec.degree != 3:
        raise ValueError("frobenius_order is defined for cubic orders only")
    rc = root_count_mod_p(spec, p)
    if rc == 3:
        return 1
    if rc == 1:
        return 2
    if rc == 0:
        return 3
    raise ArithmeticError(f"impossible root count {rc} for squarefree cubic mod {p}")
