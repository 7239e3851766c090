"""Location of the PT-symmetry-breaking boundary a_crit(J)^2.

Two independent routes:

* ``SturmBisection`` bisects on t = a^2 using the Sturm count of real roots
  of the characteristic polynomial at a = +sqrt(t), in floating arithmetic
  with generous guard digits.
* ``DiscriminantRoot`` builds the discriminant of the characteristic
  polynomial as an exact integer polynomial in t and brackets its largest
  relevant root by exact sign evaluation at rationals.

Since the spectrum at -a is the negated spectrum at a, the real-root count
depends on a^2 only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CapExceeded, NonConvergence, NotBroken, NoTransition
from .polynomial import Polynomial, discriminant, mp_context
from .qes import QesProblem, Variant, characteristic_polynomial, derive_pt_recursion, qes_spectrum
from .sturm import count_real_roots

DISCRIMINANT_J_CAP = 24
SCAN_CELLS = 2048


class Method(enum.Enum):
    STURM_BISECTION = "sturm"
    DISCRIMINANT_ROOT = "discriminant"


@dataclass(frozen=True)
class CriticalBoundary:
    J: int
    a_crit_sq: object
    bracket: tuple
    digits: int
    method: Method

    @property
    def width(self):
        lo, hi = self.bracket
        return hi - lo


def working_digits(J: int, target_digits: int) -> int:
    """Working precision for the Sturm route.

    Two guard blocks of ``target_digits + J`` digits: coalescing roots lose
    about half the working digits, and the chain of a degree-J polynomial
    loses roughly one digit per degree to cancellation.
    """
    guard = target_digits + J
    return max(30, target_digits + 2 * guard)


def real_root_count(J: int, t, dps: int) -> int:
    """Distinct real eigenvalues of the PT problem at a^2 = t."""
    ctx = mp_context(dps)
    a = ctx.sqrt(ctx.mpf(t) if not isinstance(t, Fraction) else ctx.mpf(t.numerator) / t.denominator)
    poly = characteristic_polynomial(derive_pt_recursion(J).substitute(a)).map(ctx.mpf)
    return count_real_roots(poly, allow_square_full=True)


def _check_J(J: int) -> None:
    if not isinstance(J, int) or J < 2:
        raise NoTransition(f"J={J}: no PT transition (the single J=1 level E=-a is always real)")


def find_critical_a_squared(
    J: int, target_digits: int = 12, method: Method | str = Method.STURM_BISECTION
) -> CriticalBoundary:
    """Bracket a_crit(J)^2 to relative width ``10**-target_digits``."""
    _check_J(J)
    method = Method(method)
    if method is Method.DISCRIMINANT_ROOT:
        return _discriminant_boundary(J, target_digits)
    return _sturm_boundary(J, target_digits)


def _sturm_boundary(J: int, target_digits: int) -> CriticalBoundary:
    dps = working_digits(J, target_digits)
    ctx = mp_context(dps)
    lo, hi = ctx.zero, ctx.mpf(24 * J)
    if real_root_count(J, hi, dps) != J or real_root_count(J, lo, dps) >= J:
        raise NoTransition(f"J={J}: real-root count does not change on [0, {24 * J}]")
    rel = ctx.mpf(10) ** (-target_digits)
    while hi - lo > rel * hi:
        mid = (lo + hi) / 2
        if real_root_count(J, mid, dps) == J:
            hi = mid
        else:
            lo = mid
    # the bracket must survive a recount at higher precision
    check = dps + 20
    if real_root_count(J, hi, check) != J or real_root_count(J, lo, check) > J - 2:
        raise NonConvergence(f"J={J}: Sturm counts at the final bracket are precision dependent")
    return CriticalBoundary(J, (lo + hi) / 2, (lo, hi), target_digits, Method.STURM_BISECTION)


def _int_poly_at(J: int, a: int) -> Polynomial:
    return characteristic_polynomial(derive_pt_recursion(J).substitute(a))


def discriminant_in_a(J: int) -> Polynomial:
    """Discriminant of the characteristic polynomial as an integer polynomial in t = a^2.

    The discriminant D(a) is an integer polynomial in ``a`` of degree at most
    J(J-1).  It is sampled exactly at integer ``a``, checked to be even,
    interpolated in t = a^2 at J(J-1)/2 + 1 nodes and validated at one extra
    node.  Sign convention: positive when all J eigenvalues are real and
    distinct.
    """
    _check_J(J)
    if J > DISCRIMINANT_J_CAP:
        raise CapExceeded(f"discriminant_in_a supports J <= {DISCRIMINANT_J_CAP}, got {J}")
    degree = J * (J - 1) // 2
    samples = [discriminant(_int_poly_at(J, m)) for m in range(degree + 2)]
    for m in range(1, degree + 1):
        if discriminant(_int_poly_at(J, -m)) != samples[m]:
            raise ArithmeticError(f"J={J}: discriminant is not even in a (a={m})")
    nodes = [m * m for m in range(degree + 1)]
    coeffs = _interpolate(nodes, samples[: degree + 1])
    G = Polynomial(coeffs)
    extra = (degree + 1) ** 2
    if G(extra) != samples[degree + 1]:
        raise ArithmeticError(f"J={J}: discriminant degree exceeds the bound {degree}")
    return G


def _interpolate(nodes: Sequence[int], values: Sequence[int]) -> list[int]:
    """Exact monomial coefficients of the interpolating polynomial (Newton form)."""
    n = len(nodes)
    table = [Fraction(v) for v in values]
    newton = [table[0]]
    for level in range(1, n):
        table = [(table[i + 1] - table[i]) / (nodes[i + level] - nodes[i]) for i in range(n - level)]
        newton.append(table[0])
    coeffs = [Fraction(0)] * n
    basis = [Fraction(1)]  # prod_{i<k} (t - nodes[i]), ascending
    for k in range(n):
        for i, b in enumerate(basis):
            coeffs[i] += newton[k] * b
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):
            nxt[i + 1] += b
            nxt[i] -= nodes[k] * b
        basis = nxt
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("discriminant interpolation produced a non-integer coefficient")
        out.append(c.numerator)
    return out


def _sign_at(G: Polynomial, t: Fraction) -> int:
    """Exact sign of G at a rational point (homogenised integer Horner)."""
    num, den = t.numerator, t.denominator
    acc = 0
    power = 1
    # acc = sum_i c_i num^i den^(n-i) = den^n G(t), same sign as G(t)
    for c in reversed(G.coeffs):
        acc = acc * num + c * power
        power *= den
    return (acc > 0) - (acc < 0)


def _discriminant_boundary(J: int, target_digits: int) -> CriticalBoundary:
    G = discriminant_in_a(J)
    top = Fraction(24 * J)
    step = top / SCAN_CELLS
    dps = working_digits(J, target_digits)
    prev_t, prev_s = top, _sign_at(G, top)
    if prev_s == 0:
        raise NoTransition(f"J={J}: discriminant vanishes at the top of the bracket")
    for i in range(SCAN_CELLS - 1, -1, -1):
        t = step * i
        s = _sign_at(G, t)
        if s != 0 and s == prev_s:
            prev_t = t
            continue
        lo, hi = t, prev_t
        if s == 0:
            lo = t - step / 1024 if t > 0 else t
        if real_root_count(J, hi, dps) == J and real_root_count(J, max(lo, Fraction(0)), dps) <= J - 2:
            lo, hi = _bisect_sign(G, lo, hi, target_digits)
            ctx = mp_context(target_digits + 10)
            lo_mp = ctx.mpf(lo.numerator) / lo.denominator
            hi_mp = ctx.mpf(hi.numerator) / hi.denominator
            return CriticalBoundary(J, (lo_mp + hi_mp) / 2, (lo_mp, hi_mp), target_digits, Method.DISCRIMINANT_ROOT)
        prev_t, prev_s = t, s if s else prev_s
    raise NoTransition(f"J={J}: no discriminant root with a real-root count change in [0, {24 * J}]")


def _bisect_sign(G: Polynomial, lo: Fraction, hi: Fraction, target_digits: int):
    s_hi = _sign_at(G, hi)
    rel = Fraction(1, 10**target_digits)
    while hi - lo > rel * hi:
        mid = (lo + hi) / 2
        s = _sign_at(G, mid)
        if s == 0:
            return mid, mid
        if s == s_hi:
            hi = mid
        else:
            lo = mid
    return lo, hi


def boundary_differences(table: Sequence[CriticalBoundary]) -> list:
    """Successive differences a_crit(J+1)^2 - a_crit(J)^2 in J order."""
    rows = sorted(table, key=lambda b: b.J)
    for x, y in zip(rows, rows[1:]):
        if y.J != x.J + 1:
            raise ValueError(f"table is not consecutive in J: {x.J} -> {y.J}")
    return [y.a_crit_sq - x.a_crit_sq for x, y in zip(rows, rows[1:])]


@dataclass(frozen=True)
class CollidingLevels:
    """Which two sorted levels merged into the complex pair.

    ``indices`` refer to positions in the spectrum sorted by real part.
    ``edge`` is ``"lowest"``, ``"highest"`` or ``"interior"``.
    """

    J: int
    a: object
    indices: tuple
    edge: str
    pair: tuple
    real_values: tuple


def identify_colliding_levels(J: int, a_sq, sign: int = 1, precision: int = 30) -> CollidingLevels:
    """Locate the complex pair just below the boundary within the real spectrum.

    ``a_sq`` should lie slightly below a_crit(J)^2, close enough that exactly
    one pair has left the real axis.  ``sign`` selects a = +sqrt(a_sq) or
    a = -sqrt(a_sq).
    """
    ctx = mp_context(precision)
    t = ctx.mpf(a_sq) if not isinstance(a_sq, Fraction) else ctx.mpf(a_sq.numerator) / a_sq.denominator
    a = ctx.sqrt(t) * (1 if sign >= 0 else -1)
    spec = qes_spectrum(QesProblem(J, a, Variant.PT_SYMMETRIC), precision, validate=False)
    if not spec.complex_pairs:
        raise NotBroken(f"J={J}, a^2={ctx.nstr(t, 15)}: spectrum is entirely real")
    if len(spec.complex_pairs) > 1:
        raise NotBroken(
            f"J={J}, a^2={ctx.nstr(t, 15)}: {len(spec.complex_pairs)} pairs; move closer to the boundary"
        )
    re, im = spec.complex_pairs[0]
    pos = sum(1 for x in spec.real_values if x < re)
    indices = (pos, pos + 1)
    if pos == 0:
        edge = "lowest"
    elif pos == len(spec.real_values):
        edge = "highest"
    else:
        edge = "interior"
    return CollidingLevels(J, a, indices, edge, (re, im), spec.real_values)


def critical_table(J_values: Sequence[int], target_digits: int = 12, method=Method.STURM_BISECTION) -> list:
    return [find_critical_a_squared(J, target_digits, method) for J in J_values]
