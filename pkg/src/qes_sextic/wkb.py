"""Leading-order WKB check of the large-J boundary a_crit(J)^2 ~ 12 J.

With a = sqrt(J) b, x = y J^(1/4) and E_J = F J^(3/2), the even-parity
quantization condition for the level n = J loses all J dependence and
becomes

    2 pi = integral over the allowed interval of sqrt(F - y^6 - 2b y^4 - (b^2+4) y^2) dy.

The factor 2n + 1/2 for even states and the J scaling are already absorbed
into that form; nothing else is applied on top.

Assuming the turning-point polynomial factors as (y^2-alpha)^2 (y^2-beta),
matching coefficients gives alpha, beta and F as functions of b, real only
for b^2 >= 12.  Positive turning points need b < 0 with these formulas, so
the search runs over b < 0 and b^2 is the reported quantity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ComplexRegime, NegativeIntegrand, NonConvergence, NoRealTurningPoints, NoRoot
from .polynomial import Polynomial, mp_context

WKB_DPS = 40


def _ctx(dps):
    return mp_context(dps)


@dataclass(frozen=True)
class WkbFactorization:
    b: object
    alpha: object
    beta: object
    F: object

    def turning_polynomial(self) -> Polynomial:
        """y^6 + 2b y^4 + (b^2+4) y^2 - F, ascending in y."""
        b = self.b
        return Polynomial([-self.F, 0, b * b + 4, 0, 2 * b, 0, 1])

    def factored_polynomial(self) -> Polynomial:
        """(y^2 - alpha)^2 (y^2 - beta), ascending in y."""
        sq = Polynomial([-self.alpha, 0, 1])
        return sq * sq * Polynomial([-self.beta, 0, 1])


def closed_form_F(b, dps: int = WKB_DPS):
    """F = -(2/27)(b - r)(2b + r)^2 with r = sqrt(b^2 - 12)."""
    ctx = _ctx(dps)
    b = ctx.mpf(b)
    r = _radical(ctx, b)
    return -ctx.mpf(2) / 27 * (b - r) * (2 * b + r) ** 2


def _radical(ctx, b):
    disc = b * b - 12
    if disc < 0:
        if -disc <= 12 * ctx.mpf(2) ** (-ctx.prec + 8):
            return ctx.zero
        raise ComplexRegime(f"b^2 = {ctx.nstr(b * b, 12)} < 12: alpha and beta are complex")
    return ctx.sqrt(disc)


def factorization_from_b(b, dps: int = WKB_DPS) -> WkbFactorization:
    """alpha = (-2b - r)/3, beta = (-2b + 2r)/3, F = alpha^2 beta."""
    ctx = _ctx(dps)
    b = ctx.mpf(b)
    r = _radical(ctx, b)
    alpha = (-2 * b - r) / 3
    beta = (-2 * b + 2 * r) / 3
    return WkbFactorization(b, alpha, beta, alpha * alpha * beta)


def _clusters(ctx, roots, rel):
    """Group nearly equal roots; returns [(center, multiplicity)]."""
    remaining = list(roots)
    out = []
    while remaining:
        z = remaining.pop(0)
        group = [z] + [w for w in remaining if abs(w - z) <= rel * max(1, abs(z))]
        remaining = [w for w in remaining if w not in group[1:]]
        out.append((ctx.fsum(group) / len(group), len(group)))
    return out


def turning_points(b, F, dps: int = WKB_DPS):
    """Outer turning point U and the z = y^2 cubic's cofactor on [0, U^2].

    Returns ``(U, R)`` with ``F - P(y) = (U^2 - y^2) R(y^2)``.
    """
    ctx = _ctx(dps)
    b, F = ctx.mpf(b), ctx.mpf(F)
    if F <= 0:
        raise NoRealTurningPoints(f"F = {ctx.nstr(F, 10)} <= 0: the origin is classically forbidden")
    # Q(z) = F - z^3 - 2b z^2 - (b^2+4) z
    Q = Polynomial([F, -(b * b + 4), -2 * b, ctx.mpf(-1)])
    roots = ctx.polyroots(list(reversed(Q.coeffs)), maxsteps=200, extraprec=2 * ctx.prec)
    rel = ctx.mpf(10) ** (-(dps // 4))
    candidates = []
    for center, mult in _clusters(ctx, [ctx.mpc(z) for z in roots], rel):
        if abs(ctx.im(center)) <= rel * max(1, abs(center)) and ctx.re(center) > 0 and mult % 2 == 1:
            candidates.append(ctx.re(center))
    if not candidates:
        raise NoRealTurningPoints(f"no sign-changing positive root of the turning polynomial for b={b}, F={F}")
    U2 = min(candidates)
    # synthetic division of Q by (U2 - z): Q = (U2 - z) R(z) + remainder
    R, _ = Q.divmod(Polynomial([U2, ctx.mpf(-1)]))
    return ctx.sqrt(U2), R


def quantization_integral(b, F, quad_tolerance=1e-12, dps: int = WKB_DPS):
    """Integral of sqrt(F - P(y)) between the outer turning points +-U.

    With y = U sin(theta) the square-root endpoint behaviour becomes
    U^2 cos^2(theta) sqrt(R(U^2 sin^2 theta)), smooth except for kinks at
    interior double roots of R, where the interval is split.
    """
    ctx = _ctx(dps)
    U, R = turning_points(b, F, dps)
    U2 = U * U
    scale = max(ctx.one, max(abs(c) for c in R.coeffs)) * max(ctx.one, U2) ** 2
    floor = -scale * ctx.mpf(10) ** (-(dps // 3))

    def r_at(z):
        v = R(z)
        if v < 0:
            if v < floor:
                raise NegativeIntegrand(f"integrand negative ({ctx.nstr(v, 5)}) at y^2={ctx.nstr(z, 10)}")
            return ctx.zero
        return v

    breaks = [ctx.zero]
    for z in R.roots(dps) if R.degree > 0 else []:
        z = ctx.mpc(z)
        if abs(ctx.im(z)) <= ctx.mpf(10) ** (-(dps // 4)) and 0 < ctx.re(z) < U2:
            breaks.append(ctx.asin(ctx.sqrt(ctx.re(z)) / U))
    breaks.append(ctx.pi / 2)
    breaks = sorted(set(breaks))

    def integrand(theta):
        s, c = ctx.sin(theta), ctx.cos(theta)
        return U2 * c * c * ctx.sqrt(r_at(U2 * s * s))

    value, err = ctx.quad(integrand, breaks, error=True, maxdegree=10)
    value *= 2
    err *= 2
    if err > quad_tolerance:
        raise NonConvergence(f"quadrature error estimate {ctx.nstr(err, 3)} exceeds {quad_tolerance}")
    return value


def beta_integral(dps: int = WKB_DPS):
    """integral_0^1 u^(-1/2) (1-u)^(3/2) du by tanh-sinh quadrature."""
    ctx = _ctx(dps)
    return ctx.quad(lambda u: (1 - u) ** ctx.mpf(1.5) / ctx.sqrt(u), [0, 1])


def quantization_defect(q, dps: int = WKB_DPS, quad_tolerance=None):
    """I(b) - 2 pi along the factorization family, with b = -sqrt(12 + q)."""
    ctx = _ctx(dps)
    if quad_tolerance is None:
        quad_tolerance = ctx.mpf(10) ** (-(dps - 10))
    b = -ctx.sqrt(12 + ctx.mpf(q))
    fac = factorization_from_b(b, dps)
    return quantization_integral(b, fac.F, quad_tolerance, dps) - 2 * ctx.pi


def wkb_boundary_constant(search_tolerance=1e-8, dps: int = WKB_DPS):
    """Solve I(b, F(b)) = 2 pi for b on [-6, -sqrt(12)].

    Works in q = b^2 - 12 in [0, 24].  The defect I - 2 pi is nonnegative on
    the family, so the root is located as the edge of the set where the
    defect is within the quadrature noise ``tau``: bisection keeps
    ``defect(lo) <= tau < defect(hi)`` until the bracket is narrower than
    ``search_tolerance / 10``.  Returns b (negative).
    """
    ctx = _ctx(dps)
    tau = ctx.mpf(10) ** (-(dps - 14))
    lo, hi = ctx.zero, ctx.mpf(24)
    if quantization_defect(lo, dps) > tau:
        raise NoRoot("quantization condition fails at b^2 = 12 already")
    if abs(quantization_defect(hi, dps)) <= tau:
        raise NoRoot("quantization condition holds across the whole bracket; root not isolated")
    width = ctx.mpf(search_tolerance) / 10
    while hi - lo > width:
        mid = (lo + hi) / 2
        if abs(quantization_defect(mid, dps)) <= tau:
            lo = mid
        else:
            hi = mid
    return -ctx.sqrt(12 + lo)


def asymptotic_prefactor(dps: int = WKB_DPS):
    """F at the boundary, 64 sqrt(3) / 9."""
    ctx = _ctx(dps)
    return 64 * ctx.sqrt(3) / 9


def asymptotic_energy(J: int, dps: int = WKB_DPS):
    """Predicted largest QES eigenvalue magnitude at the boundary, F J^(3/2)."""
    if J < 1:
        raise ValueError("J must be >= 1")
    ctx = _ctx(dps)
    return asymptotic_prefactor(dps) * ctx.mpf(J) ** ctx.mpf(1.5)
