"""ODE-level checks independent of the algebraic recursion.

Shooting integrates -psi'' + V psi = E psi inward along two rays in the
complex x plane, starting inside the Stokes wedges where the eigenfunction
must decay: centred at -45 and -135 degrees for the PT family, 0 and 180
degrees for the Hermitian one.  Along a ray x = r e^{i theta},

    d^2 psi / dr^2 = e^{2 i theta} (V(x) - E) psi.

Near the origin a large |E| turns the ray equation into a sharp exponential
dichotomy (rate ~ sqrt(|E|/2) on the +-45 degree rays), which amplifies
double-precision roundoff to about 1e-6 by the time the origin is reached.
The integrator is therefore a Taylor-series method in multiprecision; the
coefficient is a polynomial in r, so the series recurrence is exact.

The reduction-of-order part builds the second solution
psi_bad = psi_good * (integral_0^x psi_good^-2 + C) and checks it against a
direct integration of the same ODE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NodeInInterval, StiffnessFailure
from .polynomial import Polynomial, mp_context
from .qes import QesEigenfunction, QesProblem, Variant

SHOOT_DPS = 30
TAYLOR_ORDER = 60
STEP_FRACTION = 0.9
R_MAX_CAP = 7.0


@dataclass(frozen=True)
class Ray:
    angle: float
    r_max: float
    steps: int = 4000  # cap on Taylor steps along the ray

    @property
    def direction(self) -> complex:
        return complex(math.cos(self.angle), math.sin(self.angle))


def default_r_max(p: QesProblem, E) -> float:
    """(|E| + 4J + a^2)^(1/4) + 2.5, clamped to [4, 7]."""
    a = float(p.a) if p.variant is Variant.PT_SYMMETRIC else 0.0
    r = (abs(complex(E)) + 4 * p.J + a * a) ** 0.25 + 2.5
    return min(max(r, 4.0), R_MAX_CAP)


def default_rays(p: QesProblem, E, r_max=None) -> tuple[Ray, Ray]:
    r = default_r_max(p, E) if r_max is None else r_max
    if p.variant is Variant.PT_SYMMETRIC:
        return Ray(-math.pi / 4, r), Ray(-3 * math.pi / 4, r)
    return Ray(0.0, r), Ray(math.pi, r)


def _potential(p: QesProblem):
    c2, c4, c6 = (float(c) for c in p.potential_coeffs())
    return lambda x: c6 * x**6 + c4 * x**4 + c2 * x**2


def _envelope_slope(p: QesProblem):
    """d/dx of the envelope exponent of the wedge-decaying solution."""
    if p.variant is Variant.HERMITIAN:
        return lambda x: -(x**3)
    a = p.a
    return lambda x: x**3 + a * x


def _ray_coefficient(p: QesProblem, E, w, ctx) -> Polynomial:
    """q(r) = w^2 (V(r w) - E), so that d^2 psi / dr^2 = q(r) psi on the ray."""
    c2, c4, c6 = p.potential_coeffs(ctx)
    w2 = w * w
    return Polynomial([-w2 * E, 0, w2 * w2 * c2, 0, w2**3 * c4, 0, w2**4 * c6])


def taylor_integrate(
    q: Polynomial, r0, r1, y0, ctx, order: int = TAYLOR_ORDER, tol=None,
    step_fraction: float = STEP_FRACTION, max_steps: int = 4000,
):
    """Integrate psi'' = q(r) psi from r0 to r1 by Taylor series.

    The coefficient is a polynomial, so the series of psi about any point
    follows from (n+2)(n+1) t_{n+2} = sum_k q_k t_{n-k}.  The step is the
    largest for which the last three series terms stay below ``tol`` relative
    to |psi| + |psi'|, times ``step_fraction``.  The state is renormalized after every step, so only
    the ratio psi'/psi (and the overall phase) is meaningful.
    """
    tol = ctx.mpf(10) ** (-(ctx.dps - 5)) if tol is None else ctx.mpf(tol)
    psi, dpsi = ctx.mpc(y0[0]), ctx.mpc(y0[1])
    r, end = ctx.mpf(r0), ctx.mpf(r1)
    direction = 1 if end > r else -1
    steps = 0
    while r != end:
        steps += 1
        if steps > max_steps:
            raise StiffnessFailure(f"more than {max_steps} Taylor steps; raise Ray.steps or reduce r_max")
        Q = q(Polynomial([r, 1])).coeffs
        t = [psi, dpsi]
        for n in range(order - 1):
            acc = ctx.mpc(0)
            for k in range(min(len(Q) - 1, n) + 1):
                acc += Q[k] * t[n - k]
            t.append(acc / ((n + 2) * (n + 1)))
        scale = abs(psi) + abs(dpsi)
        h = abs(end - r)
        for n in range(order - 3, order):
            if t[n] != 0:
                h = min(h, (tol * scale / abs(t[n])) ** (ctx.one / n) * step_fraction)
        if h == 0:
            raise StiffnessFailure("Taylor step size underflow")
        h *= direction
        psi = ctx.polyval(t[::-1], h)
        dpsi = ctx.polyval([n * tn for n, tn in enumerate(t)][:0:-1], h)
        norm = abs(psi) + abs(dpsi)
        psi, dpsi = psi / norm, dpsi / norm
        r = end if abs(end - (r + h)) <= ctx.eps * 16 * (1 + abs(end)) else r + h
    return psi, dpsi


def integrate_ray(p: QesProblem, E, ray: Ray, dps: int = SHOOT_DPS, tol=None, step_fraction: float = STEP_FRACTION):
    """psi and dpsi/dx at the origin for the solution decaying along ``ray``.

    Starts at r_max with psi = 1 and the envelope's log-derivative, then
    integrates inward in ``dps``-digit arithmetic.  Returns
    ``(psi(0), psi_x(0))`` as mpc, up to a common factor.
    """
    ctx = mp_context(dps)
    w = ctx.expj(ctx.mpf(ray.angle))
    E = ctx.mpc(E) if isinstance(E, complex) else _mp_scalar(ctx, E)
    q = _ray_coefficient(p, E, w, ctx)
    x0 = ctx.mpf(ray.r_max) * w
    a = _mp_scalar(ctx, p.a) if p.variant is Variant.PT_SYMMETRIC else ctx.zero
    slope = -(x0**3) if p.variant is Variant.HERMITIAN else x0**3 + a * x0
    psi0, dpsi_dr = taylor_integrate(
        q, ray.r_max, 0, (1, w * slope), ctx, tol=tol, step_fraction=step_fraction, max_steps=ray.steps
    )
    return psi0, dpsi_dr / w


def _mp_scalar(ctx, v):
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / v.denominator
    if isinstance(v, complex):
        return ctx.mpc(v)
    return ctx.convert(v)


@dataclass(frozen=True)
class ShootingResult:
    even_residual: float
    matching_residual: float
    origin_values: tuple


def shoot(
    p: QesProblem, E, rays=None, dps: int = SHOOT_DPS, tol=None, step_fraction: float = STEP_FRACTION
) -> ShootingResult:
    """Even-parity residual |psi'(0)| / |(psi, psi')| (worse of the two rays)
    and the normalized Wronskian of the two ray solutions at the origin."""
    if rays is None:
        rays = default_rays(p, E)
    left, right = rays
    f0, d0 = integrate_ray(p, E, left, dps, tol, step_fraction)
    g0, e0 = integrate_ray(p, E, right, dps, tol, step_fraction)
    n1 = abs(f0) + abs(d0)
    n2 = abs(g0) + abs(e0)
    even = max(abs(d0) / n1, abs(e0) / n2)
    match = abs(f0 * e0 - d0 * g0) / (n1 * n2)
    values = tuple((complex(u), complex(v)) for u, v in ((f0, d0), (g0, e0)))
    return ShootingResult(float(even), float(match), values)


def shoot_eigenvalue_residual(p: QesProblem, E, rays=None, dps: int = SHOOT_DPS) -> float:
    """Normalized even-parity residual; near zero iff E is an even eigenvalue."""
    return shoot(p, E, rays, dps).even_residual


@dataclass(frozen=True)
class SolutionPair:
    """Good and bad solutions sampled at ``x = r * e^{i angle}`` for r in ``radii``.

    ``bad`` comes from the reduction-of-order quadrature; ``bad_ode`` and
    ``wronskian_samples`` come from integrating the ODE directly from the
    origin with the same initial data.
    """

    radii: np.ndarray
    angle: float
    good: np.ndarray
    bad: np.ndarray
    bad_ode: np.ndarray = field(repr=False)
    wronskian_samples: np.ndarray = field(repr=False)
    C: complex = 0j

    @property
    def wronskian(self) -> complex:
        return complex(np.mean(self.wronskian_samples))

    @property
    def wronskian_deviation(self) -> float:
        return float(np.max(np.abs(self.wronskian_samples - self.wronskian_samples[0])))

    @property
    def ode_mismatch(self) -> float:
        scale = np.maximum(1.0, np.abs(self.bad))
        return float(np.max(np.abs(self.bad - self.bad_ode) / scale))


def _u_integral(good: QesEigenfunction, angle: float, radii):
    """Cumulative integral_0^{r e^{i angle}} psi_good^-2 along the ray."""
    ctx = good.ctx
    w = ctx.expj(angle)
    f = lambda r: w / good(r * w) ** 2  # noqa: E731
    order = np.argsort(radii)
    out = np.empty(len(radii), dtype=complex)
    # integrate outward from 0 separately for r >= 0 and r < 0
    for sign in (1, -1):
        idx = [i for i in order[:: sign] if (radii[i] >= 0 if sign > 0 else radii[i] < 0)]
        acc, prev = ctx.mpc(0), ctx.mpf(0)
        for i in idx:
            r = ctx.mpf(float(radii[i]))
            acc += ctx.quad(f, [prev, r])
            prev = r
            out[i] = complex(acc)
    return out


def _check_nodes(good: QesEigenfunction, angle: float, radii) -> None:
    # nodes are zeros of the polynomial factor; the envelope never vanishes
    fine = np.linspace(min(radii), max(radii), 8 * len(radii) + 1)
    w = complex(math.cos(angle), math.sin(angle))
    coeffs = [complex(c) for c in good.coeffs]
    vals = np.array([sum(c * (r * w) ** (2 * k) for k, c in enumerate(coeffs)) for r in fine])
    mags = np.abs(vals)
    if np.min(mags) <= 1e-12 * np.max(mags):
        raise NodeInInterval("psi_good (nearly) vanishes on the interval")
    if np.all(np.abs(vals.imag) <= 1e-12 * mags):
        re = vals.real
        if np.any(np.sign(re[1:]) != np.sign(re[:-1])):
            raise NodeInInterval("psi_good changes sign on the interval")


def bad_solution(good: QesEigenfunction, C=0.0, interval=(-2.0, 2.0), *, angle: float = 0.0, samples: int = 81) -> SolutionPair:
    """Reduction-of-order partner of ``good`` on a segment of the ray at ``angle``.

    ``interval`` gives the range of the ray parameter r (x = r e^{i angle})
    and must contain 0, the base point of the integral.
    """
    lo, hi = interval
    if not lo <= 0 <= hi:
        raise ValueError("interval must contain the base point r = 0")
    radii = np.linspace(lo, hi, samples)
    _check_nodes(good, angle, radii)
    w = complex(math.cos(angle), math.sin(angle))
    u = _u_integral(good, angle, radii) + complex(C)
    g = np.array([complex(good(r * w)) for r in radii])
    bad = g * u

    V = _potential(good.problem)
    E = complex(good.energy)
    w2 = w * w

    def rhs(r, y):
        x = r * w
        return [y[0 + 1], w2 * (V(x) - E) * y[0]]

    g0 = complex(good(0))
    gx0 = complex(good.derivative(0))
    y0 = [g0 * complex(C), (gx0 * complex(C) + 1 / g0) * w]
    bad_ode = np.empty(samples, dtype=complex)
    dbad = np.empty(samples, dtype=complex)
    for side in (radii[radii >= 0], radii[radii < 0][::-1]):
        if len(side) == 0:
            continue
        end = side[-1]
        if end == 0:
            sol_y = np.array([[y0[0]], [y0[1]]])
        else:
            sol = solve_ivp(rhs, (0.0, end), y0, method="DOP853", rtol=1e-13, atol=1e-20, t_eval=side, dense_output=False)
            if not sol.success:
                raise StiffnessFailure(sol.message)
            sol_y = sol.y
        for k, r in enumerate(side):
            i = int(np.argmin(np.abs(radii - r)))
            bad_ode[i] = sol_y[0, k]
            dbad[i] = sol_y[1, k] / w
    gx = np.array([complex(good.derivative(r * w)) for r in radii])
    wr = g * dbad - gx * bad_ode
    return SolutionPair(radii, angle, g, bad, bad_ode, wr, complex(C))


def decay_constant(good: QesEigenfunction, angle: float, r_max: float = 8.0) -> complex:
    """C making psi_bad decay along the ray at ``angle``.

    Valid where psi_good grows along the ray, so psi_good^-2 is integrable
    to infinity: C = -integral_0^{inf e^{i angle}} psi_good^-2.
    """
    ctx = good.ctx
    w = ctx.expj(angle)
    return -complex(ctx.quad(lambda r: w / good(r * w) ** 2, [0, 1, 2, r_max]))


def ray_profile(good: QesEigenfunction, C, angle: float, radii) -> np.ndarray:
    """|psi_bad| sampled along the ray at ``angle`` (radii >= 0)."""
    ctx = good.ctx
    w = ctx.expj(angle)
    f = lambda r: w / good(r * w) ** 2  # noqa: E731
    out = []
    acc, prev = ctx.mpc(0), ctx.mpf(0)
    for r in sorted(radii):
        r = ctx.mpf(float(r))
        acc += ctx.quad(f, [prev, r])
        prev = r
        out.append(abs(good(r * w) * (acc + C)))
    return np.array([float(v) for v in out])
