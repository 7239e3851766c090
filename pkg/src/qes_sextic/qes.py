"""Quasi-exact sector of the even sextic Hamiltonians.

Two families share the same machinery:

* Hermitian:     H = p^2 + x^6 - (4J-1) x^2,
  psi(x) = exp(-x^4/4) * sum_k c_k x^(2k)
* PT-symmetric:  H = p^2 + x^6 + 2a x^4 + (4J-1+a^2) x^2,
  psi(x) = exp(+x^4/4 + a x^2/2) * sum_k c_k x^(2k)

Substituting the ansatz into -psi'' + V psi = E psi and collecting powers of
x^2 gives a three-term recursion for c_0..c_{J-1} with c_{-1} = c_J = 0.
For the PT family the row for x^(2k) reads

    4(J-k) c_{k-1} - (E + a(4k+1)) c_k - (2k+2)(2k+1) c_{k+1} = 0,

and for the Hermitian family

    4(J-k) c_{k-1} + E c_k + 2(k+1)(2k+1) c_{k+1} = 0.

Both are stored as :class:`TridiagonalRecursion` rows
``sub[k] c_{k-1} + (diag[k] - sign * E) c_k + sup[k] c_{k+1} = 0``
with ``sign = +1`` (PT) and ``sign = -1`` (Hermitian).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import EnvelopeOverflow, NonConvergence, NotAnEigenvalue
from .polynomial import Polynomial, mp_context

DEFAULT_PRECISION = 30

# Largest real part of the envelope exponent accepted by ode_residual; keeps
# |psi| inside IEEE double range so sampled values can be exported.
MAX_ENVELOPE_EXPONENT = 700


class Variant(enum.Enum):
    HERMITIAN = "hermitian"
    PT_SYMMETRIC = "pt"


class Envelope(enum.Enum):
    DECAYING_QUARTIC = "exp(-x^4/4)"
    GROWING_QUARTIC = "exp(+x^4/4 + a x^2/2)"


@dataclass(frozen=True)
class QesProblem:
    """One Hamiltonian instance ``(J, a, variant)``.

    ``a`` may be any real scalar (int, Fraction, float, decimal string or
    mpf); it is converted to the working precision only when needed.  The
    Hermitian family has no ``a`` and rejects a nonzero value.
    """

    J: int
    a: object = 0
    variant: Variant = Variant.PT_SYMMETRIC

    def __post_init__(self):
        if not isinstance(self.J, int) or isinstance(self.J, bool) or self.J < 1:
            raise ValueError(f"J must be a positive integer, got {self.J!r}")
        if isinstance(self.variant, str):
            object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant is Variant.HERMITIAN and _nonzero(self.a):
            raise ValueError("the Hermitian sextic family has no parameter a; pass a=0")

    @classmethod
    def hermitian(cls, J: int) -> "QesProblem":
        return cls(J, 0, Variant.HERMITIAN)

    @classmethod
    def pt(cls, J: int, a) -> "QesProblem":
        return cls(J, a, Variant.PT_SYMMETRIC)

    def potential_coeffs(self, ctx=None) -> tuple:
        """Coefficients ``(c2, c4, c6)`` of V(x) = c2 x^2 + c4 x^4 + c6 x^6."""
        a = self.a if ctx is None else _scalar(ctx, self.a)
        if self.variant is Variant.HERMITIAN:
            return (-(4 * self.J - 1), 0, 1)
        return (4 * self.J - 1 + a * a, 2 * a, 1)


def _nonzero(a) -> bool:
    if isinstance(a, str):
        return Fraction(a) != 0
    return a != 0


def _scalar(ctx, value):
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    if isinstance(value, Polynomial):
        return value.map(lambda c: _scalar(ctx, c))
    if isinstance(value, complex) or type(value).__name__ == "mpc":
        return ctx.mpc(value)
    return ctx.mpf(value)


@dataclass(frozen=True)
class TridiagonalRecursion:
    """Three-term recursion for the coefficients ``c_0..c_{size-1}``.

    Row ``k`` reads ``sub_k c_{k-1} + (diag[k] - sign*E) c_k + sup[k] c_{k+1} = 0``
    where ``sub_k = sub[k-1]`` for ``k >= 1`` (so ``sub`` has one entry per
    row after the first) and ``sup[k]`` exists for ``k <= size-2``.  Entries
    may be numbers or :class:`Polynomial` objects in ``a``.
    """

    size: int
    sub: tuple
    diag: tuple
    sup: tuple
    sign: int
    variant: Variant = Variant.PT_SYMMETRIC

    def __post_init__(self):
        if len(self.diag) != self.size or len(self.sub) != self.size - 1 or len(self.sup) != self.size - 1:
            raise ValueError("recursion arrays do not match size")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def matrix(self):
        """Entries of M with ``E c = M c``: returns (diagonal, lower, upper)."""
        s = self.sign
        diag = tuple(d * s for d in self.diag)
        lower = tuple(x * s for x in self.sub)
        upper = tuple(x * s for x in self.sup)
        return diag, lower, upper

    def substitute(self, a) -> "TridiagonalRecursion":
        """Replace polynomial dependence on ``a`` by the value ``a``."""

        def ev(x):
            return x(a) if isinstance(x, Polynomial) else x

        return TridiagonalRecursion(
            self.size,
            tuple(ev(x) for x in self.sub),
            tuple(ev(x) for x in self.diag),
            tuple(ev(x) for x in self.sup),
            self.sign,
            self.variant,
        )


def hermitian_recursion(J: int) -> TridiagonalRecursion:
    if J < 1:
        raise ValueError("J must be >= 1")
    return TridiagonalRecursion(
        size=J,
        sub=tuple(4 * (J - k) for k in range(1, J)),
        diag=(0,) * J,
        sup=tuple(2 * (k + 1) * (2 * k + 1) for k in range(J - 1)),
        sign=-1,
        variant=Variant.HERMITIAN,
    )


def derive_pt_recursion(J: int) -> TridiagonalRecursion:
    """PT-family recursion with the diagonal kept as a polynomial in ``a``.

    ``diag[k] = -(4k+1) a``, ``sub_k = 4(J-k)``, ``sup[k] = -(2k+2)(2k+1)``.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    return TridiagonalRecursion(
        size=J,
        sub=tuple(4 * (J - k) for k in range(1, J)),
        diag=tuple(Polynomial([0, -(4 * k + 1)]) for k in range(J)),
        sup=tuple(-(2 * k + 2) * (2 * k + 1) for k in range(J - 1)),
        sign=1,
        variant=Variant.PT_SYMMETRIC,
    )


def build_recursion(p: QesProblem, ctx=None) -> TridiagonalRecursion:
    """Numeric recursion for ``p``; ``a`` is converted through ``ctx`` if given."""
    if p.variant is Variant.HERMITIAN:
        return hermitian_recursion(p.J)
    a = p.a if ctx is None else _scalar(ctx, p.a)
    if isinstance(a, str):
        a = Fraction(a)
    return derive_pt_recursion(p.J).substitute(a)


def characteristic_polynomial(r: TridiagonalRecursion) -> Polynomial:
    """Monic ``det(E*I - M)`` via the three-term determinant recurrence.

    ``D_k = (E - m_{k-1}) D_{k-1} - l_{k-1} u_{k-2} D_{k-2}``.  Works for
    numeric entries and for entries that are polynomials in ``a``.
    """
    diag, lower, upper = r.matrix()
    d_prev = Polynomial([1])
    d_cur = Polynomial([-diag[0], 1])
    for k in range(2, r.size + 1):
        shift = Polynomial([-diag[k - 1], 1])
        coupling = lower[k - 2] * upper[k - 2]
        d_prev, d_cur = d_cur, shift * d_cur - d_prev * coupling
    return d_cur


def pt_characteristic_polynomial(J: int) -> Polynomial:
    """Characteristic polynomial in ``E`` with integer-polynomial coefficients in ``a``."""
    return characteristic_polynomial(derive_pt_recursion(J))


@dataclass(frozen=True)
class Spectrum:
    """The J quasi-exact eigenvalues.

    ``complex_pairs`` holds ``(re, im)`` with ``im > 0`` for each conjugate
    pair.  A pair whose imaginary part is below ``coalescence_tol * max(1, |E|)``
    is reported as a double real root.
    """

    real_values: tuple
    complex_pairs: tuple
    residual_bound: object = None
    precision: int = DEFAULT_PRECISION
    coalescence_tol: object = None

    @property
    def size(self) -> int:
        return len(self.real_values) + 2 * len(self.complex_pairs)

    @property
    def all_real(self) -> bool:
        return not self.complex_pairs

    def values(self) -> list:
        """All eigenvalues as complex numbers: reals first, then each pair."""
        ctx = mp_context(self.precision)
        out = [ctx.mpc(x) for x in self.real_values]
        for re, im in self.complex_pairs:
            out.append(ctx.mpc(re, im))
            out.append(ctx.mpc(re, -im))
        return out

    def total(self):
        ctx = mp_context(self.precision)
        return ctx.fsum(self.real_values) + 2 * ctx.fsum(re for re, _ in self.complex_pairs)


def _polish(ctx, p: Polynomial, dp: Polynomial, z, maxiter: int = 60):
    """Newton refinement; returns the refined root and whether it converged."""
    tol = ctx.mpf(2) ** (-ctx.prec + 8)
    for _ in range(maxiter):
        value = p(z)
        # near a coalescence the step never drops below tol; stop once the
        # residual is at the rounding level of the evaluation itself
        noise = 64 * ctx.eps * ctx.fsum(abs(c) * abs(z) ** k for k, c in enumerate(p.coeffs))
        if abs(value) <= noise:
            return z, True
        d = dp(z)
        if d == 0:
            return z, False
        step = value / d
        z = z - step
        if abs(step) <= tol * max(1, abs(z)):
            return z, True
    return z, False


def qes_spectrum(p: QesProblem, precision: int = DEFAULT_PRECISION, *, validate: bool = True) -> Spectrum:
    """All J quasi-exact eigenvalues of ``p`` at ``precision`` significant digits.

    Roots come from a Durand-Kerner pass (companion-matrix free) followed by
    Newton polishing of every simple root.  Nearly coincident roots at a
    coalescence are left as found; they are accurate to about half the
    working digits, which the coalescence tolerance accounts for.
    """
    if precision < 15:
        raise ValueError("precision must be at least 15 digits")
    ctx = mp_context(precision)
    poly = characteristic_polynomial(build_recursion(p, ctx)).map(lambda c: _scalar(ctx, c))
    dpoly = poly.derivative()
    try:
        raw = poly.roots(precision, maxsteps=100 + 20 * p.J)
    except Exception as exc:  # mpmath raises its own NoConvergence
        raise NonConvergence(f"root finding failed for {p}: {exc}") from exc
    tol = ctx.mpf(10) ** (-(precision // 2) + 2)
    raw = [ctx.mpc(z) for z in raw]
    roots = []
    for i, z in enumerate(raw):
        # a neighbour closer than the coalescence scale means a (near) double
        # root where Newton only crawls; keep the Durand-Kerner value there
        crowded = any(j != i and abs(w - z) <= tol * max(1, abs(z)) for j, w in enumerate(raw))
        if not crowded:
            z, ok = _polish(ctx, poly, dpoly, z)
            if not ok:
                raise NonConvergence(f"Newton polishing stalled at {z} for {p}")
        roots.append(z)

    reals, pairs = [], []
    pending = sorted(roots, key=lambda z: (ctx.re(z), ctx.im(z)))
    for z in pending:
        if abs(ctx.im(z)) <= tol * max(1, abs(z)):
            reals.append(ctx.re(z))
        elif ctx.im(z) > 0:
            pairs.append((ctx.re(z), ctx.im(z)))
    reals.sort()
    pairs.sort()
    if len(reals) + 2 * len(pairs) != p.J:
        raise NonConvergence(f"root classification for {p} is not conjugate-symmetric")

    residual = None
    if validate:
        residual = max(
            (ode_residual(eigenfunction(p, e, precision=precision, check=False), validation_grid(p))
             for e in reals + [ctx.mpc(re, im) for re, im in pairs]),
            default=ctx.zero,
        )
    return Spectrum(tuple(reals), tuple(pairs), residual, precision, tol)


@dataclass(frozen=True)
class QesEigenfunction:
    """``psi(x) = envelope(x) * sum_k coeffs[k] * x^(2k)`` at one energy."""

    problem: QesProblem
    energy: object
    coeffs: tuple
    envelope: Envelope
    precision: int = DEFAULT_PRECISION
    last_row_residual: object = field(default=None, compare=False)

    @property
    def ctx(self):
        return mp_context(self.precision)

    def exponent(self, x):
        """The envelope exponent g(x), psi = exp(g) * P(x^2)."""
        x2 = x * x
        if self.envelope is Envelope.DECAYING_QUARTIC:
            return -x2 * x2 / 4
        a = _scalar(self.ctx, self.problem.a)
        return x2 * x2 / 4 + a * x2 / 2

    def _parts(self, x):
        """Values of g', g'', P, P', P'' at ``x`` (P as a function of x)."""
        ctx = self.ctx
        x = ctx.mpc(x)
        if self.envelope is Envelope.DECAYING_QUARTIC:
            g1, g2 = -x**3, -3 * x * x
        else:
            a = _scalar(ctx, self.problem.a)
            g1, g2 = x**3 + a * x, 3 * x * x + a
        x2 = x * x
        P = P1 = P2 = ctx.zero
        for k in reversed(range(len(self.coeffs))):
            c = self.coeffs[k]
            P = P * x2 + c
        # derivatives of sum c_k x^(2k), term by term
        for k, c in enumerate(self.coeffs):
            if k >= 1:
                P1 += 2 * k * c * x ** (2 * k - 1)
                P2 += 2 * k * (2 * k - 1) * c * x ** (2 * k - 2)
        return g1, g2, P, P1, P2

    def __call__(self, x):
        ctx = self.ctx
        x = ctx.mpc(x)
        P = ctx.zero
        for c in reversed(self.coeffs):
            P = P * x * x + c
        return ctx.exp(self.exponent(x)) * P

    def derivative(self, x):
        ctx = self.ctx
        g1, _, P, P1, _ = self._parts(x)
        return ctx.exp(self.exponent(ctx.mpc(x))) * (g1 * P + P1)

    def second_derivative(self, x):
        ctx = self.ctx
        g1, g2, P, P1, P2 = self._parts(x)
        return ctx.exp(self.exponent(ctx.mpc(x))) * ((g1 * g1 + g2) * P + 2 * g1 * P1 + P2)


def eigenfunction(
    p: QesProblem,
    energy,
    *,
    precision: int = DEFAULT_PRECISION,
    tol=None,
    check: bool = True,
) -> QesEigenfunction:
    """Coefficients by forward substitution from ``c_0 = 1``.

    The final recursion row is not used by the substitution, so its relative
    residual measures how far ``energy`` is from an eigenvalue.  With
    ``check`` set, a residual above ``tol`` (default ``10**(-precision//3)``)
    raises :class:`NotAnEigenvalue`.
    """
    ctx = mp_context(precision)
    r = build_recursion(p, ctx)
    E = _scalar(ctx, energy)
    s = r.sign
    c = [ctx.one]
    for k in range(p.J - 1):
        below = r.sub[k - 1] * c[k - 1] if k >= 1 else 0
        c.append(-(below + (r.diag[k] - s * E) * c[k]) / r.sup[k])
    k = p.J - 1
    below = r.sub[k - 1] * c[k - 1] if k >= 1 else ctx.zero
    here = (r.diag[k] - s * E) * c[k]
    scale = abs(below) + abs(here)
    if p.J == 1:
        scale = abs(r.diag[0]) + abs(E)
    residual = abs(below + here) / scale if scale else abs(below + here)
    if tol is None:
        tol = ctx.mpf(10) ** (-(precision // 3))
    if check and residual > tol:
        raise NotAnEigenvalue(f"E={ctx.nstr(E, 12)} leaves relative residual {ctx.nstr(residual, 3)} for {p}")
    envelope = Envelope.DECAYING_QUARTIC if p.variant is Variant.HERMITIAN else Envelope.GROWING_QUARTIC
    return QesEigenfunction(p, E, tuple(c), envelope, precision, residual)


def validation_grid(p: QesProblem) -> list:
    """Small real and complex grid where every envelope stays representable."""
    pts = [k / 4 for k in range(-8, 9)]
    pts += [complex(0.5, -0.5), complex(-0.5, -0.5), complex(1.0, -1.0), complex(-1.0, -1.0), 1j]
    return pts


def ode_residual(f: QesEigenfunction, grid: Sequence) -> object:
    """Max over ``grid`` of ``|-psi'' + V psi - E psi| / max(1, |psi|)``.

    Derivatives are taken analytically from the closed form.  Raises
    :class:`EnvelopeOverflow` where the envelope exponent exceeds
    ``MAX_ENVELOPE_EXPONENT``.
    """
    if not grid:
        raise ValueError("grid must be nonempty")
    ctx = f.ctx
    c2, c4, c6 = f.problem.potential_coeffs(ctx)
    worst = ctx.zero
    for x in grid:
        x = ctx.mpc(x)
        g = f.exponent(x)
        if ctx.re(g) > MAX_ENVELOPE_EXPONENT:
            raise EnvelopeOverflow(f"envelope exponent {ctx.nstr(ctx.re(g), 6)} at x={x}")
        g1, g2, P, P1, P2 = f._parts(x)
        x2 = x * x
        V = ((c6 * x2 + c4) * x2 + c2) * x2
        bracket = -((g1 * g1 + g2) * P + 2 * g1 * P1 + P2) + (V - f.energy) * P
        env = ctx.exp(g)
        psi = env * P
        res = abs(env * bracket) / max(ctx.one, abs(psi))
        worst = max(worst, res)
    return worst


def spectral_reflection(p: QesProblem) -> QesProblem:
    """The problem at ``-a``; its spectrum is the negated spectrum of ``p``."""
    a = p.a
    if isinstance(a, str):
        a = -Fraction(a)
    else:
        a = -a
    return QesProblem(p.J, a, p.variant)


def trace(p: QesProblem):
    """Sum of the J eigenvalues: 0 (Hermitian) or -a J (2J-1) (PT)."""
    if p.variant is Variant.HERMITIAN:
        return 0
    a = Fraction(p.a) if isinstance(p.a, str) else p.a
    return -a * p.J * (2 * p.J - 1)
