"""Dense univariate polynomials over an arbitrary coefficient ring.

Coefficients are stored in ascending degree.  Any type supporting ``+``,
``-`` and ``*`` works: Python ints and Fractions (exact), mpmath numbers
bound to a private context (configurable precision), or other
:class:`Polynomial` objects, which gives bivariate polynomials such as the
characteristic polynomial in ``E`` whose coefficients depend on ``a``.

Precision is carried by the coefficients themselves.  :func:`mp_context`
hands out one mpmath context per precision so computations never touch
the global ``mpmath.mp`` state.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence

import mpmath


@functools.lru_cache(maxsize=None)
def mp_context(dps: int) -> mpmath.ctx_mp.MPContext:
    """Return a dedicated mpmath context working at ``dps`` decimal digits.

    Contexts are created once and never mutated afterwards, so sharing them
    between threads is safe.
    """
    if dps < 15:
        raise ValueError(f"precision must be at least 15 digits, got {dps}")
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def is_exact(value) -> bool:
    if isinstance(value, Polynomial):
        return all(is_exact(c) for c in value.coeffs)
    return isinstance(value, Rational)


class Polynomial:
    """Polynomial with ascending coefficients ``coeffs[i] * x**i``.

    Trailing zero coefficients are stripped on construction, so the leading
    coefficient of a nonzero polynomial is never exactly zero.  The zero
    polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def with_precision(cls, coeffs: Iterable, dps: int) -> "Polynomial":
        """Build a polynomial whose coefficients are mpf numbers at ``dps`` digits."""
        ctx = mp_context(dps)
        return cls(_to_mp(ctx, c) for c in coeffs)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "Polynomial":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, p in enumerate(self.coeffs):
            for j, q in enumerate(other.coeffs):
                out[i + j] = out[i + j] + p * q
        return Polynomial(out)

    def __rmul__(self, other) -> "Polynomial":
        return Polynomial(other * c for c in self.coeffs)

    def __pow__(self, n: int) -> "Polynomial":
        result = Polynomial([1])
        for _ in range(n):
            result = result * self
        return result

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def map(self, fn: Callable) -> "Polynomial":
        """Apply ``fn`` to every coefficient (e.g. substitute a value for ``a``)."""
        return Polynomial(fn(c) for c in self.coeffs)

    def substitute(self, value) -> "Polynomial":
        """Evaluate polynomial-valued coefficients at ``value``."""
        return self.map(lambda c: c(value) if isinstance(c, Polynomial) else c)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Euclidean division over a field (Fractions or mpf coefficients)."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        exact = is_exact(lead)
        quot = [0] * max(len(rem) - dq, 0)
        while len(rem) - 1 >= dq and rem:
            top = rem[-1]
            f = Fraction(top) / Fraction(lead) if exact and is_exact(top) else top / lead
            shift = len(rem) - 1 - dq
            quot[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - f * c
            rem.pop()
        return Polynomial(quot), Polynomial(rem)

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def max_abs(self):
        return max((abs(c) for c in self.coeffs), default=0)

    def scaled_to_unit(self) -> "Polynomial":
        """Divide by the largest coefficient magnitude (sign pattern preserved)."""
        m = self.max_abs()
        if not m:
            return self
        if is_exact(m):
            return Polynomial(Fraction(c) / m for c in self.coeffs)
        return Polynomial(c / m for c in self.coeffs)

    def to_mp(self, dps: int) -> "Polynomial":
        ctx = mp_context(dps)
        return self.map(lambda c: _to_mp(ctx, c))

    def roots(self, dps: int, maxsteps: int = 200):
        """All complex roots at ``dps`` digits via Durand-Kerner (mpmath.polyroots)."""
        ctx = mp_context(dps)
        desc = [_to_mp(ctx, c) for c in reversed(self.coeffs)]
        return ctx.polyroots(desc, maxsteps=maxsteps, extraprec=2 * ctx.prec)


def _to_mp(ctx, c):
    if isinstance(c, Fraction):
        return ctx.mpf(c.numerator) / c.denominator
    if isinstance(c, complex) or isinstance(c, mpmath.mpc) or type(c).__name__ == "mpc":
        return ctx.mpc(c)
    return ctx.mpf(c)


def from_roots(roots: Sequence, lead=1) -> Polynomial:
    """Polynomial ``lead * prod(x - r)``."""
    p = Polynomial([lead])
    for r in roots:
        p = p * Polynomial([-r, 1])
    return p


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def resultant(p: Polynomial, q: Polynomial) -> int:
    """Resultant of two integer polynomials via the Sylvester determinant."""
    m, n = p.degree, q.degree
    if m < 0 or n < 0:
        return 0
    size = m + n
    rows = []
    pd = list(reversed(p.coeffs))
    qd = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([0] * i + pd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qd + [0] * (size - n - 1 - i))
    return bareiss_determinant(rows)


def discriminant(p: Polynomial) -> int:
    """Discriminant of an integer polynomial, sign convention of b**2 - 4ac.

    Positive when all roots are real and distinct, negative with an odd
    number of complex-conjugate pairs, zero iff a root is repeated.
    """
    n = p.degree
    if n < 1:
        raise ValueError("discriminant needs a nonconstant polynomial")
    res = resultant(p, p.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    value = Fraction(sign * res, p.leading)
    if value.denominator != 1:
        raise ArithmeticError("non-integral discriminant")
    return value.numerator
