"""Sturm chains and exact real-root counting.

Exact coefficients (int/Fraction) give an exact chain.  mpmath coefficients
give a floating chain in which a remainder coefficient is treated as zero
when it falls below the rounding noise of the division that produced it;
each chain element is rescaled to unit max-norm, which does not change any
sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SquareFull
from .polynomial import Polynomial, is_exact

# Bits of slack on top of one ulp per operation when deciding that a
# floating remainder coefficient is really zero.
_NOISE_SLACK_BITS = 12


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(values) -> int:
    signs = [s for s in (_sign(v) for v in values) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


@dataclass(frozen=True)
class SturmChain:
    """``chain[0] = p``, ``chain[1] = p'``, then negated remainders."""

    chain: tuple[Polynomial, ...]

    @property
    def gcd(self) -> Polynomial:
        return self.chain[-1]

    @property
    def square_free(self) -> bool:
        return self.chain[-1].degree == 0

    def variations(self, x) -> int:
        return _variations(q(x) for q in self.chain)

    def variations_at_infinity(self, direction: int) -> int:
        """Sign variations at ``+inf`` (direction=+1) or ``-inf`` (-1)."""
        vals = []
        for q in self.chain:
            s = _sign(q.leading)
            if direction < 0 and q.degree % 2:
                s = -s
            vals.append(s)
        return _variations(vals)


def _remainder_noise(p: Polynomial, q: Polynomial, quot: Polynomial):
    lead = q.leading
    ctx = lead.context
    ulp = ctx.mpf(2) ** (-ctx.prec + _NOISE_SLACK_BITS)
    return ulp * (1 + quot.max_abs()) * (p.degree + 1)


def sturm_chain(p: Polynomial) -> SturmChain:
    """Build the Sturm chain of ``p``.

    The chain stops at the last nonzero remainder, which is (up to a
    constant) ``gcd(p, p')``.  A chain ending in a nonconstant polynomial
    means ``p`` has repeated roots; :attr:`SturmChain.square_free` reports it.
    """
    if p.degree < 1:
        raise ValueError("Sturm chain needs a nonconstant polynomial")
    exact = is_exact(p)
    if exact:
        p = p.map(Fraction)
    else:
        p = p.scaled_to_unit()
    chain = [p, p.derivative().scaled_to_unit() if not exact else p.derivative()]
    while chain[-1].degree > 0:
        a, b = chain[-2], chain[-1]
        quot, rem = a.divmod(b)
        if exact:
            rem = -rem
        else:
            noise = _remainder_noise(a, b, quot)
            cs = [-c for c in rem.coeffs]
            while cs and abs(cs[-1]) <= noise:
                cs.pop()
            rem = Polynomial(cs).scaled_to_unit()
        if not rem:
            break
        chain.append(rem)
    return SturmChain(tuple(chain))


def _nudge(p: Polynomial, x, direction: int):
    """Move ``x`` off a root of ``p`` by a unit-roundoff-sized step."""
    if is_exact(x) and is_exact(p):
        step = Fraction(1, 10**30) * max(1, abs(Fraction(x)))
        return Fraction(x) + direction * step
    ctx = p.leading.context
    scale = max(ctx.mpf(1), abs(x))
    return x + direction * scale * ctx.mpf(2) ** (-ctx.prec + _NOISE_SLACK_BITS)


def _is_root(p: Polynomial, x) -> bool:
    v = p(x)
    if is_exact(p) and is_exact(x):
        return v == 0
    ctx = p.leading.context
    mag = sum(abs(c) * abs(x) ** i for i, c in enumerate(p.coeffs))
    return abs(v) <= mag * ctx.mpf(2) ** (-ctx.prec + _NOISE_SLACK_BITS)


def count_real_roots(p: Polynomial, interval=None, *, allow_square_full: bool = False) -> int:
    """Number of distinct real roots of ``p`` in ``[lo, hi]``, or on the whole line.

    Endpoints that are roots are nudged outward by one roundoff step so that
    the root is included.  Raises :class:`SquareFull` if ``p`` has a repeated
    root unless ``allow_square_full`` is set, in which case distinct roots are
    still counted correctly.
    """
    chain = sturm_chain(p)
    if not chain.square_free and not allow_square_full:
        raise SquareFull(
            f"polynomial of degree {p.degree} has a repeated root "
            f"(gcd degree {chain.gcd.degree})",
            gcd=chain.gcd,
        )
    if interval is None:
        return chain.variations_at_infinity(-1) - chain.variations_at_infinity(+1)
    lo, hi = interval
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if not is_exact(p):
        ctx = chain.chain[0].leading.context
        lo, hi = ctx.mpf(lo), ctx.mpf(hi)
    base = chain.chain[0]
    if _is_root(base, lo):
        lo = _nudge(base, lo, -1)
    if _is_root(base, hi):
        hi = _nudge(base, hi, +1)
    return chain.variations(lo) - chain.variations(hi)
