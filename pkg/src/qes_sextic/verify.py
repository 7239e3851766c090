"""Golden and property checks behind ``qes-sextic verify``.

Each check reports what it achieved next to what it requires.  Scopes:
``spectra``, ``boundary``, ``richardson``, ``wkb``, ``oracle`` or ``all``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .boundary import Method, boundary_differences, critical_table, find_critical_a_squared
from .polynomial import Polynomial, from_roots, mp_context
from .qes import QesProblem, qes_spectrum, spectral_reflection, trace
from .reference_data import PUBLISHED_CRITICAL, PUBLISHED_R1, PUBLISHED_REPEATED
from .richardson import differences_sequence, estimate_limit, repeated_richardson, richardson_step
from .sturm import count_real_roots
from .wkb import asymptotic_prefactor, beta_integral, quantization_integral, wkb_boundary_constant

SCOPES = ("spectra", "boundary", "richardson", "wkb", "oracle")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    achieved: str
    required: str


def _sci(x) -> str:
    return f"{float(x):.3e}"


def _bound(name: str, value, limit) -> Check:
    return Check(name, bool(value <= limit), _sci(value), f"<= {_sci(limit)}")


def check_spectra(seed: int = 0) -> list:
    ctx = mp_context(30)
    out = []
    worst = max(abs(qes_spectrum(QesProblem.pt(1, a), 30).values()[0] + a) for a in (ctx.mpf(2), ctx.mpf(-5), ctx.pi))
    out.append(_bound("J=1 PT eigenvalue E=-a", worst, ctx.mpf(10) ** -25))

    tol = ctx.mpf(10) ** -13  # a double root is only resolved to half the digits
    worst = ctx.zero
    for a in (ctx.zero, ctx.one, ctx.sqrt(2), ctx.mpf(2), ctx.mpf(-3)):
        got = sorted(qes_spectrum(QesProblem.pt(2, a), 30).values(), key=lambda z: (ctx.re(z), ctx.im(z)))
        r = ctx.sqrt(ctx.mpc(a * a - 2))
        want = sorted([-3 * a - 2 * r, -3 * a + 2 * r], key=lambda z: (ctx.re(z), ctx.im(z)))
        worst = max(worst, max(abs(x - y) for x, y in zip(got, want)))
    out.append(_bound("J=2 PT closed form -3a +- 2 sqrt(a^2-2)", worst, tol))

    rng = random.Random(seed)
    worst_trace = ctx.zero
    worst_reflect = ctx.zero
    for J in range(2, 7):
        a = Fraction(rng.randint(-80, 80), 10)
        p = QesProblem.pt(J, a)
        s = qes_spectrum(p, 30, validate=False)
        worst_trace = max(worst_trace, abs(s.total() - trace(p)) / max(1, abs(trace(p))))
        m = qes_spectrum(spectral_reflection(p), 30, validate=False)
        mine = sorted((-z for z in s.values()), key=lambda z: (ctx.re(z), ctx.im(z)))
        theirs = sorted(m.values(), key=lambda z: (ctx.re(z), ctx.im(z)))
        worst_reflect = max(worst_reflect, max(abs(x - y) for x, y in zip(mine, theirs)))
        h = qes_spectrum(QesProblem.hermitian(J), 30, validate=False)
        worst_trace = max(worst_trace, abs(h.total()))
        if not h.all_real:
            out.append(Check(f"Hermitian J={J} spectrum real", False, "complex pair", "all real"))
    out.append(_bound("trace identities (PT and Hermitian, J=2..6)", worst_trace, ctx.mpf(10) ** -20))
    out.append(_bound("spectral reflection a -> -a (J=2..6)", worst_reflect, ctx.mpf(10) ** -12))
    return out


def check_boundary(seed: int = 0) -> list:
    out = []
    ctx = mp_context(40)
    table = critical_table(range(2, 21), 18)
    for b in table:
        printed = ctx.mpf(PUBLISHED_CRITICAL[b.J])
        out.append(_bound(f"a_crit^2 J={b.J} vs published", abs(b.a_crit_sq - printed), ctx.mpf(5e-11)))
    diffs = boundary_differences(table)
    increasing = all(x < y for x, y in zip(diffs, diffs[1:])) and all(d < 12 for d in diffs)
    out.append(Check("differences increase and stay below 12", increasing, "yes" if increasing else "no", "yes"))
    worst = ctx.zero
    for J in range(2, 8):
        s = find_critical_a_squared(J, 12, Method.STURM_BISECTION).a_crit_sq
        d = find_critical_a_squared(J, 12, Method.DISCRIMINANT_ROOT).a_crit_sq
        worst = max(worst, abs(s - d) / d)
    out.append(_bound("Sturm vs discriminant (J=2..7, relative)", worst, ctx.mpf(10) ** -10))
    rng = random.Random(seed)
    bad = 0
    for _ in range(300):
        k = rng.randint(0, 6)
        roots = rng.sample(range(-40, 41), k)
        pairs = rng.randint(0, 2)
        p = from_roots([Fraction(r, 4) for r in roots])
        for _ in range(pairs):
            u, v = Fraction(rng.randint(-20, 20), 4), Fraction(rng.randint(1, 20), 4)
            p = p * Polynomial([u * u + v * v, -2 * u, 1])
        if p.degree < 1:
            continue
        if count_real_roots(p) != k:
            bad += 1
    out.append(Check("Sturm count on planted-root polynomials (300)", bad == 0, f"{bad} wrong", "0 wrong"))
    return out


def _richardson_inputs():
    table = critical_table(range(2, 21), 14)
    base = differences_sequence(boundary_differences(table))
    return base, richardson_step(base)


def check_richardson(seed: int = 0) -> list:
    ctx = mp_context(30)
    base, r1 = _richardson_inputs()
    out = []
    values = dict(r1)
    for n, printed in PUBLISHED_R1.items():
        out.append(_bound(f"R_1({n}) vs published", abs(values[n] - ctx.mpf(printed)), ctx.mpf(5e-10)))
    repeated = repeated_richardson(r1, 3, "R1")
    for r in (1, 2, 3):
        printed = ctx.mpf(PUBLISHED_REPEATED[r][1])
        out.append(_bound(f"level {r} of R_1 at n=1 vs published", abs(repeated.value(r, 1) - printed), ctx.mpf(5e-9)))
    est, _ = estimate_limit(repeated_richardson(base, 4))
    out.append(_bound("limit estimate vs 12", abs(est - 12), ctx.mpf("0.1")))
    rng = random.Random(seed)
    cs = [Fraction(rng.randint(-50, 50), 7) for _ in range(3)]
    seq = [(n, 12 + sum(c / Fraction(n) ** (i + 1) for i, c in enumerate(cs))) for n in range(1, 10)]
    exact = repeated_richardson(seq, 3, scheme="classical")
    ok = all(v == 12 for _, v in exact.level(3))
    out.append(Check("order-3 classical scheme annihilates 1/n..1/n^3", ok, "exact" if ok else "not exact", "exact"))
    return out


def check_wkb(seed: int = 0) -> list:
    ctx = mp_context(40)
    F0 = asymptotic_prefactor(40)
    out = [
        _bound("quantization integral at b^2=12 vs 2 pi", abs(quantization_integral(-2 * ctx.sqrt(3), F0) - 2 * ctx.pi), 1e-10),
        _bound("beta integral vs 3 pi / 8", abs(beta_integral() - 3 * ctx.pi / 8), 1e-12),
        _bound("prefactor vs 64 sqrt(3) / 9", abs(F0 - 64 * ctx.sqrt(3) / 9), 1e-12),
    ]
    b = wkb_boundary_constant(1e-8)
    out.append(_bound("boundary constant b^2 vs 12", abs(b * b - 12), 1e-8))
    return out


def check_oracle(seed: int = 0) -> list:
    from .oracle import shoot_eigenvalue_residual

    worst, best_mid = 0.0, float("inf")
    cases = [QesProblem.hermitian(J) for J in (1, 2, 3)] + [QesProblem.pt(J, a) for J in (1, 2, 3) for a in (2, -3)]
    for p in cases:
        vals = qes_spectrum(p, 30, validate=False).real_values
        for E in vals:
            worst = max(worst, shoot_eigenvalue_residual(p, E))
        for x, y in zip(vals, vals[1:]):
            best_mid = min(best_mid, shoot_eigenvalue_residual(p, (x + y) / 2))
    return [
        _bound("shooting residual at QES eigenvalues (J<=3)", worst, 1e-6),
        Check("shooting residual at midpoints (J<=3)", best_mid > 1e-3, _sci(best_mid), "> 1.000e-03"),
    ]


CHECKS = {
    "spectra": check_spectra,
    "boundary": check_boundary,
    "richardson": check_richardson,
    "wkb": check_wkb,
    "oracle": check_oracle,
}


def run_checks(scope: str = "all", seed: int = 0) -> list:
    scopes = SCOPES if scope == "all" else (scope,)
    out = []
    for s in scopes:
        out.extend(CHECKS[s](seed))
    return out
