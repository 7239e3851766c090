import math

import numpy as np
import pytest

from qes_sextic.errors import NodeInInterval, StiffnessFailure
from qes_sextic.oracle import (
    Ray,
    bad_solution,
    decay_constant,
    default_rays,
    ray_profile,
    shoot,
    shoot_eigenvalue_residual,
)
from qes_sextic.polynomial import mp_context
from qes_sextic.qes import QesProblem, eigenfunction, qes_spectrum

ctx = mp_context(30)


def test_ray_geometry():
    pt = default_rays(QesProblem.pt(2, 1), -5)
    assert [round(math.degrees(r.angle)) for r in pt] == [-45, -135]
    herm = default_rays(QesProblem.hermitian(2), 3)
    assert [round(math.degrees(r.angle)) for r in herm] == [0, 180]


def test_J1_exact_eigenvalue():
    assert shoot_eigenvalue_residual(QesProblem.pt(1, 2), -2) < 1e-8


def test_J2_roots_and_midpoint():
    p = QesProblem.pt(2, 2)
    lo, hi = -6 - 2 * ctx.sqrt(2), -6 + 2 * ctx.sqrt(2)
    assert shoot_eigenvalue_residual(p, lo) < 1e-8
    assert shoot_eigenvalue_residual(p, hi) < 1e-8
    assert shoot_eigenvalue_residual(p, -6) > 1e-3


def test_hermitian_J2():
    p = QesProblem.hermitian(2)
    for E in (2 * math.sqrt(2), -2 * math.sqrt(2)):
        assert shoot_eigenvalue_residual(p, E) < 1e-8
    assert shoot_eigenvalue_residual(p, 0.0) > 1e-3


def test_matching_residual_vanishes_at_eigenvalue():
    p = QesProblem.pt(3, -1)
    E = qes_spectrum(p).real_values[0]
    res = shoot(p, E)
    assert res.matching_residual < 1e-8
    assert shoot(p, E + 1).matching_residual > 1e-3


def test_truncation_robustness():
    p = QesProblem.pt(2, 2)
    E = -6 - 2 * ctx.sqrt(2)
    base = shoot(p, E)
    far = shoot(p, E, rays=default_rays(p, E, r_max=2 * default_rays(p, E)[0].r_max))
    fine = shoot(p, E, step_fraction=0.45)
    assert far.even_residual < 1e-8 and fine.even_residual < 1e-8
    # the origin data agree up to the common normalization
    (f0, d0), _ = base.origin_values
    (g0, e0), _ = fine.origin_values
    assert abs(d0 / f0 - e0 / g0) < 1e-10


def test_step_cap_raises():
    p = QesProblem.pt(2, 2)
    with pytest.raises(StiffnessFailure):
        shoot(p, -6, rays=(Ray(-math.pi / 4, 6.0, steps=3), Ray(-3 * math.pi / 4, 6.0, steps=3)))


def test_decay_constant_closed_form():
    # psi_good = exp(x^4/4); C = -integral_0^inf exp(-s^4/2) ds = -Gamma(5/4) 2^(1/4)
    good = eigenfunction(QesProblem.pt(1, 0), 0)
    C = decay_constant(good, 0.0)
    assert abs(C + math.gamma(1.25) * 2**0.25) < 1e-10


def test_bad_solution_wronskian_and_ode():
    good = eigenfunction(QesProblem.pt(1, 0), 0)
    pair = bad_solution(good, 0.3)
    assert abs(pair.wronskian - 1) < 1e-8
    scale = np.max(np.abs(pair.good) * np.abs(pair.bad))
    assert pair.wronskian_deviation < 1e-11 * max(1.0, scale)
    assert pair.ode_mismatch < 1e-10


def test_bad_solution_saturates():
    # psi_bad / psi_good = integral exp(-s^4/2) + C tends to a constant
    good = eigenfunction(QesProblem.pt(1, 0), 0)
    pair = bad_solution(good, 0.0, (0.0, 4.0), samples=9)
    ratio = pair.bad / pair.good
    assert abs(ratio[-1] - math.gamma(1.25) * 2**0.25) < 1e-6
    assert abs(ratio[-1] - ratio[-2]) < 1e-6


def test_wedge_growth():
    # C cancels the growth on the 0 degree ray; on the 180 degree ray, where
    # psi_good also grows, the same bad solution grows
    good = eigenfunction(QesProblem.pt(1, 0), 0)
    C = decay_constant(good, 0.0)
    radii = np.linspace(0.5, 3.0, 6)
    kept = ray_profile(good, C, 0.0, radii)
    other = ray_profile(good, C, math.pi, radii)
    assert all(x > y for x, y in zip(kept, kept[1:]))
    assert all(x < y for x, y in zip(other, other[1:]))
    assert other[-1] > 1e6 * kept[-1]
    # inside the -45 degree wedge psi_good decays and no C stops the growth
    tilted = ray_profile(good, C, -math.pi / 4, radii)
    assert tilted[-1] > 1e6


def test_node_in_interval():
    # Hermitian J=2 at E = 2 sqrt 2: P = 1 - sqrt(2) x^2 vanishes at x = 2^(-1/4)
    excited = eigenfunction(QesProblem.hermitian(2), 2 * ctx.sqrt(2))
    with pytest.raises(NodeInInterval):
        bad_solution(excited, 0, (-1, 1))
    bad_solution(excited, 0, (-0.5, 0.5))


def test_interval_must_contain_origin():
    good = eigenfunction(QesProblem.pt(1, 0), 0)
    with pytest.raises(ValueError):
        bad_solution(good, 0, (0.5, 1.0))
