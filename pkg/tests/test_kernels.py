import math

import numpy as np
import pytest

from bigmeasure.errors import AlphaOutOfRange, CoincidentPoints, NotTransient
from bigmeasure.kernels import (
    BoundedBall,
    FreeSpace,
    KernelModel,
    boundary_green_profile,
    green_constant,
    radial_shell_average,
    riesz_kernel,
    shell_average_batch,
    sphere_surface_area,
)

# Frozen oracles, computed independently before the implementation:
#   closed form ((rho+s)^(a-1) - |rho-s|^(a-1)) / (2 rho s (a-1)) at
#   (1, 2, 1.5, 3) is (sqrt(3)-1)/2; a 1e7-sample Monte Carlo average of
#   |x - sZ|^(alpha-3) over the sphere gave 0.366134 +- 5.7e-5.
SHELL_D3_ORACLE = (math.sqrt(3.0) - 1.0) / 2.0
SHELL_D3_MC = (0.366134, 5.8e-5)
# mpmath quadrature of (5 - 4 cos t)^(-1/4) / pi over [0, pi]; MC agreed
# at 0.719378 +- 4.4e-5.
SHELL_D2_ORACLE = 0.719416660018952


def test_newton_shell_oracle():
    # alpha = 2, dim = 3: potential of a uniform sphere is Newton's 1/max(rho, s)
    rng = np.random.default_rng(42)
    for _ in range(100):
        rho, s = rng.uniform(0.05, 5.0, size=2)
        while abs(rho - s) <= 1e-3:
            rho, s = rng.uniform(0.05, 5.0, size=2)
        val = radial_shell_average(rho, s, 2.0, 3)
        assert abs(val - 1.0 / max(rho, s)) <= 1e-8


def test_shell_average_frozen_values():
    assert radial_shell_average(1.0, 2.0, 1.5, 3) == pytest.approx(SHELL_D3_ORACLE, abs=1e-9)
    mc, se = SHELL_D3_MC
    assert abs(SHELL_D3_ORACLE - mc) <= 3 * se
    assert radial_shell_average(1.0, 2.0, 1.5, 2) == pytest.approx(SHELL_D2_ORACLE, abs=1e-6)


def test_shell_average_dim1_two_point():
    # dim 1: spheres are two points; average of |rho -+ s|^(alpha-1)
    assert radial_shell_average(1.0, 3.0, 0.5, 1) == pytest.approx(
        0.5 * (2.0**-0.5 + 4.0**-0.5)
    )
    assert radial_shell_average(2.0, 2.0, 1.5, 1) == pytest.approx(0.5 * 4.0**0.5)


def test_shell_average_symmetry_and_monotonicity():
    rng = np.random.default_rng(7)
    for _ in range(25):
        rho, s = rng.uniform(0.1, 4.0, size=2)
        alpha = rng.uniform(0.3, 2.0)
        for dim in (2, 3):
            a = radial_shell_average(rho, s, alpha, dim)
            b = radial_shell_average(s, rho, alpha, dim)
            assert a == pytest.approx(b, rel=1e-7)
    # decreasing in rho once outside the sphere
    vals = [radial_shell_average(rho, 1.0, 1.5, 3) for rho in (1.5, 2.0, 3.0, 5.0)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_shell_average_divergent_on_coincident_radius():
    assert radial_shell_average(1.0, 1.0, 1.0, 3) == math.inf
    assert radial_shell_average(1.0, 1.0, 0.7, 2) == math.inf
    # integrable for alpha > 1
    assert np.isfinite(radial_shell_average(1.0, 1.0, 1.5, 3))
    with pytest.raises(CoincidentPoints):
        radial_shell_average(0.0, 0.0, 1.5, 3)


def test_shell_average_center_is_plain_power():
    assert radial_shell_average(0.0, 2.0, 1.5, 3) == pytest.approx(2.0**-1.5)
    assert radial_shell_average(3.0, 0.0, 1.2, 3) == pytest.approx(3.0**-1.8)


def test_shell_average_batch_matches_quadrature():
    rng = np.random.default_rng(11)
    s = rng.uniform(0.1, 5.0, size=20)
    for dim in (1, 3):
        for alpha in (0.8, 1.0, 1.5, 2.0):
            batch = shell_average_batch(1.3, s, alpha, dim)
            scalar = [radial_shell_average(1.3, float(si), alpha, dim) for si in s]
            assert np.allclose(batch, scalar, rtol=1e-8)


def test_riesz_kernel_basics():
    model = KernelModel(1.5, 3)
    assert riesz_kernel([0, 0, 0], [2, 0, 0], model) == pytest.approx(2.0**-1.5)
    with pytest.raises(CoincidentPoints):
        riesz_kernel([1.0, 0, 0], [1.0, 0, 0], model)
    with pytest.raises(ValueError):
        riesz_kernel([0, 0, 0], [1, 0, 0], KernelModel(2.0, 3, BoundedBall(1.0)))


def test_green_constant_values():
    # d = 3, alpha = 2 must reproduce the Newtonian 1/(4 pi)
    assert green_constant(2.0, 3) == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-12)
    # Gamma((3-1.5)/2) = Gamma(0.75) cancels: C = 2^(-1.5) pi^(-1.5)
    assert green_constant(1.5, 3) == pytest.approx(2.0**-1.5 * math.pi**-1.5, rel=1e-12)
    with pytest.raises(NotTransient):
        green_constant(2.0, 2)
    with pytest.raises(AlphaOutOfRange):
        green_constant(2.5, 5)


def test_sphere_surface_area():
    assert sphere_surface_area(3) == pytest.approx(4.0 * math.pi)
    assert sphere_surface_area(2) == pytest.approx(2.0 * math.pi)
    assert sphere_surface_area(1) == pytest.approx(2.0)


def test_kernel_model_validation():
    m = KernelModel(2.0, 3, BoundedBall(1.0))
    assert m.boundary_exponent == 1.0
    m = KernelModel(1.5, 3, BoundedBall(2.0))
    assert m.boundary_exponent == pytest.approx(0.5)
    with pytest.raises(AlphaOutOfRange):
        KernelModel(1.0, 3, BoundedBall(1.0))
    with pytest.raises(ValueError):
        KernelModel(1.5, 3, BoundedBall(1.0), boundary_exponent=0.7)
    with pytest.raises(AlphaOutOfRange):
        KernelModel(2.3, 3)
    with pytest.raises(NotTransient):
        KernelModel(2.0, 2).require_transient()
    with pytest.raises(ValueError):
        FreeSpace(c_lower=2.0, c_upper=1.0)


def test_boundary_green_profile():
    m = KernelModel(2.0, 3, BoundedBall(1.0))
    assert boundary_green_profile(0.25, m) == pytest.approx(0.25)
    m = KernelModel(1.5, 3, BoundedBall(1.0))
    assert boundary_green_profile(0.25, m) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        boundary_green_profile(0.25, KernelModel(1.5, 3))
