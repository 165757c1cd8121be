import math

import numpy as np
import pytest
from scipy import integrate, special

from bigmeasure.errors import NotOrthogonal, SingularMeasure
from bigmeasure.kernels import KernelModel, green_constant
from bigmeasure.measures import (
    BoundaryPower,
    PowerWeight,
    SphereSeries,
    Seq,
)
from bigmeasure.potentials import riesz_potential
from bigmeasure.simulate import (
    AbsorbingBrownianBall,
    Brownian,
    IsotropicStable,
    PathConfig,
    PcafScheme,
    absorbed_pcaf_sample,
    accumulate_pcaf,
    estimate_gauge,
    estimate_survival_constant,
    expected_pcaf_oracle,
    gauge_checkpoint_samples,
    positive_stable_sample,
    rotation_invariance_check,
    sample_increment,
    verify_integral_identity,
)

M23 = KernelModel(2.0, 3)


def _norm_ball_prob(u):
    # P(|Z| <= u) for a standard 3d Gaussian Z
    return special.erf(u / math.sqrt(2.0)) - math.sqrt(2.0 / math.pi) * u * math.exp(
        -0.5 * u * u
    )


def test_positive_stable_laplace_transform():
    # E exp(-S) = exp(-1) for every index
    rng = np.random.default_rng(11)
    for beta in (0.5, 0.75, 0.9):
        s = positive_stable_sample(beta, 200_000, rng)
        assert np.all(s > 0)
        lt = np.exp(-s)
        se = lt.std(ddof=1) / math.sqrt(lt.size)
        assert abs(lt.mean() - math.exp(-1.0)) <= 3.0 * se
    with pytest.raises(ValueError):
        positive_stable_sample(1.0, 10, rng)


def test_brownian_increment_covariance():
    rng = np.random.default_rng(12)
    inc = sample_increment(Brownian(3), 0.25, rng, 200_000)
    cov = inc.T @ inc / inc.shape[0]
    se = math.sqrt(2.0 / inc.shape[0]) * 0.5
    assert np.allclose(np.diag(cov), 0.5, atol=3.0 * se)
    off = cov[~np.eye(3, dtype=bool)]
    assert np.all(np.abs(off) < 3.0 * 0.5 / math.sqrt(inc.shape[0]))


def test_stable_increment_characteristic_function():
    # one-step CF exp(-dt |xi|^alpha) at alpha = 1.5, dt = 1
    rng = np.random.default_rng(13)
    inc = sample_increment(IsotropicStable(1.5, 3), 1.0, rng, 300_000)
    for xi, target in ((1.0, math.exp(-1.0)), (2.0, math.exp(-(2.0**1.5)))):
        c = np.cos(xi * inc[:, 0])
        se = c.std(ddof=1) / math.sqrt(c.size)
        assert abs(c.mean() - target) <= 3.0 * se
    # alpha = 2 falls back to the Gaussian branch
    inc2 = sample_increment(IsotropicStable(2.0, 2), 0.5, rng, 1000)
    assert inc2.shape == (1000, 2)
    one = sample_increment(Brownian(3), 0.1, rng)
    assert one.shape == (3,)


def test_accumulate_pcaf_synthetic_paths():
    # constant weight: A_T = T exactly
    line = np.zeros((51, 3))
    line[:, 0] = np.linspace(0.0, 2.0, 51)
    a = accumulate_pcaf(line, PowerWeight(0.0), PcafScheme(dt=0.1))
    assert a == pytest.approx(5.0, abs=1e-12)

    # path that never meets the support contributes nothing
    far = line + np.array([5.0, 0.0, 0.0])
    assert accumulate_pcaf(far, BoundaryPower(0.0, 1.0), PcafScheme(dt=0.1)) == 0.0

    # coupling scales linearly
    a2 = accumulate_pcaf(line, PowerWeight(0.0), PcafScheme(dt=0.1, coupling=0.25))
    assert a2 == pytest.approx(0.25 * a)

    # absorption freezes the sum at the first exit, re-entry does not count
    path = np.zeros((6, 3))
    path[:, 0] = [0.0, 0.5, 1.4, 0.2, 0.3, 0.4]
    frozen = accumulate_pcaf(path, PowerWeight(0.0), PcafScheme(dt=1.0, absorb_radius=1.0))
    assert frozen == pytest.approx(2.0)  # left endpoints 0.0 and 0.5 only
    started_out = accumulate_pcaf(
        path + np.array([3.0, 0, 0]), PowerWeight(0.0), PcafScheme(dt=1.0, absorb_radius=1.0)
    )
    assert started_out == 0.0

    with pytest.raises(SingularMeasure):
        accumulate_pcaf(line, SphereSeries(radii=Seq.table([1.0]), r=0.0), PcafScheme(dt=0.1))


def test_constant_weight_gauge_curve():
    curve = estimate_gauge(0.0, PowerWeight(0.0), Brownian(3), [1.0, 5.0], 40, 7, 0.1)
    assert curve.ghat[0] == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert curve.ghat[1] == pytest.approx(math.exp(-5.0), rel=1e-12)
    assert curve.stderr[0] == pytest.approx(0.0, abs=1e-15)
    rows = curve.rows()
    assert rows[0][0] == 1.0 and rows[0][3] == 40

    # zero measure: ghat identically 1
    trivial = estimate_gauge(0.0, None, Brownian(3), [2.0], 20, 7, 0.1)
    assert float(trivial.ghat[0]) == 1.0


def test_checkpoints_nonincreasing_per_path():
    samples, realized = gauge_checkpoint_samples(
        0.5, PowerWeight(-2.0), Brownian(3), [1.0, 2.0, 4.0, 8.0], 300, 21, 0.02
    )
    assert samples.shape == (300, 4)
    assert np.all(np.diff(samples, axis=1) <= 0.0)
    assert np.allclose(realized, [1.0, 2.0, 4.0, 8.0])


def test_thread_count_does_not_change_results():
    args = (0.5, PowerWeight(-4.0), Brownian(3), [5.0, 10.0], 400, 99, 0.01)
    c1 = estimate_gauge(*args, threads=1)
    c3 = estimate_gauge(*args, threads=3)
    assert np.array_equal(c1.ghat, c3.ghat)
    assert np.array_equal(c1.stderr, c3.stderr)


def test_path_config_validation():
    with pytest.raises(ValueError):
        PathConfig(Brownian(3), 0.0, (1.0,), (0.0, 0.0, 0.0), 1, 10)
    with pytest.raises(ValueError):
        PathConfig(Brownian(3), 0.1, (), (0.0, 0.0, 0.0), 1, 10)
    with pytest.raises(ValueError):
        PathConfig(Brownian(3), 0.1, (2.0, 1.0), (0.0, 0.0, 0.0), 1, 10)
    with pytest.raises(ValueError):
        PathConfig(Brownian(3), 0.5, (0.1,), (0.0, 0.0, 0.0), 1, 10)
    with pytest.raises(ValueError):
        PathConfig(Brownian(3), 0.1, (1.0,), (0.0, 0.0, 0.0), 1, 0)
    with pytest.raises(ValueError):
        PathConfig(Brownian(3), 0.1, (1.0,), (0.0, 0.0, 0.0), -1, 10)
    with pytest.raises(ValueError):
        estimate_gauge(0.0, None, AbsorbingBrownianBall(3, 1.0), [1.0], 10, 1, 0.1)


def test_normalization_chain():
    # Green constant times the kernel integral gives the expected lifetime
    # functional: 1/2 for the flat unit ball, 1/6 for (1 + s)^-4
    half = green_constant(2.0, 3) * riesz_potential(BoundaryPower(0.0, 1.0), 0.0, M23).value
    assert half == pytest.approx(0.5, rel=1e-10)
    sixth = green_constant(2.0, 3) * riesz_potential(PowerWeight(-4.0), 0.0, M23).value
    assert sixth == pytest.approx(1.0 / 6.0, rel=1e-9)


def test_expected_pcaf_oracle_brute_force():
    # five steps, compared against the erf closed form summed by hand
    dt, t = 0.01, 0.05
    want = 1.0  # k = 0 term: the path starts inside the ball
    for k in range(1, 5):
        want += _norm_ball_prob(1.0 / math.sqrt(2.0 * k * dt))
    want *= dt
    got = expected_pcaf_oracle(BoundaryPower(0.0, 1.0), t, dt)
    assert got == pytest.approx(want, rel=1e-9)

    # left-endpoint sums sit above the continuum value by about dt/2
    cont, _ = integrate.quad(
        lambda s: _norm_ball_prob(1.0 / math.sqrt(2.0 * s)), 0.0, 20.0, limit=200
    )
    oracle = expected_pcaf_oracle(BoundaryPower(0.0, 1.0), 20.0, 0.01)
    assert oracle == pytest.approx(cont + 0.005, abs=5e-4)

    with pytest.raises(ValueError):
        expected_pcaf_oracle(BoundaryPower(0.5, 1.0), 1.0, 0.1)


def test_mc_pcaf_mean_matches_oracle():
    samples, _ = gauge_checkpoint_samples(
        0.0, BoundaryPower(0.0, 1.0), Brownian(3), [10.0], 1500, 123, 0.02
    )
    a = -np.log(samples[:, 0])
    se = a.std(ddof=1) / math.sqrt(a.size)
    oracle = expected_pcaf_oracle(BoundaryPower(0.0, 1.0), 10.0, 0.02)
    assert abs(a.mean() - oracle) <= 3.0 * se


def test_dt_halving_consistency():
    base = estimate_gauge(0.0, PowerWeight(-4.0), Brownian(3), [10.0], 1500, 31, 0.02)
    fine = estimate_gauge(0.0, PowerWeight(-4.0), Brownian(3), [10.0], 1500, 32, 0.01)
    se = math.hypot(float(base.stderr[0]), float(fine.stderr[0]))
    assert abs(float(base.ghat[0]) - float(fine.ghat[0])) <= 3.0 * se


def test_absorbed_pcaf_samples():
    proc = AbsorbingBrownianBall(3, 1.0)
    vals, exited = absorbed_pcaf_sample(BoundaryPower(1.0, 1.0), proc, 200, 2024, 4e-4, t_cap=40.0)
    assert exited.all()
    assert np.all(vals > 0)
    assert 0.2 < np.median(vals) < 1.0

    # zero measure: the functional vanishes identically
    zeros, exited = absorbed_pcaf_sample(None, proc, 50, 9, 1e-3)
    assert np.all(zeros == 0.0) and exited.all()

    with pytest.raises(ValueError):
        absorbed_pcaf_sample(None, proc, 10, 1, 1e-3, start=[2.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        absorbed_pcaf_sample(None, Brownian(3), 10, 1, 1e-3)


def test_rotation_invariance_check():
    mu = BoundaryPower(0.0, 1.0)
    with pytest.raises(NotOrthogonal):
        rotation_invariance_check(mu, Brownian(3), [1.0, 0, 0], np.eye(3) * 2.0, 5.0, 10, 1, 0.1)

    same = rotation_invariance_check(
        mu, Brownian(3), [1.0, 0, 0], np.eye(3), 5.0, 200, 5, 0.02, independent_seeds=False
    )
    assert same["diff"] == 0.0 and same["passed"]

    q90 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    res = rotation_invariance_check(mu, Brownian(3), [1.0, 0, 0], q90, 10.0, 800, 5, 0.02)
    assert res["passed"]


def test_survival_constant_estimates():
    flat = estimate_survival_constant(None, Brownian(3), [0.0, 3.0], 5.0, 30, 3, 0.1)
    assert all(e.mean == 1.0 for e in flat)

    ests = estimate_survival_constant(
        BoundaryPower(0.0, 1.0), Brownian(3), [0.0, 5.0], 50.0, 1000, 17, 0.02
    )
    for e in ests:
        assert e.mean - 3.0 * e.stderr > 0.0
        assert e.n == 1000
    # the far start has accumulated less by any fixed horizon
    assert ests[1].mean > ests[0].mean

    # Big case: the level is 0 at every start (divergence declaration < 0.02)
    gone = estimate_survival_constant(
        PowerWeight(-1.0), Brownian(3), [0.0, 5.0], 100.0, 600, 29, 0.05
    )
    for e in gone:
        assert e.mean < 0.02


def test_verify_identity_input_validation():
    with pytest.raises(ValueError):
        verify_integral_identity(0.0, PowerWeight(-4.0), Brownian(3), M23, 10, 1.0, 1, 0.1)
    with pytest.raises(ValueError):
        verify_integral_identity(0.0, BoundaryPower(1.5, 1.0), Brownian(3), M23, 10, 1.0, 1, 0.1)
    with pytest.raises(ValueError):
        verify_integral_identity(
            0.0, BoundaryPower(0.0, 1.0), Brownian(3), KernelModel(1.5, 3), 10, 1.0, 1, 0.1
        )
    with pytest.raises(ValueError):
        verify_integral_identity(
            0.0, BoundaryPower(0.0, 1.0), IsotropicStable(1.5, 3), M23, 10, 1.0, 1, 0.1
        )


def test_verify_identity_strong_coupling():
    # full-strength measure on the ball (coupling 1), reduced path budget;
    # the acceptance suite runs the weak-coupling version at full scale
    res = verify_integral_identity(
        0.0, BoundaryPower(0.0, 1.0), Brownian(3), M23, 3000, 400.0, 600511, 0.02,
        coupling=1.0
    )
    assert abs(res["z"]) <= 3.0
    assert res["ghat"] + res["potential_term"] == res["lhs"]
