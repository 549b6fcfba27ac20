import math

import numpy as np
import pytest

from blscaling import (
    DomainError,
    FitWindow,
    TwoLayerFit,
    effective_reynolds,
    fit_two_layer,
    predict_scaling_law,
    solve_ln_re,
)
from blscaling.synth import SynthSpec, composite_u_plus, generate_ensemble, generate_profile, nominal_re_theta

B_COEF_9_4 = 5.4271250759470945  # mpmath, scripts/compute_oracles.py


def test_matches_scaling_law_in_region_one():
    spec = SynthSpec(ln_re=9.4, breakpoint_y_plus=300.0, beta=0.226)
    assert composite_u_plus(spec, np.array([100.0]))[0] == pytest.approx(predict_scaling_law(100.0, 9.4), rel=1e-15)


def test_continuity_at_breakpoint():
    spec = SynthSpec(ln_re=9.4, breakpoint_y_plus=300.0, beta=0.226)
    left = spec.a_coef * 300.0**spec.alpha
    right = spec.b_coef * 300.0**spec.beta
    assert left == pytest.approx(right, rel=1e-14)
    below, above = composite_u_plus(spec, np.array([300.0 * (1 - 1e-12), 300.0 * (1 + 1e-12)]))
    assert abs(below - above) < 1e-9


def test_region_two_prefactor():
    spec = SynthSpec(ln_re=9.4, breakpoint_y_plus=300.0, beta=0.226)
    assert spec.alpha == pytest.approx(0.1596, abs=1e-4)
    assert spec.a_coef == pytest.approx(7.927, abs=1e-3)
    assert spec.b_coef == pytest.approx(B_COEF_9_4, rel=1e-13)
    assert round(spec.b_coef, 2) == 5.43
    assert abs(spec.b_coef - 5.32) / 5.32 < 0.03


def test_deterministic():
    spec = SynthSpec(ln_re=11.0, noise_rel_sigma=0.01, seed=42)
    a, b = generate_profile(spec), generate_profile(spec)
    np.testing.assert_array_equal(a.u_plus, b.u_plus)


def test_same_seed_different_ln_re():
    a, b = generate_ensemble([SynthSpec(ln_re=10.0, seed=1), SynthSpec(ln_re=12.0, seed=1)])
    assert not np.array_equal(a.u_plus, b.u_plus)
    assert a.run_id == "synth-000" and b.run_id == "synth-001"


def test_empty_ensemble():
    assert generate_ensemble([]) == []


def test_ensemble_of_24():
    specs = [SynthSpec(ln_re=lr, seed=i) for i, lr in enumerate(np.linspace(10.5, 13, 24))]
    profiles = generate_ensemble(specs)
    assert len(profiles) == 24
    assert len({p.run_id for p in profiles}) == 24


def test_grid():
    spec = SynthSpec(ln_re=10.0, y_plus_min=1.0, y_plus_max=1e4, n_points=50)
    np.testing.assert_allclose(np.diff(np.log(spec.grid())), math.log(1e4) / 49)


@pytest.mark.parametrize(
    "kw",
    [
        dict(breakpoint_y_plus=20.0, y_plus_min=30.0),
        dict(breakpoint_y_plus=2e4),
        dict(n_points=10),
        dict(noise_rel_sigma=-0.1),
        dict(ln_re=-1.0),
        dict(include_sublayer=True, breakpoint_y_plus=25.0, y_plus_min=1.0),
    ],
)
def test_invalid_spec(kw):
    base = dict(ln_re=10.0)
    base.update(kw)
    with pytest.raises(DomainError):
        SynthSpec(**base)


def test_sublayer_blend():
    spec = SynthSpec(ln_re=10.0, y_plus_min=1.0, include_sublayer=True, n_points=300)
    y = np.array([1.0, 3.0, 5.0, 30.0, 40.0])
    u = composite_u_plus(spec, y)
    assert u[0] == 1.0 and u[1] == 3.0
    assert u[2] == pytest.approx(5.0, rel=1e-12)
    assert u[3] == pytest.approx(predict_scaling_law(30.0, 10.0), rel=1e-12)
    assert u[4] == pytest.approx(predict_scaling_law(40.0, 10.0), rel=1e-12)
    # linear in (ln y, ln u) inside the blend
    ym = math.sqrt(5.0 * 30.0)
    um = composite_u_plus(spec, np.array([ym]))[0]
    assert math.log(um) == pytest.approx(0.5 * (math.log(5.0) + math.log(u[3])), rel=1e-12)


def test_noise_is_unbiased_in_log():
    sigma = 0.01
    n = 10_000
    vals = []
    for seed in range(n):
        p = generate_profile(SynthSpec(ln_re=11.0, n_points=20, noise_rel_sigma=sigma, seed=seed))
        vals.append(p.u_plus[5])
    noiseless = composite_u_plus(SynthSpec(ln_re=11.0, n_points=20), SynthSpec(ln_re=11.0, n_points=20).grid()[5:6])[0]
    err = np.mean(np.log(vals)) - math.log(noiseless)
    assert abs(err) <= 3 * sigma / math.sqrt(n)


def test_closure_randomized():
    rng = np.random.default_rng(2024)
    for i in range(50):
        ln_re = rng.uniform(8, 14)
        spec = SynthSpec(
            ln_re=ln_re,
            breakpoint_y_plus=float(10 ** rng.uniform(2.0, 3.0)),
            beta=1.5 / ln_re + rng.uniform(0.03, 0.1),
            y_plus_min=30.0,
            y_plus_max=1e4,
            n_points=200,
        )
        p = generate_profile(spec)
        t = fit_two_layer(p, FitWindow(p.y_plus[0], p.y_plus[-1]))
        assert isinstance(t, TwoLayerFit)
        e = effective_reynolds(*solve_ln_re(t.region1))
        assert e.ln_re == pytest.approx(ln_re, abs=1e-6)
        step = math.log(spec.y_plus_max / spec.y_plus_min) / (spec.n_points - 1)
        assert abs(math.log(t.breakpoint_y_plus / spec.breakpoint_y_plus)) <= step


def test_nominal_re_theta_reference_points():
    # label is a smooth fit through three reference runs, within a factor 1.3
    for ln_re, re_theta in ((9.4, 2532.0), (11.33, 14207.0), (12.51, 26612.0)):
        assert 1 / 1.3 < nominal_re_theta(ln_re) / re_theta < 1.3
