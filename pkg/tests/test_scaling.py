import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blscaling import (
    DomainError,
    FitWindow,
    MetadataRequiredError,
    NonphysicalPrefactorError,
    PowerLawFit,
    collapse_profile,
    effective_reynolds,
    fit_power_law,
    length_scale,
    predict_scaling_law,
    solve_ln_re,
)
from blscaling.scaling import is_consistent, pooled_rms, profile_length_scale
from blscaling.synth import SynthSpec, generate_ensemble

from conftest import make_profile

LAMBDA_LNRE_9_4 = 0.0090662855476627383  # mpmath, scripts/compute_oracles.py
COLLAPSE_RMS_PERTURBED = 0.09814800922784657  # same source


def region1(alpha, a):
    return PowerLawFit(alpha, a, 0.0, 0.0, 0.0, 10, FitWindow(30, 300))


class TestSolveLnRe:
    @pytest.mark.parametrize(
        "alpha, a, table1, table2",
        [(0.157, 7.84, 9.24, 9.57), (0.132, 9.01, 11.28, 11.39), (0.120, 9.74, 12.54, 12.48)],
    )
    def test_table_rows(self, alpha, a, table1, table2):
        ln1, ln2 = solve_ln_re(region1(alpha, a))
        assert ln1 == pytest.approx(math.sqrt(3) * (a - 2.5), rel=1e-15)
        assert ln2 == pytest.approx(1.5 / alpha, rel=1e-15)
        assert abs(ln1 - table1) <= 0.05
        assert abs(ln2 - table2) <= 0.05

    def test_row_2532_values(self):
        ln1, ln2 = solve_ln_re(region1(0.157, 7.84))
        assert round(ln1, 2) == 9.25 or round(ln1, 2) == 9.24
        assert round(ln2, 2) == 9.55

    def test_boundary_prefactor(self):
        with pytest.raises(NonphysicalPrefactorError):
            solve_ln_re(region1(0.15, 2.5))
        with pytest.raises(NonphysicalPrefactorError):
            solve_ln_re(region1(0.15, 1.0))


class TestEffectiveReynolds:
    def test_row_2532(self):
        eff = effective_reynolds(9.24, 9.57)
        assert eff.ln_re == pytest.approx(9.405, abs=1e-12)
        assert round(eff.ln_re, 1) == 9.4
        assert abs(100 * eff.delta - 3.4) <= 0.2

    def test_row_14207(self):
        eff = effective_reynolds(11.28, 11.39)
        assert eff.ln_re == pytest.approx(11.335, abs=1e-12)
        assert 100 * eff.delta == pytest.approx(0.97, abs=0.01)

    def test_symmetric_pair(self):
        eff = effective_reynolds(7.5, 7.5)
        assert eff.ln_re == 7.5 and eff.delta == 0.0

    def test_absolute_delta_on_row_26612(self):
        eff = effective_reynolds(12.54, 12.48)
        assert eff.delta > 0

    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (1.0, -1.0)])
    def test_domain(self, a, b):
        with pytest.raises(DomainError):
            effective_reynolds(a, b)

    def test_swap_invariance(self):
        rng = np.random.default_rng(0)
        for a, b in rng.uniform(1, 30, size=(1000, 2)):
            assert effective_reynolds(a, b).delta == effective_reynolds(b, a).delta


class TestLengthScale:
    def test_round_numbers(self):
        eff = effective_reynolds(math.log(1e6), math.log(1e6))
        assert length_scale(eff, 10.0, 1.5e-5) == pytest.approx(1.5, rel=1e-12)

    def test_ln_re_9_4(self):
        eff = effective_reynolds(9.4, 9.4)
        assert length_scale(eff, 20.0, 1.5e-5) == pytest.approx(LAMBDA_LNRE_9_4, rel=1e-13)

    def test_missing_metadata(self):
        eff = effective_reynolds(9.4, 9.4)
        p = make_profile([1, 2, 3], [1, 2, 3], run_id="no-nu", u_inf=10.0)
        with pytest.raises(MetadataRequiredError, match="no-nu.*nu"):
            profile_length_scale(eff, p)
        with pytest.raises(MetadataRequiredError):
            length_scale(eff, 10.0, None)


class TestCollapse:
    def profile(self, n=100, ln_re=9.4):
        y = np.geomspace(30, 3000, n)
        return make_profile(y, predict_scaling_law(y, ln_re))

    def test_exact_inverse(self):
        c = collapse_profile(self.profile(), FitWindow(30, 3000), 9.4)
        assert c.rms_off_bisectrix <= 1e-12
        assert c.n_excluded == 0
        assert c.points.shape == (100, 2)

    def test_perturbed_ln_re(self):
        c = collapse_profile(self.profile(), FitWindow(30, 3000), 9.9)
        assert c.rms_off_bisectrix == pytest.approx(COLLAPSE_RMS_PERTURBED, rel=1e-10)

    def test_window_restricts_points(self):
        c = collapse_profile(self.profile(), FitWindow(100, 1000), 9.4)
        assert np.all(np.exp(c.ln_y_plus) >= 100 * (1 - 1e-12))
        assert np.all(np.exp(c.ln_y_plus) <= 1000 * (1 + 1e-12))

    def test_grid_density_invariance(self):
        for ln_re in (9.0, 11.0, 13.0):
            coarse = collapse_profile(self.profile(40, ln_re), FitWindow(30, 3000), ln_re + 0.3)
            fine = collapse_profile(self.profile(400, ln_re), FitWindow(30, 3000), ln_re + 0.3)
            assert abs(coarse.rms_off_bisectrix - fine.rms_off_bisectrix) < 1e-3

    def test_noisy_ensemble(self):
        specs = [
            SynthSpec(ln_re=lr, breakpoint_y_plus=500.0, beta=1.5 / lr + 0.06,
                      noise_rel_sigma=0.005, seed=i)
            for i, lr in enumerate(np.linspace(10.5, 13, 24))
        ]
        res = []
        for s, p in zip(specs, generate_ensemble(specs)):
            res.append(collapse_profile(p, FitWindow(30, 500), s.ln_re))
        assert pooled_rms(res) <= 0.05


@settings(max_examples=60, deadline=None)
@given(ln_re=st.floats(8, 14))
def test_consistency_closure(ln_re):
    y = np.geomspace(30, 3000, 80)
    p = make_profile(y, predict_scaling_law(y, ln_re))
    eff = effective_reynolds(*solve_ln_re(fit_power_law(p, FitWindow(30, 3000))))
    assert eff.ln_re1 == pytest.approx(ln_re, abs=1e-9)
    assert eff.ln_re2 == pytest.approx(ln_re, abs=1e-9)
    assert eff.ln_re == pytest.approx(ln_re, abs=1e-9)
    assert eff.delta <= 1e-9


def test_consistency_flag():
    assert is_consistent(effective_reynolds(10, 10.5), 5000) is None
    assert is_consistent(effective_reynolds(10, 10.5), 20000) is False
    assert is_consistent(effective_reynolds(10, 10.2), 20000) is True
