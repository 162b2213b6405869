import numpy as np
import pytest

from phibvp import (FConstants, G1Constants, G2Constants, Grid, GridFunction,
                    ProblemSpec, make_power, rhs, with_lambda)


def reference_spec(lam=0.5, mu=1.0, n_nodes=129, **extra):
    g = Grid.uniform(0.0, 1.0, n_nodes)
    ones = GridFunction(g, np.ones(n_nodes))
    defaults = dict(
        grid=g, phi=make_power(1.0), m=ones, n=ones, lam=lam, mu=mu,
        f=lambda t: np.sqrt(t), g=lambda t: t ** 2,
        f_constants=FConstants(1.0, 1.0, 0.5),
        g1_constants=G1Constants(1.0, 1.0, 2.0),
        g2_constants=G2Constants(1.0, 1.0, 2.0),
    )
    defaults.update(extra)
    return ProblemSpec(**defaults)


class TestValidation:
    def test_reference_instance_constructs(self):
        spec = reference_spec()
        assert spec.lam == 0.5 and spec.mu == 1.0

    @pytest.mark.parametrize("lam", [0.0, -1.0, np.inf, np.nan])
    def test_lambda_must_be_positive(self, lam):
        with pytest.raises(ValueError, match="lambda must be positive"):
            reference_spec(lam=lam)

    @pytest.mark.parametrize("mu", [0.0, -2.0])
    def test_mu_must_be_positive(self, mu):
        with pytest.raises(ValueError, match="mu must be positive"):
            reference_spec(mu=mu)

    def test_negative_weight_rejected(self):
        g = Grid.uniform(0.0, 1.0, 129)
        bad = GridFunction(g, np.linspace(-0.1, 1.0, 129))
        with pytest.raises(ValueError, match="weight m must be nonnegative"):
            reference_spec(m=bad)

    def test_weights_must_share_problem_grid(self):
        other = Grid.uniform(0.0, 1.0, 65)
        bad = GridFunction(other, np.ones(65))
        with pytest.raises(ValueError):
            reference_spec(m=bad, n=bad)

    def test_f_envelope_spot_checked(self):
        # t^2 drops below t^0.5 inside (0, 1), so the stated lower
        # envelope must be caught.
        with pytest.raises(ValueError, match="lower envelope c0"):
            reference_spec(f=lambda t: t ** 2)

    def test_g_near_zero_envelope_spot_checked(self):
        with pytest.raises(ValueError, match="upper envelope c1"):
            reference_spec(g=lambda t: np.sqrt(t),
                           g2_constants=None)

    def test_g_at_infinity_envelope_spot_checked(self):
        with pytest.raises(ValueError, match="beyond t2"):
            reference_spec(g=lambda t: np.minimum(t ** 2, 2.0),
                           g1_constants=None)

    def test_constants_blocks_are_optional(self):
        spec = reference_spec(f_constants=None, g1_constants=None,
                              g2_constants=None)
        assert spec.f_constants is None


class TestOperations:
    def test_with_lambda_replaces_only_lambda(self):
        spec = reference_spec(lam=0.5)
        moved = with_lambda(spec, 2.5)
        assert moved.lam == 2.5
        assert moved.mu == spec.mu
        assert moved.grid == spec.grid
        assert spec.lam == 0.5

    def test_with_lambda_revalidates(self):
        with pytest.raises(ValueError, match="lambda must be positive"):
            with_lambda(reference_spec(), -1.0)

    def test_rhs_matches_closed_form(self):
        spec = reference_spec(lam=2.0, mu=3.0)
        u = GridFunction(spec.grid, np.full(spec.grid.count, 0.25))
        out = rhs(spec, u)
        expected = 2.0 * np.sqrt(0.25) + 3.0 * 0.25 ** 2
        assert np.allclose(out.values, expected, atol=1e-14)

    def test_rhs_clamps_roundoff_negatives(self):
        spec = reference_spec()
        u = GridFunction(spec.grid, np.full(spec.grid.count, -1e-15))
        out = rhs(spec, u)
        assert np.all(out.values == 0.0)

    def test_rhs_rejects_genuinely_negative_state(self):
        spec = reference_spec()
        u = GridFunction(spec.grid, np.full(spec.grid.count, -1e-6))
        with pytest.raises(ValueError):
            rhs(spec, u)

    def test_rhs_rejects_foreign_grid(self):
        spec = reference_spec()
        other = Grid.uniform(0.0, 1.0, 65)
        with pytest.raises(ValueError):
            rhs(spec, GridFunction(other, np.zeros(65)))
