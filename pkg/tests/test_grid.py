import math

import numpy as np
import pytest

from dampedeuler.errors import (
    GridTooSmall,
    NonFiniteValue,
    NonPositiveDensity,
    SupportExceedsDomain,
    ValidationError,
)
from dampedeuler.eos import PressureLaw
from dampedeuler.grid import (
    BUMP_DERIVATIVE,
    CUSTOM,
    Field,
    Grid1D,
    InitialData,
    bump_derivative,
    bump_profile,
    derivative,
    l2_norm_sq,
    load_profile_table,
    make_initial,
    profile_values,
    sobolev_norm_sq,
)
from dampedeuler.transform import TransformParams

TP_LOG = TransformParams.from_law(PressureLaw.logarithmic())


class TestGridAndField:
    def test_spacing(self):
        g = Grid1D(-2.0, 2.0, 41)
        assert g.dx == pytest.approx(0.1)
        assert g.nodes()[0] == -2.0 and g.nodes()[-1] == 2.0

    def test_too_small(self):
        with pytest.raises(GridTooSmall):
            Grid1D(0.0, 1.0, 8)

    def test_degenerate_interval(self):
        with pytest.raises(ValueError):
            Grid1D(1.0, 1.0, 32)

    def test_field_shape_check(self):
        g = Grid1D(0.0, 1.0, 32)
        with pytest.raises(ValueError):
            Field(g, np.zeros(31))

    def test_field_rejects_nonfinite(self):
        g = Grid1D(0.0, 1.0, 32)
        vals = np.zeros(32)
        vals[5] = np.nan
        with pytest.raises(NonFiniteValue, match="node 5"):
            Field(g, vals)
        vals[5] = np.inf
        with pytest.raises(NonFiniteValue):
            Field(g, vals)


class TestBump:
    def test_center_and_edges(self):
        assert bump_profile(0.0, 1.0) == 1.0
        assert bump_profile(1.0, 1.0) == 0.0
        assert bump_profile(-1.0, 1.0) == 0.0

    def test_half_radius_value(self):
        # exp(1 - 1/(1 - 0.25)) evaluated directly
        assert bump_profile(0.5, 1.0) == pytest.approx(0.7165313105737893, rel=1e-15)

    def test_compact_support(self):
        x = np.linspace(-3.0, 3.0, 301)
        vals = bump_profile(x, 1.0)
        assert np.all(vals[np.abs(x) >= 1.0] == 0.0)
        assert np.all(vals[np.abs(x) < 0.9] > 0.0)

    def test_radius_validation(self):
        with pytest.raises(ValueError):
            bump_profile(0.0, 0.0)

    def test_derivative_is_odd_and_matches_finite_difference(self):
        x = np.linspace(-0.95, 0.95, 191)
        db = bump_derivative(x, 1.0)
        np.testing.assert_allclose(db, -db[::-1], atol=1e-15)
        h = 1e-6
        fd = (bump_profile(x + h, 1.0) - bump_profile(x - h, 1.0)) / (2 * h)
        np.testing.assert_allclose(db, fd, rtol=1e-7, atol=1e-10)

    def test_derivative_support(self):
        assert bump_derivative(1.0, 1.0) == 0.0
        assert bump_derivative(-2.0, 1.0) == 0.0


class TestDerivative:
    def test_constant_is_flat(self):
        g = Grid1D(-1.0, 1.0, 33)
        d = derivative(Field(g, np.full(g.n, 3.7)), 1)
        assert np.all(d.values == 0.0)

    def test_exact_on_cubics_everywhere(self):
        g = Grid1D(-2.0, 2.0, 41)
        x = g.nodes()
        d = derivative(Field(g, x**3), 1).values
        np.testing.assert_allclose(d, 3.0 * x**2, rtol=1e-12, atol=1e-12)

    def test_refinement_order_on_sine(self):
        errs = []
        for n in (101, 201):
            g = Grid1D(-np.pi, np.pi, n)
            x = g.nodes()
            d = derivative(Field(g, np.sin(x)), 1).values
            errs.append(np.max(np.abs(d[2:-2] - np.cos(x[2:-2]))))
        order = math.log2(errs[0] / errs[1])
        assert order >= 3.5

    def test_linearity(self):
        g = Grid1D(-1.0, 1.0, 64)
        x = g.nodes()
        f1 = Field(g, np.sin(3 * x))
        f2 = Field(g, np.exp(x))
        lhs = derivative(Field(g, 2.0 * f1.values + 0.5 * f2.values), 2).values
        rhs = 2.0 * derivative(f1, 2).values + 0.5 * derivative(f2, 2).values
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    def test_order_bounds(self):
        g = Grid1D(-1.0, 1.0, 32)
        f = Field(g, np.zeros(32))
        for bad in (0, 5):
            with pytest.raises(ValueError):
                derivative(f, bad)


class TestQuadrature:
    def test_zero_field(self):
        g = Grid1D(-1.0, 1.0, 32)
        assert l2_norm_sq(Field(g, np.zeros(32))) == 0.0

    def test_scaling_exact(self):
        g = Grid1D(-1.0, 1.0, 64)
        f = np.sin(np.linspace(0, 5, 64))
        assert l2_norm_sq(Field(g, 3.0 * f)) == pytest.approx(
            9.0 * l2_norm_sq(Field(g, f)), rel=1e-15
        )

    def test_bump_against_refined_oracle(self):
        g = Grid1D(-2.0, 2.0, 4001)
        fine = Grid1D(-2.0, 2.0, 64001)
        coarse_val = l2_norm_sq(Field(g, bump_profile(g.nodes(), 1.0)))
        oracle = l2_norm_sq(Field(fine, bump_profile(fine.nodes(), 1.0)))
        assert abs(coarse_val - oracle) / oracle <= 1e-8

    def test_hat_function_second_order(self):
        # grid-aligned hat of half-width w: integral of hat^2 is 2w/3
        errs = []
        for n in (81, 161):
            g = Grid1D(-2.0, 2.0, n)
            x = g.nodes()
            w = 0.5
            hat = np.maximum(0.0, 1.0 - np.abs(x) / w)
            errs.append(abs(l2_norm_sq(Field(g, hat)) - 2.0 * w / 3.0))
        assert errs[0] <= 1.0 * (4.0 / 80) ** 2
        assert errs[0] / errs[1] >= 3.0


class TestSobolev:
    def test_zero(self):
        g = Grid1D(-1.0, 1.0, 64)
        for m in range(4):
            assert sobolev_norm_sq(Field(g, np.zeros(64)), m) == 0.0

    def test_order_zero_is_l2(self):
        g = Grid1D(-1.0, 1.0, 64)
        f = Field(g, np.cos(np.linspace(0, 3, 64)))
        assert sobolev_norm_sq(f, 0) == l2_norm_sq(f)

    def test_monotone_in_order(self):
        g = Grid1D(-2.0, 2.0, 201)
        f = Field(g, bump_profile(g.nodes(), 1.0))
        vals = [sobolev_norm_sq(f, m) for m in range(4)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_against_sixteenfold_oracle(self):
        coarse = Grid1D(-2.0, 2.0, 2001)
        fine = Grid1D(-2.0, 2.0, 32001)
        s = sobolev_norm_sq(Field(coarse, bump_profile(coarse.nodes(), 1.0)), 1)
        oracle = sobolev_norm_sq(Field(fine, bump_profile(fine.nodes(), 1.0)), 1)
        assert abs(s - oracle) / oracle <= 1e-6

    def test_order_cap(self):
        g = Grid1D(-1.0, 1.0, 64)
        with pytest.raises(ValueError):
            sobolev_norm_sq(Field(g, np.zeros(64)), 4)


class TestProfileTable:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "profile.txt"
        xs = np.linspace(-0.8, 0.8, 17)
        vals = np.cos(xs) * 0.5
        np.savetxt(path, np.column_stack([xs, vals]))
        tx, tv = load_profile_table(path)
        np.testing.assert_allclose(tx, xs)
        np.testing.assert_allclose(tv, vals)

    def test_rejects_bad_shapes(self, tmp_path):
        path = tmp_path / "bad.txt"
        np.savetxt(path, np.ones((4, 3)))
        with pytest.raises(ValidationError):
            load_profile_table(path)

    def test_rejects_unsorted(self, tmp_path):
        path = tmp_path / "unsorted.txt"
        np.savetxt(path, np.array([[0.0, 1.0], [0.5, 1.0], [0.2, 1.0]]))
        with pytest.raises(ValidationError):
            load_profile_table(path)

    def test_custom_profile_interpolates(self):
        xs = np.array([-0.5, 0.0, 0.5])
        vals = np.array([0.0, 1.0, 0.0])
        init = InitialData(epsilon=0.1, R=1.0, profile=CUSTOM, table=(xs, vals))
        g = Grid1D(-2.0, 2.0, 401)
        out = profile_values(init, g.nodes())
        assert out[g.n // 2] == 1.0
        assert np.all(out[np.abs(g.nodes()) > 0.5] == 0.0)
        assert out[np.argmin(np.abs(g.nodes() - 0.25))] == pytest.approx(0.5, abs=1e-12)


class TestInitialData:
    def test_validation(self):
        with pytest.raises(ValidationError):
            InitialData(epsilon=-0.1, R=1.0)
        with pytest.raises(ValidationError):
            InitialData(epsilon=0.1, R=0.0)
        with pytest.raises(ValidationError):
            InitialData(epsilon=0.1, R=1.0, rho_bar=2.0)
        with pytest.raises(ValidationError):
            InitialData(epsilon=0.1, R=1.0, profile="gaussian")
        with pytest.raises(ValidationError):
            InitialData(epsilon=0.1, R=1.0, profile=CUSTOM)

    def test_custom_support_must_fit(self):
        xs = np.array([-2.0, 0.0, 2.0])
        vals = np.array([0.5, 1.0, 0.5])
        with pytest.raises(ValidationError):
            InitialData(epsilon=0.1, R=1.0, profile=CUSTOM, table=(xs, vals))

    def test_zero_amplitude_gives_background(self):
        g = Grid1D(-4.0, 4.0, 201)
        cons, sym = make_initial(InitialData(epsilon=0.0, R=1.0), g, TP_LOG)
        assert np.all(cons.rho.values == 1.0)
        assert np.all(cons.m.values == 0.0)
        assert np.all(sym.v.values == 0.0)
        assert np.all(sym.u.values == 0.0)

    def test_support_containment(self):
        g = Grid1D(-4.0, 4.0, 801)
        x = g.nodes()
        cons, sym = make_initial(InitialData(epsilon=0.3, R=1.0), g, TP_LOG)
        outside = np.abs(x) >= 1.0
        assert np.all(cons.rho.values[outside] == 1.0)
        assert np.all(sym.v.values[outside] == 0.0)
        assert np.all(sym.u.values[outside] == 0.0)

    def test_peak_value(self):
        # max v = 2*(1 - 1.05**-0.5), evaluated directly
        expected = 2.0 * (1.0 - 1.05**-0.5)
        assert expected == pytest.approx(0.0481998541029336, rel=1e-12)
        g = Grid1D(-2.0, 2.0, 2001)
        _, sym = make_initial(InitialData(epsilon=0.05, R=1.0), g, TP_LOG)
        assert np.max(sym.v.values) == pytest.approx(expected, rel=1e-13)

    def test_domain_must_contain_support(self):
        g = Grid1D(-0.5, 4.0, 201)
        with pytest.raises(SupportExceedsDomain):
            make_initial(InitialData(epsilon=0.1, R=1.0), g, TP_LOG)

    def test_density_must_stay_positive(self):
        g = Grid1D(-4.0, 4.0, 801)
        steep = InitialData(epsilon=0.5, R=1.0, profile=BUMP_DERIVATIVE)
        with pytest.raises(NonPositiveDensity):
            make_initial(steep, g, TP_LOG)
        gentle = InitialData(epsilon=0.4, R=1.0, profile=BUMP_DERIVATIVE)
        cons, _ = make_initial(gentle, g, TP_LOG)
        assert np.all(cons.rho.values > 0.0)
