"""
Tests for the analytic backgrounds and the periodic grid.
"""

import numpy as np
import pytest
import sympy as sp

from src.background import (
    Background, BackgroundKind, BackgroundSpec, Grid, build_background, einstein_residual,
    reference_background,
)
from src.utils.errors import GridError

from tests.conftest import DE_SITTER, make_background


class TestGrid:
    """Sampling grid construction."""

    def test_spacing(self):
        grid = Grid(nt=5, nx=8, t0=0.0, t1=0.4, L=2.0 * np.pi)
        assert grid.dt == pytest.approx(0.1)
        assert grid.dx == pytest.approx(np.pi / 4)
        assert grid.shape == (5, 8)
        assert grid.x[-1] < grid.L

    def test_cfl_violation_names_constraint(self):
        with pytest.raises(GridError) as excinfo:
            Grid(nt=5, nx=64, t0=0.0, t1=2.0)
        assert excinfo.value.constraint == "cfl"

    @pytest.mark.parametrize("kwargs, constraint", [
        ({'nt': 3, 'nx': 8, 't0': 0.0, 't1': 1.0}, "nt"),
        ({'nt': 9, 'nx': 2, 't0': 0.0, 't1': 1.0}, "nx"),
        ({'nt': 9, 'nx': 8, 't0': 1.0, 't1': 0.0}, "time_range"),
        ({'nt': 9, 'nx': 8, 't0': 0.0, 't1': 1.0, 'L': -1.0}, "L"),
    ])
    def test_invalid_grids(self, kwargs, constraint):
        with pytest.raises(GridError) as excinfo:
            Grid(**kwargs)
        assert excinfo.value.constraint == constraint

    def test_refined_halves_spacing_exactly(self):
        grid = Grid(nt=17, nx=8, t0=0.0, t1=2.0)
        fine = grid.refined()
        assert (fine.nt, fine.nx) == (33, 16)
        assert fine.dt == pytest.approx(grid.dt / 2)
        assert fine.dx == pytest.approx(grid.dx / 2)
        assert np.allclose(fine.t[::2], grid.t)

    def test_window(self):
        grid = Grid(nt=17, nx=8, t0=0.0, t1=2.0)
        sub = grid.window(4, 8)
        assert sub.nt == 5
        assert sub.t0 == pytest.approx(grid.t[4])
        assert sub.dt == pytest.approx(grid.dt)
        with pytest.raises(IndexError):
            grid.window(8, 20)

    def test_dict_round_trip(self):
        grid = Grid(nt=17, nx=8, t0=0.0, t1=2.0)
        assert Grid.from_dict(grid.to_dict()) == grid


class TestBackgroundConstruction:

    def test_minkowski_metric_is_flat(self, minkowski_small):
        assert np.array_equal(minkowski_small.g[..., 3], np.diag([-1.0, 1.0, 1.0, 1.0]))
        assert minkowski_small.cosmological_constant == 0.0

    def test_desitter_unit_scale_factor_at_minus_one(self):
        grid = Grid(nt=13, nx=8, t0=-2.0, t1=-0.5)
        bg = build_background(DE_SITTER, grid)
        j = int(np.argmin(np.abs(grid.t + 1.0)))
        assert grid.t[j] == pytest.approx(-1.0)
        assert np.allclose(bg.g[..., j], np.diag([-1.0, 1.0, 1.0, 1.0]), atol=1e-14)
        assert bg.cosmological_constant == pytest.approx(3.0)

    def test_desitter_requires_negative_conformal_time(self):
        grid = Grid(nt=11, nx=8, t0=-1.0, t1=0.5)
        with pytest.raises(GridError) as excinfo:
            build_background(DE_SITTER, grid)
        assert excinfo.value.constraint == "conformal_time"

    def test_hubble_rate_must_be_positive(self):
        with pytest.raises(GridError):
            BackgroundSpec(BackgroundKind.DE_SITTER_FLAT_CHART, H=0.0)

    @pytest.mark.parametrize("kind", ["minkowski", "desitter"])
    @pytest.mark.parametrize("name", [
        "a", "A", "dA", "g", "g_inv", "christoffel", "christoffel_dt", "riemann", "ricci",
        "ricci_scalar", "sqrt_minus_g", "sqrt_h", "n_up", "n_down",
    ])
    def test_arrays_are_read_only(self, kind, name):
        array = getattr(make_background(kind, nt=9, nx=8), name)
        with pytest.raises(ValueError):
            array[(0,) * array.ndim] = 5.0

    def test_dict_round_trip(self, desitter_small):
        data = desitter_small.to_dict()
        assert data['kind'] == "desitter"
        rebuilt = Background.from_dict(data)
        assert rebuilt.grid == desitter_small.grid
        assert np.array_equal(rebuilt.a, desitter_small.a)

    def test_reference_backgrounds(self):
        bg = reference_background("desitter", nx=16, nt=64)
        assert bg.grid.t0 == -2.2 and bg.grid.t1 == -0.2
        with pytest.raises(ValueError):
            reference_background("anti-de-sitter")


class TestGeometry:
    """Closed-form curvature at grid points."""

    def test_geometry_index_errors(self, minkowski_small):
        with pytest.raises(IndexError):
            minkowski_small.geometry_at(17, 0)
        with pytest.raises(IndexError):
            minkowski_small.geometry_at(0, -1)

    def test_minkowski_is_flat(self, minkowski_small):
        point = minkowski_small.geometry_at(5, 3)
        assert np.all(point.Riemann == 0.0)
        assert np.all(point.Ricci == 0.0)
        assert point.R == 0.0

    @pytest.mark.parametrize("bg_name", ["minkowski_small", "desitter_small"])
    def test_metric_inverse_and_normal(self, bg_name, request):
        bg = request.getfixturevalue(bg_name)
        for j in range(bg.grid.nt):
            point = bg.geometry_at(j, 0)
            assert np.allclose(point.g @ point.g_inv, np.eye(4), atol=1e-14, rtol=0)
            assert point.n @ point.g @ point.n == pytest.approx(-1.0, abs=1e-13)
            assert point.n[0] > 0

    def test_desitter_einstein_space(self, desitter_small):
        lam = desitter_small.cosmological_constant
        residual = desitter_small.ricci - lam * desitter_small.g
        assert np.max(np.abs(residual)) <= 1e-12
        assert np.max(np.abs(desitter_small.ricci_scalar - 4 * lam)) <= 1e-12

    def test_christoffel_time_component(self, desitter_small):
        point = desitter_small.geometry_at(4, 0)
        t = desitter_small.grid.t[4]
        assert point.Gamma[0, 0, 0] == pytest.approx(-1.0 / t)

    def test_riemann_antisymmetry(self, desitter_small):
        riemann = desitter_small.riemann
        assert np.max(np.abs(riemann + np.swapaxes(riemann, 0, 1))) <= 1e-13

    def test_contracted_bianchi_converges(self, convergence_order):
        """nabla_a R_bcd^a vanishes; finite differences of the analytic Riemann converge."""
        def error(bg):
            riemann = bg.riemann
            gam = bg.christoffel
            # R stored as [a, b, c, d] = R_abc^d; only the t-derivative survives
            value = (np.gradient(riemann[:, :, :, 0, :], bg.grid.dt, axis=-1, edge_order=2)
                     - np.einsum("fdat,fbcdt->abct", gam, riemann)
                     - np.einsum("fdbt,afcdt->abct", gam, riemann)
                     - np.einsum("fdct,abfdt->abct", gam, riemann)
                     + np.einsum("ddft,abcft->abct", gam, riemann))
            return float(np.max(np.abs(value[..., 2:-2])))

        assert convergence_order(error, make_background("desitter", nt=33, nx=8)) >= 1.8


class TestEinsteinResidual:

    def test_minkowski_exact(self, minkowski_small):
        assert einstein_residual(minkowski_small) == 0.0

    def test_desitter_vacuum(self, desitter_small):
        assert einstein_residual(desitter_small) <= 1e-12

    def test_wrong_cosmological_constant_detected(self, desitter_small):
        assert einstein_residual(desitter_small, cosmological_constant=2.0) > 0.1


class TestSymbolicOracle:
    """Ricci tensor of the conformally flat chart from sympy."""

    @staticmethod
    def _symbolic_ricci():
        H = sp.symbols("H")
        coords = sp.symbols('eta x y z')
        a = -1 / (H * coords[0])
        metric = sp.diag(-a ** 2, a ** 2, a ** 2, a ** 2)
        inverse = metric.inv()
        n = 4
        gamma = [[[sp.simplify(sum(inverse[a_, d] * (sp.diff(metric[d, b], coords[c])
                                                     + sp.diff(metric[d, c], coords[b])
                                                     - sp.diff(metric[b, c], coords[d]))
                                   for d in range(n)) / 2)
                   for c in range(n)] for b in range(n)] for a_ in range(n)]
        ricci = sp.zeros(n, n)
        for b in range(n):
            for d in range(n):
                ricci[b, d] = sp.simplify(
                    sum(sp.diff(gamma[a_][b][d], coords[a_]) for a_ in range(n))
                    - sum(sp.diff(gamma[a_][b][a_], coords[d]) for a_ in range(n))
                    + sum(gamma[a_][a_][e] * gamma[e][b][d] for a_ in range(n) for e in range(n))
                    - sum(gamma[a_][d][e] * gamma[e][b][a_] for a_ in range(n) for e in range(n))
                )
        return sp.lambdify((coords[0], H), ricci, 'numpy'), \
            sp.lambdify((coords[0], H), gamma[0][0][0], 'numpy')

    def test_ricci_matches_sympy(self, desitter_small):
        ricci_fn, gamma000_fn = self._symbolic_ricci()
        for j in (2, 8, 14):
            t = float(desitter_small.grid.t[j])
            expected = np.array(ricci_fn(t, 1.0), dtype=float)
            assert np.allclose(desitter_small.ricci[..., j], expected, rtol=1e-12, atol=1e-12)
            assert desitter_small.christoffel[0, 0, 0, j] == pytest.approx(gamma000_fn(t, 1.0))
