"""
Tests for the de Donder, transverse-traceless and synchronous gauge transforms.
"""

import numpy as np
import pytest

from src.fields import (
    FieldRank, PlaneWaveRecipe, RandomRecipe, SymField2, VecField,
    lie_derivative_metric, metric_field, synthesize_field,
)
from src.gauge import (
    GaugeResult, gauge_shift, to_de_donder, to_synchronous, to_transverse_traceless,
    synchronous_residual, tt_obstruction,
)
from src.greens import Direction, LevelOperator, WaveOperator
from src.utils.common import bump, observed_order
from src.utils.errors import ContractError, UnsupportedBackgroundError

NESTED_ORDER = 1.5


def _gamma(bg, seed=21):
    return synthesize_field(bg, RandomRecipe(seed=seed, smoothness=2))


def wave_vector(bg) -> VecField:
    """Solution of (box + Lambda) v = 0 from smooth data on the central slice."""
    grid = bg.grid
    k = 2.0 * np.pi / grid.L
    x = grid.x
    value = np.stack([0.3 * np.cos(k * x), 0.2 * np.sin(2 * k * x),
                      0.1 * np.cos(k * x + 0.4), -0.2 * np.sin(k * x)])
    rate = np.stack([0.1 * np.sin(k * x), -0.2 * np.cos(k * x),
                     0.05 * np.sin(2 * k * x), 0.1 * np.cos(2 * k * x)])
    level_op = LevelOperator(bg, WaveOperator.VECTOR_BOX_LAMBDA, "u")
    source = np.zeros((4,) + grid.shape)
    data = level_op.evolve_from(grid.nt // 2, value, rate, source, Direction.BOTH)
    return VecField(grid, data, "u")


def _orders(report_of, bg, keys):
    coarse, fine = report_of(bg), report_of(bg.refined())
    return {key: observed_order(coarse[key], fine[key]) for key in keys}


class TestGaugeResult:
    """Every transform returns gamma' = gamma + Lie_w g."""

    def test_transformed_field_is_gauge_shift(self, minkowski_small):
        gamma = _gamma(minkowski_small)
        result = to_synchronous(minkowski_small, gamma)
        gap = result.transformed - gamma - lie_derivative_metric(minkowski_small, result.w)
        assert gap.norm() <= 1e-13 * max(1.0, gamma.norm())

    def test_to_dict(self, minkowski_small):
        gamma = _gamma(minkowski_small)
        result = to_de_donder(minkowski_small, gamma)
        data = result.to_dict()
        assert set(data['residual_report']) == {'de_donder_before', 'de_donder_after'}
        assert data['gauge_vector_max'] == result.w.norm()
        assert isinstance(result, GaugeResult)

    def test_gauge_shift_by_zero_vector(self, desitter_small):
        gamma = _gamma(desitter_small)
        zero = VecField(desitter_small.grid, np.zeros((4,) + desitter_small.grid.shape))
        assert np.array_equal(gauge_shift(desitter_small, gamma, zero).components, gamma.components)


class TestDeDonder:
    """de Donder gauge from zero gauge data on a slice."""

    def test_plane_wave_needs_no_gauge_vector(self, minkowski_small):
        wave = synthesize_field(minkowski_small, PlaneWaveRecipe(mode=1))
        result = to_de_donder(minkowski_small, wave)
        assert result.w.norm() == 0.0
        assert result.residual_report['de_donder_after'] == 0.0

    def test_residual_converges(self, chart):
        orders = _orders(lambda bg: to_de_donder(bg, _gamma(bg)).residual_report, chart,
                         ['de_donder_after'])
        assert orders['de_donder_after'] >= NESTED_ORDER

    def test_residual_drops(self, desitter):
        report = to_de_donder(desitter, _gamma(desitter)).residual_report
        assert report['de_donder_after'] < 0.1 * report['de_donder_before']

    def test_gauge_vector_vanishes_on_slice(self, desitter):
        sigma = 20
        result = to_de_donder(desitter, _gamma(desitter), sigma=sigma)
        assert np.max(np.abs(result.w.data[:, sigma])) == 0.0

    @pytest.mark.parametrize("sigma", [1, 63])
    def test_boundary_slice_rejected(self, minkowski, sigma):
        with pytest.raises(ValueError):
            to_de_donder(minkowski, _gamma(minkowski), sigma=sigma)


class TestTransverseTraceless:
    """TT gauge on de Sitter and the obstruction on Minkowski."""

    def test_minkowski_unsupported(self, minkowski_small):
        with pytest.raises(UnsupportedBackgroundError):
            to_transverse_traceless(minkowski_small, _gamma(minkowski_small))

    def test_plane_wave_is_already_tt(self, desitter):
        wave = synthesize_field(desitter, PlaneWaveRecipe(mode=2))
        result = to_transverse_traceless(desitter, wave, check_preconditions=False)
        assert result.w.norm() == 0.0

    def test_non_solution_rejected(self, desitter_small):
        with pytest.raises(ContractError) as info:
            to_transverse_traceless(desitter_small, _gamma(desitter_small))
        assert info.value.measured > info.value.tolerance
        assert 'wave_equation_before' in info.value.context

    def test_pure_gauge_solution_becomes_traceless(self, desitter):
        def report_of(bg):
            gamma = lie_derivative_metric(bg, wave_vector(bg))
            return to_transverse_traceless(bg, gamma, check_preconditions=False).residual_report

        orders = _orders(report_of, desitter,
                         ['trace_after', 'tt_gauge_condition', 'de_donder_after'])
        assert orders['trace_after'] >= NESTED_ORDER
        assert orders['tt_gauge_condition'] >= NESTED_ORDER
        assert orders['de_donder_after'] >= NESTED_ORDER

    def test_report_keys(self, desitter_small):
        gamma = lie_derivative_metric(desitter_small, wave_vector(desitter_small))
        report = to_transverse_traceless(desitter_small, gamma, check_preconditions=False).residual_report
        assert set(report) == {'de_donder_before', 'wave_equation_before', 'trace_before',
                               'trace_after', 'de_donder_after', 'tt_gauge_condition',
                               'tt_normal_condition'}


class TestTTObstruction:
    """Slice integral of the normal derivative of the trace."""

    def test_linear_trace_growth(self, minkowski):
        grid = minkowski.grid
        t, x = grid.t[:, None], grid.x[None, :]
        gamma = metric_field(minkowski, t + np.cos(x - t))
        for sigma in (16, 40):
            assert tt_obstruction(minkowski, gamma, sigma) == pytest.approx(4.0 * grid.L, rel=1e-10)

    def test_bump_trace_matches_derivative(self, minkowski):
        centre, radius = 1.0, 0.6

        def error(bg):
            grid = bg.grid
            u = (grid.t - centre) / radius
            gamma = metric_field(bg, np.broadcast_to(bump(u)[:, None], grid.shape))
            sigma = 5 * (grid.nt - 1) // 8
            us = u[sigma]
            slope = bump(u)[sigma] * (-2.0 * us / (1.0 - us ** 2) ** 2) / radius
            return abs(tt_obstruction(bg, gamma, sigma) - 4.0 * grid.L * slope)

        assert observed_order(error(minkowski), error(minkowski.refined())) >= 1.8

    def test_pure_gauge_has_no_obstruction(self, minkowski):
        def error(bg):
            gamma = lie_derivative_metric(bg, wave_vector(bg))
            return abs(tt_obstruction(bg, gamma, (bg.grid.nt - 1) // 4))

        assert observed_order(error(minkowski), error(minkowski.refined())) >= NESTED_ORDER

    def test_complex_field_keeps_imaginary_part(self, minkowski):
        grid = minkowski.grid
        t, x = grid.t[:, None], grid.x[None, :]
        real, imag = t + np.cos(x - t), 3.0 * t + np.sin(x + t)
        value = tt_obstruction(minkowski, metric_field(minkowski, real + 1j * imag), 24)
        assert isinstance(value, complex)
        assert value.real == pytest.approx(tt_obstruction(minkowski, metric_field(minkowski, real), 24))
        assert value.imag == pytest.approx(tt_obstruction(minkowski, metric_field(minkowski, imag), 24))
        assert value == pytest.approx(4.0 * grid.L * (1.0 + 3.0j), rel=1e-10)

    def test_desitter_unsupported(self, desitter_small):
        with pytest.raises(UnsupportedBackgroundError):
            tt_obstruction(desitter_small, _gamma(desitter_small), 8)

    def test_boundary_slice_rejected(self, minkowski_small):
        with pytest.raises(ValueError):
            tt_obstruction(minkowski_small, _gamma(minkowski_small), 0)


class TestSynchronous:
    """n^a gamma_ab = 0 along comoving timelines."""

    def test_synchronous_field_unchanged(self, desitter_small):
        gamma = _gamma(desitter_small)
        components = gamma.components.copy()
        components[:4] = 0.0
        synchronous = SymField2(desitter_small.grid, components)
        result = to_synchronous(desitter_small, synchronous)
        assert result.w.norm() == 0.0
        assert synchronous_residual(desitter_small, result.transformed) == 0.0

    def test_residual_converges(self, chart):
        orders = _orders(lambda bg: to_synchronous(bg, _gamma(bg)).residual_report, chart,
                         ['synchronous_after'])
        assert orders['synchronous_after'] >= 1.8

    def test_gauge_vector_is_covector(self, minkowski_small):
        result = to_synchronous(minkowski_small, _gamma(minkowski_small))
        assert result.w.variance == "d"

    def test_gauge_vector_vanishes_on_slice(self, minkowski_small):
        result = to_synchronous(minkowski_small, _gamma(minkowski_small), sigma=5)
        assert np.max(np.abs(result.w.data[:, 5])) == 0.0


class TestRandomVectorGauge:
    """Lie derivatives of random vectors are pure gauge for every transform."""

    def test_de_donder_of_pure_gauge_stays_pure_gauge(self, minkowski_small):
        v = synthesize_field(minkowski_small, RandomRecipe(seed=5, smoothness=2, rank=FieldRank.VECTOR))
        gamma = lie_derivative_metric(minkowski_small, v)
        result = to_de_donder(minkowski_small, gamma)
        combined = VecField(minkowski_small.grid, v.data + result.w.data, "u")
        gap = result.transformed - lie_derivative_metric(minkowski_small, combined)
        assert gap.norm() <= 1e-12 * max(1.0, gamma.norm())
