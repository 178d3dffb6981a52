"""
Tests for shared numerical helpers in src.utils.common.
"""

import math

import numpy as np
import pytest

from src.utils.common import (
    Timer, bump, format_time, interior_max, max_abs, observed_order, periodic_offset,
    relative_gap, smoothstep,
)
from src.utils.errors import ContractError, GridError, UsageError, WorkbenchError


class TestProfiles:
    """Compact-support profiles."""

    def test_bump_support_is_open_interval(self):
        u = np.array([-1.5, -1.0, 0.0, 0.5, 1.0, 2.0])
        values = bump(u)
        assert values[0] == 0.0 and values[1] == 0.0
        assert values[4] == 0.0 and values[5] == 0.0
        assert values[2] == pytest.approx(1.0)
        assert 0.0 < values[3] < 1.0

    def test_bump_is_even(self):
        u = np.linspace(-0.9, 0.9, 11)
        assert np.allclose(bump(u), bump(-u))

    def test_smoothstep_plateaus_are_exact(self):
        t = np.linspace(-1.0, 2.0, 31)
        values = smoothstep(t, 0.0, 1.0)
        assert np.all(values[t <= 0.0] == 0.0)
        assert np.all(values[t >= 1.0] == 1.0)

    def test_smoothstep_is_monotone(self):
        values = smoothstep(np.linspace(0.0, 1.0, 41), 0.0, 1.0)
        assert np.all(np.diff(values) >= 0.0)
        assert smoothstep(np.array([0.5]), 0.0, 1.0)[0] == pytest.approx(0.5)

    def test_smoothstep_rejects_empty_ramp(self):
        with pytest.raises(ValueError):
            smoothstep(np.array([0.0]), 1.0, 1.0)

    def test_periodic_offset_wraps(self):
        period = 2.0 * math.pi
        offsets = periodic_offset(np.array([0.1, period - 0.1]), 0.0, period)
        assert offsets == pytest.approx([0.1, -0.1])


class TestVerificationNorms:

    def test_interior_max_strips_boundary_layers(self):
        values = np.zeros((10, 4))
        values[0] = 100.0
        values[-1] = 100.0
        values[5, 2] = -3.0
        assert interior_max(values, margin=2) == 3.0

    def test_interior_max_needs_enough_layers(self):
        with pytest.raises(ValueError):
            interior_max(np.zeros((4, 3)), margin=2)

    def test_observed_order(self):
        assert observed_order(4.0, 1.0) == pytest.approx(2.0)
        assert observed_order(1.0, 0.0) == math.inf
        assert observed_order(0.0, 0.0) == 0.0

    def test_relative_gap(self):
        assert relative_gap(1.0, 1.0) == 0.0
        assert relative_gap(2.0, 1.0) == pytest.approx(0.5)
        assert relative_gap(1.0 + 1.0j, 1.0, scale=2.0) == pytest.approx(0.5)

    def test_max_abs(self):
        assert max_abs(np.array([1.0, -5.0]), np.array([]), np.array([2.0])) == 5.0


class TestErrors:

    def test_error_carries_code_and_context(self):
        error = ContractError("not a solution", measured=np.float64(1e-3), tolerance=1e-8)
        payload = error.to_dict()
        assert payload['error_code'] == "CONTRACT_ERROR"
        assert payload['context']['measured'] == pytest.approx(1e-3)
        assert isinstance(payload['context']['measured'], float)

    def test_grid_error_is_value_error(self):
        error = GridError("CFL violated", constraint="cfl", ratio=1.2)
        assert isinstance(error, ValueError)
        assert isinstance(error, WorkbenchError)
        assert error.context['constraint'] == "cfl"

    def test_usage_error_code(self):
        assert UsageError("bad").error_code == "USAGE_ERROR"


class TestTimingUtilities:

    def test_timer(self):
        timer = Timer()
        assert timer.elapsed() >= 0.0
        assert timer.lap() >= 0.0
        timer.reset()
        assert timer.elapsed() >= 0.0

    def test_format_time(self):
        assert format_time(0.25) == "250.0ms"
        assert format_time(2.5) == "2.50s"
        assert format_time(125.0) == "2m5.0s"
