"""
Tests for the pre-symplectic product, smeared observables, the Pauli-Jordan
pairing and the Poisson bracket.
"""

import numpy as np
import pytest

from src.cli.inputs import plane_wave_pair, separation_observables
from src.fields import (
    BumpRecipe, FieldRank, PlaneWaveRecipe, Polarization, RandomRecipe, TensorField,
    VecField, divergence, lie_derivative_metric, support_of, synthesize_field,
)
from src.linop import truncation_floor
from src.symplectic import (
    DivergenceClass, MIN_WINDOW_LAYERS, bianchi_test_tensor, constraint_pairing_identity,
    current_divergence, current_divergence_expected, field_generation_identity, make_observable,
    null_test_tensor, observable_eval, pauli_jordan_expansion, pauli_jordan_pairing,
    poisson_bracket, presymplectic, presymplectic_magnitude, separating_probe, time_window,
)
from src.utils.common import interior_max, observed_order
from src.utils.errors import ContractError, GeometryError, SupportError
from tests.conftest import make_background

NESTED_ORDER = 1.5

POLARIZATION = np.array([
    [0.4, 0.1, 0.0, 0.2],
    [0.1, 1.0, -0.3, 0.0],
    [0.0, -0.3, 0.5, 0.0],
    [0.2, 0.0, 0.0, -0.6],
])


def _wave(bg, phase=0.0, polarization=Polarization.PLUS):
    return synthesize_field(bg, PlaneWaveRecipe(mode=1, polarization=polarization, phase=phase))


def _vector(bg, seed=41):
    return synthesize_field(bg, RandomRecipe(seed=seed, smoothness=2, rank=FieldRank.VECTOR))


def _gamma(bg, seed=42):
    return synthesize_field(bg, RandomRecipe(seed=seed, smoothness=2))


def _bump(bg, centre_offset=0.0, x_centre=np.pi, rank=FieldRank.TENSOR, polarization=POLARIZATION,
          radii=(0.35, 1.2)):
    grid = bg.grid
    centre = (0.5 * (grid.t0 + grid.t1) + centre_offset, x_centre)
    return synthesize_field(bg, BumpRecipe(center=centre, radii=radii, polarization=polarization,
                                           rank=rank))


def _window(bg, lo_eighths, hi_eighths):
    """Time window at fixed fractions of the grid, so it refines with the grid."""
    steps = bg.grid.nt - 1
    return (lo_eighths * steps // 8, hi_eighths * steps // 8)


def _order(error, bg):
    coarse, fine = error(bg), error(bg.refined())
    if fine <= 1e-12:
        return float('inf')
    return observed_order(coarse, fine)


class TestPresymplectic:
    """omega_sigma on solutions and gauge fields."""

    def test_self_product_vanishes(self, desitter):
        gamma = _gamma(desitter)
        assert presymplectic(desitter, gamma, gamma, 32) == 0.0

    def test_antisymmetric(self, desitter):
        first, second = _gamma(desitter), _gamma(desitter, seed=7)
        assert presymplectic(desitter, first, second, 20) == -presymplectic(desitter, second, first, 20)

    def test_bilinear(self, minkowski):
        first, second, third = _gamma(minkowski), _gamma(minkowski, seed=8), _gamma(minkowski, seed=9)
        combined = presymplectic(minkowski, first, 2.0 * second + third, 32)
        expected = 2.0 * presymplectic(minkowski, first, second, 32) + presymplectic(minkowski, first, third, 32)
        assert combined == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_slice_independence(self, chart):
        def error(bg):
            first = _wave(bg)
            second = _wave(bg, phase=0.7) + lie_derivative_metric(bg, _vector(bg))
            steps = bg.grid.nt - 1
            return abs(presymplectic(bg, first, second, steps // 4)
                       - presymplectic(bg, first, second, 3 * steps // 4))

        assert _order(error, chart) >= NESTED_ORDER

    def test_nonzero_on_distinct_waves(self, desitter):
        value = presymplectic(desitter, _wave(desitter), _wave(desitter, phase=0.7), 32)
        assert abs(value) > 1e-2

    def test_gauge_fields_in_radical(self, chart):
        def error(bg):
            return abs(presymplectic(bg, _wave(bg), lie_derivative_metric(bg, _vector(bg)),
                                     bg.grid.nt // 2))

        assert _order(error, chart) >= NESTED_ORDER

    def test_magnitude_bounds_product(self, desitter):
        first, second = _gamma(desitter), _gamma(desitter, seed=3)
        assert presymplectic_magnitude(desitter, first, second, 30) >= abs(
            presymplectic(desitter, first, second, 30))

    def test_boundary_slice_rejected(self, minkowski_small):
        gamma = _gamma(minkowski_small)
        with pytest.raises(ValueError):
            presymplectic(minkowski_small, gamma, gamma, 1)

    def test_current_divergence_off_shell(self, chart):
        def error(bg):
            first, second = _gamma(bg), _gamma(bg, seed=5)
            gap = (current_divergence(bg, first, second).data
                   - current_divergence_expected(bg, first, second).data)
            return interior_max(gap)

        assert _order(error, chart) >= NESTED_ORDER


class TestConstraintPairingIdentity:
    """omega(gamma, Lie_w g) = 2 int w^a L_ab(gamma) n^b."""

    def test_zero_vector(self, desitter):
        zero = VecField(desitter.grid, np.zeros((4,) + desitter.grid.shape))
        lhs, rhs = constraint_pairing_identity(desitter, _gamma(desitter), zero, 32)
        assert lhs == 0.0 and rhs == 0.0

    def test_solution_gives_zero(self, desitter):
        def error(bg):
            lhs, rhs = constraint_pairing_identity(bg, _wave(bg), _vector(bg), bg.grid.nt // 2)
            return max(abs(lhs), abs(rhs))

        assert _order(error, desitter) >= NESTED_ORDER

    def test_both_sides_agree_off_shell(self, chart):
        def error(bg):
            gamma = _bump(bg)
            w = _bump(bg, x_centre=2.5, rank=FieldRank.VECTOR, polarization=[0.5, 1.0, -0.4, 0.3])
            lhs, rhs = constraint_pairing_identity(bg, gamma, w, bg.grid.nt // 2)
            return abs(lhs - rhs)

        assert _order(error, chart) >= NESTED_ORDER

    def test_off_shell_value_nonzero(self, minkowski):
        gamma = _bump(minkowski)
        w = _bump(minkowski, x_centre=2.5, rank=FieldRank.VECTOR, polarization=[0.5, 1.0, -0.4, 0.3])
        lhs, _ = constraint_pairing_identity(minkowski, gamma, w, 32)
        assert abs(lhs) > 1e-3


class TestSmearing:
    """Divergence-free test tensors."""

    def test_time_window_profile(self, desitter):
        chi = time_window(desitter, (20, 30))
        assert np.all(chi[:22] == 0.0)
        assert np.all(chi[29:] == 1.0)
        assert np.all(np.diff(chi) >= 0.0)

    def test_thin_window_rejected(self, desitter):
        with pytest.raises(GeometryError):
            time_window(desitter, (20, 20 + MIN_WINDOW_LAYERS - 2))

    def test_window_outside_interior_rejected(self, desitter):
        with pytest.raises(GeometryError):
            time_window(desitter, (2, 20))

    def test_bianchi_tensor_support(self, desitter):
        window = (20, 30)
        f = bianchi_test_tensor(desitter, _wave(desitter), window)
        support = support_of(f)
        assert window[0] <= support.t_lo and support.t_hi <= window[1]
        assert f.support is not None

    def test_bianchi_tensor_divergence_free(self, chart):
        def error(bg):
            f = bianchi_test_tensor(bg, _wave(bg), _window(bg, 3, 5))
            return interior_max(divergence(bg, f).data)

        assert _order(error, chart) >= NESTED_ORDER

    def test_null_tensor_requires_interior_potential(self, minkowski_small):
        with pytest.raises(SupportError):
            null_test_tensor(minkowski_small, _gamma(minkowski_small))


class TestObservables:
    """Classification and gauge invariance of F_f."""

    def test_null_tensor_is_divergence_free(self, desitter):
        obs = make_observable(desitter, null_test_tensor(desitter, _bump(desitter)), label="null")
        assert obs.divergence_class is DivergenceClass.DIVERGENCE_FREE
        assert obs.to_dict()['label'] == "null"

    def test_bump_is_unrestricted(self, desitter):
        obs = make_observable(desitter, _bump(desitter, polarization=np.eye(4)))
        assert obs.divergence_class is DivergenceClass.UNRESTRICTED
        with pytest.raises(ContractError):
            observable_eval(desitter, obs, _gamma(desitter), require_gauge_invariance=True)

    def test_antisymmetric_tensor(self, desitter):
        polarization = np.zeros((4, 4))
        polarization[0, 1], polarization[1, 0] = 1.0, -1.0
        f = _bump(desitter, polarization=polarization)
        assert isinstance(f, TensorField)
        obs = make_observable(desitter, f)
        assert obs.divergence_class is DivergenceClass.DIVERGENCE_FREE_SYMMETRIC_PART
        assert observable_eval(desitter, obs, _gamma(desitter)) == 0.0

    def test_gauge_invariance(self, chart):
        def error(bg):
            obs = make_observable(bg, bianchi_test_tensor(bg, _wave(bg), _window(bg, 3, 5)))
            gamma = _gamma(bg)
            shifted = gamma + lie_derivative_metric(bg, _vector(bg))
            return abs(observable_eval(bg, obs, shifted, require_gauge_invariance=True)
                       - observable_eval(bg, obs, gamma))

        assert _order(error, chart) >= NESTED_ORDER

    def test_null_observable_vanishes_on_solutions(self, chart):
        def error(bg):
            obs = make_observable(bg, null_test_tensor(bg, _bump(bg)))
            return abs(observable_eval(bg, obs, _wave(bg)))

        assert _order(error, chart) >= NESTED_ORDER


class TestPauliJordanPairing:
    """E(f1^s, f2_bar^s) and its scalar expansion."""

    def test_self_pairing_vanishes(self, desitter):
        f = _bump(desitter)
        assert pauli_jordan_pairing(desitter, f, f) == 0.0

    def test_antisymmetric(self, desitter):
        f1, f2 = _bump(desitter), _bump(desitter, centre_offset=0.2, x_centre=2.0)
        assert pauli_jordan_pairing(desitter, f1, f2) == -pauli_jordan_pairing(desitter, f2, f1)

    def test_spacelike_separation(self):
        bg = make_background("minkowski", nt=17, nx=64, t0=0.0, t1=0.5)

        def source(x_centre):
            return synthesize_field(bg, BumpRecipe(center=(0.25, x_centre), radii=(0.07, 0.3),
                                                   polarization=POLARIZATION))

        value = pauli_jordan_pairing(bg, source(np.pi - 1.8), source(np.pi + 1.8))
        assert abs(value) <= 1e-10

    def test_scalar_expansion(self, chart):
        def error(bg):
            f1, f2 = _bump(bg), _bump(bg, centre_offset=0.3, x_centre=2.2)
            sides = pauli_jordan_expansion(bg, f1, f2)
            return abs(sides['lhs'] - sides['rhs'])

        assert _order(error, chart) >= NESTED_ORDER

    def test_expansion_terms(self, desitter):
        f1, f2 = _bump(desitter), _bump(desitter, centre_offset=0.3, x_centre=2.2)
        sides = pauli_jordan_expansion(desitter, f1, f2)
        assert sides['rhs'] == sides['tensor_term'] + sides['scalar_term']
        assert abs(sides['lhs']) > 0.0


class TestPoissonBracket:
    """-2E pairing against 4 omega of the generated solutions."""

    def _observables(self, bg):
        f = bianchi_test_tensor(bg, _wave(bg), _window(bg, 2, 4))
        g = bianchi_test_tensor(bg, _wave(bg, phase=0.9, polarization=Polarization.CROSS)
                                + _wave(bg, phase=0.4), _window(bg, 4, 6))
        return make_observable(bg, f, "f"), make_observable(bg, g, "g")

    def test_self_bracket_vanishes(self, desitter):
        obs, _ = self._observables(desitter)
        result = poisson_bracket(desitter, obs, obs)
        assert result.value == 0.0
        assert result.symplectic_value == 0.0

    def test_matches_symplectic_product(self, chart):
        def error(bg):
            obs_f, obs_g = self._observables(bg)
            return poisson_bracket(bg, obs_f, obs_g).discrepancy

        assert _order(error, chart) >= NESTED_ORDER

    def test_field_generation(self, chart):
        def error(bg):
            obs_f, obs_g = self._observables(bg)
            return field_generation_identity(bg, obs_f, obs_g)['residual']

        assert _order(error, chart) >= NESTED_ORDER

    def test_unrestricted_rejected(self, desitter):
        obs, _ = self._observables(desitter)
        unrestricted = make_observable(desitter, _bump(desitter, polarization=np.eye(4)))
        with pytest.raises(ContractError):
            poisson_bracket(desitter, obs, unrestricted)

    def test_to_dict(self, desitter):
        obs_f, obs_g = self._observables(desitter)
        data = poisson_bracket(desitter, obs_f, obs_g, sigma=30).to_dict()
        assert data['sigma'] == 30
        assert len(data['value']) == 2


class TestSeparation:
    """Distinguishing probes for non-gauge-equivalent solutions."""

    @pytest.mark.parametrize("seed", range(1, 21))
    def test_seeded_pairs_separated_above_floor(self, desitter, seed):
        gamma1, gamma2 = plane_wave_pair(desitter, seed)
        observables = separation_observables(desitter)
        result = separating_probe(desitter, gamma1, gamma2, observables)

        scale = max(abs(observable_eval(desitter, observable, gamma))
                    for observable in observables for gamma in (gamma1, gamma2))
        assert result.floor == pytest.approx(10.0 * truncation_floor(desitter) * scale)
        assert result.gap > result.floor
        assert result.separates
        assert len(result.gaps) == len(observables)

    def test_identical_fields_not_separated(self, desitter):
        probe = make_observable(desitter, null_test_tensor(desitter, _bump(desitter)))
        wave = _wave(desitter)
        assert not separating_probe(desitter, wave, wave, [probe]).separates

    def test_needs_probes(self, desitter):
        with pytest.raises(ValueError):
            separating_probe(desitter, _wave(desitter), _wave(desitter), [])
