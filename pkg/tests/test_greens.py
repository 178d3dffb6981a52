"""
Tests for the leapfrog Green's operators, the dense oracle and the causal
support diagnostics.
"""

import numpy as np
import pytest
from scipy import integrate

from src.fields import (
    BumpRecipe, FieldRank, RandomRecipe, ScalarField, SymField2, TensorField, VecField,
    divergence, lie_derivative_metric, synthesize_field, trace_reverse,
)
from src.greens import (
    GreensKind, GreensRequest, LevelOperator, WaveOperator, causal_cone, greens_apply,
    greens_oracle, pauli_jordan, sourced_solution, support_extent,
)
from src.linop import lichnerowicz, linearized_einstein
from src.utils.common import bump, interior_max, observed_order
from src.utils.errors import ResourceError, SupportError
from tests.conftest import make_background

NESTED_ORDER = 1.5

POLARIZATION = np.array([
    [0.4, 0.1, 0.0, 0.2],
    [0.1, 1.0, -0.3, 0.0],
    [0.0, -0.3, 0.5, 0.0],
    [0.2, 0.0, 0.0, -0.6],
])
VECTOR_POLARIZATION = [0.3, 1.0, -0.5, 0.2]


def _bump(bg, rank=FieldRank.TENSOR, polarization=None, radii=(0.4, 1.2)):
    grid = bg.grid
    if polarization is None:
        polarization = VECTOR_POLARIZATION if rank is FieldRank.VECTOR else POLARIZATION
    centre = (0.5 * (grid.t0 + grid.t1), np.pi)
    return synthesize_field(bg, BumpRecipe(center=centre, radii=radii, polarization=polarization,
                                           rank=rank))


def _apply(bg, source, kind=GreensKind.RETARDED):
    operator = {
        SymField2: WaveOperator.TENSOR_P,
        VecField: WaveOperator.VECTOR_BOX_LAMBDA,
        ScalarField: WaveOperator.SCALAR_BOX_2LAMBDA,
    }[type(source)]
    return greens_apply(bg, GreensRequest(operator, kind, source))


def _converges(error, bg, order=NESTED_ORDER):
    coarse, fine = error(bg), error(bg.refined())
    assert fine <= 1e-12 or observed_order(coarse, fine) >= order


@pytest.fixture
def oracle_grid(request):
    kind = getattr(request, 'param', "minkowski")
    if kind == "minkowski":
        return make_background(kind, nt=8, nx=16, t0=0.0, t1=1.2)
    return make_background(kind, nt=8, nx=16, t0=-1.6, t1=-0.4)


@pytest.fixture
def wide_minkowski():
    """Short time window over many cells, so light cones stay off most of the torus."""
    return make_background("minkowski", nt=17, nx=64, t0=0.0, t1=0.5)


class TestGreensRequest:

    def test_source_rank_must_match(self, minkowski_small):
        scalar = ScalarField(minkowski_small.grid, np.zeros(minkowski_small.grid.shape))
        with pytest.raises(ValueError, match="expects a SymField2"):
            GreensRequest(WaveOperator.TENSOR_P, GreensKind.RETARDED, scalar)

    def test_with_kind(self, minkowski_small):
        source = SymField2.zeros(minkowski_small.grid)
        request = GreensRequest(WaveOperator.TENSOR_P, GreensKind.RETARDED, source)
        advanced = request.with_kind(GreensKind.ADVANCED)
        assert advanced.kind is GreensKind.ADVANCED
        assert advanced.source is source
        assert request.variance == "dd"

    def test_boundary_support_rejected(self, minkowski_small):
        source = synthesize_field(minkowski_small, RandomRecipe(seed=3))
        with pytest.raises(SupportError):
            _apply(minkowski_small, source)


class TestGreensApply:
    """Defining relation and closed forms."""

    @pytest.mark.parametrize("kind", list(GreensKind))
    def test_zero_source(self, desitter_small, kind):
        result = _apply(desitter_small, SymField2.zeros(desitter_small.grid), kind)
        assert result.norm() == 0.0

    @pytest.mark.parametrize("kind", [GreensKind.RETARDED, GreensKind.ADVANCED])
    def test_discrete_equation_holds(self, desitter, kind):
        source = _bump(desitter)
        result = _apply(desitter, source, kind)
        applied = LevelOperator(desitter, WaveOperator.TENSOR_P).apply(result.full())
        residual = applied - source.full()[..., 1:-1, :]
        assert np.max(np.abs(residual)) <= 1e-10 * max(1.0, result.norm())

    def test_continuum_operator_inverts_retarded(self, chart):
        def error(bg):
            source = _bump(bg)
            return interior_max((lichnerowicz(bg, _apply(bg, source)) - source).components)

        _converges(error, chart)

    def test_vector_operator(self, desitter):
        source = _bump(desitter, FieldRank.VECTOR)
        result = _apply(desitter, source, GreensKind.ADVANCED)
        assert result.variance == "u"
        applied = LevelOperator(desitter, WaveOperator.VECTOR_BOX_LAMBDA, "u").apply(result.data)
        assert np.max(np.abs(applied - source.data[:, 1:-1])) <= 1e-10 * max(1.0, result.norm())

    def test_scalar_duhamel(self, minkowski):
        """box u = h(t) cos(x) has u = c(t) cos(x) with c'' + c = -h."""
        centre, radius = 0.8, 0.4

        def h(s):
            return float(bump(np.array([(s - centre) / radius]))[0])

        def c(t):
            if t <= centre - radius:
                return 0.0
            upper = min(t, centre + radius)
            value, _ = integrate.quad(lambda s: np.sin(t - s) * h(s), centre - radius, upper,
                                      epsabs=1e-13, epsrel=1e-12)
            return -value

        def error(bg):
            grid = bg.grid
            profile = np.array([h(t) for t in grid.t])
            source = ScalarField(grid, profile[:, None] * np.cos(grid.x)[None, :])
            expected = np.array([c(t) for t in grid.t])[:, None] * np.cos(grid.x)[None, :]
            return float(np.max(np.abs(_apply(bg, source).data - expected)))

        assert observed_order(error(minkowski), error(minkowski.refined())) >= 1.8

    def test_pauli_jordan_is_advanced_minus_retarded(self, desitter):
        source = _bump(desitter)
        expected = _apply(desitter, source, GreensKind.ADVANCED) - _apply(desitter, source)
        assert (pauli_jordan(desitter, source) - expected).norm() <= 1e-14 * max(1.0, expected.norm())

    def test_pauli_jordan_rejects_general_tensor(self, minkowski_small):
        tensor = TensorField(minkowski_small.grid, np.zeros((4, 4) + minkowski_small.grid.shape), "dd")
        with pytest.raises(TypeError):
            pauli_jordan(minkowski_small, tensor)


class TestOracle:
    """Dense solve of the same discrete system."""

    @pytest.mark.parametrize("oracle_grid", ["minkowski", "desitter"], indirect=True)
    @pytest.mark.parametrize("kind", list(GreensKind))
    def test_matches_sweep(self, oracle_grid, kind):
        source = _bump(oracle_grid, radii=(0.2, 1.0))
        request = GreensRequest(WaveOperator.TENSOR_P, kind, source)
        swept = greens_apply(oracle_grid, request)
        dense = greens_oracle(oracle_grid, request)
        assert (swept - dense).norm() <= 1e-8 * max(1.0, swept.norm())

    def test_scalar_matches_sweep(self, oracle_grid):
        source = _bump(oracle_grid, FieldRank.SCALAR, radii=(0.2, 1.0))
        request = GreensRequest(WaveOperator.SCALAR_BOX_2LAMBDA, GreensKind.RETARDED, source)
        gap = greens_apply(oracle_grid, request).data - greens_oracle(oracle_grid, request).data
        assert np.max(np.abs(gap)) <= 1e-8

    def test_zero_source(self, oracle_grid):
        request = GreensRequest(WaveOperator.TENSOR_P, GreensKind.ADVANCED,
                                SymField2.zeros(oracle_grid.grid))
        assert greens_oracle(oracle_grid, request).norm() == 0.0

    def test_size_limit(self, minkowski):
        request = GreensRequest(WaveOperator.TENSOR_P, GreensKind.RETARDED, _bump(minkowski))
        with pytest.raises(ResourceError) as info:
            greens_oracle(minkowski, request)
        assert info.value.context['unknowns'] > info.value.context['limit']


class TestSupport:
    """Retarded fields vanish below the source, advanced fields above it."""

    def _source(self, bg):
        return synthesize_field(bg, BumpRecipe(center=(0.25, np.pi), radii=(0.07, 0.3),
                                               polarization=POLARIZATION))

    def test_retarded_support(self, wide_minkowski):
        source = self._source(wide_minkowski)
        extent = support_extent(_apply(wide_minkowski, source), bg=wide_minkowski, source=source)
        assert extent.leaks['below_source'] == 0.0
        assert extent.leaks['outside_stencil_cones'] == 0.0
        first_row = int(np.flatnonzero(np.abs(source.components).max(axis=(0, 2)) > 0.0)[0])
        assert extent.window.t_lo > first_row

    def test_advanced_support(self, wide_minkowski):
        source = self._source(wide_minkowski)
        result = _apply(wide_minkowski, source, GreensKind.ADVANCED)
        extent = support_extent(result, bg=wide_minkowski, source=source)
        assert extent.leaks['above_source'] == 0.0
        assert extent.leaks['outside_stencil_cones'] == 0.0

    def test_pauli_jordan_vanishes_at_spacelike_separation(self, wide_minkowski):
        source = self._source(wide_minkowski)
        extent = support_extent(pauli_jordan(wide_minkowski, source), bg=wide_minkowski, source=source)
        assert extent.leaks['outside_stencil_cones'] == 0.0
        assert extent.stencil_future_cone is not None
        assert not (extent.stencil_future_cone | extent.stencil_past_cone).all()

    def test_window_only_without_background(self, wide_minkowski):
        extent = support_extent(self._source(wide_minkowski))
        assert extent.window is not None
        assert extent.leaks == {}
        assert extent.to_dict()['threshold'] == 1e-12

    def test_empty_field(self, wide_minkowski):
        extent = support_extent(SymField2.zeros(wide_minkowski.grid))
        assert extent.window is None
        assert extent.to_dict()['window'] is None

    def test_causal_cone_grows_one_cell_per_level(self, wide_minkowski):
        mask = np.zeros(wide_minkowski.grid.shape, dtype=bool)
        mask[8, 32] = True
        cone = causal_cone(wide_minkowski, mask, future=True, speed_cells=1.0)
        assert not cone[:7].any()
        assert cone[8].sum() == 3
        assert cone[12].sum() == 11
        past = causal_cone(wide_minkowski, mask, future=False, speed_cells=1.0)
        assert not past[10:].any()
        assert past[4].sum() == 11


class TestIntertwining:
    """Green's operators commute with trace reversal, divergence and Lie derivatives."""

    def test_trace_reversal(self, desitter):
        def error(bg):
            f = _bump(bg)
            left, _ = trace_reverse(bg, pauli_jordan(bg, f))
            right = pauli_jordan(bg, trace_reverse(bg, f)[0])
            return interior_max((left - right).components)

        _converges(error, desitter)

    def test_divergence(self, chart):
        def error(bg):
            f = _bump(bg)
            left = divergence(bg, _apply(bg, f)).data
            div_f = VecField(bg.grid, divergence(bg, f).data, "d")
            right = _apply(bg, div_f).data
            return interior_max(left - right)

        _converges(error, chart)

    def test_lie_derivative(self, chart):
        def error(bg):
            v = _bump(bg, FieldRank.VECTOR)
            left = lie_derivative_metric(bg, pauli_jordan(bg, v))
            right = pauli_jordan(bg, lie_derivative_metric(bg, v))
            return interior_max((left - right).components)

        _converges(error, chart)

    def test_de_donder_criterion(self, chart):
        """Sources with divergence-free trace reversal give de Donder fields."""
        def error(bg):
            g = 2.0 * linearized_einstein(bg, _bump(bg))
            f, _ = trace_reverse(bg, g)
            solution, _ = trace_reverse(bg, pauli_jordan(bg, f))
            return interior_max(divergence(bg, solution).data)

        _converges(error, chart)

    def test_pauli_jordan_solves_homogeneous_equation(self, chart):
        def error(bg):
            return interior_max(lichnerowicz(bg, pauli_jordan(bg, _bump(bg))).components)

        _converges(error, chart)


class TestSourcedSolution:
    """gamma = -2 E+ f_bar solves L(gamma) = f for divergence-free f."""

    def test_vanishes_below_source(self, desitter):
        f = linearized_einstein(desitter, _bump(desitter))
        extent = support_extent(sourced_solution(desitter, f), bg=desitter, source=f)
        assert extent.leaks['below_source'] == 0.0

    def test_solves_field_equation(self, chart):
        def error(bg):
            f = linearized_einstein(bg, _bump(bg))
            return interior_max((linearized_einstein(bg, sourced_solution(bg, f)) - f).components)

        _converges(error, chart)
