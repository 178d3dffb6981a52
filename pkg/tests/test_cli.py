"""
Tests for serialization, configuration resolution and the command-line entry point.
"""

import json

import numpy as np
import pytest

from src.adm import ADMPerturbation, slice_background
from src.cauchy import CauchyData
from src.cli import (
    SUITES, build_parser, dumps, export, export_report, import_cauchy_data, import_field,
    import_slice_data, main, plain, resolve_config, run_check, selected_checks,
)
from src.cli.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE
from src.fields import COMPONENT_LABELS, FieldRank, RandomRecipe, SymField2, synthesize_field
from src.utils.errors import UsageError

SMALL = ['--nx', '16', '--nt', '33']


def _header(path):
    with open(path) as handle:
        first, second = handle.readline(), handle.readline()
    assert first.startswith("# ")
    return json.loads(first[2:]), second.strip().split(",")


class TestPlain:
    """JSON-safe conversion."""

    def test_complex_and_numpy_values(self):
        data = plain({'z': 1.5 - 2.0j, 'n': np.int64(3), 'a': np.array([1.0, 2.0]), 'x': float('nan')})
        assert data == {'z': [1.5, -2.0], 'n': 3, 'a': [1.0, 2.0], 'x': None}

    def test_dumps_is_deterministic(self):
        payload = {'b': 0.1, 'a': [1, 2]}
        assert dumps(payload) == dumps(dict(payload))
        assert dumps(payload).endswith("\n")


class TestFieldExport:
    """Field dumps in JSON and CSV."""

    def test_csv_header_and_columns(self, minkowski_small, tmp_path):
        path = tmp_path / "gamma.csv"
        export(synthesize_field(minkowski_small, RandomRecipe(seed=1)), path, "csv")
        meta, columns = _header(path)
        assert meta['type'] == "SymField2"
        assert meta['components'] == list(COMPONENT_LABELS)
        assert meta['grid'] == minkowski_small.grid.to_dict()
        assert columns == ['j', 'i'] + list(COMPONENT_LABELS)

    def test_csv_round_trip_is_exact(self, desitter_small, tmp_path):
        field = synthesize_field(desitter_small, RandomRecipe(seed=2))
        path = tmp_path / "gamma.csv"
        export(field, path, "csv")
        loaded = import_field(path, "csv")
        assert isinstance(loaded, SymField2)
        assert np.array_equal(loaded.components, field.components)

    def test_complex_json_round_trip(self, desitter_small, tmp_path):
        field = synthesize_field(desitter_small, RandomRecipe(seed=3)) * (1.0 + 2.0j)
        path = tmp_path / "gamma.json"
        export(field, path, "json")
        assert np.array_equal(import_field(path).components, field.components)

    def test_vector_field_csv(self, minkowski_small, tmp_path):
        v = synthesize_field(minkowski_small, RandomRecipe(seed=4, rank=FieldRank.VECTOR))
        path = tmp_path / "v.csv"
        export(v, path, "csv")
        meta, columns = _header(path)
        assert meta['variance'] == v.variance
        assert columns == ['j', 'i', '0', '1', '2', '3']
        assert np.array_equal(import_field(path, "csv").data, v.data)

    def test_unknown_format(self, minkowski_small, tmp_path):
        with pytest.raises(UsageError):
            export(synthesize_field(minkowski_small, RandomRecipe(seed=1)), tmp_path / "f.txt", "xml")

    def test_csv_without_header(self, tmp_path):
        path = tmp_path / "bare.csv"
        path.write_text("j,i,00\n0,0,1.0\n")
        with pytest.raises(ValueError, match="metadata header"):
            import_field(path, "csv")


class TestDataExport:
    """Cauchy data, slice data and reports."""

    def test_cauchy_data_carries_sigma(self, tmp_path):
        rng = np.random.default_rng(5)
        data = CauchyData(7, rng.normal(size=(10, 8)), rng.normal(size=(10, 8)))
        path = tmp_path / "cauchy.csv"
        export(data, path, "csv")
        meta, columns = _header(path)
        assert meta['sigma'] == 7
        assert columns[0] == 'i' and columns[1] == 'value_00'
        loaded = import_cauchy_data(path, "csv")
        assert loaded.sigma == 7
        assert np.array_equal(loaded.velocity, data.velocity)

    def test_slice_data_density_flags(self, desitter_small, tmp_path):
        state = slice_background(desitter_small, 8)
        path = tmp_path / "state.json"
        export(state, path)
        with open(path) as handle:
            assert json.load(handle)['density'] == {'h': False, 'varpi': True}
        loaded = import_slice_data(path)
        assert np.array_equal(loaded.varpi, state.varpi)
        assert loaded.cosmological_constant == state.cosmological_constant

    def test_slice_perturbation_csv(self, tmp_path):
        rng = np.random.default_rng(6)
        gamma3 = rng.normal(size=(3, 3, 8))
        pert = ADMPerturbation(gamma3 + np.swapaxes(gamma3, 0, 1), np.zeros((3, 3, 8)))
        path = tmp_path / "pert.csv"
        export(pert, path, "csv")
        meta, _ = _header(path)
        assert meta['density'] == {'gamma3': False, 'p': True}
        assert np.array_equal(import_slice_data(path, "csv").gamma3, pert.gamma3)

    def test_mapping_report_csv(self, tmp_path):
        path = tmp_path / "report.csv"
        export_report({'omega': {'value': 0.25, 'slices': [3, 5]}}, path, "csv")
        meta, columns = _header(path)
        assert meta == {'type': 'mapping'}
        assert columns == ['key', 'value']


class TestResolveConfig:
    """Command-line flags over the configuration file."""

    def test_flags_override(self):
        args = build_parser().parse_args(['suite', '--background', 'desitter', '--nx', '16',
                                          '--nt', '33', '--seed', '9', '--suites', 'adm,greens'])
        config = resolve_config(args)
        assert config.background.kind == "desitter"
        assert (config.grid.nx, config.grid.nt) == (16, 33)
        assert config.suite.seed == 9
        assert config.suite.suites == ['adm', 'greens']

    def test_empty_suite_list(self):
        args = build_parser().parse_args(['suite', '--suites', ','])
        with pytest.raises(UsageError):
            resolve_config(args)

    def test_invalid_grid(self):
        args = build_parser().parse_args(['suite', '--nt', '3'])
        with pytest.raises(UsageError):
            resolve_config(args)

    def test_chart_filter(self):
        desitter_checks = {spec.name for spec in selected_checks(['adm'], 'desitter')}
        assert 'spacetime_pure_gauge' not in desitter_checks
        assert len(selected_checks(['adm'], 'minkowski')) == len(SUITES['adm'])

    @pytest.mark.parametrize("suite, names", [
        ("identities", {"trace_reversal_commutes", "de_donder_decomposition", "lichnerowicz_divergence",
                        "lichnerowicz_trace", "pure_gauge_intertwining", "dee_divergence"}),
        ("gauges", {"transverse_traceless", "tt_slice_constraints", "tt_obstruction_drift",
                    "existence_data", "existence_field_equation", "de_donder_propagation",
                    "uniqueness", "deterministic_solve"}),
        ("greens", {"oracle_agreement", "trace_reversal_intertwining", "divergence_intertwining",
                    "lie_derivative_intertwining", "de_donder_criterion"}),
        ("symplectic", {"radical_containment", "bracket_cross_path", "field_generation",
                        "spacelike_pairing", "separation"}),
        ("adm", {"kernel_orthogonality"}),
        ("algebra", {"hermiticity", "generator_linearity", "commutator_symplectic", "time_slice_null"}),
    ])
    def test_registry_covers_acceptance_checks(self, suite, names):
        registered = [spec.name for spec in SUITES[suite]]
        assert names <= set(registered)
        assert len(registered) == len(set(registered))

    def test_gauge_chart_filter(self):
        minkowski = {spec.name for spec in selected_checks(["gauges"], "minkowski")}
        desitter = {spec.name for spec in selected_checks(["gauges"], "desitter")}
        assert {"transverse_traceless", "tt_slice_constraints"} <= desitter - minkowski
        assert "tt_obstruction_drift" in minkowski - desitter
        assert "uniqueness" in minkowski & desitter


class TestRunCheck:
    """Single checks evaluated at a grid and its refinement."""

    @staticmethod
    def _spec(suite, name):
        return next(spec for spec in SUITES[suite] if spec.name == name)

    def test_deterministic_solve_passes(self, minkowski_small):
        record = run_check(self._spec("gauges", "deterministic_solve"), minkowski_small,
                           minkowski_small.refined(), seed=3)
        assert record.error is None
        assert record.coarse == record.fine == 0.0
        assert record.passed

    @pytest.mark.parametrize("fixture", ["minkowski_small", "desitter_small"])
    def test_oracle_agreement_on_side_grid(self, request, fixture):
        bg = request.getfixturevalue(fixture)
        record = run_check(self._spec("greens", "oracle_agreement"), bg, bg.refined(), seed=5)
        assert record.error is None
        assert record.coarse == record.fine
        assert record.passed

    def test_hermiticity_is_exact(self, desitter):
        spec = self._spec("algebra", "hermiticity")
        assert spec.evaluate(desitter, 2) == 0.0


class TestMain:
    """Exit codes and output of the entry point."""

    def test_empty_suites_is_usage_error(self):
        assert main(['suite', '--suites', ''] + SMALL) == EXIT_USAGE

    def test_unknown_suite_is_usage_error(self):
        assert main(['--suites', 'gravity'] + SMALL) == EXIT_USAGE

    def test_bad_thread_override(self, monkeypatch):
        monkeypatch.setenv("LINGRAV_THREADS", "many")
        assert main(['suite', '--suites', 'adm'] + SMALL) == EXIT_USAGE

    def test_adm_suite_report(self, monkeypatch, tmp_path):
        monkeypatch.setenv("LINGRAV_THREADS", "2")
        path = tmp_path / "report.json"
        code = main(['--suites', 'adm', '--out', str(path)] + SMALL)
        with open(path) as handle:
            report = json.load(handle)
        assert code == (EXIT_OK if report['status'] == 'pass' else EXIT_FAILED)
        assert [check['name'] for check in report['checks']] == [spec.name for spec in SUITES['adm']]
        assert report['summary']['checks'] == len(SUITES['adm'])
        assert 'runtime' not in report['checks'][0]
        assert set(report['timing']['runtimes']) == {f"adm.{spec.name}" for spec in SUITES['adm']}

    def test_suite_report_csv(self, tmp_path):
        path = tmp_path / "report.csv"
        main(['--suites', 'adm', '--out', str(path), '--format', 'csv'] + SMALL)
        meta, columns = _header(path)
        assert meta['config']['suites'] == ['adm']
        assert {'suite', 'name', 'status', 'order'} <= set(columns)

    def test_greens_field_output(self, tmp_path):
        path = tmp_path / "retarded.csv"
        code = main(['greens', '--kind', 'retarded', '--out', str(path), '--format', 'csv'] + SMALL)
        assert code == EXIT_OK
        field = import_field(path, "csv")
        assert isinstance(field, SymField2)
        assert field.grid.shape == (33, 16)
        assert field.norm() > 0.0

    def test_bracket_to_stdout(self, capsys):
        assert main(['bracket', '--background', 'desitter'] + SMALL) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert {'value', 'symplectic_value', 'discrepancy', 'sigma'} <= set(payload)
