"""
Command-line surface: verification suites, field and report export, and the
``lingrav`` entry point.
"""

from .export import (
    FORMATS, plain, dumps, export, export_field, import_field,
    export_cauchy_data, import_cauchy_data, export_slice_data, import_slice_data,
    export_report,
)
from .suites import (
    CheckKind, CheckSpec, CheckRecord, SuiteReport, SUITES,
    run_check, selected_checks, suite_background, run_suite,
)
from .main import build_parser, resolve_config, main

__all__ = [
    "FORMATS", "plain", "dumps", "export", "export_field", "import_field",
    "export_cauchy_data", "import_cauchy_data", "export_slice_data", "import_slice_data",
    "export_report",
    "CheckKind", "CheckSpec", "CheckRecord", "SuiteReport", "SUITES",
    "run_check", "selected_checks", "suite_background", "run_suite",
    "build_parser", "resolve_config", "main",
]
