"""Figure rendering for min-max-min benchmark CSVs."""

from .figures import (
    REQUIRED_COLUMNS,
    SchemaError,
    build_metric_figures,
    build_solved_over_time_figures,
    load_results,
    plot_metrics,
    plot_solved_over_time,
    solved_step_series,
)

__version__ = "0.1.0"
