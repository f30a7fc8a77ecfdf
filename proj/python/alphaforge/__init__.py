"""Formulaic alpha parsing, evaluation, scoring and backtesting."""

from ._alphaforge import (
    BacktestError,
    CatalogError,
    EvalError,
    Panel,
    ParseError,
    StageError,
    analyze,
    backtest,
    builtin_catalog,
    compute_metrics,
    evaluate,
    forward_returns,
    information_coefficient,
    load_catalog,
    max_drawdown,
    normalize,
    run_pipeline,
)

__all__ = [
    "BacktestError",
    "CatalogError",
    "EvalError",
    "Panel",
    "ParseError",
    "StageError",
    "analyze",
    "backtest",
    "builtin_catalog",
    "compute_metrics",
    "evaluate",
    "forward_returns",
    "information_coefficient",
    "load_catalog",
    "max_drawdown",
    "normalize",
    "run_pipeline",
]
