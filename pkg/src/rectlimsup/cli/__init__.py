"""Experiment runner: INI config in, CSV tables and a JSON summary out."""
from .config import ExperimentConfig, config_from_text, load_config
from .report import emit_reports
from .runner import ReportBundle, Table, run_experiment
