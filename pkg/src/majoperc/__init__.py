"""Majority bootstrap percolation on G(n, p): sampling, dynamics, closed sets,
threshold estimation and binomial bound audits."""

from .closedset import enumerate_closed_sets, is_closed
from .config import ConfigError, ExperimentConfig, parse_config
from .engine import PercolationResult, percolates, run_bootstrap, run_bootstrap_reference
from .graph import Graph, VertexSet, load_edge_list, dump_edge_list, sample_gnp
from .harness import run_experiment
from .thresholds import (ThresholdCurve, ThresholdParams, critical_m, critical_q,
                         estimate_percolation_prob, locate_transition, scan_threshold)

__version__ = "0.1.0"
