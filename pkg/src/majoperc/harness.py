"""Experiment execution and CSV output.

An experiment CSV starts with ``# key=value`` lines echoing the config (and
any grid derived from ``lambda``, ``theta`` or ``m_fraction``), followed by

    m,trials,successes,p_hat,ci_low,ci_high

(``q`` replaces ``m`` in Bernoulli mode).  Floats carry 17 significant
digits, so every value round-trips exactly, and the bytes depend only on the
config: thread count and scheduling never enter.
"""

from __future__ import annotations

import io
import os
from pathlib import Path

from .config import ExperimentConfig
from .thresholds import ThresholdCurve, scan_threshold

__all__ = ["THREADS_ENV", "resolve_threads", "curve_csv", "write_text", "run_experiment"]

THREADS_ENV = "MAJOPERC_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """Explicit ``threads`` wins, then ``MAJOPERC_THREADS``, then 1."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        if not raw:
            return 1
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def _g(x: float) -> str:
    return format(float(x), ".17g")


def curve_csv(curve: ThresholdCurve, config: ExperimentConfig | None = None) -> str:
    buf = io.StringIO()
    if config is not None:
        for line in config.header_lines():
            buf.write(f"# {line}\n")
    xname = "q" if curve.mode == "bernoulli_q" else "m"
    buf.write(f"{xname},trials,successes,p_hat,ci_low,ci_high\n")
    for r in curve.grid:
        x = _g(r.m) if curve.mode == "bernoulli_q" else str(int(r.m))
        buf.write(f"{x},{r.trials},{r.successes},{_g(r.p_hat)},{_g(r.ci_low)},{_g(r.ci_high)}\n")
    return buf.getvalue()


def write_text(path, text: str) -> None:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def run_experiment(config: ExperimentConfig, threads: int | None = None) -> ThresholdCurve:
    """Run every grid point of ``config`` and write the CSV to
    ``config.output_path`` when set.  A single-point config yields a
    one-row curve."""
    curve = scan_threshold(config, threads=resolve_threads(threads))
    if config.output_path:
        write_text(config.output_path, curve_csv(curve, config))
    return curve
