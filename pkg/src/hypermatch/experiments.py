"""Seeded Monte-Carlo sweeps of the hyper-matching number.

Two sweep modes are supported:

* ``unity``: n varies over a range with ``M = floor(base**n)`` edges;
* ``gap``: n is fixed and M walks an arithmetic range, always ending at
  the complete hypergraph ``M = 2**n - 1``.

Every trial draws its own seed from ``(master_seed, n, M, trial)``, so the
records are a pure function of the configuration no matter how many
worker processes run them.
"""

from __future__ import annotations

import csv
import io
import math
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np
from scipy import stats

from .errors import BudgetExceeded, ParameterError, StatisticsError
from .hypergraph import derive_seed, sample_hypergraph
from .solver import DEFAULT_NODE_BUDGET, max_matching_exact

TRIALS_HEADER = ["n", "M", "trial", "matching_number", "seed", "status"]
SUMMARY_HEADER = ["n", "M", "trials", "mean", "ci_lo", "ci_hi"]

UNITY = "unity"
GAP = "gap"


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    trials: int = 30
    master_seed: int = 0
    # unity sweep
    n_min: int = 5
    n_max: int = 55
    base: float = 1.154
    # gap sweep
    n: int = 13
    m_start: int = 1
    m_stop: Optional[int] = None
    step: int = 10
    node_budget: int = DEFAULT_NODE_BUDGET
    trials_out: Optional[str] = None
    summary_out: Optional[str] = None
    figure_out: Optional[str] = None

    def __post_init__(self):
        if self.mode not in (UNITY, GAP):
            raise ParameterError(f"mode must be '{UNITY}' or '{GAP}', got {self.mode!r}")
        if self.trials < 2:
            raise ParameterError(f"trials must be >= 2, got {self.trials}")
        if not self.base > 1:
            raise ParameterError(f"base must be > 1, got {self.base}")
        if self.step < 1:
            raise ParameterError(f"step must be >= 1, got {self.step}")
        if self.n_min > self.n_max:
            raise ParameterError(f"empty n range [{self.n_min}, {self.n_max}]")


@dataclass(frozen=True)
class TrialRecord:
    n: int
    M: int
    trial: int
    matching_number: int
    seed: int
    status: str = "ok"


@dataclass(frozen=True)
class SummaryRow:
    n: int
    M: int
    trials: int
    mean: float
    ci_lo: float
    ci_hi: float


def unity_edge_count(n: int, base: float) -> int:
    return math.floor(base**n)


def sweep_points(config: SweepConfig) -> list[tuple[int, int]]:
    """The (n, M) grid a sweep visits, in output order."""
    if config.mode == UNITY:
        points = [(n, unity_edge_count(n, config.base)) for n in range(config.n_min, config.n_max + 1)]
    else:
        n = config.n
        top = (1 << n) - 1
        stop = top if config.m_stop is None else config.m_stop
        ms = list(range(config.m_start, stop + 1, config.step))
        if not ms or ms[-1] != top:
            ms.append(top)
        points = [(n, M) for M in ms]
    for n, M in points:
        if not 1 <= M <= (1 << n) - 1:
            raise ParameterError(f"M = {M} outside [1, 2^n - 1] for n = {n}")
    return points


def run_trial(n: int, M: int, trial: int, master_seed: int,
              node_budget: int = DEFAULT_NODE_BUDGET) -> TrialRecord:
    seed = derive_seed(master_seed, n, M, trial)
    h = sample_hypergraph(n, M, seed)
    try:
        matching, _ = max_matching_exact(h, node_budget=node_budget)
    except BudgetExceeded as exc:
        return TrialRecord(n, M, trial, exc.matching.size, seed, "budget")
    return TrialRecord(n, M, trial, matching.size, seed)


def _run_task(task):
    return run_trial(*task)


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[TrialRecord]:
    """Solve every trial of the sweep; records are sorted by (n, M, trial)."""
    tasks = [
        (n, M, t, config.master_seed, config.node_budget)
        for n, M in sweep_points(config)
        for t in range(config.trials)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        records = [_run_task(task) for task in tasks]
    records.sort(key=lambda r: (r.n, r.M, r.trial))
    return records


def run_unity_sweep(config: SweepConfig, jobs: int = 1) -> list[TrialRecord]:
    if config.mode != UNITY:
        raise ParameterError("run_unity_sweep needs a unity-mode config")
    return run_sweep(config, jobs)


def run_gap_sweep(config: SweepConfig, jobs: int = 1) -> list[TrialRecord]:
    if config.mode != GAP:
        raise ParameterError("run_gap_sweep needs a gap-mode config")
    return run_sweep(config, jobs)


def mean_confidence_interval(values: Sequence[float], confidence: float = 0.95):
    """Sample mean with a two-sided Student-t interval (df = len - 1)."""
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise StatisticsError(f"need at least 2 values for an interval, got {arr.size}")
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1))
    if sd == 0.0:
        return mean, mean, mean
    half = stats.t.ppf(0.5 + confidence / 2, arr.size - 1) * sd / math.sqrt(arr.size)
    return mean, mean - half, mean + half


def summarize(records: Iterable[TrialRecord]) -> list[SummaryRow]:
    """Per-(n, M) mean and 95% CI over the trials that solved to optimality."""
    groups: dict[tuple[int, int], list[int]] = defaultdict(list)
    for r in records:
        values = groups[(r.n, r.M)]
        if r.status == "ok":
            values.append(r.matching_number)
    rows = []
    for (n, M), values in sorted(groups.items()):
        if len(values) < 2:
            raise StatisticsError(f"group (n={n}, M={M}) has {len(values)} usable trials; need 2")
        mean, lo, hi = mean_confidence_interval(values)
        rows.append(SummaryRow(n, M, len(values), mean, lo, hi))
    return rows


PathOrFile = Union[str, os.PathLike, TextIO]


def _open_out(target: PathOrFile):
    if hasattr(target, "write"):
        return target, False
    return open(target, "w", newline="", encoding="utf-8"), True


def write_trials_csv(records: Iterable[TrialRecord], target: PathOrFile) -> None:
    fh, owned = _open_out(target)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRIALS_HEADER)
        for r in records:
            w.writerow([r.n, r.M, r.trial, r.matching_number, r.seed, r.status])
    finally:
        if owned:
            fh.close()


def write_summary_csv(rows: Iterable[SummaryRow], target: PathOrFile) -> None:
    fh, owned = _open_out(target)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for r in rows:
            w.writerow([r.n, r.M, r.trials, f"{r.mean:.6f}", f"{r.ci_lo:.6f}", f"{r.ci_hi:.6f}"])
    finally:
        if owned:
            fh.close()


def read_trials_csv(text: str) -> list[TrialRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != TRIALS_HEADER:
        raise ParameterError(f"trials CSV header must be {','.join(TRIALS_HEADER)}")
    return [
        TrialRecord(int(d["n"]), int(d["M"]), int(d["trial"]),
                    int(d["matching_number"]), int(d["seed"]), d["status"])
        for d in reader
    ]


def read_summary_csv(text: str) -> list[SummaryRow]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != SUMMARY_HEADER:
        raise ParameterError(f"summary CSV header must be {','.join(SUMMARY_HEADER)}")
    return [
        SummaryRow(int(d["n"]), int(d["M"]), int(d["trials"]),
                   float(d["mean"]), float(d["ci_lo"]), float(d["ci_hi"]))
        for d in reader
    ]


def trials_csv_text(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    write_trials_csv(records, buf)
    return buf.getvalue()


def summary_csv_text(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    write_summary_csv(rows, buf)
    return buf.getvalue()
