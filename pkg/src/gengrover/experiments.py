"""Batch studies: pair-overlap statistics, scaling with M and D, runtime tables."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFit, InfeasibleSize
from .instance import SearchInstance, random_instance, substream
from .qpe import runtime_estimate
from .structure import pair_spectrum

BOUND_SLACK = 1e-10


@dataclass(frozen=True)
class ScalingRecord:
    d: int
    n: int
    m: int
    seed: int
    c_values: np.ndarray = field(repr=False)
    c_av: float
    c_max: float
    bound: float
    trial: int = 0

    @property
    def within_bound(self) -> bool:
        return self.c_max <= min(1.0, self.bound + BOUND_SLACK)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    alpha: float
    residual: float


def spectrum_statistics(inst: SearchInstance, seed: int = 0, trial: int = 0) -> ScalingRecord:
    c = pair_spectrum(inst).c_values
    return ScalingRecord(
        d=inst.d,
        n=inst.n,
        m=inst.m,
        seed=seed,
        c_values=c,
        c_av=float(c.sum()) / inst.n,
        c_max=float(c.max()) if c.size else 0.0,
        bound=float(np.sqrt(inst.m * inst.n / inst.d)),
        trial=trial,
    )


def hadamard_trials(d: int, n: int, m: int, trials: int, seed: int) -> list[ScalingRecord]:
    """Independent random Hadamard-row sources and random targets, one substream per trial."""
    if n + m > d:
        raise InfeasibleSize(f"N + M = {n + m} exceeds D = {d}")
    records = []
    for trial in range(trials):
        inst = random_instance(d, n, m, "hadamard", substream(seed, d, n, m, trial))
        records.append(spectrum_statistics(inst, seed, trial))
    return records


def scaling_study(d: int, m_list, trials: int, seed: int) -> list[ScalingRecord]:
    """``trials`` Hadamard-source instances with N = M for every M in ``m_list``."""
    if trials < 1:
        raise ValueError("need at least one trial")
    records = []
    for m in m_list:
        records.extend(hadamard_trials(d, int(m), int(m), trials, seed))
    return records


def mean_c_av(records: list[ScalingRecord], key: str = "m") -> dict[int, float]:
    groups: dict[int, list[float]] = {}
    for rec in records:
        groups.setdefault(getattr(rec, key), []).append(rec.c_av)
    return {k: float(np.mean(v)) for k, v in sorted(groups.items())}


def _loglog_fit(x, y) -> tuple[float, float, float]:
    x = np.log2(np.asarray(x, dtype=float))
    y = np.log2(np.asarray(y, dtype=float))
    if np.unique(x).size < 2:
        raise DegenerateFit("need at least two distinct abscissae for a fit")
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), float(intercept), resid


def fit_alpha(records: list[ScalingRecord]) -> FitResult:
    """Least-squares line through (log2 M, log2 mean c_av); alpha is twice the slope."""
    means = mean_c_av(records, "m")
    slope, intercept, resid = _loglog_fit(list(means), list(means.values()))
    return FitResult(slope, intercept, 2 * slope, resid)


def fit_dimension_exponent(records: list[ScalingRecord]) -> FitResult:
    """Slope of log2 mean c_av against log2 D (expected near -1/2)."""
    means = mean_c_av(records, "d")
    slope, intercept, resid = _loglog_fit(list(means), list(means.values()))
    return FitResult(slope, intercept, 2 * slope, resid)


def resource_table(d_list, m: int, p: float = 0.75, trials: int = 200, seed: int = 0) -> list[dict]:
    """Runtime estimate per dimension for N = M Hadamard sources, sorted by D."""
    rows = []
    for d in sorted(int(x) for x in d_list):
        recs = hadamard_trials(d, m, m, trials, seed)
        c_av = float(np.mean([r.c_av for r in recs]))
        rows.append({"d": d, "m": m, "c_av": c_av, "runtime": runtime_estimate(c_av, p), "sqrt_d": float(np.sqrt(d))})
    return rows
