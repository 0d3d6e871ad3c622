"""Continuous-time evolution under H and gate-based Grover iteration."""
from __future__ import annotations

from dataclasses import dataclass
from math import asin, pi

import numpy as np

from .errors import NonPositiveC, OutOfRange
from .instance import SearchInstance, grover_reflect, oracle_apply
from .structure import PairSpectrum, pair_spectrum


@dataclass(frozen=True)
class EvolutionTrace:
    times: np.ndarray  # evolution times, or iteration counts for gate traces
    p_target: np.ndarray
    mode: int | None = None


def _spectrum(inst, spectrum):
    return pair_spectrum(inst) if spectrum is None else spectrum


def evolve(inst: SearchInstance, state, t: float, spectrum: PairSpectrum | None = None) -> np.ndarray:
    """exp(-iHt) @ state, applied through the structured eigenbasis."""
    sp = _spectrum(inst, spectrum)
    return sp.apply_function(state, lambda e: np.exp(-1j * e * t))


def target_probability_trace(
    inst: SearchInstance,
    state,
    times,
    spectrum: PairSpectrum | None = None,
    mode: int | None = None,
) -> EvolutionTrace:
    sp = _spectrum(inst, spectrum)
    times = np.asarray(times, dtype=float)
    energies, vectors = sp.components(state)
    on_target = vectors[list(inst.targets)]  # (M, K)
    amps = on_target @ np.exp(-1j * np.outer(energies, times))  # (M, len(times))
    p = np.sum(np.abs(amps) ** 2, axis=0)
    return EvolutionTrace(times, np.clip(p, 0.0, 1.0), mode)


def optimal_time(c: float) -> float:
    """First time at which the ideal state reaches the target space, pi / (2c)."""
    if not c > 0:
        raise NonPositiveC(f"c must be positive, got {c!r}")
    return pi / (2 * c)


def grover_iterate(
    inst: SearchInstance,
    state,
    k: int,
    order: str = "og",
    mode: int | None = None,
) -> tuple[np.ndarray, EvolutionTrace]:
    """Apply ``k`` Grover iterations and record the target probability.

    ``order='og'`` applies the Oracle first and then the Grover reflection
    (the product ``G O``); ``order='go'`` reverses them. The trace has
    ``k + 1`` entries, starting with the untouched input.
    """
    if k < 0:
        raise OutOfRange(f"iteration count must be >= 0, got {k}")
    if order not in ("og", "go"):
        raise ValueError(f"order must be 'og' or 'go', got {order!r}")
    first, second = (oracle_apply, grover_reflect) if order == "og" else (grover_reflect, oracle_apply)
    targets = list(inst.targets)
    psi = np.array(state, dtype=complex)
    p = np.empty(k + 1)
    p[0] = np.sum(np.abs(psi[targets]) ** 2)
    for i in range(1, k + 1):
        psi = second(inst, first(inst, psi))
        p[i] = np.sum(np.abs(psi[targets]) ** 2)
    return psi, EvolutionTrace(np.arange(k + 1), np.clip(p, 0.0, 1.0), mode)


def optimal_iterations(c: float) -> int:
    """Iteration count maximizing sin^2((2k + 1) asin c)."""
    if not 0 < c < 1:
        raise OutOfRange(f"c must lie in (0, 1), got {c!r}")
    return max(0, round(pi / (4 * asin(c)) - 0.5))


def default_time_grid(spectrum: PairSpectrum, samples: int = 2000) -> np.ndarray:
    """[0, 3 pi / (2 c_min)], long enough for 1.5 periods of the slowest pair."""
    c = spectrum.c_values
    if c.size == 0:
        raise NonPositiveC("instance has no pair modes")
    return np.linspace(0.0, 3 * pi / (2 * float(c.min())), samples)
