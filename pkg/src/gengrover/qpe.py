"""Phase-estimation search: QPE on a source state, target marking, post-selection.

The controlled unitary is ``U = exp(-i H tau)``. An eigenstate with energy
``e`` has phase ``phi = (-e tau / 2 pi) mod 1``; an ``r``-qubit register
followed by the inverse QFT reads out ``m`` with amplitude

    beta(m) = 2^-r sum_k exp(2 pi i k (phi - m / 2^r)).

Since H has at most ``2 min(N, M) + 2`` distinct energies, the whole register
distribution follows from the structured eigen-components of the input.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import ceil, log2, pi

import numpy as np

from .errors import ImprobableOutcome, OutOfRange, SourceSpansWarning
from .instance import SearchInstance, substream
from .structure import PairSpectrum, pair_spectrum

MAX_REGISTER = 30


@dataclass(frozen=True)
class QpeConfig:
    r: int | None = None  # derived from delta_e (or 2 c_av) when None
    tau: float = 1.0
    p: float = 0.75
    shots: int = 1000
    mode: str = "qpp"  # or "measure-and-check"
    delta_e: float | None = None

    def __post_init__(self):
        if self.r is not None and self.r < 1:
            raise OutOfRange(f"register size must be >= 1, got {self.r}")
        if not 0 < self.p < 1:
            raise OutOfRange(f"p must lie in (0, 1), got {self.p}")
        if not self.tau > 0:
            raise OutOfRange(f"tau must be positive, got {self.tau}")
        if self.mode not in ("qpp", "measure-and-check"):
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.shots < 0:
            raise OutOfRange(f"shots must be >= 0, got {self.shots}")


@dataclass(frozen=True)
class QpeResult:
    shot: int
    source_n: int
    m: int
    probability: float
    post_state: np.ndarray
    ancilla: int | None
    measured_index: int | None
    success: bool
    flagged: bool = False

    def to_json(self) -> dict:
        return {
            "shot": self.shot,
            "source_n": self.source_n,
            "m": self.m,
            "ancilla": self.ancilla,
            "index": self.measured_index,
            "success": self.success,
        }


def _precision_factor(p: float) -> float:
    return 2 + 1 / (2 * (1 - p))


def register_size(delta_e: float, p: float, tau: float = 1.0) -> int:
    """Register qubits needed to resolve energies ``delta_e`` apart with probability ``p``."""
    if not delta_e > 0:
        raise OutOfRange(f"energy resolution must be positive, got {delta_e}")
    if not 0 < p < 1:
        raise OutOfRange(f"p must lie in (0, 1), got {p}")
    if not tau > 0:
        raise OutOfRange(f"tau must be positive, got {tau}")
    delta_phi = delta_e * tau / (2 * pi)
    # the slack keeps exact powers of two from rounding up
    r = ceil(-log2(delta_phi) + log2(_precision_factor(p)) - 1e-9)
    if r > MAX_REGISTER:
        raise OutOfRange(f"register of {r} qubits exceeds the limit of {MAX_REGISTER}")
    return max(1, r)


def runtime_estimate(c_av: float, p: float) -> float:
    """Total evolution time of the phase-estimation search, (2 + 1/(2(1-p))) / c_av."""
    if not c_av > 0:
        raise OutOfRange(f"c_av must be positive, got {c_av}")
    if not 0 < p < 1:
        raise OutOfRange(f"p must lie in (0, 1), got {p}")
    return _precision_factor(p) / c_av


def phases(energies, tau: float = 1.0) -> np.ndarray:
    return np.mod(-np.asarray(energies, dtype=float) * tau / (2 * pi), 1.0)


def kernel_amplitudes(phi, r: int, m=None) -> np.ndarray:
    """beta(phi - m / 2^r) for every phase (rows) and outcome (columns).

    Uses the Dirichlet closed form on the offset wrapped to [-1/2, 1/2), where
    ``sinc`` keeps it finite at zero offset.
    """
    size = 2**r
    m = np.arange(size) if m is None else np.atleast_1d(m)
    delta = np.asarray(phi, dtype=float)[:, None] - m[None, :] / size
    delta = delta - np.floor(delta + 0.5)
    return np.exp(1j * pi * (size - 1) * delta) * (np.sinc(size * delta) / np.sinc(delta))


def _spectrum(inst, spectrum):
    return pair_spectrum(inst) if spectrum is None else spectrum


def qpe_distribution(
    inst: SearchInstance,
    state,
    r: int,
    tau: float = 1.0,
    spectrum: PairSpectrum | None = None,
) -> np.ndarray:
    """Probability of each register outcome m in [0, 2^r) for input ``state``."""
    sp = _spectrum(inst, spectrum)
    energies, vectors = sp.components(state)
    weights = np.sum(np.abs(vectors) ** 2, axis=0)
    kern = np.abs(kernel_amplitudes(phases(energies, tau), r)) ** 2
    return weights @ kern


def qpe_collapse(
    inst: SearchInstance,
    state,
    r: int,
    tau: float,
    m: int,
    spectrum: PairSpectrum | None = None,
) -> np.ndarray:
    """Normalized system state after the register reads ``m``."""
    sp = _spectrum(inst, spectrum)
    energies, vectors = sp.components(state)
    beta = kernel_amplitudes(phases(energies, tau), r, m)[:, 0]
    out = vectors @ beta
    prob = float(np.vdot(out, out).real)
    if prob <= 1e-15:
        raise ImprobableOutcome(f"outcome {m} has probability {prob:.3e}")
    return out / np.sqrt(prob)


def energy_readout(m: int, r: int, tau: float = 1.0) -> float:
    """Energy in [0, 2 pi / tau) corresponding to register value ``m``."""
    return ((-m / 2**r) % 1.0) * 2 * pi / tau


def qpp_apply(inst: SearchInstance, state) -> tuple[np.ndarray | None, np.ndarray | None, float]:
    """Mark target membership on an ancilla.

    Returns ``(branch0, branch1, p1)``: the normalized non-target and target
    parts of ``state`` and the probability of reading ancilla 1. A branch
    with norm below 1e-15 is returned as ``None``.
    """
    state = np.asarray(state, dtype=complex)
    mask = inst.target_mask
    on = np.where(mask, state, 0)
    off = np.where(mask, 0, state)
    n1 = float(np.linalg.norm(on))
    n0 = float(np.linalg.norm(off))
    branch1 = on / n1 if n1 >= 1e-15 else None
    branch0 = off / n0 if n0 >= 1e-15 else None
    return branch0, branch1, n1 * n1


def average_c(spectrum: PairSpectrum, n: int) -> float:
    """Sum of pair overlaps divided by the number of sources."""
    return float(np.sum(spectrum.c_values)) / n


def resolve_register(inst: SearchInstance, config: QpeConfig, spectrum: PairSpectrum | None = None) -> int:
    if config.r is not None:
        return config.r
    delta_e = config.delta_e
    if delta_e is None:
        delta_e = 2 * average_c(_spectrum(inst, spectrum), inst.n)
    return register_size(delta_e, config.p, config.tau)


def _sample(rng: np.random.Generator, probs: np.ndarray) -> int:
    probs = np.clip(probs, 0.0, None)
    return int(rng.choice(probs.size, p=probs / probs.sum()))


def search(
    inst: SearchInstance,
    config: QpeConfig,
    seed: int,
    spectrum: PairSpectrum | None = None,
) -> list[QpeResult]:
    """Run the phase-estimation search shot by shot.

    Shot ``i`` uses source ``i mod N`` and its own random substream, so the
    result of a shot does not depend on which other shots were run.
    """
    sp = _spectrum(inst, spectrum)
    flagged = inst.n > inst.m
    if flagged:
        warnings.warn(
            f"N = {inst.n} > M = {inst.m}: unpaired source directions reduce the success rate",
            SourceSpansWarning,
            stacklevel=2,
        )
    r = resolve_register(inst, config, sp)
    tau = config.tau
    targets = np.asarray(inst.targets)
    target_set = set(inst.targets)
    dists = [qpe_distribution(inst, src, r, tau, sp) for src in inst.sources]
    collapsed: dict[tuple[int, int], np.ndarray] = {}

    results = []
    for shot in range(config.shots):
        rng = substream(seed, shot)
        n = shot % inst.n
        m = _sample(rng, dists[n])
        key = (n, m)
        if key not in collapsed:
            collapsed[key] = qpe_collapse(inst, inst.sources[n], r, tau, m, sp)
        post = collapsed[key]
        if config.mode == "qpp":
            _, branch1, p1 = qpp_apply(inst, post)
            ancilla = int(rng.random() < p1)
            index = None
            if ancilla and branch1 is not None:
                index = int(targets[_sample(rng, np.abs(branch1[targets]) ** 2)])
            else:
                ancilla = 0
        else:
            ancilla = None
            index = _sample(rng, np.abs(post) ** 2)
        success = index is not None and index in target_set
        results.append(QpeResult(shot, n, m, float(dists[n][m]), post, ancilla, index, success, flagged))
    return results


def success_fraction(results: list[QpeResult]) -> float:
    return sum(r.success for r in results) / len(results) if results else 0.0
