"""Block structure and pair spectrum of the Grover Hamiltonian ``H = P_S + P_T``.

Splitting the space into target indices and the rest gives

    H = [[A, B], [B^dagger, C]],  A = P_!T P_S P_!T,  B = P_!T P_S P_T,
                                 C = P_T P_S P_T + P_T,

and ``A``, ``C`` can be diagonalized together with ``B``. The nonzero
eigenvalues ``c_n^2`` of ``P_T P_S P_T`` (squared cosines of the principal
angles between the source and target subspaces) pair one target direction
``|eps_T>`` with one non-target direction ``|eps_!T>``. Within each pair,
``H`` acts as::

    [[1 - c^2,         c sqrt(1 - c^2)],
     [c sqrt(1 - c^2), 1 + c^2        ]]

with eigenvalues ``1 +- c``. Target directions with ``c = 0`` and source
directions with no target weight both sit at energy 1, and everything
orthogonal to ``span(S) + span(T)`` has energy 0.

The spectrum is computed from the small ``M x N`` block of source amplitudes
on the targets; no ``D x D`` diagonalization is ever done here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateMode, IndexOutOfRange
from .instance import SearchInstance, build_hamiltonian, source_projector
from .numerics import TOL, fix_phase, max_abs


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks of H in the ordered basis (non-target indices, target indices)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    non_targets: np.ndarray
    targets: np.ndarray


@dataclass(frozen=True)
class PairMode:
    c: float
    eps_t: np.ndarray
    eps_not_t: np.ndarray

    @property
    def energies(self) -> tuple[float, float]:
        return 1 + self.c, 1 - self.c


@dataclass(frozen=True)
class PairSpectrum:
    d: int
    pairs: list[PairMode]
    unpaired_t: list[np.ndarray]
    unpaired_not_t: list[np.ndarray]
    zero_dim: int
    _plus: np.ndarray = field(repr=False)  # (D, k) columns |eps_n^+>
    _minus: np.ndarray = field(repr=False)
    _ones: np.ndarray = field(repr=False)  # (D, u) unpaired energy-1 vectors

    @property
    def c_values(self) -> np.ndarray:
        return np.array([p.c for p in self.pairs])

    def eigenvalues(self) -> np.ndarray:
        """Full sorted eigenvalue multiset of H (length D)."""
        c = self.c_values
        vals = np.concatenate([
            np.zeros(self.zero_dim),
            np.ones(len(self.unpaired_t) + len(self.unpaired_not_t)),
            1 - c,
            1 + c,
        ])
        return np.sort(vals)

    def components(self, state) -> tuple[np.ndarray, np.ndarray]:
        """Split ``state`` into mutually orthogonal energy eigen-components.

        Returns ``(energies, vectors)`` with ``vectors`` of shape (D, K) such
        that ``vectors.sum(axis=1) == state`` and ``H @ vectors[:, j] ==
        energies[j] * vectors[:, j]``. Degenerate unpaired and zero-energy
        parts come back as one column each.
        """
        state = np.asarray(state, dtype=complex)
        a_plus = self._plus.conj().T @ state
        a_minus = self._minus.conj().T @ state
        a_one = self._ones.conj().T @ state
        v_plus = self._plus * a_plus
        v_minus = self._minus * a_minus
        v_one = self._ones @ a_one
        v_zero = state - v_plus.sum(axis=1) - v_minus.sum(axis=1) - v_one
        c = self.c_values
        energies = np.concatenate([1 + c, 1 - c, [1.0, 0.0]])
        vectors = np.column_stack([v_plus, v_minus, v_one, v_zero])
        return energies, vectors

    def apply_function(self, state, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Compute ``f(H) @ state``; ``f`` maps an array of energies to multipliers."""
        energies, vectors = self.components(state)
        return vectors @ np.asarray(f(energies), dtype=complex)

    def pair_projector_residual(self, state) -> float:
        """Norm of the part of ``state`` outside the span of all pair eigenvectors."""
        state = np.asarray(state, dtype=complex)
        basis = np.column_stack([self._plus, self._minus])
        return float(np.linalg.norm(state - basis @ (basis.conj().T @ state)))


def block_decompose(inst: SearchInstance) -> BlockDecomposition:
    ps = source_projector(inst)
    nt = inst.non_targets
    t = np.asarray(inst.targets)
    a = ps[np.ix_(nt, nt)]
    b = ps[np.ix_(nt, t)]
    c = ps[np.ix_(t, t)] + np.eye(len(t))
    return BlockDecomposition(a, b, c, nt, t)


def pair_spectrum(inst: SearchInstance) -> PairSpectrum:
    """Structured eigendecomposition of H from the M x N target block.

    The singular values of the target block are the ``c_n``; left singular
    vectors give ``|eps_T>`` and ``P_!T`` applied to the matching source
    combination gives ``|eps_!T>``. Phases are fixed so that every
    ``<eps_!T| H |eps_T>`` is real and positive.
    """
    d, n, m = inst.d, inst.n, inst.m
    t = list(inst.targets)
    block = inst.source_target_block()  # (M, N)
    w, sing, vh = np.linalg.svd(block, full_matrices=True)
    # c^2 below the zero-mode tolerance counts as an exact zero
    k = int(np.sum(sing**2 >= TOL.zero_mode))

    pairs = []
    plus_cols, minus_cols = [], []
    for j in range(k):
        c = float(sing[j])
        s = np.sqrt(max(0.0, 1 - c * c))
        if c * s < 1e-12:
            raise DegenerateMode(f"mode {j} has c = {c!r}; cannot build its non-target partner")
        eps_t = np.zeros(d, dtype=complex)
        eps_t[t] = w[:, j]
        eps_t = fix_phase(eps_t)
        coeffs = inst.sources[:, t].conj() @ eps_t[t]  # <psi_i|eps_T>
        img = coeffs @ inst.sources  # P_S |eps_T>
        img[t] = 0.0  # B |eps_T>
        eps_nt = img / (c * s)
        eps_nt[t] = 0.0
        pairs.append(PairMode(c, eps_t, eps_nt))
        hp, hm = pair_eigenvectors(pairs[-1])
        plus_cols.append(hp)
        minus_cols.append(hm)

    unpaired_t = []
    for j in range(k, m):
        v = np.zeros(d, dtype=complex)
        v[t] = w[:, j]
        unpaired_t.append(fix_phase(v))
    unpaired_nt = []
    for j in range(k, n):
        v = vh[j].conj() @ inst.sources
        v[t] = 0.0  # analytically zero; remove rounding
        unpaired_nt.append(fix_phase(v / np.linalg.norm(v)))

    def cols(vs):
        return np.column_stack(vs) if vs else np.zeros((d, 0), dtype=complex)

    return PairSpectrum(
        d=d,
        pairs=pairs,
        unpaired_t=unpaired_t,
        unpaired_not_t=unpaired_nt,
        zero_dim=d - n - m,
        _plus=cols(plus_cols),
        _minus=cols(minus_cols),
        _ones=cols(unpaired_t + unpaired_nt),
    )


def pair_eigenvectors(mode: PairMode) -> tuple[np.ndarray, np.ndarray]:
    """The two eigenvectors of H in a pair, with energies ``1 + c`` and ``1 - c``."""
    c = mode.c
    plus = np.sqrt((1 - c) / 2) * mode.eps_not_t + np.sqrt((1 + c) / 2) * mode.eps_t
    minus = np.sqrt((1 + c) / 2) * mode.eps_not_t - np.sqrt((1 - c) / 2) * mode.eps_t
    return plus, minus


def ideal_initial_state(spectrum: PairSpectrum, n: int) -> np.ndarray:
    """State whose target population oscillates as sin^2(c t) + c^2 cos^2(c t).

    ``n`` is a zero-based index into ``spectrum.pairs``.
    """
    if not 0 <= n < len(spectrum.pairs):
        raise IndexOutOfRange(f"pair index {n} outside [0, {len(spectrum.pairs)})")
    mode = spectrum.pairs[n]
    plus, minus = pair_eigenvectors(mode)
    c = mode.c
    return np.sqrt((1 + c) / 2) * plus + np.sqrt((1 - c) / 2) * minus


def verify_identities(inst: SearchInstance) -> dict[str, float]:
    """Max-entry residuals of the projector identities behind the block structure."""
    blk = block_decompose(inst)
    a, b, c = blk.a, blk.b, blk.c
    p_t = np.eye(inst.m)
    bbh = b @ b.conj().T
    bhb = b.conj().T @ b
    h = build_hamiltonian(inst)
    return {
        "bbdag_vs_a_minus_a2": max_abs(bbh - (a - a @ a)),
        "bdagb_vs_c_poly": max_abs(bhb - (-c @ c + 3 * c - 2 * p_t)),
        "trace": abs(np.trace(h).real - (inst.n + inst.m)),
        "commutator_bbdag_a": max_abs(bbh @ a - a @ bbh),
        "commutator_bdagb_c": max_abs(bhb @ c - c @ bhb),
    }
