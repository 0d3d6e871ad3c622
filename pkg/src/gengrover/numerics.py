"""Dense complex linear-algebra kernels.

Everything here works on plain ``numpy`` arrays. State vectors are 1-D complex
arrays of length ``D``; matrices are 2-D complex arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, NonHermitian, NonSquare, RankDeficient


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-10
    rank_pivot: float = 1e-10
    reconstruction: float = 1e-9
    orthonormality: float = 1e-10
    zero_mode: float = 1e-12  # eigenvalue of P_T P_S P_T below which c is treated as 0
    norm: float = 1e-12


TOL = Tolerances()


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order, eigenvectors as the matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def max_abs(a) -> float:
    """Max-entry norm; 0 for empty arrays."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real and >= 0.

    Works column-wise on 2-D input.
    """
    v = np.array(v, dtype=complex)
    if v.ndim == 1:
        k = int(np.argmax(np.abs(v)))
        a = v[k]
        return v * (np.conj(a) / abs(a)) if abs(a) > 0 else v
    idx = np.argmax(np.abs(v), axis=0)
    pivots = v[idx, np.arange(v.shape[1])]
    mags = np.abs(pivots)
    phases = np.where(mags > 0, np.conj(pivots) / np.where(mags > 0, mags, 1.0), 1.0)
    return v * phases


def hermitian_eig(m) -> EigenDecomposition:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    resid = max_abs(m - m.conj().T)
    if resid > TOL.hermiticity:
        raise NonHermitian(f"hermiticity residual {resid:.3e} exceeds {TOL.hermiticity:.0e}")
    vals, vecs = np.linalg.eigh(m)
    return EigenDecomposition(vals, fix_phase(vecs))


def orthonormalize(vectors: Iterable[Sequence[complex]] | np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with one reorthogonalization pass.

    Returns the orthonormal vectors as rows of a 2-D array. Raises
    ``RankDeficient`` when a residual pivot falls below ``TOL.rank_pivot``.
    """
    vs = np.array(vectors, dtype=complex)
    if vs.ndim == 1:
        vs = vs[None, :]
    if vs.shape[0] > vs.shape[1]:
        raise RankDeficient(f"{vs.shape[0]} vectors cannot be independent in dimension {vs.shape[1]}")
    out = np.empty_like(vs)
    for i, v in enumerate(vs):
        w = v.copy()
        for _ in range(2):
            for q in out[:i]:
                w -= np.vdot(q, w) * q
        nrm = np.linalg.norm(w)
        if nrm < TOL.rank_pivot:
            raise RankDeficient(f"vector {i} is (numerically) in the span of the previous ones")
        out[i] = w / nrm
    return out


def check_indices(indices: Iterable[int], dim: int) -> list[int]:
    idx = [int(i) for i in indices]
    for i in idx:
        if not 0 <= i < dim:
            raise IndexOutOfRange(f"index {i} outside [0, {dim})")
    return idx


def target_projection_norm(state, targets: Iterable[int]) -> float:
    """Probability weight of ``state`` on the target basis indices."""
    state = np.asarray(state)
    idx = check_indices(targets, state.shape[0])
    return float(np.sum(np.abs(state[idx]) ** 2))
