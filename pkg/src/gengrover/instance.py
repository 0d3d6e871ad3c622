"""Search problem definition: source subspace, target set, reflections and H.

A :class:`SearchInstance` holds ``N`` orthonormal source vectors (rows of
``sources``) and ``M`` computational-basis target indices. The Grover
Hamiltonian is ``H = P_S + P_T``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateTarget,
    IndexOutOfRange,
    OrthogonalToTargets,
    ParseError,
    RankDeficient,
    RankViolation,
    ValidationError,
)
from .numerics import TOL, check_indices, max_abs, orthonormalize


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for (seed, keys...), e.g. one per trial or shot.

    The mixing is done by ``numpy.random.SeedSequence`` so the stream only
    depends on the key tuple, never on the order in which streams are made.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), *map(int, keys)]))


@dataclass(frozen=True, eq=False)
class SearchInstance:
    d: int
    sources: np.ndarray  # (N, D) complex, orthonormal rows
    targets: tuple[int, ...]  # sorted basis indices

    @property
    def n(self) -> int:
        return self.sources.shape[0]

    @property
    def m(self) -> int:
        return len(self.targets)

    @property
    def target_mask(self) -> np.ndarray:
        mask = np.zeros(self.d, dtype=bool)
        mask[list(self.targets)] = True
        return mask

    @property
    def non_targets(self) -> np.ndarray:
        return np.flatnonzero(~self.target_mask)

    def source_target_block(self) -> np.ndarray:
        """The M x N matrix of source amplitudes on target indices."""
        return self.sources[:, list(self.targets)].T

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(np.int64(self.d).tobytes())
        h.update(np.asarray(self.targets, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.sources, dtype=np.complex128).tobytes())
        return h.hexdigest()[:16]


def make_instance(d: int, sources, targets: Iterable[int]) -> SearchInstance:
    """Validate and build a search instance.

    Sources are orthonormalized first. The instance must satisfy: every
    source has nonzero weight on the targets, no source direction lies
    inside the target span, and ``N + M <= D``.
    """
    d = int(d)
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise DuplicateTarget(f"duplicate target indices in {targets}")
    try:
        targets = check_indices(targets, d)
    except IndexOutOfRange as exc:
        raise IndexOutOfRange(f"target {exc}") from None
    raw = np.array(sources, dtype=complex)
    if raw.ndim == 1:
        raw = raw[None, :]
    if raw.ndim != 2 or raw.shape[1] != d or raw.shape[0] == 0 or not targets:
        raise DimensionMismatch(
            f"need a non-empty (N, {d}) source array and at least one target, "
            f"got sources {raw.shape} and {len(targets)} targets"
        )
    if raw.shape[0] + len(targets) > d:
        raise RankViolation(f"N + M = {raw.shape[0] + len(targets)} exceeds D = {d}")
    srcs = orthonormalize(raw)
    srcs.setflags(write=False)
    inst = SearchInstance(d, srcs, tuple(sorted(targets)))

    block = inst.source_target_block()
    weights = np.sum(np.abs(block) ** 2, axis=0)
    bad = np.flatnonzero(weights <= 1e-12)
    if bad.size:
        raise OrthogonalToTargets(f"source(s) {bad.tolist()} have no weight on the target space")
    cmax = np.linalg.norm(block, 2)
    if cmax >= 1 - TOL.orthonormality:
        raise RankViolation(f"a source direction lies inside the target span (max cosine {cmax:.12f})")
    return inst


def hadamard_sources(q: int, indices: Iterable[int]) -> np.ndarray:
    """Rows of the q-qubit Hadamard transform, entries (-1)^popcount(n & x) / sqrt(2^q)."""
    d = 2**q
    idx = check_indices(indices, d)
    x = np.arange(d, dtype=np.uint64)
    n = np.asarray(idx, dtype=np.uint64)[:, None]
    parity = np.bitwise_count(n & x) & 1
    return ((1.0 - 2.0 * parity) / np.sqrt(d)).astype(complex)


def random_orthonormal_sources(d: int, n: int, seed: int | np.random.Generator) -> np.ndarray:
    """N orthonormalized standard complex Gaussian vectors, deterministic in ``seed``."""
    if not 1 <= n <= d:
        raise DimensionMismatch(f"cannot draw {n} orthonormal vectors in dimension {d}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(8):
        g = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        try:
            return orthonormalize(g)
        except RankDeficient:
            continue
    raise RankDeficient("eight consecutive Gaussian draws were rank deficient")


def random_instance(d: int, n: int, m: int, family: str, rng: np.random.Generator) -> SearchInstance:
    """Instance with independently drawn sources and targets.

    ``family='hadamard'`` picks ``n`` distinct Hadamard rows (``d`` must be a
    power of two); ``family='random'`` draws Gaussian orthonormal sources.
    """
    if n + m > d:
        raise RankViolation(f"N + M = {n + m} exceeds D = {d}")
    if family == "hadamard":
        q = int(d).bit_length() - 1
        if 2**q != d:
            raise DimensionMismatch(f"hadamard family needs D = 2^q, got {d}")
        src = hadamard_sources(q, sorted(rng.choice(d, n, replace=False).tolist()))
    elif family == "random":
        src = random_orthonormal_sources(d, n, rng)
    else:
        raise ValueError(f"unknown source family {family!r}")
    targets = sorted(rng.choice(d, m, replace=False).tolist())
    return make_instance(d, src, targets)


def oracle_apply(inst: SearchInstance, state) -> np.ndarray:
    out = np.array(state, dtype=complex)
    out[list(inst.targets)] *= -1
    return out


def grover_reflect(inst: SearchInstance, state) -> np.ndarray:
    """(1 - 2 P_S) state using N inner products."""
    state = np.asarray(state, dtype=complex)
    coeffs = inst.sources.conj() @ state
    return state - 2 * (coeffs @ inst.sources)


def source_projector(inst: SearchInstance) -> np.ndarray:
    s = inst.sources
    return s.T @ s.conj()


def build_hamiltonian(inst: SearchInstance) -> np.ndarray:
    h = source_projector(inst)
    idx = list(inst.targets)
    h[idx, idx] += 1
    return h


# -- JSON I/O -----------------------------------------------------------------

def instance_to_dict(inst: SearchInstance) -> dict:
    return {
        "d": inst.d,
        "targets": list(inst.targets),
        "sources": [[[float(z.real), float(z.imag)] for z in row] for row in inst.sources],
    }


def instance_from_dict(obj) -> SearchInstance:
    try:
        d = int(obj["d"])
        targets = [int(t) for t in obj["targets"]]
        rows = np.array(obj["sources"], dtype=float)
        if rows.ndim != 3 or rows.shape[2] != 2:
            raise ValueError("sources must be a list of vectors of [re, im] pairs")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed instance: {exc}") from None
    sources = rows[..., 0] + 1j * rows[..., 1]
    try:
        return make_instance(d, sources, targets)
    except (ParseError, ValidationError):
        raise
    except ValueError as exc:  # every instance validation error is a ValueError
        err = ValidationError(f"{getattr(exc, 'code', type(exc).__name__)}: {exc}")
        raise err from exc


def save_instance(inst: SearchInstance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst)) + "\n")


def load_instance(path) -> SearchInstance:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read instance {path}: {exc}") from None
    return instance_from_dict(obj)


def is_unit(state, tol: float = TOL.norm) -> bool:
    return abs(np.linalg.norm(state) - 1) <= tol


def gram_residual(vectors: Sequence) -> float:
    v = np.asarray(vectors)
    return max_abs(v.conj() @ v.T - np.eye(v.shape[0]))
