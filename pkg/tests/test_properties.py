import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gengrover.errors import RankViolation
from gengrover.instance import build_hamiltonian, grover_reflect, oracle_apply, random_instance, substream
from gengrover.numerics import hermitian_eig, max_abs, orthonormalize
from gengrover.qpe import qpe_distribution
from gengrover.structure import pair_spectrum, verify_identities
from helpers import random_hermitian, random_state

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def instances(draw, max_d=48):
    d = draw(st.integers(min_value=2, max_value=max_d))
    m = draw(st.integers(min_value=1, max_value=d - 1))
    n = draw(st.integers(min_value=1, max_value=d - m))
    return random_instance(d, n, m, "random", substream(draw(seeds), 0))


@st.composite
def hadamard_instances(draw):
    q = draw(st.integers(min_value=2, max_value=6))
    d = 2**q
    m = draw(st.integers(min_value=1, max_value=d // 2))
    n = draw(st.integers(min_value=1, max_value=d - m))
    try:
        return random_instance(d, n, m, "hadamard", substream(draw(seeds), 0))
    except RankViolation:
        return None


@given(st.integers(1, 12), seeds)
def test_eig_trace_and_reconstruction(d, seed):
    h = random_hermitian(d, np.random.default_rng(seed))
    dec = hermitian_eig(h)
    assert abs(dec.eigenvalues.sum() - np.trace(h).real) <= 1e-9 * max(1.0, np.abs(h).sum())
    again = hermitian_eig(dec.reconstruct())
    assert max_abs(again.eigenvalues - dec.eigenvalues) < 1e-9


@given(st.integers(1, 6), st.integers(0, 6), seeds)
def test_orthonormalize_idempotent(k, extra, seed):
    rng = np.random.default_rng(seed)
    vs = rng.standard_normal((k, k + extra)) + 1j * rng.standard_normal((k, k + extra))
    once = orthonormalize(vs)
    assert max_abs(orthonormalize(once) - once) < 1e-12


@settings(max_examples=60, deadline=None)
@given(instances(), seeds)
def test_reflections_are_norm_preserving_involutions(inst, seed):
    s = random_state(inst.d, np.random.default_rng(seed))
    for op in (oracle_apply, grover_reflect):
        once = op(inst, s)
        assert abs(np.linalg.norm(once) - 1) < 1e-12
        assert max_abs(op(inst, once) - s) < 1e-12


@settings(max_examples=60, deadline=None)
@given(instances())
def test_structure_theorem(inst):
    sp = pair_spectrum(inst)
    dense = hermitian_eig(build_hamiltonian(inst)).eigenvalues
    assert max_abs(sp.eigenvalues() - dense) < 1e-9
    assert dense.min() >= -1e-10 and dense.max() <= 2 + 1e-10
    assert sp.zero_dim + len(sp.unpaired_t) + len(sp.unpaired_not_t) + 2 * len(sp.pairs) == inst.d
    assert len(sp.pairs) <= min(inst.n, inst.m)
    assert max(verify_identities(inst).values()) < 1e-10


@settings(max_examples=40, deadline=None)
@given(hadamard_instances())
def test_hadamard_overlap_bound(inst):
    if inst is None:
        return
    c = pair_spectrum(inst).c_values
    assert np.all(c <= min(1.0, np.sqrt(inst.m * inst.n / inst.d) + 1e-10))


@settings(max_examples=30, deadline=None)
@given(instances(max_d=24), st.integers(1, 8), st.floats(0.1, 5.0), seeds)
def test_qpe_distribution_normalized(inst, r, tau, seed):
    dist = qpe_distribution(inst, random_state(inst.d, np.random.default_rng(seed)), r, tau)
    assert np.all(dist >= -1e-15)
    assert abs(dist.sum() - 1) < 1e-10
