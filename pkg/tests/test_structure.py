import numpy as np
import pytest

from gengrover.errors import IndexOutOfRange
from gengrover.instance import build_hamiltonian, hadamard_sources, make_instance, source_projector
from gengrover.numerics import hermitian_eig, max_abs, target_projection_norm
from gengrover.structure import (
    block_decompose,
    ideal_initial_state,
    pair_eigenvectors,
    pair_spectrum,
    verify_identities,
)

SIZES = [(8, 1, 3), (8, 3, 3), (16, 2, 5), (16, 5, 2), (32, 5, 5), (64, 8, 8), (64, 8, 3)]


def dense_projectors(inst):
    p_t = np.diag(inst.target_mask.astype(float)).astype(complex)
    return source_projector(inst), p_t, np.eye(inst.d) - p_t


def test_blocks_d2(inst_d2):
    blk = block_decompose(inst_d2)
    np.testing.assert_allclose(blk.a, [[0.5]], atol=1e-15)
    np.testing.assert_allclose(blk.b, [[0.5]], atol=1e-15)
    np.testing.assert_allclose(blk.c, [[1.5]], atol=1e-15)


@pytest.mark.parametrize("d,n,m", SIZES)
def test_blocks_match_projector_products(random_inst, d, n, m):
    inst = random_inst(d, n, m, d + n + m)
    ps, pt, pnt = dense_projectors(inst)
    blk = block_decompose(inst)
    nt, t = blk.non_targets, blk.targets
    assert max_abs(blk.a - (pnt @ ps @ pnt)[np.ix_(nt, nt)]) < 1e-12
    assert max_abs(blk.b - (pnt @ ps @ pt)[np.ix_(nt, t)]) < 1e-12
    assert max_abs(blk.c - (pt @ ps @ pt + pt)[np.ix_(t, t)]) < 1e-12


def test_identities_on_random_instances(random_inst):
    rng = np.random.default_rng(0)
    for seed in range(100):
        d = int(rng.choice([8, 16, 32, 64]))
        m = int(rng.integers(1, d // 2 + 1))
        n = int(rng.integers(1, d - m + 1))
        rep = verify_identities(random_inst(d, n, m, seed))
        assert max(rep.values()) < 1e-10, (seed, rep)


def test_identities_d2_exact(inst_d2):
    rep = verify_identities(inst_d2)
    assert max(rep.values()) < 1e-15


def test_d4_single_pair(inst_d4):
    sp = pair_spectrum(inst_d4)
    assert len(sp.pairs) == 1
    assert sp.pairs[0].c == pytest.approx(0.5, abs=1e-15)
    assert sp.zero_dim == 2 and not sp.unpaired_t and not sp.unpaired_not_t
    np.testing.assert_allclose(sp.eigenvalues(), [0, 0, 0.5, 1.5], atol=1e-15)


def test_d2_pair(inst_d2):
    assert pair_spectrum(inst_d2).pairs[0].c == pytest.approx(1 / np.sqrt(2), abs=1e-15)


@pytest.mark.parametrize("d,n,m", SIZES)
@pytest.mark.parametrize("family", ["random", "hadamard"])
def test_spectrum_matches_dense_eigensolver(random_inst, d, n, m, family):
    inst = random_inst(d, n, m, 7 * d + n, family=family)
    sp = pair_spectrum(inst)
    dense = hermitian_eig(build_hamiltonian(inst)).eigenvalues
    assert max_abs(sp.eigenvalues() - dense) < 1e-9
    # completeness of the mode count
    assert sp.zero_dim + len(sp.unpaired_t) + len(sp.unpaired_not_t) + 2 * len(sp.pairs) == d
    assert len(sp.unpaired_t) - len(sp.unpaired_not_t) == m - n
    assert abs(sp.eigenvalues().sum() - (n + m)) < 1e-9


def test_random_d32_spectrum_shape(random_inst):
    inst = random_inst(32, 5, 5, 99)
    sp = pair_spectrum(inst)
    assert len(sp.pairs) == 5 and sp.zero_dim == 22
    np.testing.assert_array_less(np.zeros(5), sp.c_values)
    assert np.all(np.diff(sp.c_values) <= 0)


@pytest.mark.parametrize("d,n,m", SIZES)
def test_mode_vectors(random_inst, d, n, m):
    inst = random_inst(d, n, m, 3 * d + m)
    sp = pair_spectrum(inst)
    h = build_hamiltonian(inst)
    mask = inst.target_mask
    for mode in sp.pairs:
        assert max_abs(mode.eps_t[~mask]) < 1e-12
        assert max_abs(mode.eps_not_t[mask]) < 1e-12
        assert abs(np.linalg.norm(mode.eps_not_t) - 1) < 1e-12
        plus, minus = pair_eigenvectors(mode)
        assert max_abs(h @ plus - (1 + mode.c) * plus) < 1e-9
        assert max_abs(h @ minus - (1 - mode.c) * minus) < 1e-9
        assert abs(np.vdot(plus, minus)) < 1e-12
        # P_S restricted to the pair plane is the rank-one projector on (s, c)
        basis = np.column_stack([mode.eps_not_t, mode.eps_t])
        s = np.sqrt(1 - mode.c**2)
        restricted = basis.conj().T @ source_projector(inst) @ basis
        expected = np.array([[s * s, mode.c * s], [mode.c * s, mode.c**2]])
        assert max_abs(restricted - expected) < 1e-10
    for v in sp.unpaired_t:
        assert max_abs(v[~mask]) < 1e-12 and max_abs(h @ v - v) < 1e-9
    for v in sp.unpaired_not_t:
        assert max_abs(v[mask]) < 1e-12 and max_abs(h @ v - v) < 1e-9


def test_components_are_eigenvectors(random_inst):
    inst = random_inst(20, 6, 4, 12)
    sp = pair_spectrum(inst)
    h = build_hamiltonian(inst)
    s = np.random.default_rng(0).standard_normal(20) + 0j
    energies, vecs = sp.components(s)
    assert max_abs(vecs.sum(axis=1) - s) < 1e-13
    for e, v in zip(energies, vecs.T):
        assert max_abs(h @ v - e * v) < 1e-9


def test_pair_eigenvectors_symmetric_limit(inst_d4):
    mode = pair_spectrum(inst_d4).pairs[0]
    small = type(mode)(0.0, mode.eps_t, mode.eps_not_t)
    plus, minus = pair_eigenvectors(small)
    assert max_abs(plus - (mode.eps_not_t + mode.eps_t) / np.sqrt(2)) < 1e-15
    assert max_abs(minus - (mode.eps_not_t - mode.eps_t) / np.sqrt(2)) < 1e-15


def test_ideal_state_single_source_is_the_source():
    inst = make_instance(16, hadamard_sources(4, [5]), [2, 9, 11])
    psi = ideal_initial_state(pair_spectrum(inst), 0)
    assert abs(abs(np.vdot(psi, inst.sources[0])) - 1) < 1e-12


def test_ideal_state_expansion(random_inst, inst_d4):
    inst = random_inst(40, 4, 6, 8)
    sp = pair_spectrum(inst)
    for j, mode in enumerate(sp.pairs):
        psi = ideal_initial_state(sp, j)
        alt = np.sqrt(1 - mode.c**2) * mode.eps_not_t + mode.c * mode.eps_t
        assert max_abs(psi - alt) < 1e-12
        assert abs(target_projection_norm(psi, inst.targets) - mode.c**2) < 1e-12
    psi4 = ideal_initial_state(pair_spectrum(inst_d4), 0)
    assert abs(abs(psi4[3]) - 0.5) < 1e-14
    with pytest.raises(IndexOutOfRange):
        ideal_initial_state(sp, len(sp.pairs))


def test_zero_overlap_directions_become_unpaired():
    # two Hadamard rows whose difference vanishes on both targets
    inst = make_instance(8, hadamard_sources(3, [0, 1]), [0, 2])
    sp = pair_spectrum(inst)
    assert len(sp.pairs) == 1
    assert len(sp.unpaired_t) == 1 and len(sp.unpaired_not_t) == 1
    dense = hermitian_eig(build_hamiltonian(inst)).eigenvalues
    assert max_abs(sp.eigenvalues() - dense) < 1e-12


def test_hadamard_bound(random_inst):
    for seed in range(20):
        inst = random_inst(32, 6, 6, seed, family="hadamard")
        c = pair_spectrum(inst).c_values
        assert np.all(c > 0) and c.max() <= min(1, np.sqrt(36 / 32) + 1e-10)
