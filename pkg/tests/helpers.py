import numpy as np


def random_state(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_hermitian(d, rng):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def phase_aligned(a, b):
    """``a`` multiplied by the global phase that best matches ``b``."""
    ov = np.vdot(a, b)
    return a * (ov / abs(ov)) if abs(ov) > 0 else a
