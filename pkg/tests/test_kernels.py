"""Backend parity: the compiled kernels and the NumPy fallback must agree."""

import numpy as np
import pytest

from gl2sums import kernels
from gl2sums.gl2 import class_inventory, group_order

BACKENDS = kernels.available_backends()
parity = pytest.mark.skipif(
    len(BACKENDS) < 2, reason="compiled backend not built; nothing to compare"
)


def _random_vectors(p, seed, complex_=True):
    rng = np.random.default_rng(seed)
    if complex_:
        return [rng.standard_normal(p) + 1j * rng.standard_normal(p) for _ in range(4)]
    return [rng.integers(0, 40, p).astype(np.int64) for _ in range(4)]


@parity
@pytest.mark.parametrize("p", [3, 5, 11])
@pytest.mark.parametrize("cell", [0, 1, 2])
def test_class_weights_parity(p, cell):
    vs = _random_vectors(p, seed=p)
    a = kernels.class_weights(p, *vs, cell=cell, backend="numpy")
    b = kernels.class_weights(p, *vs, cell=cell, backend="cython")
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-9)


@parity
@pytest.mark.parametrize("p", [3, 5, 11])
def test_class_counts_parity(p):
    ns = _random_vectors(p, seed=p + 1, complex_=False)
    a = kernels.class_counts(p, *ns, backend="numpy")
    b = kernels.class_counts(p, *ns, backend="cython")
    assert (a == b).all()


@parity
@pytest.mark.parametrize("p", [3, 5, 11])
def test_plancherel_weights_parity(p):
    vs = _random_vectors(p, seed=p + 2)
    a = kernels.plancherel_weights(p, *vs, backend="numpy")
    b = kernels.plancherel_weights(p, *vs, backend="cython")
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-9)


@parity
@pytest.mark.parametrize("p", [3, 5, 11])
def test_scalar_kernels_parity(p):
    ns = _random_vectors(p, seed=p + 3, complex_=False)
    assert kernels.disc_zero_count(p, *ns, backend="numpy") == kernels.disc_zero_count(
        p, *ns, backend="cython"
    )
    assert kernels.legendre_disc_sum(p, *ns, backend="numpy") == kernels.legendre_disc_sum(
        p, *ns, backend="cython"
    )


@pytest.mark.parametrize("p", [3, 5, 7])
def test_class_counts_against_index_table(p):
    # with all-ones entry vectors the counts are the class sizes
    ones = [np.ones(p, dtype=np.int64)] * 4
    counts = kernels.class_counts(p, *ones)
    inv = class_inventory(p)
    assert counts[0] == p**4 - group_order(p)
    assert counts[1:].tolist() == [cd.size for cd in inv]
    cls = kernels.build_class_index(p)
    assert cls.shape == (p**4,)
    binned = np.bincount(cls[cls >= 0], minlength=p * p - 1)
    assert binned.tolist() == [cd.size for cd in inv]


@pytest.mark.parametrize("p", [5, 11])
def test_a_range_partition(p):
    vs = _random_vectors(p, seed=9)
    full = kernels.class_weights(p, *vs)
    parts = sum(
        kernels.class_weights(p, *vs, a_range=(lo, lo + 1)) for lo in range(p)
    )
    np.testing.assert_allclose(full, parts, rtol=1e-12, atol=1e-9)


def test_weights_zero_matrix_gives_sizes():
    # v = all-ones phases (A = 0): weights are the class sizes
    p = 7
    ones = [np.ones(p, dtype=np.complex128)] * 4
    w = kernels.class_weights(p, *ones)
    assert np.allclose(w, [cd.size for cd in class_inventory(p)])


def test_backend_reports():
    assert kernels.BACKEND in ("cython", "numpy")
    assert "numpy" in BACKENDS
