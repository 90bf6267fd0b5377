import numpy as np
import pytest

from gl2sums.arith import quad_ext_norm, smallest_nonresidue
from gl2sums.errors import NotInvertibleError
from gl2sums.gl2 import (
    CELL_PU,
    CELL_W,
    CENTRAL,
    ELLIPTIC,
    NONSS,
    SPLIT,
    ClassLabel,
    Mat2,
    bruhat_factorize,
    class_index_map,
    class_inventory,
    classify_conjugacy,
    element_order,
    elliptic_unit,
    group_order,
    set_cardinality,
    set_membership,
)


def test_mat2_parse_roundtrip():
    m = Mat2.parse("1,-2;3,4")
    assert m.entries == (1, -2, 3, 4)
    assert m.p is None
    assert Mat2.parse(m.literal()) == m
    assert Mat2.parse("1,2;3,4", 5).entries == (1, 2, 3, 4)


def test_mat2_parse_errors():
    for bad in ("1,2,3;4", "1;2;3", "a,b;c,d"):
        with pytest.raises(ValueError):
            Mat2.parse(bad)


def test_mat2_height_and_reduce():
    m = Mat2(7, -9, 2, 0)
    assert m.height() == 9
    assert m.reduce(5).entries == (2, 1, 2, 0)
    with pytest.raises(ValueError):
        m.reduce(5).height()


def test_reduction_is_ring_homomorphism():
    rng = np.random.default_rng(0)
    for _ in range(100):
        a = Mat2(*rng.integers(-50, 50, 4))
        b = Mat2(*rng.integers(-50, 50, 4))
        assert (a @ b).reduce(7) == a.reduce(7) @ b.reduce(7)


def test_classify_examples():
    assert classify_conjugacy(Mat2(1, 0, 0, 1, 5)) == ClassLabel(CENTRAL, (1,))
    assert classify_conjugacy(Mat2(1, 1, 0, 1, 5)) == ClassLabel(NONSS, (1,))
    lab = classify_conjugacy(Mat2(0, 2, 1, 0, 5))
    assert lab.kind == ELLIPTIC  # disc = 8 = 3, a non-residue mod 5


def test_classify_singular_rejected():
    with pytest.raises(NotInvertibleError, match="not in GL"):
        classify_conjugacy(Mat2(1, 1, 1, 1, 5))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_classify_conjugation_invariant(p):
    rng = np.random.default_rng(p)
    done = 0
    while done < 500:
        m = Mat2(*rng.integers(0, p, 4), p)
        z = Mat2(*rng.integers(0, p, 4), p)
        if m.det() == 0 or z.det() == 0:
            continue
        assert classify_conjugacy(z @ m @ z.inverse()) == classify_conjugacy(m)
        done += 1


def test_inventory_p3():
    inv = class_inventory(3)
    assert len(inv) == 8
    kinds = [cd.label.kind for cd in inv]
    assert kinds.count(CENTRAL) == 2
    assert kinds.count(NONSS) == 2
    assert kinds.count(SPLIT) == 1
    assert kinds.count(ELLIPTIC) == 3
    sizes = {cd.label.kind: cd.size for cd in inv}
    assert sizes == {CENTRAL: 1, NONSS: 8, SPLIT: 12, ELLIPTIC: 6}
    assert sum(cd.size for cd in inv) == 48


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_inventory_structure(p):
    inv = class_inventory(p)
    assert len(inv) == p * p - 1
    assert sum(cd.size for cd in inv) == group_order(p)
    elliptic = [cd for cd in inv if cd.label.kind == ELLIPTIC]
    assert len(elliptic) == (p * p - p) // 2
    for cd in inv:
        assert classify_conjugacy(cd.rep) == cd.label


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_inventory_orders_match_element_order(p):
    for cd in class_inventory(p):
        assert element_order(cd.rep) == cd.order


@pytest.mark.parametrize("p", [3, 5, 7])
def test_elliptic_det_is_norm(p):
    for cd in class_inventory(p):
        if cd.label.kind == ELLIPTIC:
            zeta = elliptic_unit(p, cd.label)
            assert cd.rep.det() == quad_ext_norm(zeta).value


def test_bruhat_examples():
    ident = bruhat_factorize(Mat2(1, 0, 0, 1, 5))
    assert (ident.cell, ident.u, ident.l, ident.m, ident.u_prime) == (CELL_PU, 0, 1, 1, 0)
    w = bruhat_factorize(Mat2(0, 1, 1, 0, 5))
    assert (w.cell, w.l, w.m, w.u_prime) == (CELL_W, 1, 1, 0)


def test_bruhat_singular_rejected():
    with pytest.raises(NotInvertibleError):
        bruhat_factorize(Mat2(0, 0, 0, 1, 5))


@pytest.mark.parametrize("p", [3, 5])
def test_bruhat_cells_partition(p):
    counts = {CELL_PU: 0, CELL_W: 0}
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    m = Mat2(a, b, c, d, p)
                    if m.det() == 0:
                        continue
                    fac = bruhat_factorize(m)
                    assert fac.assemble(p) == m
                    counts[fac.cell] += 1
    assert counts[CELL_PU] == p * p * (p - 1) ** 2
    assert counts[CELL_W] == p * (p - 1) ** 2
    assert sum(counts.values()) == group_order(p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_trace_identities_over_cells(p):
    # tr(diag(a,0) X) = a*l and tr(N X) = u*l on the big cell;
    # tr(diag(a,0) X) = 0 and tr(N X) = l on the small cell
    w = Mat2(0, 1, 1, 0, p)
    for l in range(1, p):
        for m in range(1, p):
            for up in range(p):
                x_l = Mat2(l, 0, 0, 1, p)
                x_m = Mat2(1, 0, 0, m, p)
                x_up = Mat2(1, up, 0, 1, p)
                small = w @ x_l @ x_m @ x_up
                for a in range(1, p):
                    assert (Mat2(a, 0, 0, 0, p) @ small).trace() == 0
                assert (Mat2(0, 1, 0, 0, p) @ small).trace() == l
                for u in range(p):
                    x_u = Mat2(1, 0, u, 1, p)
                    big = x_u @ x_l @ x_m @ x_up
                    assert (Mat2(1, 0, 0, 0, p) @ big).trace() == l
                    assert (Mat2(0, 1, 0, 0, p) @ big).trace() == u * l % p


def test_set_cardinalities_p3():
    assert set_cardinality(3, "nonsingular") == 48
    assert set_cardinality(3, "elliptic") == 18
    assert set_cardinality(3, "primitive") == 12
    assert set_cardinality(3, "disc_zero") == 27


@pytest.mark.parametrize("p", [3, 5])
def test_membership_matches_cardinality(p):
    kinds = ["nonsingular", "elliptic", "primitive", "disc_zero"]
    counts = dict.fromkeys(kinds, 0)
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    m = Mat2(a, b, c, d, p)
                    for kind in kinds:
                        counts[kind] += set_membership(m, kind)
    for kind in kinds:
        assert counts[kind] == set_cardinality(p, kind)


def test_membership_single_class():
    label = ClassLabel(NONSS, (1,))
    assert set_membership(Mat2(1, 1, 0, 1, 5), label)
    assert not set_membership(Mat2(2, 1, 0, 2, 5), label)
    assert set_cardinality(5, label) == 24


def test_primitive_ratio_p3():
    assert set_cardinality(3, "primitive") / group_order(3) == pytest.approx(1 / 4)


def test_unknown_set_kind():
    with pytest.raises(ValueError):
        set_cardinality(5, "everything")


@pytest.mark.parametrize("p", [3, 5, 7])
def test_class_index_order(p):
    idx = class_index_map(p)
    inv = class_inventory(p)
    for i, cd in enumerate(inv):
        assert idx[cd.label] == i


def test_smallest_nonresidue_used_in_labels():
    # elliptic representative depends on tau; check tau = 2 at p = 3, 5
    assert smallest_nonresidue(3) == 2
    assert smallest_nonresidue(5) == 2
    rep = next(cd.rep for cd in class_inventory(5) if cd.label == ClassLabel(ELLIPTIC, (0, 1)))
    assert rep.entries == (0, 2, 1, 0)
