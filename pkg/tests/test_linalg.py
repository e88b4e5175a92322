"""Exact linear algebra: frozen examples plus independent oracles.

The Smith form is cross-checked against the determinant-divisor
characterization (k-th divisor = gcd of all k x k minors, computed here
by brute force with cofactor determinants, independently of the library
code under test).
"""

from itertools import combinations
from math import gcd

from hypothesis import given, settings, strategies as st

from toricgit.linalg import (
    IntMatrix,
    cokernel,
    det,
    kernel_basis,
    matrix_rank,
    primitive,
    row_hnf,
    saturated_row_basis,
    sign_normalized,
    smith_normal_form,
)


def cofactor_det(rows):
    if not rows:
        return 1
    if len(rows) == 1:
        return rows[0][0]
    total = 0
    for j, x in enumerate(rows[0]):
        if x == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * x * cofactor_det(minor)
    return total


def invariant_factors_by_minor_gcd(entries):
    """Determinant-divisor oracle: d_k = gcd of k x k minors, f_k = d_k/d_{k-1}."""
    nr, nc = len(entries), len(entries[0]) if entries else 0
    divisors = []
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for ri in combinations(range(nr), k):
            for ci in combinations(range(nc), k):
                sub = [[entries[i][j] for j in ci] for i in ri]
                g = gcd(g, cofactor_det([list(map(int, row)) for row in sub]))
        divisors.append(g)
    facs = []
    prev = 1
    for d in divisors:
        if d == 0 or prev == 0:
            facs.append(0)
        else:
            facs.append(d // prev)
        prev = d
    return tuple(facs)


small_matrices = st.integers(min_value=1, max_value=8).flatmap(
    lambda nr: st.integers(min_value=1, max_value=8).flatmap(
        lambda nc: st.lists(
            st.lists(st.integers(min_value=-9, max_value=9), min_size=nc, max_size=nc),
            min_size=nr,
            max_size=nr,
        )
    )
)

tiny_matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda nr: st.integers(min_value=1, max_value=5).flatmap(
        lambda nc: st.lists(
            st.lists(st.integers(min_value=-6, max_value=6), min_size=nc, max_size=nc),
            min_size=nr,
            max_size=nr,
        )
    )
)


def test_primitive():
    assert primitive((2, 4, -6)) == (1, 2, -3)
    assert primitive((0, 0)) == (0, 0)
    assert primitive((-3,)) == (-1,)
    assert sign_normalized((0, -2, 4)) == (0, 1, -2)


def test_snf_frozen_diag_example():
    # oracle: 1x1 minors gcd(2,3)=1; the single 2x2 minor is 6
    snf = smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert snf.invariant_factors() == (1, 6)


def test_snf_frozen_rectangular_example():
    m = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    # frozen from invariant_factors_by_minor_gcd: divisors 2, 4, 624
    assert invariant_factors_by_minor_gcd(m) == (2, 2, 156)
    snf = smith_normal_form(IntMatrix.from_rows(m))
    assert snf.invariant_factors() == (2, 2, 156)


@settings(max_examples=150)
@given(tiny_matrices)
def test_snf_matches_minor_gcd_oracle(entries):
    snf = smith_normal_form(IntMatrix.from_rows(entries))
    assert snf.invariant_factors() == invariant_factors_by_minor_gcd(entries)


@settings(max_examples=150)
@given(small_matrices)
def test_snf_transforms_are_unimodular_witnesses(entries):
    m = IntMatrix.from_rows(entries)
    snf = smith_normal_form(m)
    assert snf.left.mul(m).mul(snf.right).entries == snf.diag.entries
    assert abs(det(snf.left)) == 1
    assert abs(det(snf.right)) == 1
    facs = snf.invariant_factors()
    assert all(d >= 0 for d in facs)
    for a, b in zip(facs, facs[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
    # off-diagonal must be zero
    for i, row in enumerate(snf.diag.entries):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0


def test_kernel_of_projective_plane_ray_matrix():
    # rays of the projective plane as columns: e1, e2, -e1-e2
    m = IntMatrix.from_rows([[1, 0, -1], [0, 1, -1]])
    k = kernel_basis(m)
    assert k.cols == 1
    assert sign_normalized(k.column(0)) == (1, 1, 1)


@settings(max_examples=150)
@given(small_matrices)
def test_kernel_annihilates_and_is_saturated(entries):
    m = IntMatrix.from_rows(entries)
    k = kernel_basis(m)
    assert m.cols == k.rows
    prod = m.mul(k)
    assert all(all(x == 0 for x in row) for row in prod.entries)
    if k.cols:
        rows = [k.column(j) for j in range(k.cols)]
        facs = smith_normal_form(IntMatrix.from_rows(rows)).invariant_factors()
        assert all(f == 1 for f in facs)
    assert k.cols == m.cols - matrix_rank(entries)


def test_cokernel_of_line_ray_matrix():
    # P^1: ray matrix transpose is the 2x1 matrix (1, -1)^T, cokernel Z
    m = IntMatrix.from_rows([[1], [-1]])
    ck = cokernel(m)
    assert ck.free_rank == 1
    assert ck.torsion == ()
    row = ck.projection.row(0)
    assert row in ((1, 1), (-1, -1))


def test_cokernel_torsion():
    ck = cokernel(IntMatrix.from_rows([[2, 0], [0, 1]]))
    assert ck.free_rank == 0
    assert ck.torsion == (2,)
    assert ck.torsion_projection.rows == 1


@settings(max_examples=100)
@given(small_matrices)
def test_cokernel_projection_kills_image(entries):
    m = IntMatrix.from_rows(entries)
    ck = cokernel(m)
    if ck.free_rank:
        prod = ck.projection.mul(m)
        assert all(all(x == 0 for x in row) for row in prod.entries)
        # rows of a unimodular matrix: the projection is onto
        facs = smith_normal_form(ck.projection).invariant_factors()
        assert all(f == 1 for f in facs)


def test_row_hnf_is_basis_invariant():
    a = row_hnf([(2, 4), (0, 6)])
    b = row_hnf([(2, 10), (0, 6), (2, 4)])
    assert a == b == ((2, 4), (0, 6))


@settings(max_examples=100)
@given(
    st.lists(
        st.lists(st.integers(min_value=-7, max_value=7), min_size=3, max_size=3),
        min_size=1,
        max_size=3,
    ),
    st.integers(min_value=-3, max_value=3),
)
def test_row_hnf_stable_under_row_operations(rows, c):
    h1 = row_hnf(rows)
    mixed = [list(r) for r in rows]
    if len(mixed) >= 2:
        mixed[0] = [x + c * y for x, y in zip(mixed[0], mixed[1])]
    mixed.reverse()
    assert row_hnf(mixed) == h1


def test_saturated_row_basis():
    assert saturated_row_basis([(2, 2)], 2) == ((1, 1),)
    assert saturated_row_basis([(1, 0, 0), (0, 2, 2)], 3) == ((1, 0, 0), (0, 1, 1))
    assert saturated_row_basis([], 2) == ()
    assert saturated_row_basis([(1, 0), (0, 1)], 2) == ((1, 0), (0, 1))


@settings(max_examples=100)
@given(tiny_matrices)
def test_det_matches_cofactor_expansion(entries):
    n = min(len(entries), len(entries[0]))
    square = [row[:n] for row in entries[:n]]
    assert det(IntMatrix.from_rows(square)) == cofactor_det(square)
