import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bocskit import fixtures
from bocskit.exactalg import FqTower, Matrix, gf, solve_linear, FieldError, LinAlgError, CapError
from bocskit.exactalg.algebra import (AlgebraError, FdAlgebra, algebra_from_matrices, local_data,
                                      nilpotency_index, radical, restrict_scalars)
from bocskit.exactalg.linalg import (inverse, is_invertible, is_nilpotent, matmul, min_poly, nullspace,
                                     poly_eval_matrix, rank)

from oracles import rank_mod_p

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2)]


def truncated(F, k):
    """F[t]/(t^k) as an algebra of k x k matrices."""
    T = np.eye(k, k, -1, dtype=np.int64)
    return algebra_from_matrices([np.linalg.matrix_power(T, i) % F.p for i in range(k)], F)[0]


def product_of_fields(F):
    return algebra_from_matrices([np.diag([1, 0]), np.diag([0, 1])], F)[0]


def extension_over_prime(p, n):
    K = gf(p, n)
    return algebra_from_matrices([K.mult_matrix(K.pow(K.generator, i)) for i in range(n)], gf(p))[0]


# -- fields --

@pytest.mark.parametrize("p,n", FIELDS)
def test_every_nonzero_element_is_invertible(p, n):
    F = gf(p, n)
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,n", FIELDS)
def test_frobenius_is_automorphism_of_order_n(p, n):
    F = gf(p, n)
    els = np.arange(F.q)
    img = F.frobenius(els)
    assert sorted(np.asarray(img).tolist()) == list(range(F.q))
    a, b = np.meshgrid(els, els)
    assert np.array_equal(F.frobenius(F.mul(a, b)), F.mul(F.frobenius(a), F.frobenius(b)))
    assert F.frobenius_order() == n


def test_tower_embeddings_compose():
    T = FqTower(3, 4)
    x = np.arange(3)
    assert np.array_equal(T.embed(T.embed(x, 1, 2), 2, 4), T.embed(x, 1, 4))
    T6 = FqTower(2, 6)
    assert np.array_equal(T6.embed(T6.embed(np.arange(2), 1, 3), 3, 6), T6.embed(np.arange(2), 1, 6))
    # embeddings are ring maps
    F9, F81 = T.level(2), T.level(4)
    a, b = np.meshgrid(np.arange(9), np.arange(9))
    assert np.array_equal(T.embed(F9.mul(a, b), 2, 4), F81.mul(T.embed(a, 2, 4), T.embed(b, 2, 4)))
    assert np.array_equal(T.embed(F9.add(a, b), 2, 4), F81.add(T.embed(a, 2, 4), T.embed(b, 2, 4)))
    assert len(set(np.asarray(T.embed(np.arange(9), 2, 4)).tolist())) == 9


def test_field_errors():
    with pytest.raises(FieldError):
        gf(4)
    with pytest.raises(FieldError):
        gf(2, 20)
    with pytest.raises(FieldError):
        FqTower(2, 6).level(4)


# -- linear algebra --

@st.composite
def matrices(draw, max_dim=6):
    p, n = draw(st.sampled_from(FIELDS))
    F = gf(p, n)
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    return F, np.random.default_rng(seed).integers(0, F.q, (r, c))


@given(matrices())
def test_rank_matches_oracle_over_prime_fields(FA):
    F, A = FA
    if F.n == 1:
        assert rank(A, F) == rank_mod_p(A.tolist(), F.p)
    assert rank(A, F) <= min(A.shape)


@given(matrices())
def test_nullspace_is_kernel(FA):
    F, A = FA
    K = nullspace(A, F)
    assert K.shape[0] == A.shape[1] - rank(A, F)
    if K.shape[0]:
        assert not np.any(matmul(A, K.T, F))


@given(matrices(), st.integers(0, 2**32 - 1))
def test_solve_linear_resubstitution(FA, seed):
    F, A = FA
    rng = np.random.default_rng(seed)
    x = rng.integers(0, F.q, (A.shape[1], 1))
    b = matmul(A, x, F)
    sol = solve_linear(Matrix(F, A), Matrix(F, b))
    assert sol.consistent
    assert np.array_equal(matmul(A, sol.particular, F), b)


def test_solve_linear_examples():
    F = gf(2, 2)
    rng = np.random.default_rng(0)
    I = Matrix.identity(4, F)
    b = Matrix(F, rng.integers(0, 4, (4, 1)))
    sol = solve_linear(I, b)
    assert np.array_equal(sol.particular, b.entries) and sol.kernel.shape[0] == 0
    sol = solve_linear(Matrix.zero(3, 3, F), Matrix.zero(3, 1, F))
    assert sol.consistent and sol.kernel.shape[0] == 3
    A = Matrix(F, rng.integers(0, 4, (6, 6)))
    b = Matrix(F, rng.integers(0, 4, (6, 1)))
    sol = solve_linear(A, b)
    if sol.consistent:
        assert np.array_equal(matmul(A.entries, sol.particular, F), b.entries)
    assert not solve_linear(Matrix.zero(2, 2, F), Matrix(F, [[1], [0]])).consistent


def test_solve_linear_errors():
    with pytest.raises(LinAlgError):
        solve_linear(Matrix.identity(2, gf(2)), Matrix.zero(3, 1, gf(2)))
    with pytest.raises(LinAlgError):
        solve_linear(Matrix.identity(2, gf(2)), Matrix.zero(2, 1, gf(3)))
    with pytest.raises(LinAlgError):
        Matrix(gf(2), [[2]])
    with pytest.raises(CapError):
        Matrix.zero(1, 300, gf(2))


@given(matrices(max_dim=5))
def test_inverse_when_invertible(FA):
    F, A = FA
    if A.shape[0] != A.shape[1]:
        return
    if is_invertible(A, F):
        assert np.array_equal(matmul(A, inverse(A, F), F), np.eye(A.shape[0], dtype=np.int64))
    else:
        with pytest.raises(LinAlgError):
            inverse(A, F)


@given(matrices(max_dim=5))
def test_min_poly_annihilates(FA):
    F, A = FA
    if A.shape[0] != A.shape[1]:
        return
    assert not np.any(poly_eval_matrix(min_poly(A, F), A, F))


def test_matrix_is_immutable():
    M = Matrix(gf(3), [[1, 2], [0, 1]])
    with pytest.raises(ValueError):
        M.entries[0, 0] = 2
    assert (M @ M.inverse()) == Matrix.identity(2, gf(3))
    assert M.rank() <= 2


# -- algebras --

@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2)])
def test_radical_examples(p, n):
    F = gf(p, n)
    assert radical(product_of_fields(F)).shape[0] == 0
    A = truncated(F, 2)
    J = radical(A)
    assert J.shape[0] == 1
    t = A.basis_vector(1) if A.unit[0] else A.basis_vector(0)
    assert rank(np.vstack([J, t]), F) == 1
    assert not local_data(product_of_fields(F)).is_local
    ld = local_data(truncated(F, 3))
    assert ld.is_local and ld.k_dim_of_residue == 1


@pytest.mark.parametrize("p", [2, 3])
def test_extension_field_is_local_with_residue_three(p):
    ld = local_data(extension_over_prime(p, 3))
    assert ld.is_local and ld.k_dim_of_residue == 3 and ld.radical_dim == 0


def test_a2_path_algebra_radical_is_the_arrow():
    from bocskit.fdmod import Quiver, path_algebra
    A = path_algebra(Quiver(2, ((0, 1),)), gf(2))
    J = radical(A)
    assert J.shape[0] == 1
    assert np.array_equal(J[0], A.basis_vector(A.labels.index("a0")))


@pytest.mark.parametrize("name", fixtures.algebra_names())
def test_radical_is_nilpotent_ideal(name):
    A = FdAlgebra.from_json(fixtures.load(f"algebras/{name}.json"))
    J = radical(A)
    t = nilpotency_index(A, J)
    assert t is not None and t <= A.dim + 1
    F = A.field
    for x in J:
        for i in range(A.dim):
            b = A.basis_vector(i)
            for y in (A.product(b, x), A.product(x, b)):
                assert rank(np.vstack([J, y]), F) == J.shape[0]


@pytest.mark.parametrize("name", fixtures.algebra_names())
def test_local_iff_units_or_nilpotents(name):
    A = FdAlgebra.from_json(fixtures.load(f"algebras/{name}.json"))
    F = A.field
    if F.q ** A.dim > 2 ** 12:
        pytest.skip("too many elements to enumerate")
    every = all(is_invertible(A.left_matrix(x), F) or is_nilpotent(A.left_matrix(x), F)
                for x in itertools.product(range(F.q), repeat=A.dim))
    assert local_data(A).is_local == every


def test_algebra_json_round_trip_and_validation():
    A = truncated(gf(2, 2), 3)
    B = FdAlgebra.from_json(A.to_json())
    assert np.array_equal(A.mul, B.mul) and np.array_equal(A.unit, B.unit)
    bad = A.to_json()
    bad["unit"] = [[0, 0]] * 3
    with pytest.raises(AlgebraError):
        FdAlgebra.from_json(bad)


def test_radical_over_extension_field_agrees_with_restriction():
    A = truncated(gf(2, 2), 3)
    R = restrict_scalars(A)
    assert radical(R).shape[0] == 2 * radical(A).shape[0]
