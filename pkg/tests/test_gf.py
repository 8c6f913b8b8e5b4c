import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from charp.gf import (FiniteField, FqMatrix, FqPolynomial, field_create, mat_kernel, mat_mul, mat_rank,
                      poly_gcd)

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (5, 2)]


def test_field_create_examples():
    F = field_create(5)
    assert F.q == 5
    F4 = field_create(2, 2)
    assert F4.modulus == (1, 1, 1)
    with pytest.raises(ValueError):
        field_create(4, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FiniteField(2, 2, (1, 0, 1))        # x^2 + 1 = (x + 1)^2 over GF(2)


def test_modulus_is_lexicographically_first():
    assert field_create(5, 2).modulus == (2, 0, 1)
    assert field_create(3, 2).modulus == (1, 0, 1)


@pytest.mark.parametrize("p,n", FIELDS)
def test_field_tables_exhaustive(p, n):
    F = field_create(p, n)
    els = np.arange(F.q)
    a, b = np.meshgrid(els, els)
    s, m = F.add(a, b), F.mul(a, b)
    assert np.array_equal(s, s.T) and np.array_equal(m, m.T)
    assert np.array_equal(F.sub(s, b), a)
    nz = els[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    # multiplicative group is cyclic of order q - 1
    assert len({int(F.power(F.generator, k)) for k in range(F.q - 1)}) == F.q - 1


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pn, data):
    F = field_create(*pn)
    x, y, z = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.add(F.add(x, y), z) == F.add(x, F.add(y, z))
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    # Frobenius is a ring homomorphism
    assert F.frobenius(F.add(x, y)) == F.add(F.frobenius(x), F.frobenius(y))
    assert F.frobenius(F.mul(x, y)) == F.mul(F.frobenius(x), F.frobenius(y))


@pytest.mark.parametrize("p,n", FIELDS)
def test_frobenius_fixes_prime_field(p, n):
    F = field_create(p, n)
    fixed = [a for a in range(F.q) if F.frobenius(a) == a]
    assert len(fixed) == p


def test_element_wrapper():
    F = field_create(5)
    a, b = F(2), F(4)
    assert int(a + b) == 1 and int(a * b) == 3 and int(a / b) == 3 and int(a ** 4) == 1


def test_rank_examples():
    F = field_create(5)
    assert mat_rank(F, np.zeros((3, 3), dtype=np.int64)) == 0
    assert mat_rank(F, np.eye(4, dtype=np.int64)) == 4
    assert mat_kernel(F, np.eye(3, dtype=np.int64)) == []
    assert len(mat_kernel(F, np.zeros((2, 3), dtype=np.int64))) == 3


def test_kernel_1x2_over_gf5():
    F = field_create(5)
    (v,) = mat_kernel(F, np.array([[1, 2]]))
    # brute force: the kernel is {(-2t, t)}
    sols = {(a, b) for a in range(5) for b in range(5) if (a + 2 * b) % 5 == 0}
    assert {(int(F.mul(t, v[0])), int(F.mul(t, v[1]))) for t in range(5)} == sols


def _rank_by_minors(F, M):
    r, c = M.shape
    for k in range(min(r, c), 0, -1):
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                if _det(F, M[np.ix_(rows, cols)]) != 0:
                    return k
    return 0


def _det(F, A):
    # Laplace expansion, fine for k <= 4
    n = A.shape[0]
    if n == 1:
        return int(A[0, 0])
    acc = 0
    for j in range(n):
        minor = np.delete(np.delete(A, 0, 0), j, 1)
        term = F.mul(int(A[0, j]), _det(F, minor))
        acc = F.add(acc, term) if j % 2 == 0 else F.sub(acc, term)
    return int(acc)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=24, max_size=24))
def test_rank_matches_minors(entries):
    F = field_create(3)
    M = np.array(entries, dtype=np.int64).reshape(6, 4)
    assert mat_rank(F, M) == _rank_by_minors(F, M)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 7), st.integers(1, 7), st.integers(0, 2 ** 31))
def test_rank_nullity_and_kernel(pn, r, c, seed):
    F = field_create(*pn)
    rng = np.random.default_rng(seed)
    M = rng.integers(0, F.q, size=(r, c))
    K = mat_kernel(F, M)
    assert mat_rank(F, M) + len(K) == c
    for v in K:
        assert not mat_mul(F, M, v.reshape(-1, 1)).any()
    # permuting rows and columns does not change the rank
    P = M[rng.permutation(r)][:, rng.permutation(c)]
    assert mat_rank(F, P) == mat_rank(F, M)


def test_fqmatrix_solve():
    F = field_create(2, 2)
    A = FqMatrix(F, [[1, 2], [0, 3]])
    b = np.array([3, 1])
    x = A.solve(b)
    assert np.array_equal(mat_mul(F, A.entries, x.reshape(-1, 1)).ravel(), b)
    assert FqMatrix.identity(F, 3).rank() == 3


def test_polynomial_gcd():
    F = field_create(3)
    # x^2 + x + 2 and x^2 + 1 are irreducible over GF(3)
    f = FqPolynomial(F, [1, 1]) * FqPolynomial(F, [2, 1, 1])
    g = FqPolynomial(F, [1, 1]) * FqPolynomial(F, [1, 0, 1])
    assert poly_gcd(f, g) == FqPolynomial(F, [1, 1])
