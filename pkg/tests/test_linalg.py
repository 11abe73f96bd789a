from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from k3lab import linalg
from k3lab.lattice import e8_cartan, k3_lattice

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def test_e8_determinant_and_signature():
    g = e8_cartan().gram
    assert linalg.det(g) == 1
    assert linalg.symmetric_signature(g) == (8, 0, 0)
    assert linalg.is_positive_definite(g)


def test_k3_signature():
    assert linalg.symmetric_signature(k3_lattice().gram) == (3, 19, 0)


def test_signature_degenerate():
    assert linalg.symmetric_signature([[0, 1], [1, 0]]) == (1, 1, 0)
    assert linalg.symmetric_signature([[1, 2], [2, 4]]) == (1, 0, 1)
    assert linalg.symmetric_signature([[0, 0], [0, 0]]) == (0, 0, 2)


@given(square(4))
def test_inverse_roundtrip(m):
    if linalg.det(m) == 0:
        return
    inv = linalg.inverse(m)
    assert linalg.matmul(m, inv) == linalg.identity(4)


@given(square(4))
def test_det_multiplicative(m):
    m2 = linalg.matmul(m, linalg.transpose(m))
    assert linalg.det(m2) == linalg.det(m) ** 2


@settings(max_examples=50)
@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_integer_kernel_is_kernel(rows):
    ker = linalg.integer_kernel(rows, 5)
    assert len(ker) == 5 - linalg.rank(rows)
    for k in ker:
        assert all(x.denominator == 1 for x in map(Fraction, k))
        assert all(sum(a * b for a, b in zip(r, k)) == 0 for r in rows)


def test_smith_invariants():
    assert linalg.smith_invariants([[2, 4], [6, 8]]) == [2, 4]
    assert linalg.smith_invariants([[1, 0, 0], [0, 1, 0]]) == [1, 1]


@given(square(3))
def test_signature_congruence_invariant(m):
    sym = linalg.mat_add(m, linalg.transpose(m))
    p = [[1, 2, 0], [0, 1, 0], [3, 0, 1]]
    cong = linalg.matmul(linalg.matmul(linalg.transpose(p), sym), p)
    assert linalg.symmetric_signature(sym) == linalg.symmetric_signature(cong)
