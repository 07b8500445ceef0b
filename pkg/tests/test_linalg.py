import random
from fractions import Fraction

from dp4lag import linalg
from dp4lag.exactpoly import MPoly, VarTable

AB = VarTable(("a", "b"))


def random_matrix(rng, rows, cols, span=6):
    return [[Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(cols)] for _ in range(rows)]


class TestKernel:
    def test_kernel_annihilated(self):
        rng = random.Random(3)
        for _ in range(25):
            m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 7))
            basis = linalg.kernel(m)
            assert len(basis) == len(m[0]) - linalg.rank(m)
            for v in basis:
                assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in m)

    def test_kernel_of_empty_row_list(self):
        basis = linalg.kernel([], 3)
        assert len(basis) == 3

    def test_rank_matches_modular(self):
        rng = random.Random(5)
        p = 2**61 - 1
        for _ in range(10):
            m = random_matrix(rng, rng.randint(2, 6), rng.randint(2, 6))
            assert linalg.rank(m) == linalg.rank_mod_p(m, p)

    def test_primitive_vector(self):
        vec = [Fraction(-2, 3), Fraction(4, 3), Fraction(0)]
        assert linalg.primitive_integer_vector(vec) == [1, -2, 0]


class TestDet:
    def test_known_det(self):
        m = [[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]
        assert linalg.det(m) == 1

    def test_singular(self):
        m = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
        assert linalg.det(m) == 0

    def test_inverse(self):
        rng = random.Random(11)
        while True:
            m = random_matrix(rng, 3, 3)
            if linalg.det(m) != 0:
                break
        assert linalg.mat_mul(m, linalg.mat_inverse(m)) == linalg.identity(3)


class TestPolyMatrices:
    def test_det_matches_rational(self):
        rng = random.Random(13)
        for _ in range(5):
            m = random_matrix(rng, 4, 4)
            rows = [[MPoly.const(AB, x) for x in row] for row in m]
            assert linalg.mpoly_det(rows) == MPoly.const(AB, linalg.det(m))

    def test_companion_char_poly(self):
        a = MPoly.variable(AB, "a")
        rows = [[a, MPoly.const(AB, -1)], [MPoly.const(AB, -1), a]]
        assert linalg.mpoly_det(rows) == a * a - 1

    def test_kernel_with_polynomial_entries(self):
        a = MPoly.variable(AB, "a")
        b = MPoly.variable(AB, "b")
        one = MPoly.const(AB, 1)
        # rank-1 system: (a, b, 1) as a single row, kernel has dimension 2
        rows = [[a, b, one]]
        vectors, pivot_product, pivots = linalg.mpoly_kernel(rows)
        assert len(vectors) == 2
        assert pivot_product == a
        for v in vectors:
            acc = MPoly.zero(AB)
            for entry, comp in zip(rows[0], v):
                acc = acc + entry * comp
            assert acc.is_zero()

    def test_kernel_rank_two(self):
        a = MPoly.variable(AB, "a")
        b = MPoly.variable(AB, "b")
        one = MPoly.const(AB, 1)
        zero = MPoly.zero(AB)
        rows = [[a, b, one], [zero, a, b], [a, a + b, one + b]]  # third = first + second
        vectors, _, _ = linalg.mpoly_kernel(rows)
        assert len(vectors) == 1
        for row in rows:
            acc = MPoly.zero(AB)
            for entry, comp in zip(row, vectors[0]):
                acc = acc + entry * comp
            assert acc.is_zero()
