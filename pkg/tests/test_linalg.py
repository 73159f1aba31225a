import itertools
import random
from fractions import Fraction

import pytest

from epnet.linalg import (
    Matrix,
    check_gp1,
    check_gp2,
    check_limiting_identity,
    circular_minor,
    delta,
    determinant,
    limiting_ground,
    rand_matrix,
    rand_symmetric,
    rand_symmetric_zero_sum,
)
from epnet.pairs import Pair, enumerate_pairs


def det_oracle(m):
    # permutation expansion, independent of the elimination code
    n = m.nrows
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n)
                  if perm[i] > perm[j])
        term = Fraction((-1) ** inv)
        for i in range(n):
            term *= m.entries[i][perm[i]]
        total += term
    return total


def test_determinant_examples():
    assert determinant(Matrix([[2]])) == 2
    assert determinant(Matrix([])) == 1
    assert determinant(Matrix([[1, 2], [3, 4]])) == -2
    with pytest.raises(ValueError):
        determinant(Matrix([[1, 2]]))


def test_determinant_against_permanent_expansion():
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randint(1, 5)
        m = rand_matrix(rng, n)
        assert determinant(m) == det_oracle(m)


def test_determinant_singular_and_multiplicative():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(2, 5)
        a, b = rand_matrix(rng, n), rand_matrix(rng, n)
        prod = Matrix([[sum(a.entries[i][t] * b.entries[t][j] for t in range(n))
                        for j in range(n)] for i in range(n)])
        assert determinant(prod) == determinant(a) * determinant(b)
    # duplicate row
    m = Matrix([[1, 2, 3], [4, 5, 6], [1, 2, 3]])
    assert determinant(m) == 0


def test_delta_examples():
    m = Matrix([[Fraction(1), Fraction(2)], [Fraction(3), Fraction(5)]])
    g = ([1, 2], [1, 2])
    assert delta(m, g, [1], [1]) == m.entry(2, 2)
    assert delta(m, g, [1, 2], [1, 2]) == 1
    assert delta(m, g) == determinant(m)
    with pytest.raises(ValueError):
        delta(m, g, [3], [])          # unknown label
    with pytest.raises(ValueError):
        delta(m, g, [1], [])          # non-square result


def test_delta_respects_ground_order():
    # ground picks rows/cols in the given order, so swapping flips sign
    m = Matrix([[1, 2, 0], [3, 4, 0], [0, 0, 1]])
    assert delta(m, ([1, 2], [1, 2])) == -2
    assert delta(m, ([2, 1], [1, 2])) == 2


def test_circular_minor():
    rng = random.Random(3)
    m = rand_symmetric(rng, 5)
    assert circular_minor(m, Pair(5)) == 1
    assert circular_minor(m, Pair(5, (2,), (4,))) == m.entry(2, 4)
    for p in enumerate_pairs(5):
        assert circular_minor(m, p) == circular_minor(m, p.flip())
    with pytest.raises(ValueError):
        circular_minor(m, Pair(4, (1,), (2,)))


def test_gp1_trivial_2x2():
    rng = random.Random(4)
    for _ in range(20):
        m = rand_matrix(rng, 2)
        assert check_gp1(m, ([1, 2], [1, 2]), 1, 2, 1, 2)


def test_gp1_zero_row_degenerate():
    m = Matrix([[0, 0, 0], [1, 2, 3], [4, 5, 6]])
    assert check_gp1(m, ([1, 2, 3], [1, 2, 3]), 1, 2, 1, 3)


def test_gp1_all_label_choices_random_matrices():
    rng = random.Random(5)
    count = 0
    for _ in range(25):
        n = rng.randint(2, 5)
        m = rand_matrix(rng, n)
        g = (list(range(1, n + 1)), list(range(1, n + 1)))
        for a, b in itertools.combinations(range(1, n + 1), 2):
            for c, d in itertools.combinations(range(1, n + 1), 2):
                assert check_gp1(m, g, a, b, c, d)
                count += 1
    assert count > 200


def test_gp1_precondition_errors():
    m = Matrix([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        check_gp1(m, ([1, 2], [1, 2]), 2, 1, 1, 2)  # b above a
    with pytest.raises(ValueError):
        check_gp1(m, ([1, 2], [1, 2]), 1, 2, 2, 1)  # d left of c


def test_gp2_small_and_random():
    rng = random.Random(6)
    for _ in range(60):
        k = rng.randint(2, 5)
        m = rand_matrix(rng, k + 1, k)
        g = (list(range(1, k + 2)), list(range(1, k + 1)))
        rows = sorted(rng.sample(range(1, k + 2), 3))
        d = rng.randint(1, k)
        assert check_gp2(m, g, rows[0], rows[1], rows[2], d)


def test_gp2_repeated_rows():
    m = Matrix([[1, 2], [1, 2], [3, 7]])
    assert check_gp2(m, ([1, 2, 3], [1, 2]), 1, 2, 3, 1)


def test_gp2_shape_validation():
    m = Matrix([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        check_gp2(m, ([1, 2], [1, 2]), 1, 2, 2, 1)


def test_gp2_sub_ground_blocks():
    # ground sets need not be the whole matrix
    rng = random.Random(7)
    m = rand_matrix(rng, 6, 6)
    g = ([2, 4, 5, 6], [1, 3, 5])
    assert check_gp2(m, g, 2, 4, 6, 3)


def test_limiting_identity_spec_cases():
    rng = random.Random(8)
    for m in [rand_matrix(rng, 8) for _ in range(5)]:
        assert check_limiting_identity(m, 8, 2)
    for m in [rand_matrix(rng, 6) for _ in range(5)]:
        assert check_limiting_identity(m, 6, 1)
    zero = Matrix([[0] * 6 for _ in range(6)])
    assert check_limiting_identity(zero, 6, 1)


def test_limiting_identity_full_range():
    rng = random.Random(9)
    for n in (6, 8, 10):
        for k in range(1, n // 2 - 1):
            for _ in range(3):
                assert check_limiting_identity(rand_matrix(rng, n), n, k)
                assert check_limiting_identity(rand_symmetric(rng, n), n, k)


def test_limiting_ground_validation():
    with pytest.raises(ValueError):
        limiting_ground(7, 1)   # odd n
    with pytest.raises(ValueError):
        limiting_ground(6, 0)
    with pytest.raises(ValueError):
        limiting_ground(6, 5)   # column labels collide
    (rows, cols), (b, c, d, e, f, g) = limiting_ground(8, 2)
    assert rows == [4, 5, 6] and cols == [2, 1, 8, 7]
    assert (b, c, d, e, f, g) == (5, 6, 2, 1, 8, 7)
    # k=1 wraps f around the circle onto label 1
    _, labels = limiting_ground(6, 1)
    assert labels == (3, 4, 2, 1, 1, 6)


def test_random_matrix_shapes():
    rng = random.Random(10)
    m = rand_symmetric_zero_sum(rng, 5)
    assert m.is_symmetric()
    for i in range(5):
        assert sum(m.entries[i]) == 0
    assert rand_matrix(rng, 3, 4).ncols == 4
    assert rand_symmetric(rng, 4).is_symmetric()
