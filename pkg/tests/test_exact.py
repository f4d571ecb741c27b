"""Field arithmetic and dense matrix kernels against independent oracles."""

import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy

from formspan.exact import GF, QQ, FieldSpec, Matrix, RowSpan, is_prime, rank_bitrows


def sympy_rank_q(rows):
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(v) for v in r] for r in rows]).rank()


def minor_rank_gfp(rows, p):
    """Rank over GF(p): the largest k with a k x k minor not divisible by p."""
    if not rows:
        return 0
    m = sympy.Matrix(rows)
    best = 0
    for k in range(1, min(m.rows, m.cols) + 1):
        found = False
        for ri in combinations(range(m.rows), k):
            for ci in combinations(range(m.cols), k):
                if int(m[ri, ci].det()) % p != 0:
                    found = True
                    break
            if found:
                break
        if found:
            best = k
        else:
            break
    return best


def test_is_prime():
    assert [p for p in range(50) if is_prime(p)] == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    ]
    assert is_prime(2**31 - 1)
    assert not is_prime(2**32 + 1)


def test_field_validation():
    with pytest.raises(ValueError):
        FieldSpec("GF", 4)
    with pytest.raises(ValueError):
        FieldSpec("GF", 1)
    with pytest.raises(ValueError):
        FieldSpec("Q", 3)
    with pytest.raises(ValueError):
        FieldSpec("R")
    assert GF(7) == FieldSpec("GF", 7)
    assert GF(7) != GF(5)
    assert QQ == FieldSpec("Q")


def test_field_arithmetic():
    F = GF(7)
    assert F.coerce(10) == 3
    assert F.add(5, 4) == 2
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5
    assert F.neg(2) == 5
    assert F.div(1, 3) == 5
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    assert QQ.coerce("1/2") == Fraction(1, 2)
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert QQ.coerce(-3) == Fraction(-3)


def test_rref_identity_gf2():
    m = Matrix.from_rows(GF(2), [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    r, pivots = m.rref()
    assert r == m
    assert pivots == (0, 1, 2)


def test_rref_zero_matrix():
    m = Matrix.from_rows(GF(5), [[0, 0, 0], [0, 0, 0]])
    r, pivots = m.rref()
    assert r == m
    assert pivots == ()


def test_rref_duplicate_rows_gf2():
    m = Matrix.from_rows(GF(2), [[1, 1], [1, 1]])
    r, pivots = m.rref()
    assert r.row_lists() == [[1, 1], [0, 0]]
    assert pivots == (0,)


def test_rref_idempotent():
    rng = random.Random(11)
    for _ in range(40):
        field = rng.choice([GF(2), GF(5), QQ])
        rows = [
            [rng.randint(-3, 3) for _ in range(rng.randint(1, 4))]
            for _ in range(rng.randint(1, 4))
        ]
        rows = [r[: len(rows[0])] + [0] * (len(rows[0]) - len(r)) for r in rows]
        m = Matrix.from_rows(field, rows)
        r1, p1 = m.rref()
        r2, p2 = r1.rref()
        assert r1 == r2 and p1 == p2


def test_rank_examples():
    m = Matrix.from_rows(GF(2), [[1, 0], [0, 1], [1, 1]])
    assert m.rank() == 2
    assert Matrix(QQ, 0, 3, []).rank() == 0
    fano = Matrix.from_rows(
        GF(2),
        [[0, 0, 1], [0, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1]],
    )
    assert fano.rank() == 3


def test_rank_against_oracles():
    rng = random.Random(7)
    for _ in range(60):
        nr, nc = rng.randint(1, 5), rng.randint(1, 5)
        ints = [[rng.randint(-4, 4) for _ in range(nc)] for _ in range(nr)]
        assert Matrix.from_rows(QQ, ints).rank() == sympy_rank_q(ints)
        for p in (2, 3, 7):
            m = Matrix.from_rows(GF(p), ints)
            assert m.rank() == minor_rank_gfp(ints, p)


def test_rank_invariance_row_ops():
    rng = random.Random(3)
    for _ in range(30):
        field = rng.choice([GF(3), QQ])
        rows = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(4)]
        m = Matrix.from_rows(field, rows)
        rng.shuffle(rows)
        factors = [field.coerce(rng.choice([1, 2, -1])) for _ in rows]
        scaled = [
            [field.mul(f, field.coerce(v)) for v in r]
            for f, r in zip(factors, rows)
        ]
        assert Matrix.from_rows(field, scaled).rank() == m.rank()


def test_kernel_examples():
    m = Matrix.from_rows(QQ, [[1, 0, 0]])
    k = m.kernel_basis()
    assert (k.rows, k.cols) == (3, 2)
    assert k.column(0) == (Fraction(0), Fraction(1), Fraction(0))
    assert k.column(1) == (Fraction(0), Fraction(0), Fraction(1))

    inv = Matrix.from_rows(QQ, [[2, 1], [1, 1]])
    assert inv.kernel_basis().cols == 0

    m2 = Matrix.from_rows(GF(2), [[1, 1]])
    k2 = m2.kernel_basis()
    assert k2.cols == 1 and k2.column(0) == (1, 1)


def test_kernel_and_rank_random():
    rng = random.Random(19)
    for _ in range(60):
        field = rng.choice([GF(2), GF(3), GF(7), QQ])
        nr, nc = rng.randint(1, 5), rng.randint(1, 5)
        m = Matrix.from_rows(
            field, [[rng.randint(-3, 3) for _ in range(nc)] for _ in range(nr)]
        )
        k = m.kernel_basis()
        assert m.rank() + k.cols == nc
        if k.cols:
            assert (m * k).is_zero()
        # kernel columns are independent
        assert k.transpose().rank() == k.cols


def test_matmul_against_sympy():
    rng = random.Random(23)
    for _ in range(20):
        a = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(2)]
        b = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(3)]
        got = Matrix.from_rows(QQ, a) * Matrix.from_rows(QQ, b)
        want = sympy.Matrix(a) * sympy.Matrix(b)
        assert [[int(want[i, j]) for j in range(2)] for i in range(2)] == [
            [int(v) for v in got.row(i)] for i in range(2)
        ]


def test_rowspan_and_bitrows_agree():
    rng = random.Random(31)
    for _ in range(40):
        rows = [[rng.randint(0, 1) for _ in range(6)] for _ in range(5)]
        span = RowSpan(GF(2), 6)
        for r in rows:
            span.add(r)
        packed = [sum(1 << j for j, v in enumerate(r) if v) for r in rows]
        assert span.rank == rank_bitrows(packed)


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        Matrix.from_rows(QQ, [[1, 2], [1]])
