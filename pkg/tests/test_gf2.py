import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgp_erasure import gf2

import oracles


def mat(rows):
    return gf2.BinaryMatrix.from_dense(rows)


def vec(bits):
    return gf2.BinaryVector.from_bits(bits)


class TestMatVecMul:
    def test_worked_example(self):
        m = mat([[1, 1, 0], [0, 1, 1]])
        assert gf2.mat_vec_mul(m, vec([0, 1, 0])).to_bits().tolist() == [1, 1]

    def test_zero_vector(self):
        m = mat([[1, 0, 1], [1, 1, 1]])
        assert gf2.mat_vec_mul(m, gf2.BinaryVector.zeros(3)).is_zero()

    def test_identity(self):
        m = gf2.BinaryMatrix.identity(3)
        assert gf2.mat_vec_mul(m, vec([1, 0, 1])).to_bits().tolist() == [1, 0, 1]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            gf2.mat_vec_mul(mat([[1, 0]]), vec([1, 0, 1]))

    def test_linearity_fuzz(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            rows, cols = rng.integers(1, 80, size=2)
            m = mat(oracles.random_binary_matrix(rng, rows, cols))
            v = vec(rng.integers(0, 2, cols, dtype=np.uint8))
            w = vec(rng.integers(0, 2, cols, dtype=np.uint8))
            assert gf2.mat_vec_mul(m, v ^ w) == gf2.mat_vec_mul(m, v) ^ gf2.mat_vec_mul(m, w)


class TestRank:
    def test_worked_example(self):
        # Independent rows: enumeration of the 4 row combinations gives
        # 3 distinct nonzero sums, hence rank 2.
        assert gf2.rank(mat([[1, 1, 0], [0, 1, 1]])) == 2

    def test_zero_matrix(self):
        assert gf2.rank(gf2.BinaryMatrix.zeros(3, 4)) == 0

    def test_identity(self):
        assert gf2.rank(gf2.BinaryMatrix.identity(7)) == 7

    def test_input_unmodified(self):
        m = mat([[1, 1], [1, 1]])
        before = m.words.copy()
        gf2.rank(m)
        assert np.array_equal(m.words, before)

    def test_against_dense_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(60):
            rows, cols = rng.integers(1, 70, size=2)
            dense = oracles.random_binary_matrix(rng, rows, cols)
            assert gf2.rank(mat(dense)) == oracles.dense_rank(dense)


class TestSolveConstrained:
    def test_worked_example(self):
        m = mat([[1, 1, 0], [0, 1, 1]])
        s = vec([1, 0])
        e = gf2.solve_constrained(m, s, {0, 1, 2})
        assert e is not None
        assert gf2.mat_vec_mul(m, e) == s

    def test_empty_support_zero_syndrome(self):
        m = mat([[1, 1, 0], [0, 1, 1]])
        e = gf2.solve_constrained(m, gf2.BinaryVector.zeros(2), set())
        assert e is not None and e.is_zero()

    def test_no_solution(self):
        # Column 1 is zero, so no vector supported there can produce s=[1].
        assert gf2.solve_constrained(mat([[1, 0]]), vec([1]), {1}) is None

    def test_support_containment_fuzz(self):
        rng = np.random.default_rng(17)
        for _ in range(80):
            rows, cols = rng.integers(1, 40, size=2)
            dense = oracles.random_binary_matrix(rng, rows, cols)
            m = mat(dense)
            support = set(
                int(i) for i in rng.choice(cols, size=rng.integers(0, cols + 1), replace=False)
            )
            s = vec(rng.integers(0, 2, rows, dtype=np.uint8))
            e = gf2.solve_constrained(m, s, support)
            if e is not None:
                assert gf2.mat_vec_mul(m, e) == s
                assert set(e.support().tolist()) <= support

    def test_agrees_with_enumeration_small(self):
        # Exhaustive cross-check on everything with <= 12 support columns.
        rng = np.random.default_rng(23)
        for _ in range(60):
            rows = int(rng.integers(1, 8))
            cols = int(rng.integers(1, 12))
            dense = oracles.random_binary_matrix(rng, rows, cols)
            m = mat(dense)
            support = sorted(
                int(i) for i in rng.choice(cols, size=rng.integers(0, cols + 1), replace=False)
            )
            s_bits = rng.integers(0, 2, rows, dtype=np.uint8)
            sols = oracles.solve_enum(dense, s_bits, support)
            e = gf2.solve_constrained(m, vec(s_bits), support)
            if sols:
                assert e is not None
                assert any(np.array_equal(e.to_bits(), x) for x in sols)
            else:
                assert e is None


class TestKernelBasis:
    def test_worked_example(self):
        # ker [[1,1,0],[0,1,1]] = {000, 111} by enumerating all 8 vectors.
        basis = gf2.kernel_basis(mat([[1, 1, 0], [0, 1, 1]]))
        assert len(basis) == 1
        assert basis[0].to_bits().tolist() == [1, 1, 1]

    def test_identity_has_trivial_kernel(self):
        assert gf2.kernel_basis(gf2.BinaryMatrix.identity(5)) == []

    def test_zero_matrix_full_kernel(self):
        basis = gf2.kernel_basis(gf2.BinaryMatrix.zeros(1, 2))
        assert len(basis) == 2
        assert oracles.span_rank([b.to_bits() for b in basis]) == 2

    def test_rank_nullity_and_membership_fuzz(self):
        rng = np.random.default_rng(31)
        for _ in range(60):
            rows, cols = rng.integers(1, 50, size=2)
            dense = oracles.random_binary_matrix(rng, rows, cols)
            m = mat(dense)
            basis = gf2.kernel_basis(m)
            assert gf2.rank(m) + len(basis) == m.cols
            for k in basis:
                assert gf2.mat_vec_mul(m, k).is_zero()
            if basis:
                assert oracles.span_rank([b.to_bits() for b in basis]) == len(basis)

    def test_span_equals_enumerated_kernel(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            dense = oracles.random_binary_matrix(rng, int(rng.integers(1, 6)), 8)
            basis = gf2.kernel_basis(mat(dense))
            expected = {tuple(v) for v in oracles.kernel_enum(dense)}
            got = set()
            import itertools

            for picks in itertools.product([0, 1], repeat=len(basis)):
                acc = np.zeros(8, dtype=np.uint8)
                for p, b in zip(picks, basis):
                    if p:
                        acc ^= b.to_bits()
                got.add(tuple(acc))
            assert got == expected


class TestInRowSpace:
    def test_worked_example(self):
        m = mat([[1, 1, 0], [0, 1, 1]])
        assert gf2.in_row_space(m, vec([1, 0, 1]))  # row0 + row1

    def test_zero_vector(self):
        assert gf2.in_row_space(mat([[1, 0, 1]]), gf2.BinaryVector.zeros(3))

    def test_outside(self):
        assert not gf2.in_row_space(mat([[1, 1, 0]]), vec([1, 0, 0]))

    def test_every_row_is_member(self):
        rng = np.random.default_rng(41)
        for _ in range(30):
            rows, cols = rng.integers(1, 40, size=2)
            m = mat(oracles.random_binary_matrix(rng, rows, cols))
            for i in range(m.rows):
                assert gf2.in_row_space(m, m.row(i))

    def test_against_enumeration(self):
        rng = np.random.default_rng(43)
        for _ in range(40):
            rows = int(rng.integers(1, 7))
            cols = int(rng.integers(1, 10))
            dense = oracles.random_binary_matrix(rng, rows, cols)
            v = rng.integers(0, 2, cols, dtype=np.uint8)
            assert gf2.in_row_space(mat(dense), vec(v)) == oracles.in_span_enum(dense, v)

    def test_cache_invalidated_on_set(self):
        m = mat([[1, 0]])
        assert not gf2.in_row_space(m, vec([0, 1]))
        m.set(0, 1, 1)
        m.set(0, 0, 0)
        assert gf2.in_row_space(m, vec([0, 1]))


class TestSolveProbabilistic:
    def test_matches_reference_examples(self):
        rng = np.random.default_rng(2024)
        m = mat([[1, 1, 0], [0, 1, 1]])
        e = gf2.solve_probabilistic(m, vec([1, 0]), {0, 1, 2}, rng)
        assert e is not None and gf2.mat_vec_mul(m, e) == vec([1, 0])
        assert gf2.solve_probabilistic(mat([[1, 0]]), vec([1]), {1}, rng) is None
        z = gf2.solve_probabilistic(m, gf2.BinaryVector.zeros(2), set(), rng)
        assert z is not None and z.is_zero()

    def test_differential_against_deterministic(self):
        rng = np.random.default_rng(99)
        for trial in range(25):
            dense = oracles.random_binary_matrix(rng, 20, 30)
            m = mat(dense)
            support = sorted(
                int(i) for i in rng.choice(30, size=rng.integers(1, 18), replace=False)
            )
            s = vec(rng.integers(0, 2, 20, dtype=np.uint8))
            det = gf2.solve_constrained(m, s, support)
            prob = gf2.solve_probabilistic(m, s, support, rng)
            if det is None:
                assert prob is None
            else:
                assert prob is not None
                assert gf2.mat_vec_mul(m, prob) == s
                assert set(prob.support().tolist()) <= set(support)


class TestVectorBasics:
    def test_out_of_range_access(self):
        v = gf2.BinaryVector.zeros(5)
        with pytest.raises(IndexError):
            v.get(5)
        m = gf2.BinaryMatrix.zeros(2, 3)
        with pytest.raises(IndexError):
            m.get(0, 3)

    def test_padding_stays_zero(self):
        v = gf2.BinaryVector.from_bits([1] * 70)
        w = v ^ v
        assert w.is_zero() and not w.words.any()
        assert v.weight() == 70

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_bits(self, bits):
        v = gf2.BinaryVector.from_bits(bits)
        assert v.to_bits().tolist() == bits
        assert v.weight() == sum(bits)

    @given(
        st.integers(1, 120),
        st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=40, deadline=None)
    def test_xor_associative_commutative(self, n, seed):
        rng = np.random.default_rng(seed)
        a = vec(rng.integers(0, 2, n, dtype=np.uint8))
        b = vec(rng.integers(0, 2, n, dtype=np.uint8))
        c = vec(rng.integers(0, 2, n, dtype=np.uint8))
        assert (a ^ b) == (b ^ a)
        assert ((a ^ b) ^ c) == (a ^ (b ^ c))
