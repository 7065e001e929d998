import numpy as np
import pytest

from hgp_erasure import gf2
from hgp_erasure.channel import ErasureSample, RngStream, sample, sample_with_erasure
from hgp_erasure.hgp import build_hgp
from hgp_erasure.tanner import PegParams, peg_generate


def seven_bit_code():
    return build_hgp(peg_generate(PegParams(num_bits=7, num_checks=3, bit_degree=2, seed=3)))


class TestSample:
    def test_p_zero(self):
        code = seven_bit_code()
        out = sample(code, 0.0, RngStream(1, 0))
        assert out.erasure.is_zero() and out.error.is_zero() and out.syndrome.is_zero()

    def test_p_one(self):
        code = seven_bit_code()
        out = sample(code, 1.0, RngStream(1, 0))
        assert out.erasure.weight() == code.N

    def test_mean_weight_concentration(self):
        code = seven_bit_code()
        assert code.N == 58
        total = 0
        trials = 100_000
        for t in range(trials):
            total += sample(code, 0.5, RngStream(42, t)).erasure.weight()
        mean = total / trials
        assert 28.0 <= mean <= 30.0

    def test_determinism(self):
        code = seven_bit_code()
        a = sample(code, 0.3, RngStream(7, 5))
        b = sample(code, 0.3, RngStream(7, 5))
        assert a.erasure == b.erasure and a.error == b.error and a.syndrome == b.syndrome

    def test_distinct_streams_differ(self):
        code = seven_bit_code()
        a = sample(code, 0.5, RngStream(7, 0))
        b = sample(code, 0.5, RngStream(7, 1))
        assert a.erasure != b.erasure  # astronomically unlikely to collide

    def test_error_inside_erasure_and_syndrome_consistent(self):
        code = seven_bit_code()
        for t in range(200):
            out = sample(code, 0.4, RngStream(3, t))
            assert set(out.error.support().tolist()) <= set(out.erasure.support().tolist())
            assert gf2.mat_vec_mul(code.h_z, out.error) == out.syndrome

    def test_invalid_probability(self):
        code = seven_bit_code()
        with pytest.raises(ValueError):
            sample(code, 1.5, RngStream(0, 0))


class TestSampleWithErasure:
    def test_zero_erasure(self):
        code = seven_bit_code()
        out = sample_with_erasure(code, gf2.BinaryVector.zeros(code.N), RngStream(1, 0))
        assert out.error.is_zero() and out.syndrome.is_zero()

    def test_reproducible_error(self):
        code = seven_bit_code()
        full = gf2.BinaryVector.from_bits(np.ones(code.N, dtype=np.uint8))
        a = sample_with_erasure(code, full, RngStream(5, 9))
        b = sample_with_erasure(code, full, RngStream(5, 9))
        assert a.error == b.error
        assert 0 < a.error.weight() < code.N  # a fair coin fills about half

    def test_containment(self):
        code = seven_bit_code()
        rng = np.random.default_rng(2)
        for t in range(100):
            er = gf2.BinaryVector.from_bits((rng.random(code.N) < 0.3).astype(np.uint8))
            out = sample_with_erasure(code, er, RngStream(11, t))
            assert set(out.error.support().tolist()) <= set(er.support().tolist())
            assert gf2.mat_vec_mul(code.h_z, out.error) == out.syndrome

    def test_does_not_mutate_input(self):
        code = seven_bit_code()
        er = gf2.BinaryVector.from_bits(np.ones(code.N, dtype=np.uint8))
        before = er.words.copy()
        sample_with_erasure(code, er, RngStream(0, 0))
        assert np.array_equal(er.words, before)
