import itertools
import math

import numpy as np
import pytest

from fcblab import (
    CapacityError,
    Polynomial,
    degree_part,
    Witness,
    bitstring_witness,
    canonical_word,
    chain_value,
    enumerate_classes,
    evaluate,
    evaluate_bml_on_matrices,
    evaluate_on_witness,
    homogeneous_fcb_witness,
    verify_bb,
    word_class,
)
from fcblab.poly import BlockMultilinearPolynomial

from conftest import all_points, maj3, random_poly


class TestWordClass:
    def test_repeated_letter_cancels(self):
        assert word_class((1, 1, 2, 3), 6) == (2, 3)

    def test_frozen_letter_ignored(self):
        assert word_class((5, 2, 3, 5), 6) == (2, 3)

    def test_all_frozen(self):
        assert word_class((7, 7, 7, 7), 6) == ()

    def test_letter_out_of_range(self):
        with pytest.raises(IndexError):
            word_class((8,), 6)


class TestCanonicalWord:
    def test_padding(self):
        w = canonical_word({2, 3}, 4, 6)
        assert w == (2, 3, 7, 7)
        assert word_class(w, 6) == (2, 3)

    def test_empty_set(self):
        assert canonical_word((), 2, 2) == (3, 3)

    def test_exact_length(self):
        assert canonical_word({1}, 1, 5) == (1,)

    def test_too_large(self):
        with pytest.raises(ValueError):
            canonical_word({1, 2}, 1, 5)

    def test_round_trip_all_subsets(self):
        for n, d in ((3, 2), (4, 3)):
            for r in range(d + 1):
                for s in itertools.combinations(range(1, n + 1), r):
                    assert word_class(canonical_word(s, d, n), n) == s


class TestEnumerateClasses:
    def test_n1_d1(self):
        assert enumerate_classes(1, 1) == {(1,): [(1,)], (): [(2,)]}

    def test_n2_d2_partition(self):
        classes = enumerate_classes(2, 2)
        assert classes[()] == [(1, 1), (2, 2), (3, 3)]
        assert classes[(1,)] == [(1, 3), (3, 1)]
        assert classes[(2,)] == [(2, 3), (3, 2)]
        assert classes[(1, 2)] == [(1, 2), (2, 1)]

    def test_n1_d2(self):
        classes = enumerate_classes(1, 2)
        assert classes[()] == [(1, 1), (2, 2)]
        assert classes[(1,)] == [(1, 2), (2, 1)]

    def test_class_count(self):
        for n, d in ((2, 2), (3, 2), (2, 4)):
            expected = sum(math.comb(n, r) for r in range(min(n, d) + 1))
            assert len(enumerate_classes(n, d)) == expected

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            enumerate_classes(9, 7)

    def test_classes_match_scalar_products(self):
        # same class <=> identical monomial values on all x with frozen last coordinate
        for n, d in ((2, 2), (3, 3), (4, 2)):
            points = [x + (1,) for x in all_points(n)]

            def profile(w):
                return tuple(math.prod(x[k - 1] for k in w) for x in points)

            for members in enumerate_classes(n, d).values():
                assert len({profile(w) for w in members}) == 1
            reps = [members[0] for members in enumerate_classes(n, d).values()]
            assert len({profile(w) for w in reps}) == len(reps)


class TestVerifyBb:
    def test_bitstring_example(self):
        w = bitstring_witness((-1, 1), 2)
        report = verify_bb(w, 0.0)
        assert report["pass"]
        assert report["max_relation_violation"] == 0.0
        assert report["max_contraction_excess"] == 0.0
        assert report["unit_norm_error"] == 0.0

    def test_all_bitstrings_pass(self):
        for n, d in ((2, 2), (3, 3)):
            for x in all_points(n):
                assert verify_bb(bitstring_witness(x, d), 0.0)["pass"]

    def test_constructed_witness_passes(self):
        cert = homogeneous_fcb_witness(degree_part(maj3(), 3))
        assert verify_bb(cert.witness, 1e-9)["pass"]

    def test_scaled_matrix_fails(self):
        a = np.stack([2.0 * np.eye(2), np.eye(2), np.eye(2)])
        w = Witness(d=2, u=np.array([1.0, 0.0]), v=np.array([1.0, 0.0]), A=a)
        report = verify_bb(w, 1e-9)
        assert not report["pass"]
        assert report["max_contraction_excess"] == pytest.approx(1.0)

    def test_relation_violation_detected(self):
        # A(1) not commuting with itself across the class of () at d=2
        a = np.stack([np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2)])
        w = Witness(d=2, u=np.array([1.0, 0.0]), v=np.array([1.0, 0.0]), A=a)
        report = verify_bb(w, 1e-9)
        # <u, A1 A1 v> = 0 but <u, A2 A2 v> = 1 share the empty class
        assert report["max_relation_violation"] == pytest.approx(1.0)
        assert not report["pass"]


class TestEvaluateOnWitness:
    def test_bitstring_collapse(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 4))
            d = int(rng.integers(1, 4))
            p = random_poly(rng, n, min(n, d), 5)
            for x in all_points(n):
                w = bitstring_witness(x, d)
                assert evaluate_on_witness(p, w) == pytest.approx(evaluate(p, x), abs=1e-12)

    def test_halving_pair(self):
        p = Polynomial(2, {(1, 2): 1.0})
        cert = homogeneous_fcb_witness(p)
        assert evaluate_on_witness(p, cert.witness) == pytest.approx(1.0, abs=1e-12)

    def test_zero_polynomial(self):
        w = bitstring_witness((1, -1), 2)
        assert evaluate_on_witness(Polynomial(2, {}), w) == 0.0

    def test_degree_too_high(self):
        p = Polynomial(2, {(1, 2): 1.0})
        with pytest.raises(ValueError, match="degree"):
            evaluate_on_witness(p, bitstring_witness((1, 1), 1))

    def test_representative_independence(self):
        cert = homogeneous_fcb_witness(degree_part(maj3(), 3))
        w = cert.witness
        from fcblab import enumerate_classes as ec

        for members in ec(3, 3).values():
            vals = {round(chain_value(w, word), 12) for word in members}
            assert len(vals) == 1


class TestEvaluateBmlOnMatrices:
    def test_scalar_collapse(self, rng):
        p = BlockMultilinearPolynomial(
            2, 2, {(): 0.3, ((1, 1),): -0.5, ((1, 2), (2, 1)): 1.25}
        )
        for x1 in all_points(2):
            for x2 in all_points(2):
                blocks = [[np.array([[v]]) for v in x1], [np.array([[v]]) for v in x2]]
                direct = (
                    0.3 - 0.5 * x1[0] + 1.25 * x1[1] * x2[0]
                )
                got = evaluate_bml_on_matrices(p, np.ones(1), np.ones(1), blocks)
                assert got == pytest.approx(direct, abs=1e-12)

    def test_identity_blocks(self):
        p = BlockMultilinearPolynomial(1, 2, {((1, 1), (2, 1)): 1.0})
        e1 = np.array([1.0, 0.0])
        blocks = [[np.eye(2)], [np.eye(2)]]
        assert evaluate_bml_on_matrices(p, e1, e1, blocks) == 1.0

    def test_dimension_mismatch(self):
        p = BlockMultilinearPolynomial(1, 2, {((1, 1), (2, 1)): 1.0})
        with pytest.raises(ValueError):
            evaluate_bml_on_matrices(p, np.ones(2), np.ones(2), [[np.eye(3)], [np.eye(3)]])

    def test_wrong_block_count(self):
        p = BlockMultilinearPolynomial(1, 2, {((1, 1),): 1.0})
        with pytest.raises(ValueError):
            evaluate_bml_on_matrices(p, np.ones(1), np.ones(1), [[np.eye(1)]])
