import math
import random
from fractions import Fraction

import pytest

from radixapprox.errors import DomainError, HypothesisViolation, IndeterminateComparison
from radixapprox.exact import Real, dist_exact
from radixapprox.expsum import (
    classify_G,
    decay_bound_check,
    eval_expsum,
    separation_check,
    small_shift_count,
)

E = lambda *a: Real.exact(Fraction(*a))


class TestClassify:
    def test_examples(self):
        assert classify_G(2, E(1, 2)).t == 1
        assert classify_G(2, E(1, 5)).t == 2
        assert classify_G(3, E(3)).t is None

    def test_class_boundaries_inclusive_above(self):
        # the top endpoint 1/(2 b^(t-1)) belongs to class t
        assert classify_G(3, E(1, 2)).t == 1
        assert classify_G(3, E(1, 6)).t == 2
        assert classify_G(3, E(1, 18)).t == 3

    def test_step_down_property(self):
        rng = random.Random(21)
        for _ in range(500):
            b = rng.choice([2, 3, 5])
            q = rng.randint(4 * b, 10**6)
            a = rng.randint(1, q // (2 * b))
            y = Fraction(a, q) + rng.randint(0, 5)
            t = classify_G(b, Real.exact(y)).t
            if t is None or t < 2:
                continue
            assert classify_G(b, Real.exact(b * y)).t == t - 1

    def test_enclosure_modes(self):
        assert classify_G(2, Real.approx(Fraction(1, 5), Fraction(1, 10**20))).t == 2
        with pytest.raises(IndeterminateComparison):
            classify_G(2, Real.approx(Fraction(1, 4), Fraction(1, 10**20)))
        with pytest.raises(IndeterminateComparison):
            classify_G(2, Real.approx(Fraction(0), Fraction(1, 10**20)))


class TestSeparation:
    def test_examples(self):
        rep = separation_check(2, 1, Fraction(1, 10), E(1, 3))
        assert (rep.ok, rep.counterexample) == (False, 3)
        assert separation_check(2, 1, Fraction(1, 10), E(1, 5)).ok
        rep = separation_check(2, 1, Fraction(1, 10), E(1, 2))
        assert (rep.ok, rep.counterexample) == (False, 2)

    def test_counterexample_is_least(self):
        rng = random.Random(22)
        for _ in range(50):
            b = rng.choice([2, 3, 5])
            r = rng.randint(0, 6)
            q = rng.randint(2, 10**4)
            gamma = Fraction(rng.randint(1, q - 1), q)
            beta = Fraction(1, rng.randint(2, 40))
            rep = separation_check(b, r, beta, Real.exact(gamma))
            # brute force over the extended truncated set
            from radixapprox.digitsets import SetSpec, iter_spec

            least = None
            for x in iter_spec(SetSpec.zero_one_ext_trunc(b, r)):
                if x and dist_exact(gamma * x) <= beta:
                    least = x
                    break
            assert rep.ok == (least is None)
            assert rep.counterexample == least

    def test_enclosure_gamma(self):
        gamma = Real.approx(Fraction(2, 5), Fraction(1, 10**25))
        assert separation_check(2, 1, Fraction(1, 8), gamma).ok


class TestSmallShifts:
    def test_examples(self):
        assert small_shift_count(2, 1, 1, E(1, 5), Fraction(1, 10)).g == 0
        rep = small_shift_count(3, 2, 1, E(0), Fraction(1, 10))
        assert rep.g == 3 and rep.positions == (0, 1, 2)
        # distances 1/27, 1/9, 1/3: only the first is <= 1/10
        rep = small_shift_count(3, 2, 1, E(1, 27), Fraction(1, 10))
        assert rep.g == 1 and rep.positions == (0,)

    def test_bound_under_separation(self):
        rng = random.Random(23)
        verified = 0
        for _ in range(300):
            b = rng.choice([3, 4, 5])
            r = rng.randint(1, 5)
            m = rng.randint(1, 3)
            D = b ** (r + 2) - 1
            gamma = E(rng.randint(1, D - 1), D)
            beta = Fraction(1, 2 * b**m)
            if not separation_check(b, r, beta, gamma).ok:
                continue
            k = rng.randint(1, 64)
            rep = small_shift_count(b, r, k, gamma, beta, separation_ok=True)
            assert rep.g**2 < 9 * k
            verified += 1
        assert verified > 20


class TestEvalExpsum:
    def test_single_pair_cancels(self):
        rep = eval_expsum(2, 0, 1, E(1, 2))
        assert rep.magnitude.hi < Fraction(1, 10**12)
        assert rep.product_magnitude.mid == 0

    def test_gamma_zero_counts_terms(self):
        rep = eval_expsum(5, 3, 7, Real.exact(0))
        assert rep.value_re.mid == 16 and rep.value_im.mid == 0
        assert rep.magnitude.mid == 16
        assert rep.product_bound.lo <= 16 <= rep.product_bound.hi

    def test_quarter_full_cancellation(self):
        rep = eval_expsum(2, 1, 1, E(1, 4))
        assert rep.magnitude.hi < Fraction(1, 10**12)
        assert rep.product_magnitude.mid == 0

    def test_identity_and_bound_randomized(self):
        rng = random.Random(24)
        for _ in range(150):
            b = rng.randint(2, 10)
            r = rng.randint(0, 10)
            k = rng.randint(1, 100)
            q = rng.randint(2, 10**6)
            rep = eval_expsum(b, r, k, E(rng.randint(1, q - 1), q))
            m, p = rep.magnitude, rep.product_magnitude
            assert abs(m.mid - p.mid) <= m.rad + p.rad
            assert m.lo <= rep.product_bound.hi + Fraction(1, 10**9)

    def test_zero_exclusion_shifts_by_one(self):
        rep_all = eval_expsum(3, 4, 5, E(3, 11))
        rep_exc = eval_expsum(3, 4, 5, E(3, 11), exclude_zero=True)
        assert rep_exc.value_re.mid == rep_all.value_re.mid - 1
        assert rep_exc.value_im.mid == rep_all.value_im.mid
        assert rep_exc.term_count == rep_all.term_count - 1

    def test_negative_k(self):
        rep = eval_expsum(3, 2, -4, E(2, 7))
        mirror = eval_expsum(3, 2, 4, E(2, 7))
        assert abs(rep.magnitude.mid - mirror.magnitude.mid) <= rep.magnitude.rad + mirror.magnitude.rad

    def test_term_cap(self):
        from radixapprox.errors import ResourceLimit

        with pytest.raises(ResourceLimit):
            eval_expsum(2, 27, 1, E(1, 3))

    def test_big_denominator_fallback(self):
        q = (1 << 61) + 1
        rep = eval_expsum(2, 3, 1, E(1, q))
        # gamma is nearly 0, so the sum is nearly the term count
        assert abs(rep.magnitude.mid - 16) < Fraction(1, 10**6)

    def test_enclosure_gamma_widens_radius(self):
        gamma = Real.approx(Fraction(2, 7), Fraction(1, 10**25))
        rep = eval_expsum(3, 2, 1, gamma)
        exact = eval_expsum(3, 2, 1, E(2, 7))
        assert rep.value_re.rad > exact.value_re.rad
        assert abs(rep.magnitude.mid - exact.magnitude.mid) <= rep.magnitude.rad + exact.magnitude.rad


class TestDecayBound:
    def test_worked_instance(self):
        rep = decay_bound_check(2, 1, 1, 2, E(2, 5))
        assert abs(float(rep.magnitude.mid) - 0.6180339887) < 1e-6
        assert abs(float(rep.decay_bound.hi) - 16 * (1 - math.pi / 16) ** -0.5) < 1e-6
        assert rep.far_positions == (0, 1)
        assert rep.separation_beta == Fraction(1, 8)

    def test_single_term_instance(self):
        rep = decay_bound_check(2, 0, 1, 1, E(1, 3))
        assert abs(float(rep.magnitude.mid) - 1.0) < 1e-9
        assert abs(float(rep.decay_bound.hi) - 8 * (1 - math.pi / 16) ** -2.0) < 1e-6

    def test_hypothesis_violation(self):
        with pytest.raises(HypothesisViolation) as err:
            decay_bound_check(2, 1, 1, 2, E(1, 3))
        assert err.value.counterexample == 3

    def test_bad_args(self):
        with pytest.raises(DomainError):
            decay_bound_check(2, 1, 0, 1, E(1, 3))
        with pytest.raises(DomainError):
            decay_bound_check(2, -1, 1, 1, E(1, 3))
