import math

import numpy as np
import pytest

from gbv import (ConvexBase, GaugePair, HorizonError, RangeError,
                 SchrammFamily, ValidationError, WeightSequence,
                 phi_partial_inverse, prefix_sum)

KM = 4096


@pytest.fixture(scope="module")
def harmonic():
    return WeightSequence("harmonic", k_max=KM)


class TestWeightSequence:
    def test_harmonic_first_prefix(self, harmonic):
        assert prefix_sum(harmonic, 1) == 1.0

    def test_constant_prefix(self):
        w = WeightSequence("constant", value=1.0, k_max=KM)
        assert w.prefix_sum(7) == 7.0

    def test_harmonic_prefix_4(self, harmonic):
        # direct summation 1 + 1/2 + 1/3 + 1/4
        assert harmonic.prefix_sum(4) == pytest.approx(25 / 12, rel=1e-15)

    @pytest.mark.parametrize("kind,kw", [
        ("harmonic", {}),
        ("constant", {"value": 2.0}),
        ("power", {"alpha": 0.5}),
        ("log", {}),
        ("explicit", {"terms": [1.0, 1.5, 4.0]}),
    ])
    def test_prefix_increments_match_weights(self, kind, kw):
        w = WeightSequence(kind, k_max=256, **kw)
        pref = w.prefix_sums(256)
        for k in range(1, 256):
            assert pref[k] - pref[k - 1] == pytest.approx(
                1.0 / w.weight(k + 1), rel=1e-12)

    def test_prefix_strictly_increasing(self, harmonic):
        pref = harmonic.prefix_sums(KM)
        assert np.all(np.diff(pref) > 0)

    def test_horizon_error(self, harmonic):
        with pytest.raises(HorizonError):
            harmonic.prefix_sum(KM + 1)
        with pytest.raises(HorizonError):
            harmonic.prefix_sum(0)

    def test_explicit_extension_and_flag(self):
        w = WeightSequence("explicit", terms=[1.0, 2.0], k_max=10)
        assert w.weight(10) == 2.0
        assert w.divergence == "asserted-by-user"

    def test_decreasing_explicit_rejected(self):
        with pytest.raises(ValidationError):
            WeightSequence("explicit", terms=[2.0, 1.0], k_max=10)

    def test_nonpositive_rejected(self):
        with pytest.raises(ValidationError):
            WeightSequence("constant", value=0.0, k_max=10)

    def test_config_round_trip(self):
        w = WeightSequence("power", alpha=0.5, k_max=64)
        w2 = WeightSequence.from_config(w.to_config())
        assert w2.prefix_sum(64) == w.prefix_sum(64)


class TestSchrammFamily:
    def test_inverse_of_zero(self, harmonic):
        fam = SchrammFamily.power(2.0, harmonic)
        assert fam.partial_inverse(3, 0.0) == 0.0

    def test_quadratic_inverse_closed_form(self, harmonic):
        # Phi_4(x) = x^2 * (1 + 1/2 + 1/3 + 1/4), so the inverse of 1 is
        # (25/12)^(-1/2); the analytic path must agree with bisection
        fam = SchrammFamily.power(2.0, harmonic)
        expected = (25 / 12) ** -0.5
        assert fam.partial_inverse(4, 1.0) == pytest.approx(expected, rel=1e-12)
        assert fam.partial_inverse(4, 1.0, method="bisect") == pytest.approx(
            expected, rel=1e-8)

    def test_linear_inverse(self, harmonic):
        fam = SchrammFamily.power(1.0, harmonic)
        # Phi_2(x) = 1.5 x
        assert phi_partial_inverse(fam, 2, 3.0) == pytest.approx(2.0, rel=1e-12)

    def test_round_trip_identity(self, harmonic):
        fam = SchrammFamily.power(2.0, harmonic)
        for k in (1, 3, 9):
            for x in np.linspace(0.0, 10.0, 7):
                y = float(fam.partial_sum(k, x))
                assert fam.partial_inverse(k, y) == pytest.approx(x, abs=1e-9)
                assert fam.partial_inverse(k, y, method="bisect") == pytest.approx(
                    x, abs=1e-7)

    def test_inverse_nonincreasing_in_k(self, harmonic):
        fam = SchrammFamily.power(2.0, harmonic)
        vals = [fam.partial_inverse(k, 1.0) for k in range(1, 40)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_inverse_concave_on_triples(self, harmonic):
        fam = SchrammFamily.power(2.0, harmonic)
        for k in (1, 2, 5, 17):
            for y1, y2 in [(0.1, 2.0), (1.0, 9.0), (0.5, 0.6)]:
                mid = fam.partial_inverse(k, (y1 + y2) / 2)
                avg = (fam.partial_inverse(k, y1) + fam.partial_inverse(k, y2)) / 2
                assert mid >= avg - 1e-9

    def test_explicit_family_bisection(self):
        fam = SchrammFamily("explicit", terms=[(1.0, 2.0), (0.5, 2.0)], k_max=16)
        fam.validate()
        y = float(fam.partial_sum(3, 1.5))
        assert fam.partial_inverse(3, y) == pytest.approx(1.5, abs=1e-7)

    def test_validate_rejects_bad_ordering(self):
        fam = SchrammFamily("explicit", terms=[(1.0, 2.0), (2.0, 2.0)], k_max=4)
        with pytest.raises(ValidationError):
            fam.validate()

    def test_negative_target_rejected(self, harmonic):
        fam = SchrammFamily.power(2.0, harmonic)
        with pytest.raises(ValidationError):
            fam.partial_inverse(2, -1.0)

    def test_expm1_base(self):
        w = WeightSequence("constant", value=1.0, k_max=64)
        fam = SchrammFamily("scaled", base=ConvexBase("expm1"), weights=w)
        # Phi_k(x) = k (e^x - 1)
        assert fam.partial_inverse(4, 4.0) == pytest.approx(math.log(2), rel=1e-10)


class TestGaugePair:
    def test_pow2_ladder(self):
        g = GaugePair.build("linear", "pow2", n_max=8)
        assert g.level(3) == (3.0, 8.0)
        assert g.q_limit == math.inf

    def test_to_ladder_limit(self):
        g = GaugePair.build("to", "pow2", n_max=8, q=2.0)
        qn = [g.level(n)[0] for n in range(1, 9)]
        assert qn[0] == 1.0
        assert all(a <= b for a, b in zip(qn, qn[1:]))
        assert g.q_limit == 2.0

    def test_monotonicity_enforced(self):
        with pytest.raises(ValidationError):
            GaugePair([2.0, 1.0], [2.0, 4.0])
        with pytest.raises(ValidationError):
            GaugePair([1.0, 2.0], [4.0, 2.0])
        with pytest.raises(ValidationError):
            GaugePair([1.0], [1.5])

    def test_level_out_of_range(self):
        g = GaugePair.build("linear", "pow2", n_max=4)
        with pytest.raises(HorizonError):
            g.level(5)
