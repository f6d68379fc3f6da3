import numpy as np
import pytest

from nsconst.envelopes import ProblemParams
from nsconst.errors import InvalidArgumentError, OutOfRegimeError
from nsconst.flatsums import (
    ball_scan,
    canonical_points,
    full_sum_oracle,
    g_flat,
    k_flat,
)
from nsconst.lattice import canonicalize, reflections_and_permutations
from nsconst.upper import TruncationConfig, sandwich_check

PP22 = ProblemParams(2.0, 2.0, 3)
PP33 = ProblemParams(3.0, 3.0, 3)
PP52 = ProblemParams(5.0, 2.0, 3)


class TestFlatValues:
    def test_high_precision_anchor(self):
        # independently validated reference value for the (5,2) sum at cutoff 50
        got = k_flat((2, 1, 0), PP52, 50.0)
        assert abs(got - 263.36493191766936106) <= 1e-9

    def test_zero_k_rejected(self):
        with pytest.raises(InvalidArgumentError):
            k_flat((0, 0, 0), PP22, 10.0)

    def test_symmetry_orbit_exact(self):
        for kind_fn, pp in ((k_flat, PP22), (g_flat, PP33)):
            for k in [(3, 1, 0), (2, 2, 1)]:
                base = kind_fn(k, pp, 8.0)
                for image in list(reflections_and_permutations(k))[:8]:
                    assert kind_fn(image, pp, 8.0) == base

    def test_beyond_two_rho_shortcut(self):
        rng = np.random.default_rng(6)
        count = 0
        while count < 10:
            k = tuple(int(x) for x in rng.integers(-30, 31, size=3))
            if sum(x * x for x in k) < 4 * 64:  # need |k| >= 2 rho with rho = 8
                continue
            a = k_flat(k, PP22, 8.0)
            b = k_flat(k, PP22, 8.0, force_general=True)
            assert a == pytest.approx(b, rel=1e-14)
            a = g_flat(k, PP33, 8.0)
            b = g_flat(k, PP33, 8.0, force_general=True)
            assert a == pytest.approx(b, rel=1e-14)
            count += 1


class TestOracle:
    def test_fold_identity_degenerate(self):
        """Truncating the unfolded sum at the cutoff radius reproduces the
        folded sum exactly: the two-ball union collapses onto one ball."""
        rng = np.random.default_rng(10)
        for _ in range(20):
            k = tuple(int(x) for x in rng.integers(-12, 13, size=3))
            if not any(k):
                continue
            a = k_flat(k, PP22, 10.0)
            b = full_sum_oracle("K", k, PP22, 10.0)
            assert a == pytest.approx(b, rel=1e-12)
            a = g_flat(k, PP33, 10.0)
            b = full_sum_oracle("G", k, PP33, 10.0)
            assert a == pytest.approx(b, rel=1e-12)

    def test_sandwich_both_kinds(self):
        rng = np.random.default_rng(14)
        ks = []
        while len(ks) < 20:
            k = tuple(int(x) for x in rng.integers(-17, 18, size=3))
            if any(k) and sum(x * x for x in k) <= 30 * 30:
                ks.append(k)
        cfg = TruncationConfig(20.0, 2.0, 6)
        for kind, pp in (("K", PP22), ("G", PP33)):
            rec = sandwich_check(kind, pp, cfg, ks, big_radius=60.0)
            assert rec.worst_lower_margin > 0.0
            assert rec.worst_upper_margin >= 0.0
            assert rec.strict_lower_checked

    def test_degenerate_configuration_guard(self):
        # oracle radius at or below the cutoff: strict comparison is skipped
        rec = sandwich_check("K", PP22, TruncationConfig(20.0, 2.0, 6), [(1, 0, 0)], big_radius=15.0)
        assert not rec.strict_lower_checked


class TestScan:
    def test_canonical_points_shape(self):
        pts = canonical_points(3, 3.0)
        assert all(a >= b >= c >= 0 for a, b, c in pts)
        assert all(canonicalize(p) == tuple(p) for p in pts.tolist())

    def test_symmetry_flag_equivalence(self):
        full = ball_scan("K", PP22, 5.0, 1.6, use_symmetry=False)
        reduced = ball_scan("K", PP22, 5.0, 1.6, use_symmetry=True)
        assert full.max_value == pytest.approx(reduced.max_value, rel=1e-14)
        assert full.argmax == reduced.argmax
        assert full.points_scanned > reduced.points_scanned

    def test_result_invariants(self):
        res = ball_scan("K", PP22, 5.0, 1.6)
        assert res.argmax == canonicalize(res.argmax)
        assert res.max_value == k_flat(res.argmax, PP22, 5.0)

    def test_thread_count_independence(self):
        one = ball_scan("G", PP33, 5.0, 1.6, threads=1)
        four = ball_scan("G", PP33, 5.0, 1.6, threads=4)
        assert one == four

    def test_regime_guards(self):
        with pytest.raises(OutOfRegimeError):
            ball_scan("K", PP22, 20.0, 0.9)
        with pytest.raises(OutOfRegimeError):
            ball_scan("K", PP22, 2.0, 2.0)
        with pytest.raises(OutOfRegimeError):
            ball_scan("G", ProblemParams(3.0, 2.0, 3), 20.0, 2.0)
