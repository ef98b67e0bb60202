import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from atrous.design import (CosinePolynomial, ZPolynomial, Z, bezout_solve, flatness_ratio,
                           interp_design, optimize_symmetric, pr_triplet_design, riesz_factor,
                           symmetric_family)
from atrous.errors import (BadParams, EmptyFeasibleSet, NegativeFactor, NotCoprime, NotNonnegative,
                           OddCircleRoot, SingularSystem)
from atrous.filterbank import check_perfect_reconstruction, frame_bounds
from atrous.registry import get
from atrous.sequences import FiniteSequence, autocorrelation
from atrous.spectrum import GridSpec, eval_ft

A51 = 0.410013
AB52 = (0.32890122, 0.04248420)
R2 = 1 / np.sqrt(2)
G1_CONSTRAINTS = [(0, 0), (5 / 32, R2), (9 / 32, 1), (3 / 8, R2), (1 / 2, 0)]
G2_CONSTRAINTS = [(0, 0), (1 / 8, 0), (1 / 4, 0), (3 / 8, R2), (1 / 2, 1)]
XI = np.linspace(0, 1, 1001)


def match_up_to_symmetry(x: FiniteSequence, table: FiniteSequence) -> float:
    """Smallest tap-wise distance over reflection and sign, ignoring translation."""
    if len(x) != len(table):
        return np.inf
    cands = [x.taps, x.taps[::-1], -x.taps, -x.taps[::-1]]
    return min(float(np.max(np.abs(c - table.taps))) for c in cands)


class TestPolynomials:
    def test_cosine_sequence_round_trip(self):
        c = CosinePolynomial((0.3, -0.2, 0.05))
        x = c.to_sequence()
        assert x.offset == -2
        np.testing.assert_allclose(x.taps, [0.025, -0.1, 0.3, -0.1, 0.025])
        assert CosinePolynomial.from_sequence(x) == c
        np.testing.assert_allclose(eval_ft(x, XI).real, c(XI), atol=1e-15)

    def test_trailing_zeros_trimmed(self):
        assert CosinePolynomial((1.0, 2.0, 0.0)).degree == 1

    def test_z_conversion(self):
        c = CosinePolynomial((0.3, -0.2, 0.05))
        z = np.sin(np.pi * XI) ** 2
        np.testing.assert_allclose(c.to_z()(z), c(XI), atol=1e-14)
        np.testing.assert_allclose(c.to_z().to_cosine().coeffs, c.coeffs, atol=1e-14)

    def test_z_arithmetic(self):
        p = ZPolynomial.of(1.0, -1.0)
        assert (p * Z + p)(0.5) == pytest.approx(0.75)
        assert (p ** 3)(0.25) == pytest.approx(0.75 ** 3)
        assert (p - p)(0.3) == 0.0


class TestSymmetricFamily:
    def test_ex51(self):
        b = symmetric_family(2, [A51])
        t = get("example-5.1")
        assert b.lowpass.offset == t.lowpass.offset
        np.testing.assert_allclose(b.lowpass.taps, t.lowpass.taps, atol=1e-8)
        np.testing.assert_allclose(b.highpass[0].taps, t.highpass[0].taps, atol=1e-8)

    def test_ex52(self):
        b = symmetric_family(2, AB52)
        t = get("example-5.2")
        np.testing.assert_allclose(b.lowpass.taps, t.lowpass.taps, atol=1e-8)
        np.testing.assert_allclose(b.highpass[0].taps, t.highpass[0].taps, atol=1e-8)

    def test_haar_limit(self):
        h = symmetric_family(1, [1e-12]).lowpass
        np.testing.assert_allclose(h.values_on(-2, 3), [0, 0, 0.5, 0.5, 0], atol=1e-11)

    @pytest.mark.parametrize("params", [[], [0.1, 0.2, 0.3], [-0.1], [0.2, 0.0]])
    def test_bad_params(self, params):
        with pytest.raises(BadParams):
            symmetric_family(2, params)

    @given(st.integers(1, 3), st.lists(st.floats(0.01, 0.5), min_size=1, max_size=2))
    def test_palindromic(self, n, params):
        h = symmetric_family(n, params).lowpass
        np.testing.assert_allclose(h.taps, h.taps[::-1], atol=1e-15)


class TestOptimizer:
    def test_degree_one(self):
        res = optimize_symmetric(2, 1)
        reference = flatness_ratio(2, [A51])
        assert abs(res.params[0] - A51) <= 2e-3 or res.ratio <= reference
        assert res.ratio == pytest.approx(flatness_ratio(2, res.params))

    def test_degree_two_dominates(self):
        res = optimize_symmetric(2, 2)
        assert res.ratio <= flatness_ratio(2, AB52)

    def test_degenerate_box(self):
        res = optimize_symmetric(2, 1, bounds=[(0.41, 0.41)])
        assert res.params == (0.41,)

    def test_admissibility(self):
        res = optimize_symmetric(2, 1)
        p = FiniteSequence(-1, [-res.params[0] / 2, 1 + res.params[0], -res.params[0] / 2])
        assert np.max(np.abs(eval_ft(p, XI))) < 4.0

    def test_infeasible_box(self):
        with pytest.raises(EmptyFeasibleSet):
            optimize_symmetric(1, 1, bounds=[(0.6, 0.9)])

    def test_bad_degree(self):
        with pytest.raises(BadParams):
            optimize_symmetric(2, 3)


class TestInterpolation:
    @pytest.mark.parametrize("constraints, index", [(G1_CONSTRAINTS, 0), (G2_CONSTRAINTS, 1)])
    def test_ex53(self, constraints, index):
        c = interp_design(4, constraints)
        table = get("example-5.3").highpass[index]
        g = c.to_sequence()
        assert g.offset == table.offset
        np.testing.assert_allclose(g.taps, table.taps, atol=1e-6)
        for xi, v in constraints:
            assert c(xi) == pytest.approx(v, abs=1e-10)

    def test_constant(self):
        assert interp_design(0, [(0, 1)]).coeffs == (1.0,)

    def test_singular(self):
        with pytest.raises(SingularSystem):
            interp_design(1, [(0.1, 0), (0.1, 1)])

    def test_count_and_range(self):
        with pytest.raises(BadParams):
            interp_design(2, [(0, 0)])
        with pytest.raises(BadParams):
            interp_design(1, [(0, 0), (0.7, 1)])


class TestBezout:
    def test_trivial(self):
        p, q = bezout_solve(ZPolynomial.of(1.0, -1.0), Z, 0, 0)
        assert p.coeffs == pytest.approx((1.0,)) and q.coeffs == pytest.approx((1.0,))

    @pytest.mark.parametrize("f1, f2, d1, d2", [
        (ZPolynomial.of(np.sin(5 * np.pi / 16) ** 2, -1.0) ** 2 * ZPolynomial.of(1.0, -1.0), Z ** 2, 1, 2),
        (ZPolynomial.of(1.0, -1.0) ** 2, Z * ZPolynomial.of(0.5, -1.0) ** 2, 2, 1),
    ])
    def test_residual(self, f1, f2, d1, d2):
        p, q = bezout_solve(f1, f2, d1, d2)
        assert p.degree <= d1 and q.degree <= d2
        r = np.asarray((f1 * p + f2 * q - ZPolynomial.of(1.0)).coeffs)
        assert np.max(np.abs(r)) <= 1e-10

    def test_not_coprime(self):
        with pytest.raises(NotCoprime):
            bezout_solve(Z * ZPolynomial.of(1.0, -1.0), Z, 0, 1)

    def test_degree_mismatch(self):
        with pytest.raises(BadParams):
            bezout_solve(Z, Z, 0, 1)


class TestRiesz:
    def test_constant(self):
        assert riesz_factor(CosinePolynomial((1.0,))) == FiniteSequence.delta()

    def test_haar(self):
        b = riesz_factor(CosinePolynomial((0.5, 0.5)))
        np.testing.assert_allclose(sorted(b.taps), [0.5, 0.5], atol=1e-12)

    def test_negative(self):
        with pytest.raises(NotNonnegative):
            riesz_factor(CosinePolynomial((0.0, 1.0)))

    def test_odd_circle_root(self):
        # 1 - 2z has a simple root at z = 1/2, so it changes sign on the circle
        with pytest.raises((OddCircleRoot, NotNonnegative)):
            riesz_factor(ZPolynomial.of(1.0, -2.0).to_cosine())

    def test_bad_phase(self):
        with pytest.raises(BadParams):
            riesz_factor(CosinePolynomial((1.0,)), phase="maximum")

    @given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=1, max_size=7),
           st.sampled_from(["minimum", "principal"]))
    def test_round_trip(self, taps, phase):
        r = FiniteSequence(0, taps)
        if r.norm() < 1e-3:
            return
        r = r * (1 / r.norm())
        tau = CosinePolynomial.from_sequence(autocorrelation(r))
        b = riesz_factor(tau, phase=phase)
        err = np.max(np.abs(np.abs(eval_ft(b, XI)) ** 2 - tau(XI)))
        assert err <= 1e-8
        assert eval_ft(b, 0.0).real >= -1e-12

    @given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=2, max_size=7))
    def test_minimum_phase_roots_inside_disc(self, taps):
        r = FiniteSequence(0, taps)
        if r.norm() < 1e-2 or abs(r.taps[0]) < 1e-3:
            return
        tau = CosinePolynomial.from_sequence(autocorrelation(r * (1 / r.norm())))
        b = riesz_factor(tau, phase="minimum")
        if len(b) > 1:
            assert np.all(np.abs(np.roots(b.taps[::-1])) <= 1 + 1e-4)


class TestPRTriplet:
    @pytest.fixture(scope="class")
    @staticmethod
    def bank():
        return pr_triplet_design(5 * np.pi / 16, np.pi / 4)

    def test_perfect_reconstruction(self, bank):
        assert check_perfect_reconstruction(bank) <= 1e-8

    def test_zero_locations(self, bank):
        h, (g1, g2) = bank.lowpass, bank.highpass
        vals = [eval_ft(h, 5 / 16), eval_ft(h, 0.5), eval_ft(g1, 0.0), eval_ft(g1, 0.5),
                eval_ft(g2, 0.0), eval_ft(g2, 0.25)]
        assert max(map(abs, vals)) <= 1e-8

    def test_matches_ex54(self, bank):
        table = get("example-5.4")
        for x, t in zip(bank.filters(), table.filters()):
            assert match_up_to_symmetry(x, t) <= 2e-6

    @pytest.mark.parametrize("J", [1, 3, 6])
    def test_parseval(self, bank, J):
        r = frame_bounds(bank, J)
        assert abs(r.A.lo - 1) <= 1e-8 and abs(r.B.hi - 1) <= 1e-8

    def test_angle_order(self):
        with pytest.raises(BadParams):
            pr_triplet_design(np.pi / 4, 5 * np.pi / 16)

    def test_other_angles(self):
        try:
            b = pr_triplet_design(3 * np.pi / 8, np.pi / 5)
        except NegativeFactor:
            return
        assert check_perfect_reconstruction(b) <= 1e-8
