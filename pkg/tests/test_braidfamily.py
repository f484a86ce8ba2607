import math
from fractions import Fraction

import numpy as np
import pytest

from braidlinks.braidfamily import (SemiholoFamily, arg_profile, build_ga,
                                    critical_values_at, min_admissible_nm,
                                    psi0)
from braidlinks.catalog import gerono_lemniscate, three_twist_square
from braidlinks.scalars import QC, as_complex
from braidlinks.trigcurve import (ComponentCurve, StrandParametrization,
                                  TrigPolynomial, cosine, eval_trig, sine)


def constant_family(*coeffs):
    """Family with constant coefficients, low power first, leading 1."""
    polys = tuple(TrigPolynomial.from_terms({0: QC(c)} if c else {})
                  for c in coeffs)
    return SemiholoFamily(len(coeffs) - 1, polys, Fraction(1))


def single_strand(F, G):
    return StrandParametrization((ComponentCurve(F, G, 1),))


# reference rational coefficients of the expanded three-twist-square family
# at a = 1 (u^1 and u^0 coefficients in the e^{ilt} basis)
REF_U1 = {
    0: QC(Fraction(-15, 64)),
    2: QC(0, Fraction(-21, 16)), -2: QC(0, Fraction(9, 16)),
    4: QC(Fraction(-15, 32)), -4: QC(Fraction(15, 32)),
    6: QC(0, Fraction(-9, 16)), -6: QC(0, Fraction(-9, 16)),
}
REF_U0 = {
    0: QC(Fraction(-3, 8)),
    2: QC(0, Fraction(47, 128)), -2: QC(0, Fraction(53, 128)),
    4: QC(Fraction(-43, 128)), -4: QC(Fraction(-85, 128)),
    6: QC(0, Fraction(-93, 256)), -6: QC(0, Fraction(51, 256)),
    8: QC(Fraction(11, 128)), -8: QC(Fraction(43, 128)),
    10: QC(0, Fraction(27, 512)), -10: QC(0, Fraction(-27, 512)),
}


class TestBuild:
    def test_one_strand_constant(self):
        sp = single_strand(TrigPolynomial.from_terms({0: QC(2)}, real_valued=True),
                           TrigPolynomial.from_terms({}, real_valued=True))
        fam = build_ga(sp, Fraction(1))
        assert fam.degree == 1
        assert dict(fam.coefficients[0].coeffs) == {0: QC(-2)}

    def test_three_twist_square_exact_coefficients(self):
        fam = build_ga(three_twist_square(), Fraction(1))
        assert fam.exact
        assert fam.coefficients[2].is_zero()  # no u^2 term
        assert dict(fam.coefficients[1].coeffs) == REF_U1
        assert dict(fam.coefficients[0].coeffs) == REF_U0

    def test_scale_powers(self):
        # coefficient of u^j scales by a^{s-j}
        fam1 = build_ga(three_twist_square(), Fraction(1))
        fam2 = build_ga(three_twist_square(), Fraction(1, 2))
        for j, power in ((1, 2), (0, 3)):
            for l, c in fam1.coefficients[j].coeffs.items():
                scaled = c * QC(Fraction(1, 2 ** power))
                assert fam2.coefficients[j].coeffs[l] == scaled

    def test_lemniscate_mirror_u1_coefficient(self):
        # the reverse traversal of the lemniscate gives +3/4 a^2 (e^2it - e^-2it)
        fam = build_ga(gerono_lemniscate(mirror=True), Fraction(1))
        assert dict(fam.coefficients[1].coeffs) == {
            2: QC(Fraction(3, 4)), -2: QC(Fraction(-3, 4))}
        fam_half = build_ga(gerono_lemniscate(mirror=True), Fraction(1, 2))
        assert fam_half.coefficients[1].coeffs[2] == QC(Fraction(3, 16))

    def test_lemniscate_u0_coefficient(self):
        fam = build_ga(gerono_lemniscate(), Fraction(1))
        # -(cos 2t + (i/4) sin 4t) in the exponential basis
        assert dict(fam.coefficients[0].coeffs) == {
            2: QC(Fraction(-1, 2)), -2: QC(Fraction(-1, 2)),
            4: QC(Fraction(-1, 8)), -4: QC(Fraction(1, 8))}

    def test_coefficients_match_direct_product(self):
        sp = three_twist_square()
        fam = build_ga(sp, Fraction(1, 2))
        rng = np.random.default_rng(0)
        rho = sp.components[0].position()
        for t in rng.uniform(0, 2 * math.pi, 8):
            u = complex(rng.normal(), rng.normal())
            direct = 1.0
            for j in range(3):
                direct *= u - 0.5 * eval_trig(rho, (t + 2 * math.pi * j) / 3)
            assert fam.eval(u, t) == pytest.approx(direct, rel=1e-12)

    def test_multi_component(self):
        # two one-strand components at constant positions 1 and 2
        sp = StrandParametrization((
            ComponentCurve(TrigPolynomial.from_terms({0: QC(1)}, real_valued=True),
                           TrigPolynomial.from_terms({}, real_valued=True), 1),
            ComponentCurve(TrigPolynomial.from_terms({0: QC(2)}, real_valued=True),
                           TrigPolynomial.from_terms({}, real_valued=True), 1)))
        fam = build_ga(sp, Fraction(1))
        # (u-1)(u-2) = u^2 - 3u + 2
        assert dict(fam.coefficients[1].coeffs) == {0: QC(-3)}
        assert dict(fam.coefficients[0].coeffs) == {0: QC(2)}

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError):
            build_ga(three_twist_square(), Fraction(0))


class TestPsi0:
    def test_sign_convention(self):
        # for odd degree psi0 = -constant coefficient
        sp = single_strand(TrigPolynomial.from_terms({0: QC(2)}, real_valued=True),
                           TrigPolynomial.from_terms({}, real_valued=True))
        fam = build_ga(sp, Fraction(1))
        assert dict(psi0(fam).coeffs) == {0: QC(2)}

    def test_lemniscate_closed_form(self):
        fam = build_ga(gerono_lemniscate(), Fraction(1))
        p = psi0(fam)
        assert p.support == {2, -2, 4, -4}
        # psi0 = cos(2t) + (i/4) sin(4t) = cos(2t) (1 + (i/2) sin 2t)
        for t in np.linspace(0.1, 6.2, 13):
            expected = math.cos(2 * t) * (1 + 0.5j * math.sin(2 * t))
            assert eval_trig(p, t) == pytest.approx(expected, abs=1e-12)

    def test_three_twist_square_support_and_constant(self):
        fam = build_ga(three_twist_square(), Fraction(1))
        p = psi0(fam)
        assert p.support == {0, 2, -2, 4, -4, 6, -6, 8, -8, 10, -10}
        assert p.coeffs[0] == QC(Fraction(3, 8))

    def test_consistency_with_constant_coefficient(self):
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        p = psi0(fam)
        rng = np.random.default_rng(1)
        for t in rng.uniform(0, 2 * math.pi, 64):
            lhs = eval_trig(p, t)
            rhs = (-1) ** fam.degree * eval_trig(fam.coefficients[0], t)
            assert lhs == pytest.approx(rhs, abs=1e-12)


class TestCriticalValues:
    def test_cubic_by_hand(self):
        # u^3 - 3u: critical roots ±1, critical values ∓2
        fam = constant_family(0, -3, 0, 1)
        vals = sorted(critical_values_at(fam, 0.3), key=lambda z: z.real)
        assert vals[0] == pytest.approx(-2, abs=1e-10)
        assert vals[1] == pytest.approx(2, abs=1e-10)

    def test_cubic_with_three_roots(self):
        # (u-1)(u-2)(u-3): critical roots (6 ± sqrt 3)/3 (closed form)
        fam = constant_family(-6, 11, -6, 1)
        roots = [(6 + math.sqrt(3)) / 3, (6 - math.sqrt(3)) / 3]
        expected = sorted(
            (r - 1) * (r - 2) * (r - 3) for r in roots)
        vals = sorted(v.real for v in critical_values_at(fam, 0.0))
        assert vals == pytest.approx(expected, abs=1e-10)
        # residual bound on the critical roots themselves
        for r in roots:
            g_at = 3 * r * r - 12 * r + 11
            assert abs(g_at) < 1e-10

    def test_lemniscate_at_zero_matches_grid_bracket(self):
        # at t = 0 the family is u^3 - 1 with a double critical root at 0
        fam = build_ga(gerono_lemniscate(), Fraction(1))
        vals = critical_values_at(fam, 0.0)
        assert all(v == pytest.approx(-1.0, abs=1e-8) for v in vals)
        # brute-force bracket: g'(u) = 3u^2 vanishes only near u = 0
        us = np.linspace(-2, 2, 4001)
        dg = 3 * us ** 2
        assert float(np.abs(us[np.abs(dg) < 1e-4]).max()) < 0.01

    def test_degree_one_rejected(self):
        fam = constant_family(-2, 1)
        with pytest.raises(ValueError):
            critical_values_at(fam, 0.0)

    def test_root_residuals(self):
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        rng = np.random.default_rng(2)
        s = fam.degree
        for t in rng.uniform(0, 2 * math.pi, 16):
            coeffs = [eval_trig(p, t) for p in fam.coefficients]
            dcoeffs = [(j + 1) * coeffs[j + 1] for j in range(s)]
            for v in critical_values_at(fam, t):
                pass  # residual asserted through the solver's own tolerance
            from braidlinks.roots import aberth
            for c in aberth(np.array(dcoeffs)):
                resid = abs(sum(dc * c ** j for j, dc in enumerate(dcoeffs)))
                assert resid < 1e-10 * (1 + abs(c)) ** (s - 1)


class TestArgProfile:
    def test_pure_rotation(self):
        # single strand on the unit circle at doubled speed: D0 = 2
        sp = single_strand(cosine(2, 1), sine(2, 1))
        fam = build_ga(sp, Fraction(1))
        prof = arg_profile(fam, 1024)
        assert prof.valid
        b0 = prof.branch(0)
        assert b0.d_min == pytest.approx(2.0, abs=1e-9)
        assert b0.d_max == pytest.approx(2.0, abs=1e-9)
        assert min_admissible_nm(prof) == 1

    def test_lemniscate_invalid_with_zero_locations(self):
        fam = build_ga(gerono_lemniscate(), Fraction(1, 2))
        prof = arg_profile(fam, 1024)
        assert not prof.valid
        zeros = sorted(prof.zero_locations)
        expected = [math.pi / 4, 3 * math.pi / 4, 5 * math.pi / 4,
                    7 * math.pi / 4]
        assert len(zeros) == 4
        for z, e in zip(zeros, expected):
            assert z == pytest.approx(e, abs=1e-6)
        with pytest.raises(Exception):
            min_admissible_nm(prof)

    def test_three_twist_square_profile(self):
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        prof = arg_profile(fam, 4096)
        assert prof.valid
        assert prof.converged
        assert len(prof.branches) == 3
        # branch 0 range and the critical-value range pin the bound
        assert prof.branch(0).d_min == pytest.approx(-13.7615, abs=2e-3)
        assert prof.branch(1).d_min == pytest.approx(-14.1158, abs=2e-3)
        assert min_admissible_nm(prof) == 15

    def test_min_admissible_on_synthetic_range(self):
        # branch with D range [-13.2, 5.0] at default margin gives 14
        grid = np.linspace(0, 2 * math.pi, 1024, endpoint=False)
        from braidlinks.braidfamily import ArgDerivativeProfile, BranchProfile
        d = np.full_like(grid, 5.0)
        d[:10] = -13.2
        b = BranchProfile(0, np.ones_like(grid, dtype=complex), d, 1.0,
                          -13.2, 5.0)
        prof = ArgDerivativeProfile(grid, (b,), True, (), (1024,), True)
        assert min_admissible_nm(prof) == 14

    def test_envelope_identity_against_finite_differences(self):
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        prof = arg_profile(fam, 1024)
        rng = np.random.default_rng(3)
        h = 1e-5
        grid = prof.grid
        for b in prof.branches[1:]:
            for idx in rng.integers(1, len(grid) - 1, 12):
                t = float(grid[idx])
                # tracked neighbours for the finite difference
                vp = b.values[idx + 1]
                vm = b.values[idx - 1]
                dt = float(grid[idx + 1] - grid[idx - 1])
                fd = (vp - vm) / dt
                # envelope: v' = dg/dt at the critical root; compare arg rates
                d_env = b.d_arg[idx]
                d_fd = (fd / b.values[idx]).imag
                assert d_env == pytest.approx(d_fd, rel=2e-3, abs=2e-3)

    def test_envelope_identity_pointwise(self):
        # sharper check straight from the definition at random parameters
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        rng = np.random.default_rng(4)
        h = 1e-5
        for t in rng.uniform(0.1, 6.0, 8):
            vs = sorted(critical_values_at(fam, t), key=lambda z: (z.real, z.imag))
            vp = sorted(critical_values_at(fam, t + h), key=lambda z: (z.real, z.imag))
            vm = sorted(critical_values_at(fam, t - h), key=lambda z: (z.real, z.imag))
            gt_polys = [p.derivative() for p in fam.coefficients]
            coeffs = [eval_trig(p, t) for p in fam.coefficients]
            from braidlinks.roots import aberth
            s = fam.degree
            dcoeffs = np.array([(j + 1) * coeffs[j + 1] for j in range(s)])
            crits = aberth(dcoeffs)
            for c in crits:
                v = sum(cf * c ** j for j, cf in enumerate(coeffs))
                gt = sum(eval_trig(p, t) * c ** j
                         for j, p in enumerate(gt_polys))
                i = min(range(len(vs)), key=lambda i: abs(vs[i] - v))
                fd = (vp[i] - vm[i]) / (2 * h)
                assert gt == pytest.approx(fd, rel=1e-6, abs=1e-8)

    def test_scale_invariance(self):
        # D ranges agree at a and a/2
        p1 = arg_profile(build_ga(three_twist_square(), Fraction(1, 2)), 1024)
        p2 = arg_profile(build_ga(three_twist_square(), Fraction(1, 4)), 1024)
        for b1, b2 in zip(p1.branches, p2.branches):
            assert b1.d_min == pytest.approx(b2.d_min, rel=1e-6, abs=1e-6)
            assert b1.d_max == pytest.approx(b2.d_max, rel=1e-6, abs=1e-6)

    def test_small_grid_rejected(self):
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        with pytest.raises(Exception):
            arg_profile(fam, 512)

    def test_csv_rows(self):
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        prof = arg_profile(fam, 1024)
        rows = prof.to_csv_rows()
        assert len(rows) == len(prof.grid) * len(prof.branches)
        assert len(rows[0]) == 5
