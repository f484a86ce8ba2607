import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from braidlinks.braidfamily import build_ga
from braidlinks.catalog import gerono_lemniscate, three_twist_square
from braidlinks.mixedpoly import (MixedPolynomial, RescaleExponentError,
                                  RescaleParityError, min_v_order,
                                  minimal_rescale_k, multiply, ord_profile,
                                  radial_type, rescale_to_mixed)
from braidlinks.scalars import QC
from braidlinks.trigcurve import (ComponentCurve, StrandParametrization,
                                  cosine, sine)


def mono(n1=0, m1=0, n2=0, m2=0, c=1):
    return MixedPolynomial.monomial(n1, m1, n2, m2, QC(c))


def poly(*terms):
    acc = {}
    for (n1, m1, n2, m2, c) in terms:
        acc[(n1, m1, n2, m2)] = QC(c)
    return MixedPolynomial.from_terms(acc)


Q_TWIST = poly((4, 0, 0, 0, 1), (2, 0, 3, 0, -2), (1, 0, 5, 0, -4),
               (0, 0, 6, 0, -1), (0, 0, 7, 0, -1))


def q_binomial(n):
    return poly((2, 0, 0, 0, 1), (0, 0, n, 0, 1))


class TestRescale:
    def test_lemniscate_family_all_k(self):
        fam = build_ga(gerono_lemniscate(mirror=True), Fraction(1))
        for k in (1, 2, 3):
            p = rescale_to_mixed(fam, k)
            assert p.semiholomorphic
            assert p.is_monic_in_u()
            # u^1 terms: (3/4)(u v^{2k+1} vbar^{2k-1} - u v^{2k-1} vbar^{2k+1})
            assert p.terms[(1, 0, 2 * k + 1, 2 * k - 1)] == QC(Fraction(3, 4))
            assert p.terms[(1, 0, 2 * k - 1, 2 * k + 1)] == QC(Fraction(-3, 4))
            assert p.support_points() == {(3, 0), (1, 4 * k), (0, 6 * k)}

    def test_odd_frequency_fails(self):
        sp = StrandParametrization((ComponentCurve(
            cosine(1, 1), sine(1, 0), 1),))
        fam = build_ga(sp, Fraction(1))
        with pytest.raises(RescaleParityError) as err:
            rescale_to_mixed(fam, 1)
        assert any(l % 2 for _j, l in err.value.offending)

    def test_reference_family_k1_integrality(self):
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        # frequencies reach ±10 on u^0, so k = 2 is the least usable k
        assert minimal_rescale_k(fam) == 2
        with pytest.raises(RescaleExponentError) as err:
            rescale_to_mixed(fam, 1)
        assert err.value.minimal_k == 2
        p = rescale_to_mixed(fam, 2)
        assert all(min(e) >= 0 for e in p.terms)
        assert p.is_monic_in_u()

    def test_roundtrip_on_unit_circle(self):
        # substituting v = e^{it} recovers the family exactly
        fam = build_ga(three_twist_square(), Fraction(1, 2))
        p = rescale_to_mixed(fam, 2)
        rng = np.random.default_rng(5)
        for _ in range(64):
            t = rng.uniform(0, 2 * math.pi)
            u = complex(rng.normal(), rng.normal())
            v = complex(math.cos(t), math.sin(t))
            assert p.eval(u, v) == pytest.approx(fam.eval(u, t), abs=1e-12)


class TestMultiply:
    def test_uv(self):
        assert multiply(mono(1), mono(0, 0, 1)).terms == {
            (1, 0, 1, 0): QC(1)}

    def test_difference_of_squares(self):
        f = poly((1, 0, 0, 0, 1), (0, 0, 1, 0, 1))
        g = poly((1, 0, 0, 0, 1), (0, 0, 1, 0, -1))
        assert multiply(f, g).terms == {(2, 0, 0, 0): QC(1),
                                        (0, 0, 2, 0): QC(-1)}

    def test_minkowski_support(self):
        fam = build_ga(gerono_lemniscate(mirror=True), Fraction(1))
        p = rescale_to_mixed(fam, 1)
        q = q_binomial(14)
        prod = multiply(p, q)
        # brute-force support prediction: exponentwise sums with surviving
        # coefficients; here no cancellation occurs
        expected = set()
        for ea in p.terms:
            for eb in q.terms:
                expected.add(tuple(x + y for x, y in zip(ea, eb)))
        assert set(prod.terms) == expected

    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2),
                              st.integers(-3, 3)), min_size=1, max_size=4),
           st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2),
                              st.integers(-3, 3)), min_size=1, max_size=4),
           st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2),
                              st.integers(-3, 3)), min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_commutative_associative(self, ta, tb, tc):
        def mk(rows):
            return MixedPolynomial.from_terms(
                {(n1, 0, n2, 0): QC(c) for n1, n2, c in rows if c})
        a, b, c = mk(ta), mk(tb), mk(tc)
        assert multiply(a, b).terms == multiply(b, a).terms
        assert multiply(multiply(a, b), c).terms == multiply(
            a, multiply(b, c)).terms


class TestRadialType:
    def test_rescaled_family(self):
        fam = build_ga(gerono_lemniscate(mirror=True), Fraction(1))
        rt = radial_type(rescale_to_mixed(fam, 1))
        assert rt.as_tuple() == (6, 3, 18)
        assert rt.primitive == (2, 1, 6)

    def test_rescaled_family_scaling_in_k(self):
        for sp in (gerono_lemniscate(mirror=True), three_twist_square()):
            fam = build_ga(sp, Fraction(1, 2))
            s = fam.degree
            for k in (2, 3):
                rt = radial_type(rescale_to_mixed(fam, k))
                assert rt.as_tuple() == (2 * s * k, s, 2 * s * s * k)

    def test_brieskorn(self):
        assert radial_type(q_binomial(3)).as_tuple() == (3, 2, 6)

    def test_incompatible_degrees(self):
        f = poly((2, 0, 0, 0, 1), (0, 0, 3, 0, 1), (0, 0, 7, 0, 1))
        assert radial_type(f) is None

    def test_single_monomial(self):
        assert radial_type(mono(2, 0, 1)).as_tuple() == (1, 1, 3)

    def test_axis_parallel_support_has_no_positive_weights(self):
        f = poly((1, 0, 0, 0, 1), (1, 0, 5, 0, 1))
        assert radial_type(f) is None

    def test_mixed_exponents_use_sums(self):
        # v vbar pairs count through nu+mu
        f = poly((2, 0, 0, 0, 1), (0, 0, 2, 1, 1))  # u^2 + v^2 vbar
        assert radial_type(f).as_tuple() == (3, 2, 6)


class TestOrdProfile:
    def test_twist_polynomial(self):
        prof = dict(ord_profile(Q_TWIST))
        assert prof[0] == 6   # ord theta_0 = n_4
        assert prof[1] == 5   # n_3
        assert prof[2] == 3   # n_2
        assert prof[3] is None
        assert min_v_order(Q_TWIST) == 6

    def test_binomial(self):
        for n in (6, 14):
            assert min_v_order(q_binomial(n)) == n

    def test_bare_u(self):
        q = mono(1)
        assert ord_profile(q) == [(0, None)]
        assert min_v_order(q) is None

    def test_requires_monic(self):
        with pytest.raises(ValueError):
            ord_profile(poly((2, 0, 0, 0, 2)))

    def test_requires_holomorphic(self):
        with pytest.raises(ValueError):
            ord_profile(poly((2, 0, 0, 0, 1), (0, 0, 1, 1, 1)))


class TestJson:
    def test_roundtrip_exact(self):
        q = Q_TWIST
        back = MixedPolynomial.from_json(json.loads(json.dumps(q.to_json())))
        assert back.terms == q.terms
        assert back.exact

    def test_float_mode_uses_numbers(self):
        f = MixedPolynomial.from_terms({(1, 0, 0, 0): 0.5 + 0.25j})
        js = f.to_json()
        assert js["terms"][0]["c"] == {"re": 0.5, "im": 0.25}
        back = MixedPolynomial.from_json(js)
        assert not back.exact

    def test_semiholomorphic_flag(self):
        assert q_binomial(3).to_json()["semiholomorphic"] is True
        g = poly((0, 1, 0, 0, 1))
        assert g.to_json()["semiholomorphic"] is False
