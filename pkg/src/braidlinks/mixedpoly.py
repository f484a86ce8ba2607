"""Sparse mixed polynomials in (u, ubar, v, vbar), the rescale producing a
polynomial family from a semiholomorphic one, and radial homogeneity.

Terms map exponent quadruples (nu1, mu1, nu2, mu2) to nonzero coefficients.
A polynomial is semiholomorphic in u when no term uses ubar, and holomorphic
when neither conjugate appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .braidfamily import SemiholoFamily
from .scalars import (QC, Coeff, add as c_add, as_complex, coeff_from_json,
                      coeff_to_json, is_exact, is_zero, mul as c_mul)

Expo = tuple[int, int, int, int]

FLOAT_PRUNE_REL = 1e-12


class RescaleParityError(ValueError):
    def __init__(self, msg, offending):
        super().__init__(msg)
        self.offending = offending  # list of (u_power, frequency)


class RescaleExponentError(ValueError):
    def __init__(self, msg, minimal_k):
        super().__init__(msg)
        self.minimal_k = minimal_k


@dataclass(frozen=True)
class MixedPolynomial:
    terms: dict[Expo, Coeff]

    @staticmethod
    def from_terms(terms: Mapping[Expo, Coeff], prune: bool = True,
                   ) -> "MixedPolynomial":
        d = dict(terms)
        for e in d:
            if len(e) != 4 or any(x < 0 for x in e):
                raise ValueError(f"bad exponent quadruple {e}")
        if prune:
            scale = max((abs(as_complex(c)) for c in d.values()), default=0.0)
            tol = FLOAT_PRUNE_REL * scale
            d = {e: c for e, c in d.items()
                 if not is_zero(c, 0.0 if is_exact(c) else tol)}
        return MixedPolynomial(d)

    @staticmethod
    def monomial(nu1=0, mu1=0, nu2=0, mu2=0, c=QC(1)) -> "MixedPolynomial":
        return MixedPolynomial.from_terms({(nu1, mu1, nu2, mu2): c})

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    @property
    def is_zero_poly(self) -> bool:
        return not self.terms

    @property
    def semiholomorphic(self) -> bool:
        return all(e[1] == 0 for e in self.terms)

    @property
    def holomorphic(self) -> bool:
        return all(e[1] == 0 and e[3] == 0 for e in self.terms)

    @property
    def u_degree(self) -> int:
        return max((e[0] for e in self.terms), default=0)

    def is_monic_in_u(self) -> bool:
        """A single term u^m with coefficient 1 at the top u-degree."""
        m = self.u_degree
        tops = [(e, c) for e, c in self.terms.items() if e[0] == m]
        if len(tops) != 1:
            return False
        (e, c) = tops[0]
        return e == (m, 0, 0, 0) and as_complex(c) == 1

    def support_points(self) -> set[tuple[int, int]]:
        """Exponent sums (nu1+mu1, nu2+mu2) of the stored terms."""
        return {(e[0] + e[1], e[2] + e[3]) for e in self.terms}

    def __add__(self, other: "MixedPolynomial") -> "MixedPolynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = c_add(out[e], c) if e in out else c
        return MixedPolynomial.from_terms(out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "MixedPolynomial":
        if isinstance(q, (int, Fraction)):
            q = QC(q)
        return MixedPolynomial.from_terms(
            {e: c_mul(c, q) for e, c in self.terms.items()})

    def eval(self, u: complex, v: complex) -> complex:
        ub, vb = u.conjugate(), v.conjugate()
        acc = 0j
        for (n1, m1, n2, m2), c in self.terms.items():
            acc += as_complex(c) * u**n1 * ub**m1 * v**n2 * vb**m2
        return acc

    def u_coefficients(self) -> dict[int, dict[tuple[int, int], Coeff]]:
        """Per u-power j the map (nu2, mu2) -> coefficient (requires no ubar)."""
        if not self.semiholomorphic:
            raise ValueError("u-coefficient extraction needs a polynomial "
                             "without ubar")
        out: dict[int, dict[tuple[int, int], Coeff]] = {}
        for (n1, _m1, n2, m2), c in self.terms.items():
            out.setdefault(n1, {})[(n2, m2)] = c
        return out

    def to_json(self) -> dict:
        rows = []
        for e in sorted(self.terms):
            rows.append({"nu": [e[0], e[2]], "mu": [e[1], e[3]],
                         "c": coeff_to_json(self.terms[e])})
        return {"semiholomorphic": self.semiholomorphic, "terms": rows}

    @staticmethod
    def from_json(obj: dict) -> "MixedPolynomial":
        terms = {}
        for row in obj["terms"]:
            n1, n2 = row["nu"]
            m1, m2 = row["mu"]
            terms[(int(n1), int(m1), int(n2), int(m2))] = coeff_from_json(row["c"])
        return MixedPolynomial.from_terms(terms)


def multiply(f: MixedPolynomial, g: MixedPolynomial) -> MixedPolynomial:
    """Distributive product with like terms combined exponentwise."""
    out: dict[Expo, Coeff] = {}
    for ea, ca in f.terms.items():
        for eb, cb in g.terms.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3])
            p = c_mul(ca, cb)
            out[e] = c_add(out[e], p) if e in out else p
    return MixedPolynomial.from_terms(out)


def rescale_to_mixed(fam: SemiholoFamily, k: int) -> MixedPolynomial:
    """Map the term c e^{ilt} of the u^j coefficient to
    c u^j v^{(s-j)k + l/2} vbar^{(s-j)k - l/2}.

    Every frequency must be even (realizability gate) and the vbar exponent
    nonnegative; the error for a too-small k reports the least k that fixes
    every offending term.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    s = fam.degree
    odd = []
    short = []
    terms: dict[Expo, Coeff] = {}
    for j, poly in enumerate(fam.coefficients):
        w = (s - j) * k
        for l, c in poly.coeffs.items():
            if l % 2 != 0:
                odd.append((j, l))
                continue
            nu2, mu2 = w + l // 2, w - l // 2
            if min(nu2, mu2) < 0:
                need = math.ceil(abs(l) / (2 * (s - j)))
                short.append(((j, l), need))
                continue
            terms[(j, 0, nu2, mu2)] = c
    if odd:
        raise RescaleParityError(
            "odd frequencies prevent a polynomial rescale: "
            + ", ".join(f"u^{j} frequency {l}" for j, l in odd), odd)
    if short:
        fix = max(need for _e, need in short)
        raise RescaleExponentError(
            f"k={k} is too small for the frequency spread; k >= {fix} clears "
            "every exponent", fix)
    return MixedPolynomial.from_terms(terms)


def minimal_rescale_k(fam: SemiholoFamily) -> int:
    """Least k keeping every rescaled exponent nonnegative (the frequency
    spread of each coefficient must fit inside (s-j)k)."""
    s = fam.degree
    need = 1
    for j, poly in enumerate(fam.coefficients[:-1]):
        spread = poly.max_frequency
        if spread:
            need = max(need, math.ceil(spread / (2 * (s - j))))
    return need


@dataclass(frozen=True)
class RadialType:
    """Radial weights with degree; the gcd-reduced triple rides along."""

    q1: int
    q2: int
    degree: int
    primitive: tuple[int, int, int]

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.q1, self.q2, self.degree)


def radial_type(f: MixedPolynomial) -> Optional[RadialType]:
    """Detect radially weighted homogeneity: positive integer weights with
    q1 x + q2 y constant over the support sums.

    The presentation uses the intercept form of the support line (weights =
    opposite intercepts) whenever both intercepts are integral, else the
    primitive normal; None when no positive weights exist.
    """
    if f.is_zero_poly:
        raise ValueError("radial type of the zero polynomial is undefined")
    pts = sorted(f.support_points())
    if len(pts) == 1:
        x, y = pts[0]
        d = x + y
        if d <= 0:
            return None
        return RadialType(1, 1, d, _primitive_triple(1, 1, d))
    (x0, y0) = pts[0]
    (x1, y1) = pts[1]
    dx, dy = x1 - x0, y1 - y0
    for (x, y) in pts[2:]:
        if dx * (y - y0) != dy * (x - x0):
            return None
    # positive normal exists only for strictly decreasing support lines
    if dx == 0 or dy == 0 or (dx > 0) == (dy > 0):
        return None
    p1, p2 = abs(dy), abs(dx)
    g = math.gcd(p1, p2)
    p1, p2 = p1 // g, p2 // g
    d = p1 * x0 + p2 * y0
    if d <= 0:
        return None
    prim = _primitive_triple(p1, p2, d)
    if d % p1 == 0 and d % p2 == 0:
        ax, ay = d // p1, d // p2  # axis intercepts
        return RadialType(ay, ax, ax * ay, prim)
    return RadialType(p1, p2, d, prim)


def _primitive_triple(q1: int, q2: int, d: int) -> tuple[int, int, int]:
    g = math.gcd(math.gcd(q1, q2), d)
    return (q1 // g, q2 // g, d // g)


def ord_profile(q: MixedPolynomial) -> list[tuple[int, Optional[int]]]:
    """For monic holomorphic q = u^m + sum theta_j(v) u^j the list of
    (j, ord theta_j); absent coefficients carry None."""
    if not q.holomorphic:
        raise ValueError("ord profile needs a holomorphic polynomial")
    if not q.is_monic_in_u():
        raise ValueError("ord profile needs a polynomial monic in u")
    m = q.u_degree
    by_u: dict[int, list[int]] = {}
    for (n1, _m1, n2, _m2) in q.terms:
        by_u.setdefault(n1, []).append(n2)
    return [(j, min(by_u[j]) if j in by_u else None) for j in range(m)]


def min_v_order(q: MixedPolynomial) -> Optional[int]:
    """ord of the u^0 coefficient (the n_m of a monic q); None when theta_0
    vanishes identically."""
    prof = ord_profile(q)
    return prof[0][1]
