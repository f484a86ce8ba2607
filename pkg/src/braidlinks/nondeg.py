"""Face non-degeneracy verdicts and the product certificate.

Holomorphic face functions collapse to a univariate polynomial along the
face's lattice direction; squarefreeness of the collapse (exact gcd over
rational complex coefficients) decides non-degeneracy, and the Euler
identity upgrades it to strong non-degeneracy.  The two semiholomorphic
faces of a product family are decided by sign-definite margins of
n_m + d/dt arg along the profile branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .braidfamily import ArgDerivativeProfile, SemiholoFamily, min_admissible_nm
from .mixedpoly import (MixedPolynomial, min_v_order, multiply, radial_type,
                        rescale_to_mixed)
from .newton import (NewtonBoundary, WeightVector, boundaries_equal,
                     face_function, is_convenient, min_k, newton_boundary,
                     predict_product_boundary)
from .scalars import QC, as_complex, coeff_to_json, is_exact


class CertifyError(ValueError):
    """Raised when a certificate is refused rather than issued false."""


@dataclass(frozen=True)
class FaceVerdict:
    face_id: str
    normal: Optional[tuple[int, int]]
    endpoints: tuple[tuple[int, int], ...]
    face_class: str   # monomial-vertex | holomorphic | semiholomorphic-Q1 | semiholomorphic-Q2
    verdict: str      # strongly-nondegenerate | nondegenerate | degenerate | invalid-input
    evidence: dict

    @property
    def passed(self) -> bool:
        return self.verdict in ("strongly-nondegenerate", "nondegenerate")

    def to_json(self) -> dict:
        return {
            "face": self.face_id,
            "normal": list(self.normal) if self.normal else None,
            "endpoints": [list(p) for p in self.endpoints],
            "class": self.face_class,
            "verdict": self.verdict,
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class Certificate:
    convenient: bool
    verdicts: tuple[FaceVerdict, ...]
    parameters: dict
    grid: dict
    overall: bool

    def to_json(self) -> dict:
        return {
            "convenient": self.convenient,
            "parameters": self.parameters,
            "grid": self.grid,
            "verdicts": [v.to_json() for v in self.verdicts],
            "overall": self.overall,
        }


# ---------------------------------------------------------------------------
# Univariate collapse and squarefreeness (exact)


def _to_exact(c) -> QC:
    if is_exact(c):
        return c
    z = as_complex(c)
    return QC(Fraction(z.real), Fraction(z.imag))


def _poly_gcd_degree(a: list[QC], b: list[QC]) -> int:
    """Degree of gcd of univariate polynomials with QC coefficients."""

    def norm(p):
        while p and p[-1].is_zero():
            p.pop()
        return p

    a, b = norm(list(a)), norm(list(b))
    while b:
        # a mod b
        while len(a) >= len(b) and a:
            factor = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, cb in enumerate(b):
                a[i + shift] = a[i + shift] - factor * cb
            a = norm(a)
        a, b = b, a
    return len(a) - 1


def collapse_face_to_univariate(h: MixedPolynomial, P: WeightVector,
                                ) -> tuple[list[QC], tuple[int, int]]:
    """Write the holomorphic face h = c u^alpha v^beta H(w) with w the
    primitive step monomial along the face; returns (coeffs of H low->high,
    (alpha, beta))."""
    if not h.holomorphic:
        raise ValueError("collapse needs a holomorphic face function")
    pts = {(e[0], e[2]): _to_exact(c) for e, c in h.terms.items()}
    vals = {P.p1 * x + P.p2 * y for (x, y) in pts}
    if len(vals) != 1:
        raise ValueError("face function is not homogeneous for the weight")
    alpha = min(x for x, _y in pts)
    beta = min(y for _x, y in pts)
    shifted = {(x - alpha, y - beta): c for (x, y), c in pts.items()}
    if len(shifted) == 1:
        ((x, y), c) = next(iter(shifted.items()))
        assert (x, y) == (0, 0)
        return [c], (alpha, beta)
    # remaining support sits on a segment with x strictly decreasing
    order = sorted(shifted, key=lambda p: -p[0])
    (x0, y0), (x1, y1) = order[0], order[-1]
    dx, dy = x0 - x1, y1 - y0
    g = math.gcd(dx, dy)
    sx, sy = dx // g, dy // g  # one step: x -= sx, y += sy
    coeffs = [QC(0)] * (g + 1)
    for (x, y), c in shifted.items():
        step = (x0 - x) // sx if sx else (y - y0) // sy
        if (x0 - x != step * sx) or (y - y0 != step * sy):
            raise ValueError("support point off the face lattice")
        coeffs[step] = coeffs[step] + c
    return coeffs, (alpha, beta)


def _squarefree(coeffs: list[QC]) -> bool:
    deriv = [coeffs[i] * QC(i) for i in range(1, len(coeffs))]
    if not any(not c.is_zero() for c in deriv):
        return len([c for c in coeffs if not c.is_zero()]) <= 1
    return _poly_gcd_degree(list(coeffs), deriv) == 0


def holomorphic_face_nondegenerate(h: MixedPolynomial, P: WeightVector,
                                   ) -> FaceVerdict:
    """Squarefree collapse decides the verdict; vertex monomials are vacuous
    (empty zero set in the torus) and holomorphic faces upgrade to strong
    non-degeneracy by the Euler identity."""
    coeffs, (alpha, beta) = collapse_face_to_univariate(h, P)
    pts = sorted(h.support_points(), key=lambda p: -p[0])
    endpoints = (pts[0], pts[-1]) if len(pts) > 1 else (pts[0],)
    if len(coeffs) == 1:
        return FaceVerdict(
            f"vertex {pts[0]}", (P.p1, P.p2), endpoints, "monomial-vertex",
            "strongly-nondegenerate",
            {"collapsed": _coeffs_json(coeffs), "note": "vertex monomial: "
             "empty zero set in the torus"})
    sqf = _squarefree(coeffs)
    return FaceVerdict(
        f"face {pts[0]}..{pts[-1]}", (P.p1, P.p2), endpoints, "holomorphic",
        "strongly-nondegenerate" if sqf else "degenerate",
        {"collapsed": _coeffs_json(coeffs), "squarefree": sqf,
         "monomial_factor": [alpha, beta]})


def _coeffs_json(coeffs: Sequence[QC]):
    return [coeff_to_json(c) for c in coeffs]


# ---------------------------------------------------------------------------
# Newton number


def newton_number(q: MixedPolynomial) -> int:
    """Two-variable combinatorial invariant 2A - a - b + 1 from the region
    between the boundary and the axes (exact shoelace)."""
    if not q.holomorphic:
        raise ValueError("Newton number needs a holomorphic polynomial")
    if not is_convenient(q):
        raise ValueError("Newton number needs a convenient polynomial "
                         "(boundary must meet both axes)")
    bd = newton_boundary(q)
    a = bd.x_intercept
    b = bd.y_intercept
    poly = [(0, 0)] + [v for v in bd.vertices][::-1]  # (0,0), (0,b) ... (a,0)
    # shoelace over the closed polygon (0,0) -> (0,b) -> ... -> (a,0) -> (0,0)
    twice_area = 0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        twice_area += x0 * y1 - x1 * y0
    twice_area = abs(twice_area)
    return twice_area - a - b + 1


def q_is_nondegenerate(q: MixedPolynomial, mu: Optional[int] = None,
                       ) -> tuple[bool, list[FaceVerdict], dict]:
    """Verdicts for every face of the boundary of q; optionally reports the
    consistency of a user-supplied local invariant mu against the Newton
    number."""
    if not q.holomorphic:
        raise ValueError("q must be holomorphic")
    bd = newton_boundary(q)
    verdicts = []
    for face in bd.faces:
        verdicts.append(
            holomorphic_face_nondegenerate(face_function(q, face.normal),
                                           face.normal))
    ok = all(v.passed for v in verdicts)
    report: dict = {"mu": mu}
    if mu is not None and is_convenient(q):
        nu = newton_number(q)
        report["nu"] = nu
        report["mu_equals_nu"] = (mu == nu)
        report["consistency"] = "consistent" if mu == nu else "inconsistent"
    elif mu is not None:
        report["consistency"] = "unknown (not convenient)"
    else:
        report["consistency"] = "unknown"
    return ok, verdicts, report


def numeric_critical_probe(h: MixedPolynomial, n_samples: int = 10_000,
                           seed: int = 0) -> float:
    """Falsification probe: smallest |gradient| over torus samples where |h|
    is small, normalized by the local scale; near-zero output suggests a
    critical point on the zero set."""
    rng = np.random.default_rng(seed)
    best = math.inf
    eps = 1e-6
    for _ in range(n_samples):
        u = math.exp(rng.uniform(-0.7, 0.7)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        v = math.exp(rng.uniform(-0.7, 0.7)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        val = h.eval(u, v)
        scale = sum(abs(as_complex(c)) for c in h.terms.values())
        if abs(val) > 0.05 * scale:
            continue
        grads = []
        for du, dv in ((eps, 0), (1j * eps, 0), (0, eps), (0, 1j * eps)):
            grads.append((h.eval(u + du, v + dv) - val) / eps)
        gnorm = math.hypot(*(abs(g) for g in grads))
        best = min(best, gnorm / scale)
    return best


# ---------------------------------------------------------------------------
# Product certification


def _signed_margin(n_m: int, d_samples: np.ndarray) -> float:
    """Margin of sign-definiteness of n_m + D over the grid: positive when
    the function is one-signed, its distance to zero otherwise negated."""
    vals = n_m + d_samples[np.isfinite(d_samples)]
    lo, hi = float(vals.min()), float(vals.max())
    if lo > 0:
        return lo
    if hi < 0:
        return -hi
    return -min(abs(lo), abs(hi), abs(lo - hi))


def certify_product(fam: SemiholoFamily, k: int, q: MixedPolynomial,
                    n_prime: Optional[int] = None,
                    profile: Optional[ArgDerivativeProfile] = None,
                    margin: float = 1e-3, grid_size: int = 4096,
                    ) -> Certificate:
    """Certificate that (rescaled family) * q is strongly non-degenerate and
    convenient: boundary matches the prediction, q-side faces pass the
    holomorphic test, and the two semiholomorphic faces pass sign-definite
    argument-derivative margins.
    """
    from .braidfamily import arg_profile

    if not q.holomorphic or not q.is_monic_in_u():
        raise CertifyError("q must be holomorphic and monic in u")
    n_m = min_v_order(q)
    if n_m is None:
        raise CertifyError("theta_0 of q vanishes identically: n_m undefined")
    s = fam.degree
    kmin = min_k(s, n_m, q.support_points())
    if k < kmin:
        raise CertifyError(f"k={k} below minimal admissible k={kmin}")

    if profile is None:
        profile = arg_profile(fam, grid_size)
    if not profile.valid:
        raise CertifyError(
            "argument profile invalid: "
            + "; ".join(f"{f.kind} on branch {f.branch} at t={f.t:.6f}"
                        for f in profile.findings))
    if n_prime is None:
        n_prime = min_admissible_nm(profile)

    p = rescale_to_mixed(fam, k)
    f = multiply(p, q)
    bd = newton_boundary(f)
    pred = predict_product_boundary(s, k, n_m, newton_boundary(q))
    if not boundaries_equal(bd, pred):
        raise CertifyError(
            "computed product boundary does not match the prediction: "
            f"computed {bd.to_json()}, predicted {pred.to_json()}")

    verdicts: list[FaceVerdict] = []

    # q-side faces carry u^s q_P; the monomial factor does not affect the
    # verdict, so the collapse runs on q's own faces
    q_bd = newton_boundary(q)
    for face in q_bd.faces:
        v = holomorphic_face_nondegenerate(face_function(q, face.normal),
                                           face.normal)
        verdicts.append(FaceVerdict(
            f"product face {tuple(p0 + d for p0, d in zip(face.start, (s, 0)))}"
            f"..{tuple(p0 + d for p0, d in zip(face.end, (s, 0)))}",
            (face.normal.p1, face.normal.p2),
            ((face.start[0] + s, face.start[1]), (face.end[0] + s, face.end[1])),
            "holomorphic", v.verdict, v.evidence))

    # the family-side face [(s, n_m), (0, 2sk+n_m)]: branches j >= 1
    q1_margins = []
    q1_ok = True
    for b in profile.branches[1:]:
        m = _signed_margin(n_m, b.d_arg)
        q1_margins.append(m)
        if m <= margin:
            q1_ok = False
    verdicts.append(FaceVerdict(
        f"face ({s},{n_m})..(0,{2 * s * k + n_m})", None,
        ((s, n_m), (0, 2 * s * k + n_m)), "semiholomorphic-Q1",
        "strongly-nondegenerate" if q1_ok else "degenerate",
        {"branch_margins": q1_margins, "n_m": n_m,
         "note": "vacuous (degree 1 family)" if s == 1 else ""}))

    # the vertex (0, 2sk+n_m): v^{n_m} times the constant loop
    m0 = _signed_margin(n_m, profile.branches[0].d_arg)
    verdicts.append(FaceVerdict(
        f"vertex (0,{2 * s * k + n_m})", None, ((0, 2 * s * k + n_m),),
        "semiholomorphic-Q2",
        "strongly-nondegenerate" if m0 > margin else "degenerate",
        {"margin": m0, "n_m": n_m}))

    # remaining vertices are single monomials by the boundary match
    for vtx in (
            (s + q.u_degree, 0), (s, n_m)):
        count = sum(1 for e in f.terms
                    if (e[0] + e[1], e[2] + e[3]) == vtx)
        if count != 1:
            raise CertifyError(f"vertex {vtx} carries {count} terms; "
                               "expected a single monomial")
        verdicts.append(FaceVerdict(
            f"vertex {vtx}", None, (vtx,), "monomial-vertex",
            "strongly-nondegenerate",
            {"note": "single monomial: empty zero set in the torus"}))

    convenient = is_convenient(f)
    overall = convenient and all(v.passed for v in verdicts)

    a_repr = str(fam.a) if isinstance(fam.a, Fraction) else float(fam.a)
    cert = Certificate(
        convenient=convenient,
        verdicts=tuple(verdicts),
        parameters={"a": a_repr, "k": k, "n_m": n_m, "n_prime": n_prime,
                    "min_k": kmin},
        grid={"profile_grids": list(profile.refinement_history),
              "converged": profile.converged, "margin": margin,
              "q1_margins": q1_margins, "q2_margin": m0},
        overall=overall)
    return cert
