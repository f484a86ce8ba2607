"""Radial Newton polygon boundary, faces and face functions, convenience,
the product-boundary prediction, and the minimal admissible k.

All hull computation is exact integer arithmetic on the exponent-sum support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .mixedpoly import MixedPolynomial, min_v_order

Point = tuple[int, int]


@dataclass(frozen=True)
class WeightVector:
    p1: int
    p2: int

    def __post_init__(self):
        if self.p1 < 1 or self.p2 < 1:
            raise ValueError("weights must be positive integers")

    def value(self, pt: Point) -> int:
        return self.p1 * pt[0] + self.p2 * pt[1]

    def primitive(self) -> "WeightVector":
        g = math.gcd(self.p1, self.p2)
        return WeightVector(self.p1 // g, self.p2 // g)


@dataclass(frozen=True)
class Face:
    start: Point   # larger x endpoint
    end: Point     # smaller x endpoint
    normal: WeightVector
    d: int
    points: tuple[Point, ...]  # all support points on the face, x descending


@dataclass(frozen=True)
class NewtonBoundary:
    vertices: tuple[Point, ...]  # extreme points, x strictly decreasing
    faces: tuple[Face, ...]

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "faces": [{"from": list(f.start), "to": list(f.end),
                       "normal": [f.normal.p1, f.normal.p2], "d": f.d}
                      for f in self.faces],
        }

    @property
    def x_intercept(self) -> Optional[int]:
        return next((v[0] for v in self.vertices if v[1] == 0), None)

    @property
    def y_intercept(self) -> Optional[int]:
        return next((v[1] for v in self.vertices if v[0] == 0), None)


def _pareto_minimal(points: Iterable[Point]) -> list[Point]:
    pts = sorted(set(points))
    out: list[Point] = []
    best_y = None
    for (x, y) in pts:  # x ascending, y ascending within equal x
        if best_y is None or y < best_y:
            out.append((x, y))
            best_y = y
    return out


def _lower_left_chain(points: list[Point]) -> list[Point]:
    """Extreme points of conv(points + positive quadrant), x ascending."""
    chain: list[Point] = []
    for p in points:  # Pareto set is x ascending, y descending
        while len(chain) >= 2:
            (x0, y0), (x1, y1) = chain[-2], chain[-1]
            cross = (x1 - x0) * (p[1] - y0) - (p[0] - x0) * (y1 - y0)
            if cross <= 0:  # middle point above or on the chord: not extreme
                chain.pop()
            else:
                break
        chain.append(p)
    return chain


def boundary_from_support(support: Iterable[Point]) -> NewtonBoundary:
    support_set = set(support)
    pts = _pareto_minimal(support_set)
    if not pts:
        raise ValueError("empty support")
    chain = _lower_left_chain(pts)
    verts = tuple(sorted(chain, key=lambda p: -p[0]))
    faces = []
    for (x1, y1), (x2, y2) in zip(verts, verts[1:]):
        dy, dx = y2 - y1, x1 - x2
        g = math.gcd(dy, dx)
        normal = WeightVector(dy // g, dx // g)
        d = normal.value((x1, y1))
        on_face = tuple(sorted(
            (p for p in support_set if normal.value(p) == d
             and x2 <= p[0] <= x1),
            key=lambda p: -p[0]))
        faces.append(Face((x1, y1), (x2, y2), normal, d, on_face))
    return NewtonBoundary(verts, tuple(faces))


def newton_boundary(f: MixedPolynomial) -> NewtonBoundary:
    """Compact faces of the convex hull of the exponent-sum support plus the
    positive quadrant."""
    if f.is_zero_poly:
        raise ValueError("Newton boundary of the zero polynomial is undefined")
    return boundary_from_support(f.support_points())


def face_function(f: MixedPolynomial, P: WeightVector) -> MixedPolynomial:
    """Terms of f minimizing the radial degree p1(nu1+mu1) + p2(nu2+mu2)."""
    if f.is_zero_poly:
        raise ValueError("face function of the zero polynomial is undefined")
    rdeg = {e: P.p1 * (e[0] + e[1]) + P.p2 * (e[2] + e[3]) for e in f.terms}
    d = min(rdeg.values())
    return MixedPolynomial.from_terms(
        {e: c for e, c in f.terms.items() if rdeg[e] == d})


def is_convenient(f: MixedPolynomial) -> bool:
    """The support meets both coordinate axes."""
    pts = f.support_points()
    return any(y == 0 for _x, y in pts) and any(x == 0 for x, _y in pts)


def _product_conditions_hold(s: int, k: int, n_m: int, nu1: int, nu2: int) -> bool:
    """The three strict segment-position inequalities for one monomial of q.

    For nu1 = 0 the second inequality of (2) degenerates to an equality and
    is skipped (the translated segment shares only its axis endpoint).
    """
    if n_m >= 2 * k * nu1 + nu2:
        return False
    if n_m * (s + nu1) >= 2 * s * k * nu1 + n_m * nu1 + s * nu2:
        return False
    if 2 * k * (s - nu1) + n_m >= 2 * s * k + nu2:
        return False
    if nu1 > 0 and (2 * k * (s - nu1) + n_m) * (s + nu1) >= (
            2 * s * s * k + n_m * s + nu1 * nu2):
        return False
    if 2 * s * k + n_m >= 2 * k * (s + nu1) + nu2:
        return False
    return True


def min_k(s: int, n_m: int, q_support: Iterable[Point]) -> int:
    """Smallest k making every monomial of q except (0, n_m) satisfy the
    product-boundary inequalities, by direct upward scan."""
    if s < 1 or n_m < 1:
        raise ValueError("s and n_m must be positive")
    pts = [p for p in set(q_support) if p != (0, n_m)]
    k = 1
    while True:
        if all(_product_conditions_hold(s, k, n_m, x, y) for x, y in pts):
            return k
        k += 1
        if k > 10**7:
            raise RuntimeError("min_k scan runaway; support malformed?")


def predict_product_boundary(s: int, k: int, n_m: int,
                             gamma_q: NewtonBoundary) -> NewtonBoundary:
    """Boundary of the product family: the segment [(s, n_m), (0, 2sk+n_m)]
    joined with gamma_q translated by (s, 0)."""
    q_support = {p for f in gamma_q.faces for p in f.points}
    q_support.update(gamma_q.vertices)
    kmin = min_k(s, n_m, q_support)
    if k < kmin:
        raise ValueError(f"k={k} below the minimal admissible k={kmin}; "
                         "the product boundary is not guaranteed")
    pts = {(x + s, y) for (x, y) in q_support}
    pts.add((s, n_m))
    pts.add((0, 2 * s * k + n_m))
    # interior lattice points of the translated segment keep face point lists
    # faithful to the product's support
    for j in range(s + 1):
        pts.add((s - j, 2 * j * k + n_m))
    return boundary_from_support(pts)


def boundaries_equal(a: NewtonBoundary, b: NewtonBoundary) -> bool:
    if a.vertices != b.vertices:
        return False
    return all(fa.start == fb.start and fa.end == fb.end
               and fa.normal == fb.normal and fa.d == fb.d
               for fa, fb in zip(a.faces, b.faces))
