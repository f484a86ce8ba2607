"""Trigonometric polynomials, Fourier parametrizations of braids, and the
origin-avoidance shift.

A TrigPolynomial is a finite sum sum_l c_l e^{ilt} stored sparsely.  Strand
curves of a braid on s strands are grouped by link component: a component
with s_C strands carries one closed curve (F_C, G_C), and strand j of the
component sits at (F_C((t+2pi j)/s_C), G_C((t+2pi j)/s_C)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import braid as braid_mod
from .scalars import (QC, Coeff, as_complex, coeff_from_json, coeff_to_json,
                      conj, is_exact, is_zero, times_i)

# Relative threshold below which float coefficients are treated as arithmetic
# dust and dropped; exact coefficients are only dropped when exactly zero.
FLOAT_PRUNE_REL = 1e-12


class FitError(ValueError):
    pass


class ShiftError(ValueError):
    pass


@dataclass(frozen=True)
class TrigPolynomial:
    coeffs: dict[int, Coeff]
    real_valued: bool = False

    @staticmethod
    def from_terms(terms: Mapping[int, Coeff], real_valued: bool = False,
                   prune: bool = True) -> "TrigPolynomial":
        d = dict(terms)
        if prune:
            scale = max((abs(as_complex(c)) for c in d.values()), default=0.0)
            tol = FLOAT_PRUNE_REL * scale
            d = {l: c for l, c in d.items()
                 if not is_zero(c, 0.0 if is_exact(c) else tol)}
        return TrigPolynomial(d, real_valued)

    @staticmethod
    def constant(c) -> "TrigPolynomial":
        from .scalars import coeff_from
        cc = coeff_from(c) if not isinstance(c, (QC, complex)) else c
        return TrigPolynomial.from_terms({0: cc}, real_valued=True)

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs.values())

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.coeffs)

    @property
    def max_frequency(self) -> int:
        return max((abs(l) for l in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def check_real_valued(self) -> bool:
        """Hermitian symmetry c_{-l} == conj(c_l), exact or to float dust."""
        for l, c in self.coeffs.items():
            other = self.coeffs.get(-l)
            if other is None:
                return False
            d = as_complex(other) - as_complex(conj(c))
            if abs(d) > 1e-12 * max(1.0, abs(as_complex(c))):
                return False
        return True

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        from .scalars import add as c_add
        out = dict(self.coeffs)
        for l, c in other.coeffs.items():
            out[l] = c_add(out[l], c) if l in out else c
        return TrigPolynomial.from_terms(
            out, real_valued=self.real_valued and other.real_valued)

    def __mul__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        from .scalars import add as c_add, mul as c_mul
        out: dict[int, Coeff] = {}
        for la, ca in self.coeffs.items():
            for lb, cb in other.coeffs.items():
                l = la + lb
                p = c_mul(ca, cb)
                out[l] = c_add(out[l], p) if l in out else p
        return TrigPolynomial.from_terms(
            out, real_valued=self.real_valued and other.real_valued)

    def scale(self, q) -> "TrigPolynomial":
        from .scalars import mul as c_mul, coeff_from
        if isinstance(q, (int, Fraction)):
            q = QC(q)
        elif not isinstance(q, (QC, complex)):
            q = coeff_from(q)
        real_scalar = (isinstance(q, QC) and q.im == 0) or (
            isinstance(q, complex) and q.imag == 0)
        return TrigPolynomial.from_terms(
            {l: c_mul(c, q) for l, c in self.coeffs.items()},
            real_valued=self.real_valued and real_scalar)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def derivative(self) -> "TrigPolynomial":
        """Termwise d/dt: c_l e^{ilt} -> i l c_l e^{ilt}."""
        from .scalars import mul as c_mul
        return TrigPolynomial.from_terms(
            {l: c_mul(times_i(c), QC(l)) if is_exact(c) else times_i(c) * l
             for l, c in self.coeffs.items() if l != 0})

    def conjugate_function(self) -> "TrigPolynomial":
        """Pointwise complex conjugate as a function of real t."""
        return TrigPolynomial.from_terms(
            {-l: conj(c) for l, c in self.coeffs.items()},
            real_valued=self.real_valued)

    def shifted_constant(self, delta: Coeff) -> "TrigPolynomial":
        from .scalars import add as c_add
        out = dict(self.coeffs)
        out[0] = c_add(out[0], delta) if 0 in out else delta
        real = self.real_valued and (
            (is_exact(delta) and delta.im == 0)
            or (not is_exact(delta) and as_complex(delta).imag == 0))
        return TrigPolynomial.from_terms(out, real_valued=real)

    def eval_grid(self, ts: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over an array of real parameters."""
        out = np.zeros_like(ts, dtype=complex)
        for l, c in self.coeffs.items():
            out += as_complex(c) * np.exp(1j * l * ts)
        return out


def eval_trig(p: TrigPolynomial, t: float) -> complex:
    return sum((as_complex(c) * cmath.exp(1j * l * t)
                for l, c in p.coeffs.items()), 0j)


def cosine(freq: int, amp=1) -> TrigPolynomial:
    """amp * cos(freq * t) with exact coefficients when amp is rational."""
    a = Fraction(amp) if isinstance(amp, (int, Fraction)) else None
    if a is not None:
        half = QC(a / 2)
        return TrigPolynomial.from_terms({freq: half, -freq: half},
                                         real_valued=True)
    return TrigPolynomial.from_terms(
        {freq: complex(amp / 2), -freq: complex(amp / 2)}, real_valued=True)


def sine(freq: int, amp=1) -> TrigPolynomial:
    """amp * sin(freq * t) with exact coefficients when amp is rational."""
    a = Fraction(amp) if isinstance(amp, (int, Fraction)) else None
    if a is not None:
        return TrigPolynomial.from_terms(
            {freq: QC(0, -a / 2), -freq: QC(0, a / 2)}, real_valued=True)
    return TrigPolynomial.from_terms(
        {freq: complex(0, -amp / 2), -freq: complex(0, amp / 2)},
        real_valued=True)


@dataclass(frozen=True)
class ComponentCurve:
    F: TrigPolynomial
    G: TrigPolynomial
    s_C: int
    strands: tuple[int, ...] = ()  # strand ids in cycle order, optional

    def position(self) -> TrigPolynomial:
        """F + iG as a single complex-valued trig polynomial."""
        iG = TrigPolynomial.from_terms(
            {l: times_i(c) for l, c in self.G.coeffs.items()})
        return self.F + iG


@dataclass(frozen=True)
class StrandParametrization:
    components: tuple[ComponentCurve, ...]

    @property
    def strands(self) -> int:
        return sum(c.s_C for c in self.components)

    @property
    def exact(self) -> bool:
        return all(c.F.exact and c.G.exact for c in self.components)

    def strand_positions(self, ts: np.ndarray) -> np.ndarray:
        """Array (len(ts), strands) of strand positions F+iG over the grid."""
        cols = []
        for comp in self.components:
            rho = comp.position()
            for j in range(comp.s_C):
                cols.append(rho.eval_grid((ts + 2 * math.pi * j) / comp.s_C))
        return np.stack(cols, axis=1)

    def min_pairwise_distance(self, grid_size: int = 1024) -> float:
        ts = np.linspace(0.0, 2 * math.pi, grid_size, endpoint=False)
        pos = self.strand_positions(ts)
        s = pos.shape[1]
        if s < 2:
            return math.inf
        best = math.inf
        for i in range(s):
            for j in range(i + 1, s):
                best = min(best, float(np.abs(pos[:, i] - pos[:, j]).min()))
        return best

    def min_origin_distance(self, grid_size: int = 1024) -> float:
        ts = np.linspace(0.0, 2 * math.pi, grid_size, endpoint=False)
        pos = self.strand_positions(ts)
        return float(np.abs(pos).min())

    def to_json(self) -> dict:
        def tp_json(p: TrigPolynomial):
            out = []
            for l in sorted(p.coeffs):
                c = coeff_to_json(p.coeffs[l])
                out.append([l, c["re"], c["im"]])
            return out

        return {"components": [{"sC": c.s_C, "F": tp_json(c.F), "G": tp_json(c.G)}
                               for c in self.components]}

    @staticmethod
    def from_json(obj: dict) -> "StrandParametrization":
        comps = []
        for c in obj["components"]:
            def tp(rows):
                terms = {int(l): coeff_from_json({"re": re, "im": im})
                         for l, re, im in rows}
                return TrigPolynomial.from_terms(terms, real_valued=True)
            comps.append(ComponentCurve(tp(c["F"]), tp(c["G"]), int(c["sC"])))
        sp = StrandParametrization(tuple(comps))
        for comp in sp.components:
            if not (comp.F.check_real_valued() and comp.G.check_real_valued()):
                raise ValueError("component curve coefficients are not "
                                 "Hermitian-symmetric (curve not real-valued)")
        return sp


# ---------------------------------------------------------------------------
# Fitting a parametrization to a braid diagram


def _strand_samples(b: braid_mod.BraidWord, crossing_offset: float):
    """Sample times and per-strand (lateral, height) data from the diagram.

    One slot per letter; strands sit at integer positions on slot boundaries
    and the two strands of a crossing meet at the midpoint with heights
    ±crossing_offset (rightward mover over for positive letters).
    """
    n = len(b.letters)
    s = b.strands
    pos = list(range(1, s + 1))  # pos[k] = position of strand k+1
    ts: list[float] = []
    data = [[] for _ in range(s)]  # per strand: (lateral, height)

    def record_flat(t):
        ts.append(t)
        for k in range(s):
            data[k].append((float(pos[k]), 0.0))

    for m, (i, sign) in enumerate(b.letters):
        t0 = 2 * math.pi * m / n
        record_flat(t0)
        # crossing midpoint
        ts.append(t0 + math.pi / n)
        a = pos.index(i)      # strand moving i -> i+1
        c = pos.index(i + 1)  # strand moving i+1 -> i
        over_height = crossing_offset if sign > 0 else -crossing_offset
        for k in range(s):
            if k == a:
                data[k].append((i + 0.5, over_height))
            elif k == c:
                data[k].append((i + 0.5, -over_height))
            else:
                data[k].append((float(pos[k]), 0.0))
        pos[a], pos[c] = i + 1, i
    return ts, data


def _fit_component(xs: np.ndarray, values: np.ndarray, harmonics: int):
    """Least-squares real trig fit: returns (coeff dict, max residual)."""
    cols = [np.ones_like(xs)]
    for k in range(1, harmonics + 1):
        cols.append(np.cos(k * xs))
        cols.append(np.sin(k * xs))
    design = np.stack(cols, axis=1)
    sol, *_ = np.linalg.lstsq(design, values, rcond=None)
    resid = float(np.abs(design @ sol - values).max())
    coeffs: dict[int, complex] = {}
    if sol[0] != 0:
        coeffs[0] = complex(sol[0])
    for k in range(1, harmonics + 1):
        a, bb = sol[2 * k - 1], sol[2 * k]
        c = complex(a / 2, -bb / 2)  # a cos + b sin = c e^{ikx} + conj e^{-ikx}
        if c != 0:
            coeffs[k] = c
            coeffs[-k] = c.conjugate()
    return coeffs, resid


def _fit_word_curves(w: braid_mod.BraidWord, crossing_offset: float,
                     fit_tol: float, separation: float, max_harmonics: int):
    """Fit one closed curve per closure component of the word w."""
    if not w.letters:
        raise FitError("cannot fit the identity braid: no crossings pin the "
                       "diagram (supply a parametrization instead)")
    closure = braid_mod.closure_structure(w)
    ts, data = _strand_samples(w, crossing_offset)
    ts_arr = np.asarray(ts)
    curves = []
    for comp in closure.components:
        sC = comp.size
        xs_list, fx, gx = [], [], []
        for j, strand in enumerate(comp.strands):
            xs_list.append((ts_arr + 2 * math.pi * j) / sC)
            samples = data[strand - 1]
            fx.extend(v[0] for v in samples)
            gx.extend(v[1] for v in samples)
        xs = np.concatenate(xs_list)
        fv, gv = np.asarray(fx), np.asarray(gx)
        n_samples = len(xs)
        harmonics = max(2, n_samples // 6)
        cap = min(max_harmonics, (n_samples - 1) // 2)
        while True:
            fc, rf = _fit_component(xs, fv, harmonics)
            gc, rg = _fit_component(xs, gv, harmonics)
            if max(rf, rg) <= fit_tol or harmonics >= cap:
                break
            harmonics = min(cap, harmonics * 2)
        if max(rf, rg) > fit_tol:
            raise FitError(f"fit residual {max(rf, rg):.3g} exceeds tolerance "
                           f"{fit_tol:.3g} at harmonic cap {cap}")
        curves.append(ComponentCurve(
            TrigPolynomial.from_terms(fc, real_valued=True),
            TrigPolynomial.from_terms(gc, real_valued=True),
            sC, comp.strands))
    sp = StrandParametrization(tuple(curves))
    if sp.min_pairwise_distance() <= separation:
        raise FitError("fitted strand curves collide on the validation grid")
    return sp


def _double_frequencies(p: TrigPolynomial) -> TrigPolynomial:
    return TrigPolynomial.from_terms({2 * l: c for l, c in p.coeffs.items()},
                                     real_valued=p.real_valued)


def _phase_shift(p: TrigPolynomial, delta: float) -> TrigPolynomial:
    return TrigPolynomial.from_terms(
        {l: as_complex(c) * cmath.exp(1j * l * delta)
         for l, c in p.coeffs.items()},
        real_valued=p.real_valued)


def fit_parametrization(b: braid_mod.BraidWord, crossing_offset: float = 0.5,
                        fit_tol: float = 1e-6, separation: float = 1e-2,
                        max_harmonics: int = 256,
                        use_square_structure: bool = True) -> StrandParametrization:
    """Fit Fourier strand curves reproducing the braid diagram of b.

    For a syntactic square b = w·w the curves are built from a fit of w and
    traversed at doubled speed, which keeps every frequency of the expanded
    family even (see the rescale parity requirement).  Other words are fitted
    directly.
    """
    if not b.letters:
        raise FitError("cannot fit the identity braid: no crossings pin the "
                       "diagram (supply a parametrization instead)")
    if crossing_offset <= 0:
        raise FitError("crossing_offset must be positive")
    if not (use_square_structure and braid_mod.is_syntactic_square(b)):
        return _fit_word_curves(b, crossing_offset, fit_tol, separation,
                                max_harmonics)

    w = braid_mod.half_word(b)
    base = _fit_word_curves(w, crossing_offset, fit_tol, separation,
                            max_harmonics)
    # Components of b arise from cycles of π_w: an odd cycle of length L is a
    # component of b on the same strands traversed at double speed; an even
    # cycle of length 2L splits into two components of L strands, offset by
    # half a strand-phase.
    comps: list[ComponentCurve] = []
    for curve in base.components:
        L = curve.s_C
        cyc = curve.strands
        if L % 2 == 1:
            order = tuple(cyc[(2 * j) % L] for j in range(L))
            comps.append(ComponentCurve(_double_frequencies(curve.F),
                                        _double_frequencies(curve.G),
                                        L, order))
        else:
            half = L // 2
            evens = tuple(cyc[2 * j] for j in range(half))
            odds = tuple(cyc[2 * j + 1] for j in range(half))
            comps.append(ComponentCurve(curve.F, curve.G, half, evens))
            delta = math.pi / half
            comps.append(ComponentCurve(_phase_shift(curve.F, delta),
                                        _phase_shift(curve.G, delta),
                                        half, odds))
    sp = StrandParametrization(tuple(comps))
    if sp.min_pairwise_distance() <= separation:
        raise FitError("doubled strand curves collide on the validation grid")
    return sp


# ---------------------------------------------------------------------------
# Origin avoidance


def _spiral_candidates(step: Fraction, max_radius: float):
    """Lattice points (p+qi)*step ordered by increasing modulus, origin last
    excluded."""
    cap = int(max_radius / float(step)) + 1
    pts = [(p, q) for p in range(-cap, cap + 1) for q in range(-cap, cap + 1)
           if (p, q) != (0, 0)]
    pts.sort(key=lambda pq: (pq[0] * pq[0] + pq[1] * pq[1], pq[0], pq[1]))
    for p, q in pts:
        yield QC(p * step, q * step)


def shift_to_avoid_origin(sp: StrandParametrization, grid_size: int = 1024,
                          margin: float = 1e-2,
                          ) -> tuple[StrandParametrization, Coeff]:
    """Translate all strand curves by a constant c so min |F+iG+c| > margin.

    Returns the (possibly unchanged) parametrization and the shift applied;
    c = 0 when the curves already clear the origin.  Candidate shifts are
    lattice points scanned outward from small modulus.
    """
    if grid_size < 256:
        raise ShiftError("grid_size must be at least 256")
    if sp.min_origin_distance(grid_size) > margin:
        return sp, QC(0)

    ts = np.linspace(0.0, 2 * math.pi, 4 * grid_size, endpoint=False)
    pos = sp.strand_positions(ts)
    amplitude = float(np.abs(pos).max())
    step = Fraction(margin).limit_denominator(10**6) * 2
    for cand in _spiral_candidates(step, 2 * amplitude + 1.0):
        c = complex(cand)
        if float(np.abs(pos + c).min()) > margin:
            shifted = StrandParametrization(tuple(
                ComponentCurve(comp.F.shifted_constant(QC(cand.re)),
                               comp.G.shifted_constant(QC(cand.im)),
                               comp.s_C, comp.strands)
                for comp in sp.components))
            if shifted.min_origin_distance(4 * grid_size) > margin:
                return shifted, cand
    achieved = sp.min_origin_distance(4 * grid_size)
    raise ShiftError(f"no candidate shift cleared the origin margin "
                     f"{margin:g} (best achieved {achieved:g})")
