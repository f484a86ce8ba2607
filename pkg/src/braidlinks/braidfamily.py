"""Monic semiholomorphic families g_a(u, t) from strand parametrizations,
their constant loop, critical-value branches, and argument-derivative
profiles with the admissibility bound n'.

The family is expanded exactly through power sums: for a component with s_C
strands and root curve rho(x) = F(x) + iG(x), the power sum over the strand
phases kills every frequency of rho^r not divisible by s_C and multiplies the
survivors by s_C, so all elementary symmetric functions come out as honest
integer-frequency trigonometric polynomials without any root-of-unity
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .roots import aberth_many, polyval_many
from .scalars import QC, as_complex, is_exact
from .trigcurve import StrandParametrization, TrigPolynomial

Scale = Union[Fraction, float]


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class SemiholoFamily:
    """g_a(u, t) = u^s + sum_{j<s} psi_j(t) u^j, coefficients index-j low to high."""

    degree: int
    coefficients: tuple[TrigPolynomial, ...]  # length degree+1, leading == 1
    a: Scale

    def __post_init__(self):
        if len(self.coefficients) != self.degree + 1:
            raise ValueError("coefficient list must have length degree+1")
        lead = self.coefficients[-1]
        if dict(lead.coeffs) != {0: QC(1)} and dict(lead.coeffs) != {0: 1 + 0j}:
            raise ValueError("family must be monic in u")

    @property
    def exact(self) -> bool:
        return (isinstance(self.a, Fraction)
                and all(p.exact for p in self.coefficients))

    def coefficient_values(self, ts: np.ndarray) -> np.ndarray:
        """Array (len(ts), degree+1) of coefficient values over the grid."""
        return np.stack([p.eval_grid(ts) for p in self.coefficients], axis=1)

    def eval(self, u: complex, t: float) -> complex:
        from .trigcurve import eval_trig
        acc = 0j
        for p in reversed(self.coefficients):
            acc = acc * u + eval_trig(p, t)
        return acc


def _component_factor(rho: TrigPolynomial, s_C: int, a: Scale,
                      ) -> list[TrigPolynomial]:
    """Monic u-polynomial (low->high coeffs) for one component's strands.

    Uses Newton's identities on the sieved power sums of the root curve; the
    roots are a * rho((t + 2 pi j)/s_C) for j = 0..s_C-1.
    """
    one = TrigPolynomial.constant(QC(1) if isinstance(a, Fraction) else 1.0 + 0j)

    def sieve(p: TrigPolynomial) -> TrigPolynomial:
        kept = {m // s_C: (c * QC(s_C) if is_exact(c) else c * s_C)
                for m, c in p.coeffs.items() if m % s_C == 0}
        return TrigPolynomial.from_terms(kept)

    powers = [rho]
    for _ in range(s_C - 1):
        powers.append(powers[-1] * rho)
    psums = [sieve(p) for p in powers]

    esym: list[TrigPolynomial] = [one]
    for m in range(1, s_C + 1):
        acc = TrigPolynomial.from_terms({})
        for r in range(1, m + 1):
            term = esym[m - r] * psums[r - 1]
            if r % 2 == 0:
                term = -term
            acc = acc + term
        esym.append(acc.scale(Fraction(1, m)))

    a_pow: Scale = a ** 0 if isinstance(a, Fraction) else 1.0
    coeffs: list[TrigPolynomial] = []
    for j in range(s_C, -1, -1):  # coefficient of u^j is ±e_{s_C-j} a^{s_C-j}
        m = s_C - j
        term = esym[m].scale(a ** m if isinstance(a, Fraction) else float(a) ** m)
        if m % 2 == 1:
            term = -term
        coeffs.append(term)
    coeffs.reverse()
    return coeffs


def _poly_mul(p: Sequence[TrigPolynomial], q: Sequence[TrigPolynomial],
              ) -> list[TrigPolynomial]:
    out = [TrigPolynomial.from_terms({}) for _ in range(len(p) + len(q) - 1)]
    for i, pi in enumerate(p):
        if pi.is_zero():
            continue
        for j, qj in enumerate(q):
            if qj.is_zero():
                continue
            out[i + j] = out[i + j] + (pi * qj)
    return out


def build_ga(sp: StrandParametrization, a: Scale) -> SemiholoFamily:
    """Expand prod over strands of (u - a(F_C + iG_C)((t+2pi j)/s_C)).

    Exact when the parametrization and a are rational.  The per-component
    sieve guarantees integer frequencies, which is asserted structurally.
    """
    if (isinstance(a, Fraction) and a <= 0) or (not isinstance(a, Fraction) and a <= 0):
        raise ValueError("scale a must be positive")
    poly: list[TrigPolynomial] = [TrigPolynomial.constant(
        QC(1) if isinstance(a, Fraction) and sp.exact else 1.0 + 0j)]
    for comp in sp.components:
        a_eff = a if (isinstance(a, Fraction) and sp.exact) else float(a)
        factor = _component_factor(comp.position(), comp.s_C, a_eff)
        poly = _poly_mul(poly, factor)
    s = sp.strands
    assert len(poly) == s + 1
    return SemiholoFamily(s, tuple(poly), a)


def psi0(fam: SemiholoFamily) -> TrigPolynomial:
    """(-1)^s times the constant coefficient: a^s prod (F_C + i G_C)."""
    p = fam.coefficients[0]
    return p if fam.degree % 2 == 0 else -p


def critical_values_at(fam: SemiholoFamily, t: float, tol: float = 1e-12,
                       max_iter: int = 200) -> list[complex]:
    """The s-1 critical values g(c, t) over the roots c of dg/du(., t)."""
    s = fam.degree
    if s < 2:
        raise ValueError("critical values need degree at least 2")
    from .trigcurve import eval_trig
    coeffs = np.array([eval_trig(p, t) for p in fam.coefficients])
    dcoeffs = np.array([(j + 1) * coeffs[j + 1] for j in range(s)])
    crit = aberth_many(dcoeffs[None, :], tol=tol, max_iter=max_iter)[0]
    vals = polyval_many(coeffs[None, :], crit[None, :])[0]
    return list(vals)


@dataclass(frozen=True)
class BranchProfile:
    """Samples of one branch: branch 0 is the constant loop, higher branches
    are tracked critical values."""

    index: int
    values: np.ndarray        # complex samples along the grid
    d_arg: np.ndarray         # samples of d/dt arg(value)
    magnitude_floor: float
    d_min: float
    d_max: float


@dataclass(frozen=True)
class ProfileFinding:
    kind: str                 # "zero" | "collision" | "nonconvergence"
    branch: int
    t: float
    detail: str = ""


@dataclass(frozen=True)
class ArgDerivativeProfile:
    grid: np.ndarray
    branches: tuple[BranchProfile, ...]
    valid: bool
    findings: tuple[ProfileFinding, ...]
    refinement_history: tuple[int, ...]
    converged: bool

    @property
    def zero_locations(self) -> tuple[float, ...]:
        return tuple(f.t for f in self.findings if f.kind == "zero")

    def branch(self, index: int) -> BranchProfile:
        return self.branches[index]

    def to_csv_rows(self):
        rows = []
        for b in self.branches:
            for t, v, d in zip(self.grid, b.values, b.d_arg):
                rows.append((float(t), b.index, float(v.real), float(v.imag),
                             float(d)))
        return rows


def _refine_local_minimum(fn, t_lo: float, t_hi: float, iters: int = 200):
    """Golden-section minimization of fn on [t_lo, t_hi]."""
    gr = (math.sqrt(5) - 1) / 2
    a, b = t_lo, t_hi
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if b - a < 1e-13:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = fn(d)
    t = (a + b) / 2
    return t, fn(t)


def _locate_zeros(values: np.ndarray, ts: np.ndarray, eval_abs,
                  scale: float, zero_rtol: float = 1e-9):
    """Refine local minima of |values| and return t's where the refined
    minimum is a numerical zero relative to scale."""
    n = len(ts)
    mags = np.abs(values)
    zeros = []
    h = 2 * math.pi / n
    threshold = max(np.median(mags) * 0.25, zero_rtol * scale * 10)
    for i in range(n):
        m = mags[i]
        if m >= threshold:
            continue
        if m <= mags[(i - 1) % n] and m < mags[(i + 1) % n]:
            t0, m0 = _refine_local_minimum(eval_abs, ts[i] - h, ts[i] + h)
            if m0 < zero_rtol * scale:
                t0 = t0 % (2 * math.pi)
                if not any(abs(t0 - z) < 1e-8 or abs(abs(t0 - z) - 2 * math.pi) < 1e-8
                           for z in zeros):
                    zeros.append(t0)
    return sorted(zeros)


def _profile_once(fam: SemiholoFamily, grid_size: int):
    s = fam.degree
    ts = np.linspace(0.0, 2 * math.pi, grid_size, endpoint=False)
    coeff_vals = fam.coefficient_values(ts)          # (N, s+1)
    dcoeff_vals = np.stack(
        [p.derivative().eval_grid(ts) for p in fam.coefficients], axis=1)

    # branch 0: the constant loop (sign does not affect arg-derivative)
    c0 = coeff_vals[:, 0]
    dc0 = dcoeff_vals[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        d0 = np.where(np.abs(c0) > 0, (dc0 / c0).imag, np.inf)

    branch_values = [c0 if s % 2 == 0 else -c0]
    branch_d = [d0]

    crit_roots = None
    if s >= 2:
        dpoly = coeff_vals[:, 1:] * np.arange(1, s + 1)[None, :]
        crit_roots = aberth_many(dpoly)
        vals = polyval_many(coeff_vals, crit_roots)
        gt = polyval_many(dcoeff_vals, crit_roots)  # envelope: v' = dg/dt at c_j
        with np.errstate(divide="ignore", invalid="ignore"):
            dvals = np.where(np.abs(vals) > 0, (gt / vals).imag, np.inf)
        # continuous tracking: column 0 sorted for determinism, later columns
        # permuted by minimal-total-distance pairing against the previous one
        order0 = np.argsort(vals[0].real + 1e-9 * vals[0].imag)
        vals[0], dvals[0] = vals[0][order0], dvals[0][order0]
        for i in range(1, vals.shape[0]):
            cost = np.abs(vals[i - 1][:, None] - vals[i][None, :])
            _rows, cols = linear_sum_assignment(cost)
            vals[i], dvals[i] = vals[i][cols], dvals[i][cols]
        for j in range(s - 1):
            branch_values.append(vals[:, j])
            branch_d.append(dvals[:, j].real)

    return ts, branch_values, branch_d, crit_roots


def arg_profile(fam: SemiholoFamily, grid_size: int = 4096,
                stabilize_rtol: float = 1e-6, max_refinements: int = 5,
                zero_rtol: float = 1e-9) -> ArgDerivativeProfile:
    """Sample d/dt arg along the constant loop and every critical-value
    branch, refining the grid until the ranges stabilize.

    The profile is invalid when a branch magnitude floor vanishes (the curve
    passes through 0); refined zero locations are reported as findings.
    Branch collisions (coinciding critical values at isolated parameters) are
    recorded as findings but the pointwise samples remain usable.
    """
    if grid_size < 1024:
        raise ProfileError("grid_size must be at least 1024")
    s = fam.degree
    history = []
    prev_ranges = None
    converged = False
    n = grid_size
    while True:
        history.append(n)
        ts, branch_values, branch_d, crit_roots = _profile_once(fam, n)
        finite = [d[np.isfinite(d)] for d in branch_d]
        ranges = [(float(d.min()) if d.size else math.inf,
                   float(d.max()) if d.size else -math.inf) for d in finite]
        if prev_ranges is not None:
            close = all(
                abs(a0 - b0) <= stabilize_rtol * max(1.0, abs(a0))
                and abs(a1 - b1) <= stabilize_rtol * max(1.0, abs(a1))
                for (a0, a1), (b0, b1) in zip(ranges, prev_ranges))
            if close:
                converged = True
                break
        prev_ranges = ranges
        if len(history) > max_refinements:
            break
        n *= 2

    findings: list[ProfileFinding] = []
    branches: list[BranchProfile] = []
    valid = True

    scale0 = float(np.abs(branch_values[0]).max()) or 1.0
    from .trigcurve import eval_trig
    const_poly = fam.coefficients[0]

    def abs_psi(t):
        return abs(eval_trig(const_poly, t))

    zeros = _locate_zeros(branch_values[0], ts, abs_psi, scale0, zero_rtol)
    for z in zeros:
        findings.append(ProfileFinding("zero", 0, z, "constant loop vanishes"))
        valid = False

    for idx, (vals, d) in enumerate(zip(branch_values, branch_d)):
        mags = np.abs(vals)
        floor = float(mags.min())
        finite = d[np.isfinite(d)]
        branches.append(BranchProfile(
            idx, vals, d, floor,
            float(finite.min()) if finite.size else math.nan,
            float(finite.max()) if finite.size else math.nan))
        if idx > 0:
            scale = float(mags.max()) or 1.0
            if floor < 1e-6 * scale:
                # suspected vanishing critical value; refine locally
                i = int(mags.argmin())

                def abs_branch(t, _i=i):
                    vs = critical_values_at(fam, t)
                    return min(abs(v) for v in vs)

                h = 2 * math.pi / len(ts)
                t0, m0 = _refine_local_minimum(abs_branch, ts[i] - h, ts[i] + h)
                if m0 < zero_rtol * scale:
                    findings.append(ProfileFinding(
                        "zero", idx, t0 % (2 * math.pi),
                        "critical value vanishes"))
                    valid = False

    if crit_roots is not None and s >= 3:
        vals = np.stack([b.values for b in branches[1:]], axis=1)
        for i in range(vals.shape[1]):
            for j in range(i + 1, vals.shape[1]):
                gap = np.abs(vals[:, i] - vals[:, j])
                k = int(gap.argmin())
                if gap[k] < 1e-9 * (1 + float(np.abs(vals).max())):
                    findings.append(ProfileFinding(
                        "collision", j, float(ts[k]),
                        f"branches {i + 1} and {j + 1} coincide"))

    return ArgDerivativeProfile(ts, tuple(branches), valid, tuple(findings),
                                tuple(history), converged)


def min_admissible_nm(profile: ArgDerivativeProfile, margin: float = 0.2) -> int:
    """Smallest positive integer n with n + D(t) > 0 margin-clear on every
    branch: per branch the least integer strictly above max(-D) + margin."""
    if not profile.valid:
        raise ProfileError(
            "profile is invalid: " + "; ".join(
                f"{f.kind} on branch {f.branch} at t={f.t:.6f}"
                for f in profile.findings) or "no usable branches")
    best = 1
    for b in profile.branches:
        need = math.floor(-b.d_min + margin) + 1
        best = max(best, need)
    return best
