"""End-to-end pipeline from a braid word (or parametrization) and a monic
complex polynomial q to a certified product family, plus sampling of the
resulting link as strand curves over a small torus |v| = r0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import braid as braid_mod
from .braidfamily import (ArgDerivativeProfile, SemiholoFamily, arg_profile,
                          min_admissible_nm)
from .mixedpoly import (MixedPolynomial, min_v_order, minimal_rescale_k,
                        multiply, rescale_to_mixed)
from .newton import NewtonBoundary, min_k, newton_boundary
from .nondeg import Certificate, CertifyError, certify_product
from .trigcurve import StrandParametrization, fit_parametrization, \
    shift_to_avoid_origin
from .scalars import as_complex


class StageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.message = message


@dataclass
class RealizeOptions:
    a: Fraction = Fraction(1, 2)
    k: Optional[int] = None            # defaults to the minimal admissible k
    grid_size: int = 4096
    margin: float = 1e-3               # certification margin on n_m + D
    nm_margin: float = 0.2             # slack inside the n' bound
    shift: bool = True
    shift_margin: float = 1e-2
    crossing_offset: float = 0.5
    sample: bool = False
    sample_grid: int = 2048
    r0: Optional[float] = None
    seed: int = 0
    threads: int = 1


@dataclass(frozen=True)
class LinkSample:
    r0: float
    grid: np.ndarray
    strands: np.ndarray            # (len(grid), s+m) tracked complex roots
    permutation: tuple[int, ...]   # strand j at 2pi continues strand perm[j]
    word: braid_mod.BraidWord
    closure: braid_mod.ClosureStructure

    def to_csv_rows(self):
        rows = []
        for i, t in enumerate(self.grid):
            for j in range(self.strands.shape[1]):
                z = self.strands[i, j]
                rows.append((float(t), j, float(z.real), float(z.imag)))
        return rows


@dataclass(frozen=True)
class RealizationReport:
    inputs: dict
    a: Union[Fraction, float]
    k: Optional[int]
    n_m: Optional[int]
    n_prime: Optional[int]
    f: Optional[MixedPolynomial]
    boundary: Optional[NewtonBoundary]
    certificate: Optional[Certificate]
    sample: Optional[LinkSample]
    failed_stage: Optional[str] = None
    failure: Optional[str] = None

    @property
    def success(self) -> bool:
        return (self.failed_stage is None and self.certificate is not None
                and self.certificate.overall)

    def to_json(self) -> dict:
        out = {
            "inputs": self.inputs,
            "a": str(self.a) if isinstance(self.a, Fraction) else self.a,
            "k": self.k, "n_m": self.n_m, "n_prime": self.n_prime,
            "success": self.success,
            "failed_stage": self.failed_stage,
            "failure": self.failure,
        }
        if self.f is not None:
            out["f"] = self.f.to_json()
        if self.boundary is not None:
            out["boundary"] = self.boundary.to_json()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.sample is not None:
            out["sample"] = {
                "r0": self.sample.r0,
                "word": self.sample.word.to_text(),
                "permutation": list(self.sample.permutation),
                "closure": self.sample.closure.to_json(),
            }
        return out


def realize(source: Union[braid_mod.BraidWord, StrandParametrization],
            q: MixedPolynomial, options: Optional[RealizeOptions] = None,
            ) -> RealizationReport:
    """Run fit -> shift -> family -> profile -> bound -> rescale -> multiply
    -> certify (and optionally sample).  Failures return a report tagged with
    the first failing stage rather than raising.
    """
    opts = options or RealizeOptions()
    inputs: dict = {}
    if isinstance(source, braid_mod.BraidWord):
        inputs["braid"] = source.to_text()
        inputs["strands"] = source.strands
        if not braid_mod.is_syntactic_square(source):
            inputs["warning"] = ("braid word is not a syntactic square; the "
                                 "rescale parity gate may reject the family")
    else:
        inputs["parametrization"] = source.to_json()
    inputs["q"] = q.to_json()

    def fail(stage, exc, **partial):
        return RealizationReport(
            inputs=inputs, a=opts.a, k=partial.get("k"),
            n_m=partial.get("n_m"), n_prime=partial.get("n_prime"),
            f=partial.get("f"), boundary=partial.get("boundary"),
            certificate=partial.get("certificate"), sample=None,
            failed_stage=stage, failure=str(exc))

    try:
        if isinstance(source, braid_mod.BraidWord):
            sp = fit_parametrization(source, crossing_offset=opts.crossing_offset)
        else:
            sp = source
    except Exception as exc:
        return fail("fit", exc)

    shift_c = 0j
    if opts.shift:
        try:
            sp, shift_c = shift_to_avoid_origin(sp, max(256, opts.grid_size // 4),
                                                opts.shift_margin)
        except Exception as exc:
            return fail("shift", exc)
    inputs["shift"] = [as_complex(shift_c).real, as_complex(shift_c).imag]

    try:
        from .braidfamily import build_ga
        fam = build_ga(sp, opts.a)
    except Exception as exc:
        return fail("family", exc)

    try:
        profile = arg_profile(fam, opts.grid_size)
        if not profile.valid:
            raise StageError("profile", "argument profile invalid: " + "; ".join(
                f"{f.kind} on branch {f.branch} at t={f.t:.6f}"
                for f in profile.findings))
    except StageError as exc:
        return fail("profile", exc.message)
    except Exception as exc:
        return fail("profile", exc)

    try:
        n_prime = min_admissible_nm(profile, opts.nm_margin)
        n_m = min_v_order(q)
        if n_m is None:
            raise StageError("nm-bound", "theta_0 of q vanishes identically")
        if n_m < n_prime:
            raise StageError(
                "nm-bound",
                f"q has n_m={n_m} below the admissible bound n'={n_prime}; "
                f"raise the v-order of the constant coefficient to at least "
                f"{n_prime}")
    except StageError as exc:
        return fail(exc.stage, exc.message,
                    n_prime=locals().get("n_prime"))
    except Exception as exc:
        return fail("nm-bound", exc)

    try:
        kmin = max(min_k(fam.degree, n_m, q.support_points()),
                   minimal_rescale_k(fam))
        k = opts.k if opts.k is not None else kmin
        if k < kmin:
            raise StageError("rescale", f"requested k={k} below minimal "
                             f"admissible k={kmin}")
        p = rescale_to_mixed(fam, k)
    except StageError as exc:
        return fail(exc.stage, exc.message, n_m=n_m, n_prime=n_prime)
    except Exception as exc:
        return fail("rescale", exc, n_m=n_m, n_prime=n_prime)

    try:
        f = multiply(p, q)
        boundary = newton_boundary(f)
    except Exception as exc:
        return fail("product", exc, k=k, n_m=n_m, n_prime=n_prime)

    try:
        cert = certify_product(fam, k, q, n_prime, profile, opts.margin)
    except Exception as exc:
        return fail("certify", exc, k=k, n_m=n_m, n_prime=n_prime, f=f,
                    boundary=boundary)

    sample = None
    if opts.sample:
        try:
            sample = sample_link(f, r0=opts.r0, grid_size=opts.sample_grid,
                                 seed=opts.seed, threads=opts.threads)
        except Exception as exc:
            return fail("sample", exc, k=k, n_m=n_m, n_prime=n_prime, f=f,
                        boundary=boundary, certificate=cert)

    return RealizationReport(
        inputs=inputs, a=opts.a, k=k, n_m=n_m, n_prime=n_prime, f=f,
        boundary=boundary, certificate=cert, sample=sample)


# ---------------------------------------------------------------------------
# Link sampling


class SampleError(RuntimeError):
    pass


def _column_coefficients(f: MixedPolynomial, r0: float, ts: np.ndarray,
                         ) -> np.ndarray:
    """Coefficients (len(ts), deg+1) of f(., r0 e^{it}, r0 e^{-it})."""
    deg = f.u_degree
    out = np.zeros((len(ts), deg + 1), dtype=complex)
    for (n1, m1, n2, m2), c in f.terms.items():
        if m1:
            raise SampleError("sampling needs a family with no ubar terms")
        radial = r0 ** (n2 + m2)
        out[:, n1] += as_complex(c) * radial * np.exp(1j * (n2 - m2) * ts)
    return out


def _solve_columns(coeffs: np.ndarray, threads: int) -> np.ndarray:
    from .roots import aberth_many
    if threads <= 1 or coeffs.shape[0] < 64:
        return aberth_many(coeffs)
    chunks = np.array_split(np.arange(coeffs.shape[0]), threads)
    out = np.empty((coeffs.shape[0], coeffs.shape[1] - 1), dtype=complex)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [(idx, pool.submit(aberth_many, coeffs[idx]))
                for idx in chunks if len(idx)]
        for idx, fut in futs:
            out[idx] = fut.result()
    return out


def _track_columns(cols: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Permute each column to continue the previous one.

    The first and last columns must sample the same parameter mod 2pi; the
    matching of the tracked final column against the initial labels is the
    monodromy permutation.  Strands are labelled by real-part order at t = 0,
    so the permutation is comparable with the one computed from a braid word.
    """
    n, d = cols.shape
    out = cols.copy()
    order0 = np.lexsort((out[0].imag, out[0].real))
    out[0] = out[0][order0]
    for i in range(1, n):
        cost = np.abs(out[i - 1][:, None] - out[i][None, :])
        _rows, assign = linear_sum_assignment(cost)
        out[i] = out[i][assign]
    cost = np.abs(out[-1][:, None] - out[0][None, :])
    _rows, assign = linear_sum_assignment(cost)
    return out, tuple(int(x) for x in assign)


def _extract_word(tracked: np.ndarray, strands: int, angle: float = 0.0,
                  ) -> Optional[braid_mod.BraidWord]:
    """Read the braid word of the tracked curves from the real-part
    projection (rotated by angle); None when a grid step needs more than one
    adjacent swap (non-generic at this resolution)."""
    rot = np.exp(1j * angle)
    pts = tracked * rot
    order = list(np.argsort(pts[0].real, kind="stable"))
    letters: list[tuple[int, int]] = []
    for i in range(1, pts.shape[0]):
        new_order = list(np.argsort(pts[i].real, kind="stable"))
        if new_order == order:
            continue
        swaps = 0
        cur = order[:]
        pos_in_new = {s: p for p, s in enumerate(new_order)}
        changed = True
        while cur != new_order and changed:
            changed = False
            for p in range(strands - 1):
                a, b = cur[p], cur[p + 1]
                if pos_in_new[b] < pos_in_new[a]:
                    sign = 1 if pts[i, a].imag > pts[i, b].imag else -1
                    letters.append((p + 1, sign))
                    cur[p], cur[p + 1] = b, a
                    swaps += 1
                    changed = True
                    break
        if cur != new_order:
            return None
        if swaps > 1:
            return None  # more than one crossing inside one grid step
        order = new_order
    return braid_mod.BraidWord(strands, tuple(letters))


def choose_default_radius(f: MixedPolynomial, grid_size: int = 512,
                          margin: float = 1e-5) -> float:
    """Largest radius in {2^-3 .. 2^-16} whose sampled columns keep simple
    roots with a pairwise-separation margin."""
    ts = np.linspace(0.0, 2 * math.pi, grid_size, endpoint=False)
    for e in range(3, 17):
        r0 = 2.0 ** (-e)
        try:
            coeffs = _column_coefficients(f, r0, ts)
            roots = _solve_columns(coeffs, threads=1)
        except Exception:
            continue
        d = roots.shape[1]
        sep = math.inf
        for i in range(d):
            for j in range(i + 1, d):
                sep = min(sep, float(np.abs(roots[:, i] - roots[:, j]).min()))
        scale = 1.0 + float(np.abs(roots).max())
        if sep > margin * scale:
            return r0
    raise SampleError("no radius in {2^-3..2^-16} kept the roots separated")


def sample_link(f: MixedPolynomial, r0: Optional[float] = None,
                grid_size: int = 2048, seed: int = 0, threads: int = 1,
                residual_tol: float = 1e-9) -> LinkSample:
    """Solve f(., r0 e^{it}, r0 e^{-it}) on a t grid, track the roots into
    strands, and read off the braid word of the real-part projection."""
    if not f.is_monic_in_u():
        raise SampleError("sampling needs a family monic in u")
    if r0 is None:
        r0 = choose_default_radius(f)
    if r0 <= 0:
        raise SampleError("r0 must be positive")
    deg = f.u_degree

    rng = np.random.default_rng(seed)
    n = grid_size
    for attempt in range(3):
        # closed grid: the final column repeats t = 0 so the wrap gap is part
        # of the sweep and the monodromy matching is exact
        ts = np.linspace(0.0, 2 * math.pi, n + 1, endpoint=True)
        coeffs = _column_coefficients(f, r0, ts)
        roots = _solve_columns(coeffs, threads)

        from .roots import polyval_many
        resid = np.abs(polyval_many(coeffs, roots))
        bounds = (1.0 + np.abs(roots)) ** deg
        if float((resid / bounds).max()) > residual_tol:
            n *= 2
            continue

        sep = math.inf
        for i in range(deg):
            for j in range(i + 1, deg):
                sep = min(sep, float(np.abs(roots[:, i] - roots[:, j]).min()))
        if sep < 1e-9 * (1.0 + float(np.abs(roots).max())):
            n *= 2
            continue

        tracked, assign = _track_columns(roots)
        word = None
        for angle_try in range(8):
            angle = 0.0 if angle_try == 0 else float(
                rng.uniform(0, 2 * math.pi) * (math.sqrt(5) - 1))
            word = _extract_word(tracked, deg, angle)
            if word is not None:
                break
        if word is None:
            n *= 2
            continue

        closure = braid_mod.closure_structure(word)
        return LinkSample(r0, ts, tracked, assign, word, closure)
    raise SampleError(
        "persistent root collision or non-generic projection; r0 may be too "
        "large or the fiber genuinely singular")
