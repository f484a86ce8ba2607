"""Command-line surface: one subcommand per pipeline stage plus the full
pipeline, writing reproducible JSON/CSV artifacts.

Exit codes: 0 success, 1 stage failure (a failure report is still written),
2 usage error.  Letters of a braid word act left to right on strand
positions (diagram read bottom to top).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import braid as braid_mod
from .braidfamily import arg_profile, build_ga, min_admissible_nm, psi0
from .mixedpoly import MixedPolynomial, min_v_order, rescale_to_mixed
from .newton import newton_boundary
from .nondeg import certify_product, q_is_nondegenerate
from .realize import RealizeOptions, realize, sample_link
from .scalars import coeff_to_json
from .trigcurve import StrandParametrization, fit_parametrization, \
    shift_to_avoid_origin

OUTPUT_ENV = "BRAIDLINKS_OUT"


def _out_dir(args) -> Path:
    d = Path(args.out or os.environ.get(OUTPUT_ENV, "."))
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _load_braid(args) -> braid_mod.BraidWord:
    if args.braid is None or args.strands is None:
        raise UsageError("--braid and --strands are required here")
    return braid_mod.parse_braid_word(args.braid, args.strands)


def _load_parametrization(args) -> StrandParametrization:
    with open(args.parametrization) as fh:
        return StrandParametrization.from_json(json.load(fh))


def _load_source(args):
    if getattr(args, "parametrization", None):
        return _load_parametrization(args)
    return _load_braid(args)


def _load_q(args) -> MixedPolynomial:
    with open(args.q) as fh:
        return MixedPolynomial.from_json(json.load(fh))


class UsageError(ValueError):
    pass


def _family_from_args(args):
    sp = _load_source(args)
    if isinstance(sp, braid_mod.BraidWord):
        sp = fit_parametrization(sp, crossing_offset=args.offset)
    if not args.no_shift:
        sp, _c = shift_to_avoid_origin(sp)
    return build_ga(sp, Fraction(args.a))


def cmd_braid(args) -> int:
    b = _load_braid(args)
    closure = braid_mod.closure_structure(b)
    out = {
        "word": b.to_text(),
        "strands": b.strands,
        "letters": len(b.letters),
        "syntactic_square": braid_mod.is_syntactic_square(b),
        "closure": closure.to_json(),
    }
    _write_json(_out_dir(args) / "braid.json", out)
    print(json.dumps(out, indent=2))
    return 0


def cmd_fit(args) -> int:
    b = _load_braid(args)
    sp = fit_parametrization(b, crossing_offset=args.offset)
    if not args.no_shift:
        sp, _c = shift_to_avoid_origin(sp)
    _write_json(_out_dir(args) / "parametrization.json", sp.to_json())
    print(f"fitted {len(sp.components)} component(s); min strand separation "
          f"{sp.min_pairwise_distance():.4g}")
    return 0


def cmd_family(args) -> int:
    fam = _family_from_args(args)
    out_dir = _out_dir(args)
    coeffs = []
    for j, p in enumerate(fam.coefficients):
        coeffs.append({"power": j,
                       "terms": [[l, *coeff_to_json(c).values()]
                                 for l, c in sorted(p.coeffs.items())]})
    _write_json(out_dir / "family.json", {
        "degree": fam.degree, "a": str(fam.a), "coefficients": coeffs,
        "constant_loop": [[l, *coeff_to_json(c).values()]
                          for l, c in sorted(psi0(fam).coeffs.items())]})
    profile = arg_profile(fam, args.grid)
    _write_csv(out_dir / "profile.csv",
               ["t", "branch", "re_v", "im_v", "d_arg"],
               profile.to_csv_rows())
    if profile.valid:
        print(f"profile valid; n' = {min_admissible_nm(profile)}")
        return 0
    print("profile invalid: " + "; ".join(
        f"{f.kind} on branch {f.branch} at t={f.t:.6f}" for f in profile.findings))
    _write_json(out_dir / "profile_failure.json", {
        "stage": "profile",
        "findings": [{"kind": f.kind, "branch": f.branch, "t": f.t}
                     for f in profile.findings]})
    return 1


def cmd_rescale(args) -> int:
    fam = _family_from_args(args)
    p = rescale_to_mixed(fam, args.k)
    _write_json(_out_dir(args) / "rescaled.json", p.to_json())
    print(f"rescaled family at k={args.k}: {len(p.terms)} terms, "
          f"u-degree {p.u_degree}")
    return 0


def cmd_newton(args) -> int:
    with open(args.poly) as fh:
        f = MixedPolynomial.from_json(json.load(fh))
    bd = newton_boundary(f)
    out_dir = _out_dir(args)
    _write_json(out_dir / "boundary.json", bd.to_json())
    _write_csv(out_dir / "support.csv", ["x", "y"],
               sorted(f.support_points()))
    print(json.dumps(bd.to_json(), indent=2))
    return 0


def cmd_check_q(args) -> int:
    q = _load_q(args)
    ok, verdicts, report = q_is_nondegenerate(q, args.mu)
    out = {"nondegenerate": ok,
           "faces": [v.to_json() for v in verdicts],
           "invariants": report}
    _write_json(_out_dir(args) / "q_check.json", out)
    print(json.dumps(out, indent=2))
    return 0 if ok else 1


def cmd_certify(args) -> int:
    out_dir = _out_dir(args)
    try:
        fam = _family_from_args(args)
        q = _load_q(args)
        profile = arg_profile(fam, args.grid)
        if not profile.valid:
            raise RuntimeError("argument profile invalid: " + "; ".join(
                f"{f.kind} on branch {f.branch} at t={f.t:.6f}"
                for f in profile.findings))
        n_prime = min_admissible_nm(profile)
        from .mixedpoly import minimal_rescale_k
        from .newton import min_k as minimal_k
        k = args.k or max(
            minimal_k(fam.degree, min_v_order(q), q.support_points()),
            minimal_rescale_k(fam))
        cert = certify_product(fam, k, q, n_prime, profile, args.margin)
    except Exception as exc:
        _write_json(out_dir / "certificate_failure.json",
                    {"stage": "certify", "error": str(exc)})
        print(f"certification failed: {exc}", file=sys.stderr)
        return 1
    _write_json(out_dir / "certificate.json", cert.to_json())
    print(f"certificate overall = {cert.overall}")
    return 0 if cert.overall else 1


def cmd_realize(args) -> int:
    source = _load_source(args)
    q = _load_q(args)
    opts = RealizeOptions(
        a=Fraction(args.a), k=args.k, grid_size=args.grid,
        margin=args.margin, shift=not args.no_shift,
        crossing_offset=args.offset, sample=args.sample,
        seed=args.seed, threads=args.threads)
    report = realize(source, q, opts)
    out_dir = _out_dir(args)
    _write_json(out_dir / "report.json", report.to_json())
    if report.sample is not None:
        _write_csv(out_dir / "link.csv", ["t", "strand", "re_u", "im_u"],
                   report.sample.to_csv_rows())
    if report.success:
        print(f"realization succeeded: k={report.k}, n_m={report.n_m}, "
              f"n'={report.n_prime}")
        return 0
    print(f"realization failed at stage '{report.failed_stage}': "
          f"{report.failure}", file=sys.stderr)
    return 1


def cmd_sample_link(args) -> int:
    with open(args.poly) as fh:
        f = MixedPolynomial.from_json(json.load(fh))
    sample = sample_link(f, r0=args.r0, grid_size=args.grid, seed=args.seed,
                         threads=args.threads)
    out_dir = _out_dir(args)
    _write_csv(out_dir / "link.csv", ["t", "strand", "re_u", "im_u"],
               sample.to_csv_rows())
    _write_json(out_dir / "link.json", {
        "r0": sample.r0,
        "word": sample.word.to_text(),
        "permutation": list(sample.permutation),
        "closure": sample.closure.to_json()})
    print(f"sampled {sample.strands.shape[1]} strands at r0={sample.r0}; "
          f"word: {sample.word.to_text() or '(empty)'}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="braidlinks",
        description="Certified product families and sampled links from "
                    "braid words")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, q_opt=False, family_opts=False):
        p.add_argument("--out", default=None,
                       help=f"output directory (or ${OUTPUT_ENV})")
        p.add_argument("--braid", default=None, help="braid word, e.g. "
                       "'s1^-1 s2 s1^3 s2 s1^-1 s2 s1^3 s2'")
        p.add_argument("--strands", type=int, default=None)
        p.add_argument("--parametrization", default=None,
                       help="JSON parametrization file (bypasses fitting)")
        if q_opt:
            p.add_argument("--q", required=True, help="JSON polynomial file")
        if family_opts:
            p.add_argument("--a", default="1/2", help="family scale (rational)")
            p.add_argument("--k", type=int, default=None)
            p.add_argument("--grid", type=int, default=4096)
            p.add_argument("--margin", type=float, default=1e-3)
            p.add_argument("--offset", type=float, default=0.5)
            p.add_argument("--no-shift", action="store_true")

    p = sub.add_parser("braid", help="parse and inspect a braid word")
    common(p)
    p.set_defaults(fn=cmd_braid)

    p = sub.add_parser("fit", help="fit a Fourier parametrization")
    common(p, family_opts=True)
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("family", help="build the family and its profile CSV")
    common(p, family_opts=True)
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("rescale", help="rescale the family at a given k")
    common(p, family_opts=True)
    p.set_defaults(fn=cmd_rescale)

    p = sub.add_parser("newton", help="boundary and faces of a polynomial JSON")
    p.add_argument("--poly", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_newton)

    p = sub.add_parser("check-q", help="face non-degeneracy of q")
    p.add_argument("--q", required=True)
    p.add_argument("--mu", type=int, default=None,
                   help="optional local invariant for the consistency report")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_check_q)

    p = sub.add_parser("certify", help="certify the product family * q")
    common(p, q_opt=True, family_opts=True)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("realize", help="full pipeline")
    common(p, q_opt=True, family_opts=True)
    p.add_argument("--sample", action="store_true",
                   help="also sample the link over |v| = r0")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("sample-link", help="sample strand curves of a family")
    p.add_argument("--poly", required=True)
    p.add_argument("--r0", type=float, default=None)
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_sample_link)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        out = {"stage": getattr(exc, "stage", args.command), "error": str(exc)}
        try:
            _write_json(_out_dir(args) / "failure.json", out)
        except Exception:
            pass
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
