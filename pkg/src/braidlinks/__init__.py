"""Real algebraic links from braids.

Pipeline: a braid word (or a supplied Fourier parametrization of its strands)
is expanded into a monic family g_a(u, t), rescaled into a mixed polynomial
in (u, v, vbar), multiplied by a monic complex polynomial q, and the product
is certified strongly non-degenerate and convenient through its radial
Newton boundary and argument-derivative margins; the resulting link can be
sampled as strand curves over a small torus |v| = r0.
"""

from .braid import (BraidWord, ClosureStructure, closure_structure,
                    is_syntactic_square, parse_braid_word)
from .braidfamily import (ArgDerivativeProfile, SemiholoFamily, arg_profile,
                          build_ga, critical_values_at, min_admissible_nm,
                          psi0)
from .mixedpoly import (MixedPolynomial, RadialType, min_v_order, multiply,
                        ord_profile, radial_type, rescale_to_mixed)
from .newton import (NewtonBoundary, WeightVector, face_function,
                     is_convenient, min_k, newton_boundary,
                     predict_product_boundary)
from .nondeg import (Certificate, FaceVerdict, certify_product,
                     holomorphic_face_nondegenerate, newton_number,
                     q_is_nondegenerate)
from .realize import (LinkSample, RealizationReport, RealizeOptions, realize,
                      sample_link)
from .scalars import QC
from .trigcurve import (StrandParametrization, TrigPolynomial, cosine,
                        eval_trig, fit_parametrization,
                        shift_to_avoid_origin, sine)

__all__ = [
    "BraidWord", "ClosureStructure", "closure_structure",
    "is_syntactic_square", "parse_braid_word",
    "ArgDerivativeProfile", "SemiholoFamily", "arg_profile", "build_ga",
    "critical_values_at", "min_admissible_nm", "psi0",
    "MixedPolynomial", "RadialType", "min_v_order", "multiply", "ord_profile",
    "radial_type", "rescale_to_mixed",
    "NewtonBoundary", "WeightVector", "face_function", "is_convenient",
    "min_k", "newton_boundary", "predict_product_boundary",
    "Certificate", "FaceVerdict", "certify_product",
    "holomorphic_face_nondegenerate", "newton_number", "q_is_nondegenerate",
    "LinkSample", "RealizationReport", "RealizeOptions", "realize",
    "sample_link",
    "QC",
    "StrandParametrization", "TrigPolynomial", "cosine", "eval_trig",
    "fit_parametrization", "shift_to_avoid_origin", "sine",
]
