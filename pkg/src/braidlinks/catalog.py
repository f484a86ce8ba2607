"""Canonical Fourier curve data for the worked examples.

Both entries are single-component curves on three strands with exact
rational coefficients, so the expanded families stay in exact arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

from .trigcurve import ComponentCurve, StrandParametrization, cosine, sine


def gerono_lemniscate(mirror: bool = False) -> StrandParametrization:
    """Three points on the Gerono lemniscate (cos x, sin 2x) traversed at
    double speed: the strand curves of the figure-eight braid (s1 s2^-1)^2.

    The curves pass through the origin at x = pi/4 + k pi/2, which is what
    the origin-avoidance shift exists for.  `mirror` flips the height curve
    (the reverse traversal).
    """
    F = cosine(2, 1)
    G = sine(4, -1 if mirror else 1)
    return StrandParametrization((ComponentCurve(F, G, 3, (1, 2, 3)),))


def three_twist_square(corrected: bool = True) -> StrandParametrization:
    """Curve data on three strands associated with the square of the
    three-twist (5_2) knot braid (s1^-1 s2 s1^3 s2)^2.

    The two variants differ by the sign of the sin(10x) harmonic of F and
    the overall sign of G.  With `corrected=True` the expanded degree-3
    family has the reference rational coefficients used across the test
    suite (constant u^1 term -15/64 at a = 1, and so on); the other variant
    traces the braid word above directly but expands to a different family.
    """
    if corrected:
        F = cosine(4, 1) + sine(10, Fraction(-3, 4))
        G = cosine(2, Fraction(1, 2)) + sine(8, 1)
    else:
        F = cosine(4, 1) + sine(10, Fraction(3, 4))
        G = sine(8, -1) + cosine(2, Fraction(-1, 2))
    return StrandParametrization((ComponentCurve(F, G, 3, (1, 2, 3)),))
