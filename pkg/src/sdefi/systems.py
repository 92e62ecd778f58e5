"""Ready-made example systems used by the test-suite, docs and CLI demos.

All coefficients are exact rationals.  Builders accept ints, Fractions or
strings like "1/2" for their parameters.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import CRational, LaurentPoly, VField, parse_poly_text
from .ito import SdeSystem


def _p(text: str, names) -> LaurentPoly:
    return parse_poly_text(text, names)


def gbm(a=1, sigma=1) -> SdeSystem:
    """Geometric Brownian motion dX = a X dt + sigma X dB."""
    names = ("x1",)
    drift = VField((LaurentPoly(1, {(1,): Fraction(a)}),))
    noise = VField((LaurentPoly(1, {(1,): Fraction(sigma)}),))
    return SdeSystem(drift, (noise,), names)


def gbm_twin_noise(a=1) -> SdeSystem:
    """dX = a X dt + X dB^1 + X dB^2: effective squared volatility 2."""
    names = ("x1",)
    drift = VField((LaurentPoly(1, {(1,): Fraction(a)}),))
    g = VField((LaurentPoly(1, {(1,): 1}),))
    return SdeSystem(drift, (g, g), names)


def scalar_martingale(sigma=2) -> SdeSystem:
    """Driftless dX = sigma X dB; X itself is conserved in expectation."""
    names = ("x1",)
    drift = VField((LaurentPoly.zero(1),))
    noise = VField((LaurentPoly(1, {(1,): Fraction(sigma)}),))
    return SdeSystem(drift, (noise,), names)


def harmonic_oscillator() -> SdeSystem:
    """Deterministic rotation (x2, -x1); conserves x1^2 + x2^2."""
    names = ("x1", "x2")
    drift = VField((LaurentPoly(2, {(0, 1): 1}), LaurentPoly(2, {(1, 0): -1})))
    return SdeSystem(drift, (), names)


def two_body(m=1, k=1, sigma_r=1, sigma_phi=1) -> SdeSystem:
    """Planar two-body motion in polar coordinates with multiplicative noise.

    State (r, phi, v, w) = (radius, angle, radial velocity, angular velocity):

        dr = v dt,   dphi = w dt,
        dv = (r w^2 - k/(m r^2)) dt + sigma_r r dB_r,
        dw = -(2 v w / r) dt + (sigma_phi / r) dB_phi.

    The angular momentum m r^2 w survives in expectation but not pathwise;
    the energy m(v^2 + r^2 w^2)/2 - k/r survives in neither sense.
    """
    names = ("r", "phi", "v", "w")
    m, k = Fraction(m), Fraction(k)
    sigma_r, sigma_phi = Fraction(sigma_r), Fraction(sigma_phi)
    drift = VField((
        LaurentPoly(4, {(0, 0, 1, 0): 1}),
        LaurentPoly(4, {(0, 0, 0, 1): 1}),
        LaurentPoly(4, {(1, 0, 0, 2): 1, (-2, 0, 0, 0): -k / m}),
        LaurentPoly(4, {(-1, 0, 1, 1): -2}),
    ))
    g_r = VField((LaurentPoly.zero(4), LaurentPoly.zero(4),
                  LaurentPoly(4, {(1, 0, 0, 0): sigma_r}), LaurentPoly.zero(4)))
    g_phi = VField((LaurentPoly.zero(4), LaurentPoly.zero(4), LaurentPoly.zero(4),
                    LaurentPoly(4, {(-1, 0, 0, 0): sigma_phi})))
    return SdeSystem(drift, (g_r, g_phi), names)


def two_body_momentum(m=1) -> LaurentPoly:
    """m r^2 w."""
    return LaurentPoly(4, {(2, 0, 0, 1): Fraction(m)})


def two_body_energy(m=1, k=1) -> LaurentPoly:
    """m (v^2 + r^2 w^2)/2 - k/r."""
    m, k = Fraction(m), Fraction(k)
    return LaurentPoly(4, {(0, 0, 2, 0): m / 2, (2, 0, 0, 2): m / 2, (-1, 0, 0, 0): -k})


def cyclic_exchange(a=2, b=3, conservative: bool = True) -> SdeSystem:
    """Three coupled species with one shared noise channel.

    With conservative=True the drift components sum to zero, so the total
    x1 + x2 + x3 is conserved pathwise (the noise components cancel too).
    With conservative=False the third drift carries +x2 x3 instead of
    -x1 x2, the published form whose component sum x1 x2 + x2 x3 breaks
    the conservation law.
    """
    names = ("x1", "x2", "x3")
    a, b = Fraction(a), Fraction(b)
    f1 = LaurentPoly(3, {(1, 0, 0): a, (0, 1, 1): 1})
    f2 = LaurentPoly(3, {(0, 1, 0): b, (1, 1, 0): 1, (0, 1, 1): -1})
    if conservative:
        f3 = LaurentPoly(3, {(1, 0, 0): -a, (0, 1, 0): -b, (1, 1, 0): -1})
    else:
        f3 = LaurentPoly(3, {(1, 0, 0): -a, (0, 1, 0): -b, (0, 1, 1): 1})
    g = VField((
        _p("x1 - 2 x2 + x1 x2 - x1 x3", names),
        _p("2 x2 - x3 + x2 x3 - x1 x2", names),
        _p("x3 - x1 + x1 x3 - x2 x3", names),
    ))
    return SdeSystem(VField((f1, f2, f3)), (g,), names)


def lotka_volterra(b=(1, 2), a=((-2, 1), (3, -5)),
                   sigma=((Fraction(1, 2), Fraction(-1, 3)),
                          (Fraction(1, 4), 1))) -> SdeSystem:
    """dx_i = x_i (b_i + sum_j a_ij x_j) dt + x_i (sum_j sigma_ij x_j) dB_i.

    The noise is quadratic near the origin, so the drift spectrum b alone
    decides analytic weak integrability.
    """
    n = len(b)
    names = tuple(f"x{i + 1}" for i in range(n))
    drift = []
    for i in range(n):
        terms = {}
        e = [0] * n
        e[i] = 1
        terms[tuple(e)] = Fraction(b[i])
        for j in range(n):
            e2 = [0] * n
            e2[i] += 1
            e2[j] += 1
            terms[tuple(e2)] = terms.get(tuple(e2), Fraction(0)) + Fraction(a[i][j])
        drift.append(LaurentPoly(n, terms))
    noises = []
    for i in range(n):
        comps = [LaurentPoly.zero(n)] * n
        terms = {}
        for j in range(n):
            e2 = [0] * n
            e2[i] += 1
            e2[j] += 1
            terms[tuple(e2)] = terms.get(tuple(e2), Fraction(0)) + Fraction(sigma[i][j])
        comps[i] = LaurentPoly(n, terms)
        noises.append(VField(tuple(comps)))
    return SdeSystem(VField(tuple(drift)), tuple(noises), names)


def coupled_exchange_linear() -> SdeSystem:
    """dX = A x dt + A x dB with A = [[0,1],[1,0]]: commuting, non-diagonal pair."""
    names = ("x1", "x2")
    a_field = VField((LaurentPoly(2, {(0, 1): 1}), LaurentPoly(2, {(1, 0): 1})))
    return SdeSystem(a_field, (a_field,), names)


REGISTRY = {
    "gbm": gbm,
    "gbm_twin_noise": gbm_twin_noise,
    "scalar_martingale": scalar_martingale,
    "harmonic_oscillator": harmonic_oscillator,
    "two_body": two_body,
    "cyclic_exchange": cyclic_exchange,
    "cyclic_exchange_published": lambda: cyclic_exchange(conservative=False),
    "lotka_volterra": lotka_volterra,
}
