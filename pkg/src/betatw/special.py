"""Airy function and log-gamma in plain double precision.

Ai is summed from its Maclaurin series in extended decimal precision for
moderate arguments (the two series cancel catastrophically in doubles once
|x| grows past ~3) and from the standard asymptotic expansions beyond.
"""

import math
from decimal import Decimal, localcontext

import numpy as np

# Ai(0) and Ai'(0) to 60 digits.
_AI0 = Decimal("0.355028053887817239260063186004183176397979174199177240583327")
_AIP0 = Decimal("-0.258819403792806798405183560189203963479091138354934582210002")

_SERIES_PREC = 60
_ASYMPTOTIC_CROSSOVER = 12.0
_SQRT_PI = math.sqrt(math.pi)


def _airy_series(x):
    with localcontext() as ctx:
        ctx.prec = _SERIES_PREC
        X = Decimal(repr(float(x)))
        X3 = X * X * X
        tiny = Decimal(10) ** (-_SERIES_PREC + 5)
        # f, g: the two Maclaurin solutions; fp, gp their derivatives.
        t, u = Decimal(1), X
        p, q = X * X / 2, Decimal(1)
        f, g, fp, gp = t, u, p, q
        k = 0
        while True:
            t = t * X3 / ((3 * k + 2) * (3 * k + 3))
            u = u * X3 / ((3 * k + 3) * (3 * k + 4))
            p = p * X3 / ((3 * k + 3) * (3 * k + 5))
            q = q * X3 / ((3 * k + 1) * (3 * k + 3))
            f += t
            g += u
            fp += p
            gp += q
            k += 1
            if k > 5 and max(abs(t), abs(u), abs(p), abs(q)) < tiny:
                break
        ai = _AI0 * f + _AIP0 * g
        aip = _AI0 * fp + _AIP0 * gp
        return float(ai), float(aip)


def _asymptotic_coefficients(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)]
    return u, v


_U, _V = _asymptotic_coefficients(24)


def _truncated(coeffs, zeta, alternating, start=0, step=1):
    total, last = 0.0, math.inf
    sign = 1.0
    for j, k in enumerate(range(start, len(coeffs), step)):
        term = coeffs[k] / zeta**k
        if abs(term) > last:
            break
        total += sign * term
        if alternating:
            sign = -sign
        last = abs(term)
    return total


def _airy_asymptotic(x):
    if x > 0:
        zeta = 2.0 / 3.0 * x**1.5
        env = math.exp(-zeta) / (2.0 * _SQRT_PI)
        ai = env / x**0.25 * _truncated(_U, zeta, alternating=True)
        aip = -env * x**0.25 * _truncated(_V, zeta, alternating=True)
        return ai, aip
    z = -x
    zeta = 2.0 / 3.0 * z**1.5
    c, s = math.cos(zeta - math.pi / 4), math.sin(zeta - math.pi / 4)
    ue = _truncated(_U, zeta, True, 0, 2)
    uo = _truncated(_U, zeta, True, 1, 2)
    ve = _truncated(_V, zeta, True, 0, 2)
    vo = _truncated(_V, zeta, True, 1, 2)
    ai = (c * ue + s * uo) / (_SQRT_PI * z**0.25)
    aip = z**0.25 * (s * ve - c * vo) / _SQRT_PI
    return ai, aip


def airy(x):
    """Return ``(Ai(x), Ai'(x))`` for a finite real scalar ``x``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"airy argument must be finite, got {x}")
    if abs(x) <= _ASYMPTOTIC_CROSSOVER:
        return _airy_series(x)
    return _airy_asymptotic(x)


def airy_ai(x):
    """Ai(x); accepts a scalar or an array."""
    if np.ndim(x) == 0:
        return airy(x)[0]
    return np.array([airy(v)[0] for v in np.ravel(x)]).reshape(np.shape(x))


def airy_ai_prime(x):
    if np.ndim(x) == 0:
        return airy(x)[1]
    return np.array([airy(v)[1] for v in np.ravel(x)]).reshape(np.shape(x))


# Bernoulli-number coefficients B_2k / (2k (2k-1)) of the Stirling series.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
_STIRLING_SHIFT = 15.0


def log_gamma(alpha):
    """log Gamma(alpha) for alpha > 0.

    Uses the recurrence to push the argument above 15 and then the Stirling
    series, which is accurate to a few ulps there.
    """
    alpha = float(alpha)
    if not alpha > 0 or not math.isfinite(alpha):
        raise ValueError(f"log_gamma requires alpha > 0, got {alpha}")
    shift_logs = []
    z = alpha
    while z < _STIRLING_SHIFT:
        shift_logs.append(math.log(z))
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0.0
    power = inv
    for c in _STIRLING:
        series += c * power
        power *= inv2
    main = (z - 0.5) * math.log(z) - z + 0.5 * math.log(2.0 * math.pi)
    return math.fsum([main, series] + [-v for v in shift_logs])
