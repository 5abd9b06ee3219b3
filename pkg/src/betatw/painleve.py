"""Hastings-McLeod solution of Painleve II and the Tracy-Widom CDFs.

q'' = s q + 2 q^3 with q ~ Ai at +infinity, integrated right to left by RK4
together with the running tail integrals

    I1(x)  = int_x^inf q ds
    I2(x)  = int_x^inf q^2 ds
    I2w(x) = int_x^inf (s - x) q^2 ds

so that F2 = exp(-I2w), E = -I1/2, F1 = exp(E) sqrt(F2) and
F4(x) = G(2^(2/3) x) with G = cosh(E) sqrt(F2).
"""

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_bvp
from scipy.interpolate import CubicHermiteSpline

from betatw.special import airy

# F4 in the beta-Hermite edge scaling N^(1/6)(lambda_max - 2 sqrt N).
GAMMA_BETA4 = 2.0 ** (2.0 / 3.0)
BETAS = (1, 2, 4)
BLOWUP = 1e3
COLUMNS = ("s", "q", "qprime", "I1", "I2", "I2w")


class PainleveDivergence(RuntimeError):
    pass


class OutOfRange(ValueError):
    pass


def airy_tail_integrals(s):
    """(I1, I2, I2w) at ``s`` assuming q = Ai on [s, inf).

    I2 and I2w have closed forms; I1 uses the first two terms of the
    integration-by-parts expansion, whose remainder is O(Ai(s) s^-3.5).
    """
    ai, aip = airy(s)
    i1 = -aip / s - ai / s**2
    i2 = aip * aip - s * ai * ai
    # int_s^inf t Ai(t)^2 dt
    j = -(s * s * ai * ai - s * aip * aip + ai * aip) / 3.0
    return i1, i2, j - s * i2


def _rhs(s, y):
    q, qp, _, i2, _ = y
    return (qp, s * q + 2.0 * q**3, -q, -q * q, -i2)


def _rk4_step(s, y, h):
    k1 = _rhs(s, y)
    k2 = _rhs(s + h / 2, [a + h / 2 * b for a, b in zip(y, k1)])
    k3 = _rhs(s + h / 2, [a + h / 2 * b for a, b in zip(y, k2)])
    k4 = _rhs(s + h, [a + h * b for a, b in zip(y, k3)])
    return [a + h / 6 * (b + 2 * c + 2 * d + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)]


@dataclass(frozen=True)
class PainleveSolution:
    s: np.ndarray
    q: np.ndarray
    qprime: np.ndarray
    I1: np.ndarray
    I2: np.ndarray
    I2w: np.ndarray
    _splines: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in COLUMNS:
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1 or arr.size != np.size(self.s):
                raise ValueError(f"column {name} has the wrong shape")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"column {name} has non-finite entries")
            object.__setattr__(self, name, arr)
        if self.s.size < 4 or np.any(np.diff(self.s) <= 0):
            raise ValueError("grid must be strictly ascending with at least 4 nodes")

    @property
    def s_min(self):
        return float(self.s[0])

    @property
    def s_max(self):
        return float(self.s[-1])

    def _spline(self, name):
        if name not in self._splines:
            s, q = self.s, self.q
            deriv = {
                "q": self.qprime,
                "qprime": s * q + 2.0 * q**3,
                "I1": -q,
                "I2": -q * q,
                "I2w": -self.I2,
            }[name]
            self._splines[name] = CubicHermiteSpline(s, getattr(self, name), deriv)
        return self._splines[name]

    def __call__(self, name, x):
        """Hermite-interpolated value of column ``name`` at ``x``."""
        x = np.asarray(x, dtype=float)
        if np.any(x < self.s_min) or np.any(x > self.s_max):
            raise OutOfRange(
                f"x outside tabulated range [{self.s_min}, {self.s_max}]"
            )
        out = self._spline(name)(x)
        return float(out) if out.ndim == 0 else out

    def to_csv(self, path=None):
        buf = io.StringIO()
        buf.write(",".join(COLUMNS) + "\n")
        for row in zip(*(getattr(self, c) for c in COLUMNS)):
            buf.write(",".join(repr(float(v)) for v in row) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path):
        """Load a snapshot written by ``to_csv``; raises ValueError if it is malformed."""
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            if tuple(header) != COLUMNS:
                raise ValueError(f"unexpected snapshot header {header}")
            try:
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
            except ValueError as exc:
                raise ValueError(f"malformed snapshot: {exc}") from None
        if data.shape[1] != len(COLUMNS):
            raise ValueError("snapshot has the wrong number of columns")
        sol = cls(*(data[:, i] for i in range(len(COLUMNS))))
        if np.any(sol.q <= 0) or np.any(np.diff(sol.q) >= 0):
            raise ValueError("snapshot q is not positive and decreasing")
        return sol


# q(s) ~ sqrt(-s/2) * sum_k c_k s^(-3k) as s -> -inf
_LEFT_SERIES = (1.0, 1.0 / 8.0, -73.0 / 128.0, 10657.0 / 1024.0, -13912277.0 / 32768.0)


def left_asymptote(s):
    """Left asymptotic expansion of q and q' (accurate to ~1e-11 at s = -12)."""
    s = np.asarray(s, dtype=float)
    root = np.sqrt(-s / 2.0)
    series = sum(c * s ** (-3 * k) for k, c in enumerate(_LEFT_SERIES))
    dseries = sum(-3 * k * c * s ** (-3 * k - 1) for k, c in enumerate(_LEFT_SERIES))
    return root * series, root * dseries - series / (4.0 * root)


def _integrate_right(s_max, s_stop, h, substeps):
    """RK4 from s_max down to s_stop; returns states at every grid node."""
    n = int(round((s_max - s_stop) / h))
    ai, aip = airy(s_max)
    y = [ai, aip, *airy_tail_integrals(s_max)]
    rows = [y]
    dh = h / substeps
    for k in range(n):
        for j in range(substeps):
            s = s_max - k * h - j * dh
            y = _rk4_step(s, y, -dh)
        if not (math.isfinite(y[0]) and abs(y[0]) < BLOWUP):
            raise PainleveDivergence(
                f"q diverged near s={s_max - (k + 1) * h:.4f} (|q|={abs(y[0]):.3g}); "
                "boundary data or step size is off"
            )
        rows.append(y)
    return np.array(rows)


def _solve_left(a, b, yb, grid):
    """Two-point BVP for the same system on [a, b].

    Left end pinned to the asymptotic expansion; right end matched to the
    integrated state ``yb``. Backward integration cannot reach this region
    in double precision, but the boundary value problem is well conditioned.
    """
    s = np.linspace(a, b, max(200, int(round((b - a) / 2.5e-3)) + 1))
    q, qp = left_asymptote(s)

    def cum(f):
        # trapezoid integral from each node to b, used only as an initial guess
        pieces = (f[1:] + f[:-1]) / 2 * np.diff(s)
        return np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])

    i1 = yb[2] + cum(q)
    i2 = yb[3] + cum(q * q)
    i2w = yb[4] + cum(i2)

    def rhs(s, y):
        return np.vstack([y[1], s * y[0] + 2 * y[0] ** 3, -y[0], -y[0] ** 2, -y[3]])

    qa = float(left_asymptote(a)[0])

    def bc(ya, yr):
        return np.array([ya[0] - qa, yr[0] - yb[0], yr[2] - yb[2], yr[3] - yb[3], yr[4] - yb[4]])

    res = solve_bvp(rhs, bc, s, np.vstack([q, qp, i1, i2, i2w]), tol=1e-12, bc_tol=1e-13, max_nodes=500000)
    if not res.success:
        raise PainleveDivergence(f"left boundary value solve failed: {res.message}")
    return res.sol(grid).T


def solve_hastings_mcleod(s_min=-10.0, s_max=8.0, step=1e-3, substeps=4, match=-6.0):
    """Tabulate q, q' and the tail integrals on a grid of spacing ``step``.

    RK4 runs right to left from Airy data at ``s_max`` (``substeps`` RK4 steps
    per grid cell) down to ``match``; anything left of ``match`` comes from a
    boundary value solve anchored on the left asymptotic expansion.
    """
    if not s_min < s_max:
        raise ValueError("need s_min < s_max")
    if s_max < 6:
        raise ValueError("s_max must be at least 6 for Airy boundary data")
    if not step > 0:
        raise ValueError("step must be positive")
    n = max(4, int(round((s_max - s_min) / step)))
    h = (s_max - s_min) / n
    grid = s_max - h * np.arange(n, -1, -1)
    grid[0] = s_min
    n_right = n if s_min >= match else int(math.floor((s_max - match) / h))
    right = _integrate_right(s_max, s_max - n_right * h, h, substeps)[::-1]
    if n_right < n:
        s_join = grid[n - n_right]
        left_grid = grid[: n - n_right]
        a = min(s_min, match) - 2.0
        left = _solve_left(a, s_join, right[0], left_grid)
        arr = np.vstack([left, right])
    else:
        arr = right
    return PainleveSolution(grid, *arr.T)


_default = None


def default_solution():
    """Solution on [-10, 8] with grid step 1e-3, computed once per process."""
    global _default
    if _default is None:
        _default = solve_hastings_mcleod()
    return _default


def _check_beta(beta):
    if beta not in BETAS:
        raise ValueError(f"closed-form CDFs exist only for beta in {BETAS}, got {beta}")


def _arg(beta, x):
    return GAMMA_BETA4 * np.asarray(x, dtype=float) if beta == 4 else np.asarray(x, dtype=float)


def domain(beta, sol):
    """Interval of x on which tw_cdf(beta, x, sol) is defined."""
    _check_beta(beta)
    g = GAMMA_BETA4 if beta == 4 else 1.0
    return sol.s_min / g, sol.s_max / g


def _pieces(beta, x, sol):
    s = _arg(beta, x)
    return sol("I1", s), sol("I2w", s)


def painleve_cdfs(s, sol=None):
    """The three closed-form CDFs at a common Painleve argument ``s``.

    Returns ``(F1, F2, G)`` with G = cosh(E) sqrt(F2). G is the beta = 4 law
    only after the argument rescaling done in ``tw_cdf``; at a shared
    argument the ordering F1 <= sqrt(F2) <= G holds because E <= 0.
    """
    sol = default_solution() if sol is None else sol
    i1, i2w = sol("I1", s), sol("I2w", s)
    e = -0.5 * i1
    root_f2 = np.exp(-0.5 * i2w)
    return np.exp(e) * root_f2, root_f2**2, np.cosh(e) * root_f2


def tw_cdf(beta, x, sol=None):
    """P(TW_beta <= x) for beta in {1, 2, 4}, in the beta-Hermite edge scaling."""
    sol = default_solution() if sol is None else sol
    _check_beta(beta)
    i1, i2w = _pieces(beta, x, sol)
    e = -0.5 * i1
    if beta == 2:
        out = np.exp(-i2w)
    elif beta == 1:
        out = np.exp(e - 0.5 * i2w)
    else:
        # the cosh * sqrt product is not monotone to the last ulp near 1
        sf = _sf4(e, i2w)
        out = np.where(sf < 0.5, 1.0 - sf, np.cosh(e) * np.exp(-0.5 * i2w))
    return float(out) if np.ndim(out) == 0 else out


def _sf4(e, i2w):
    w = np.exp(-0.5 * i2w)
    return -np.expm1(-0.5 * i2w) - 2.0 * np.sinh(0.5 * e) ** 2 * w


def tw_sf(beta, x, sol=None):
    """1 - F_beta(x), evaluated without cancellation in the right tail."""
    sol = default_solution() if sol is None else sol
    _check_beta(beta)
    i1, i2w = _pieces(beta, x, sol)
    e = -0.5 * i1
    if beta == 2:
        out = -np.expm1(-i2w)
    elif beta == 1:
        out = -np.expm1(e - 0.5 * i2w)
    else:
        out = _sf4(e, i2w)
    return float(out) if np.ndim(out) == 0 else out


def tw_pdf(beta, x, sol=None):
    sol = default_solution() if sol is None else sol
    _check_beta(beta)
    s = _arg(beta, x)
    q, i1, i2, i2w = sol("q", s), sol("I1", s), sol("I2", s), sol("I2w", s)
    e = -0.5 * i1
    root_f2 = np.exp(-0.5 * i2w)
    if beta == 2:
        out = root_f2**2 * i2
    elif beta == 1:
        out = np.exp(e) * root_f2 * 0.5 * (q + i2)
    else:
        out = GAMMA_BETA4 * root_f2 * 0.5 * (np.sinh(e) * q + np.cosh(e) * i2)
    return float(out) if np.ndim(out) == 0 else out
