"""Tail asymptotes, concentration bounds and infinite-divisibility diagnostics.

A ``TailFunction`` is a survival function x -> P(X > x) stored through its
logarithm, because the tails of interest underflow doubles long before the
diagnostics become decisive (exp(-(4/3) x^1.5) at x = 1e4 is exp(-1.3e6)).

The diagnostics are one-sided: they can certify that a law is *not*
infinitely divisible, never that it is.
"""

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from betatw import painleve

LEFT, RIGHT = "left", "right"


@dataclass(frozen=True)
class TailFunction:
    log_sf: object
    kind: str = "analytic"
    description: str = ""
    valid: tuple = (-math.inf, math.inf)

    def __call__(self, x):
        return math.exp(self.log_sf(x))

    def log(self, x):
        return self.log_sf(x)

    def values(self, xs):
        return np.array([self(x) for x in xs])


def _check_positive(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")


def tail_asymptote(beta, side, x):
    """Leading-order log tail of TW_beta; the o(1) correction is dropped."""
    _check_positive(beta=beta, x=x)
    if side == LEFT:
        return -beta * x**3 / 24.0
    if side == RIGHT:
        return -2.0 / 3.0 * beta * x**1.5
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def two_sided_tail(beta, x):
    """log P(|TW_beta| > x) from the two leading-order tails."""
    return float(np.logaddexp(tail_asymptote(beta, LEFT, x), tail_asymptote(beta, RIGHT, x)))


def asymptote_tail(beta, side="two_sided"):
    if side == "two_sided":
        f = lambda x: two_sided_tail(beta, x)
    else:
        f = lambda x: tail_asymptote(beta, side, x)
    return TailFunction(f, "asymptote", f"TW_{beta:g} {side} asymptote", (0.0, math.inf))


def _log(v):
    return math.log(v) if v > 0 else -math.inf


def painleve_tail(beta, side="two_sided", sol=None):
    """Tails of TW_beta (beta in 1, 2, 4) from the Painleve CDFs."""
    sol = painleve.default_solution() if sol is None else sol
    lo, hi = painleve.domain(beta, sol)

    def right(x):
        return _log(painleve.tw_sf(beta, x, sol))

    def left(x):
        return _log(painleve.tw_cdf(beta, -x, sol))

    f = {RIGHT: right, LEFT: left, "two_sided": lambda x: float(np.logaddexp(left(x), right(x)))}[side]
    valid = (lo, hi) if side == RIGHT else (0.0, min(hi, -lo))
    return TailFunction(f, "painleve", f"TW_{beta} {side} tail (Painleve)", valid)


def empirical_tail_function(samples, center=0.0, scale=1.0, two_sided=True):
    """Survival of |X - center| / scale (or of (X - center) / scale) from samples."""
    z = (np.asarray(samples, dtype=float) - center) / scale
    z = np.sort(np.abs(z) if two_sided else z)
    n = z.size

    def f(x):
        k = n - np.searchsorted(z, x, side="right")
        return _log(k / n)

    what = "|X - c|" if two_sided else "X - c"
    return TailFunction(f, "empirical", f"empirical survival of {what} (n={n})", (float(z[0]), float(z[-1])))


def id_gaussian_statistic(tail, x):
    """-log P(|X| > x) / (x log x); an ID law is Gaussian iff its limsup is infinite."""
    if not x > 1:
        raise ValueError(f"statistic needs x > 1, got {x}")
    log_p = tail.log(x)
    if log_p == -math.inf:
        return math.inf
    if log_p >= 0:
        raise ValueError(f"tail at x={x} is not below 1")
    return -log_p / (x * math.log(x))


@dataclass
class BoundCheck:
    holds: bool
    witness: float = None
    rows: list = field(default_factory=list)

    def __bool__(self):
        return self.holds

    def to_csv(self):
        lines = ["x,tail,bound,pass"]
        lines += [f"{x!r},{t!r},{b!r},{int(ok)}" for x, t, b, ok in self.rows]
        return "\n".join(lines) + "\n"


def check_exponential_bound(tail, a, b, c, xs):
    """Does P(|X| > x) <= a exp(-b x^c) hold at every grid point?"""
    _check_positive(a=a, b=b)
    xs = list(xs)
    if not xs or any(x <= 0 for x in xs):
        raise ValueError("grid must be nonempty and positive")
    rows, witness = [], None
    for x in xs:
        log_bound = math.log(a) - b * x**c
        log_t = tail.log(x)
        ok = log_t <= log_bound
        rows.append((x, math.exp(log_t), math.exp(log_bound), ok))
        if not ok and witness is None:
            witness = x
    return BoundCheck(witness is None, witness, rows)


class Ensemble(str, enum.Enum):
    GOE = "GOE"
    GUE = "GUE"


def concentration_bound(ensemble, n, x):
    """Finite-N tail bound on the largest eigenvalue.

    GOE: P(|lambda_max / sqrt(N)| >= x) <= exp(-N x^2 / 9).
    GUE: P(|lambda_max - E lambda_max| / sqrt(N) >= x) <= 2 exp(-2 N x^2).
    Both are stated for lambda_max divided by sqrt(N), i.e. spectrum on [-2, 2].
    """
    _check_positive(n=n, x=x)
    ensemble = Ensemble(ensemble)
    if ensemble is Ensemble.GOE:
        return math.exp(-n * x * x / 9.0)
    return min(1.0, 2.0 * math.exp(-2.0 * n * x * x))


def concentration_params(ensemble, n, slack=1.0):
    """(a, b, c) such that concentration_bound = a exp(-b x^c), b scaled by ``slack``."""
    ensemble = Ensemble(ensemble)
    if ensemble is Ensemble.GOE:
        return 1.0, slack * n / 9.0, 2.0
    return 2.0, slack * 2.0 * n, 2.0


def rplus_id_check(tail, a, xs):
    """Necessary condition for ID on [0, inf): -log P(X > x) <= a x log x."""
    _check_positive(a=a)
    rows, witness = [], None
    for x in xs:
        if not x > 1:
            raise ValueError(f"grid points must exceed 1, got {x}")
        lhs = -tail.log(x)
        rhs = a * x * math.log(x)
        ok = lhs <= rhs
        rows.append((x, lhs, rhs, ok))
        if not ok and witness is None:
            witness = x
    return BoundCheck(witness is None, witness, rows)


def wigner_surmise_pdf(s):
    if not s > 0:
        raise ValueError(f"spacing must be positive, got {s}")
    return math.pi / 2.0 * s * math.exp(-math.pi / 4.0 * s * s)


def wigner_surmise_cdf(s):
    s = np.asarray(s, dtype=float)
    return np.where(s > 0, -np.expm1(-math.pi / 4.0 * np.maximum(s, 0) ** 2), 0.0)


def wigner_surmise_tail():
    return TailFunction(lambda x: -math.pi / 4.0 * x * x, "analytic", "Wigner surmise survival", (0.0, math.inf))


class Mode(str, enum.Enum):
    ABSOLUTE = "absolute"
    TRUNCATE_LEFT = "truncate_left"
    TRUNCATE_RIGHT = "truncate_right"


def transform_tail(left, right, mode, at=None):
    """Survival function of |X| or of X truncated at ``at``.

    ``right(x)`` is P(X > x) and ``left(x)`` is P(X < -x), both for real x.
    TRUNCATE_LEFT keeps X > at, TRUNCATE_RIGHT keeps X < at.
    """
    mode = Mode(mode)
    if mode is Mode.ABSOLUTE:
        f = lambda x: float(np.logaddexp(left.log(x), right.log(x)))
        return TailFunction(f, left.kind, f"|X| from ({left.description}, {right.description})", (0.0, math.inf))
    if at is None:
        raise ValueError("truncation needs a truncation point")
    if mode is Mode.TRUNCATE_LEFT:
        kept = right.log(at)
        if kept == -math.inf:
            raise ValueError(f"truncation at {at} leaves no mass")
        f = lambda x: 0.0 if x < at else right.log(x) - kept
        return TailFunction(f, right.kind, f"X | X > {at}", (at, math.inf))
    kept = left.log(-at)
    if kept == -math.inf:
        raise ValueError(f"truncation at {at} leaves no mass")
    kept_p = math.exp(kept)

    def f(x):
        if x >= at:
            return -math.inf
        return _log((kept_p - math.exp(left.log(-x))) / kept_p)

    return TailFunction(f, left.kind, f"X | X < {at}", (-math.inf, at))


class Verdict(str, enum.Enum):
    NOT_ID_GAUSSIAN_CRITERION = "NotID_GaussianCriterion"
    NOT_ID_SUBEXPONENTIAL_BOUND = "NotID_SubexponentialBound"
    NOT_ID_RPLUS_CRITERION = "NotID_RPlusCriterion"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class IDVerdict:
    verdict: Verdict
    evidence: list
    threshold: float
    note: str = ""

    def __post_init__(self):
        self.verdict = Verdict(self.verdict)
        if self.verdict is not Verdict.INCONCLUSIVE and not self.evidence:
            raise ValueError("a not-ID verdict must carry evidence")

    def to_json(self):
        return json.dumps(
            {
                "verdict": self.verdict.value,
                "evidence": [[float(x), float(v)] for x, v in self.evidence],
                "threshold": self.threshold,
                "note": self.note,
            },
            indent=2,
        )


def classify_id(tail, xs, threshold, non_gaussian=False, bound=None):
    """Decide whether the tail rules out infinite divisibility.

    ``tail`` is the two-sided survival P(|X| > x). ``non_gaussian`` is the
    caller's assertion that X is neither Gaussian nor degenerate; without it
    neither criterion applies and the answer is Inconclusive. ``bound`` is an
    optional (a, b, c) for the exponential-bound criterion.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size < 8 or np.any(np.diff(xs) <= 0) or xs[0] <= 0:
        raise ValueError("evidence grid must be ascending, positive, with at least 8 points")
    if not non_gaussian:
        return IDVerdict(Verdict.INCONCLUSIVE, [], threshold, "non-Gaussian side condition not asserted")

    evidence = []
    if xs[0] > 1 and xs[-1] >= 10 * xs[0]:
        stats = np.array([id_gaussian_statistic(tail, x) for x in xs])
        evidence = list(zip(xs.tolist(), stats.tolist()))
        last_half = stats[xs.size // 2 :]
        increasing = np.all(np.isfinite(last_half)) and np.all(np.diff(last_half) > 0)
        if stats[-1] > threshold and increasing:
            return IDVerdict(Verdict.NOT_ID_GAUSSIAN_CRITERION, evidence, threshold)

    if bound is not None:
        a, b, c = bound
        if c > 1:
            check = check_exponential_bound(tail, a, b, c, xs)
            if check.holds:
                ratios = [(x, t / bd) for x, t, bd, _ in check.rows]
                return IDVerdict(
                    Verdict.NOT_ID_SUBEXPONENTIAL_BOUND,
                    ratios,
                    threshold,
                    f"P(|X|>x) <= {a:g} exp(-{b:g} x^{c:g}) on the grid",
                )
    return IDVerdict(Verdict.INCONCLUSIVE, evidence, threshold)


def classify_rplus(tail, xs, a_values=(1.0, 10.0, 100.0)):
    """Scan a over ``a_values``; violation for every a rules out ID on [0, inf)."""
    evidence = []
    for a in a_values:
        check = rplus_id_check(tail, a, xs)
        if check.holds:
            return IDVerdict(Verdict.INCONCLUSIVE, evidence, a)
        evidence.append((a, check.witness))
    return IDVerdict(Verdict.NOT_ID_RPLUS_CRITERION, evidence, max(a_values))
