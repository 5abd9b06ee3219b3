"""Seeded samplers for the beta-Hermite, dense GOE and stochastic Airy models.

Every sampler takes an explicit ``numpy.random.Generator``; nothing here
touches global random state. ``substream(seed, i)`` gives the generator for
sample ``i`` of a batch, so batches do not depend on how work is split.
"""

import datetime
import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from betatw import __version__
from betatw.special import log_gamma
from betatw.trilinalg import TridiagonalMatrix, householder_tridiagonalize, largest_eigenvalue


class Kind(str, enum.Enum):
    BETA_HERMITE = "beta_hermite"
    GOE_DENSE = "goe_dense"
    STOCHASTIC_AIRY = "stochastic_airy"


@dataclass(frozen=True)
class EnsembleSpec:
    kind: Kind = Kind.BETA_HERMITE
    beta: float = 2.0
    n_dim: int = 200
    sao_length: float = 10.0
    sao_step: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.kind is Kind.GOE_DENSE and self.beta != 1:
            raise ValueError(f"dense GOE requires beta = 1, got {self.beta}")
        if int(self.n_dim) != self.n_dim or self.n_dim < 1:
            raise ValueError(f"n_dim must be a positive integer, got {self.n_dim}")
        object.__setattr__(self, "n_dim", int(self.n_dim))
        if self.kind is Kind.STOCHASTIC_AIRY:
            if not self.sao_length > 0:
                raise ValueError(f"sao_length must be positive, got {self.sao_length}")
            if not 0 < self.sao_step < self.sao_length:
                raise ValueError(
                    f"sao_step must lie in (0, sao_length), got {self.sao_step}"
                )

    def to_dict(self):
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


@dataclass(frozen=True, eq=False)
class SampleBatch:
    spec: EnsembleSpec
    seed: int
    samples: np.ndarray
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 1:
            raise ValueError("a batch needs at least one sample")
        if not np.all(np.isfinite(s)):
            raise ValueError("batch samples must be finite")
        if np.any(np.diff(s) < 0):
            raise ValueError("batch samples must be sorted ascending")
        object.__setattr__(self, "samples", s)

    @property
    def n(self):
        return self.samples.size

    def __eq__(self, other):
        if not isinstance(other, SampleBatch):
            return NotImplemented
        return self.spec == other.spec and self.seed == other.seed and np.array_equal(self.samples, other.samples)

    __hash__ = None


def substream(seed, index):
    """Generator for sample ``index`` of the batch seeded by ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def sample_chi(t, rng, size=None):
    """Draw from the chi distribution with ``t`` degrees of freedom."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("chi degrees of freedom must be positive")
    return np.sqrt(2.0 * rng.gamma(t / 2.0, 1.0, size=size))


def chi_pdf(t, x):
    if not (t > 0 and x > 0):
        raise ValueError(f"chi_pdf needs t > 0 and x > 0, got t={t}, x={x}")
    log_f = (1 - t / 2) * math.log(2.0) + (t - 1) * math.log(x) - x * x / 2 - log_gamma(t / 2)
    return math.exp(log_f)


def sample_beta_hermite(spec, rng):
    """Tridiagonal beta-Hermite matrix of order ``spec.n_dim``."""
    n, beta = spec.n_dim, spec.beta
    scale = 1.0 / math.sqrt(beta)
    diag = rng.standard_normal(n) * math.sqrt(2.0) * scale
    if n > 1:
        dof = beta * np.arange(n - 1, 0, -1, dtype=float)
        offdiag = sample_chi(dof, rng) * scale
    else:
        offdiag = np.empty(0)
    return TridiagonalMatrix(diag, offdiag)


def sample_goe_dense(n, rng):
    """Dense real symmetric GOE matrix with density proportional to exp(-tr H^2 / 4)."""
    if n < 1:
        raise ValueError("matrix order must be positive")
    a = rng.standard_normal((n, n))
    upper = np.triu(a, 1)
    return upper + upper.T + np.diag(np.diag(a) * math.sqrt(2.0))


def scale_largest(lambda_max, n):
    return n ** (1.0 / 6.0) * (lambda_max - 2.0 * math.sqrt(n))


def log_joint_eigen_density(lambdas, beta):
    """Unnormalized log density of ordered eigenvalues (no Selberg constant)."""
    lam = np.asarray(lambdas, dtype=float)
    if np.any(np.diff(lam) < 0):
        raise ValueError("eigenvalues must be given in nondecreasing order")
    diffs = lam[None, :] - lam[:, None]
    gaps = diffs[np.triu_indices(lam.size, 1)]
    if np.any(gaps == 0):
        return -math.inf
    return float(beta * np.sum(np.log(gaps)) - beta / 4.0 * np.sum(lam * lam))


def sao_grid(spec):
    m = math.ceil(spec.sao_length / spec.sao_step - 1e-9)
    return spec.sao_step * np.arange(m + 1)


def sao_operator(spec, increments):
    """Discretized -d^2/dx^2 + x + (2/sqrt(beta)) b'(x) on the interior grid nodes.

    ``increments`` holds one Brownian increment per interior node; Dirichlet
    conditions at both ends of the domain.
    """
    h = spec.sao_step
    x = sao_grid(spec)[1:-1]
    increments = np.asarray(increments, dtype=float)
    if increments.shape != x.shape:
        raise ValueError(f"expected {x.size} increments, got {increments.size}")
    diag = 2.0 / h**2 + x + 2.0 / math.sqrt(spec.beta) * increments / h
    offdiag = np.full(x.size - 1, -1.0 / h**2)
    return TridiagonalMatrix(diag, offdiag)


def sample_sao_increments(spec, rng):
    n_interior = sao_grid(spec).size - 2
    return rng.standard_normal(n_interior) * math.sqrt(spec.sao_step)


def sample_tw_sao(spec, rng):
    """One approximate TW_beta draw: minus the ground-state energy of the operator."""
    H = sao_operator(spec, sample_sao_increments(spec, rng))
    negated = TridiagonalMatrix(-H.diag, -H.offdiag)
    return largest_eigenvalue(negated)


def largest_scaled(spec, rng):
    """One scaled largest-eigenvalue draw (or SAO draw) for ``spec``."""
    if spec.kind is Kind.STOCHASTIC_AIRY:
        return sample_tw_sao(spec, rng)
    if spec.kind is Kind.BETA_HERMITE:
        T = sample_beta_hermite(spec, rng)
    else:
        T = householder_tridiagonalize(sample_goe_dense(spec.n_dim, rng))
    return scale_largest(largest_eigenvalue(T), spec.n_dim)


def batch_metadata():
    return {
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
