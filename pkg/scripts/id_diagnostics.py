"""Gaussian-criterion statistic along a log grid for several beta, plus the
finite-N concentration check that certifies a sub-Gaussian tail.

    python3 scripts/id_diagnostics.py
"""

import numpy as np

from betatw import tails
from betatw.ensembles import EnsembleSpec
from betatw.montecarlo import run_batch

BETAS = (0.5, 1.0, 2.0, 4.0, 10.0)


def main():
    xs = np.geomspace(10, 1e6, 9)
    print("x," + ",".join(f"beta={b:g}" for b in BETAS))
    for x in xs:
        row = [tails.id_gaussian_statistic(tails.asymptote_tail(b), x) for b in BETAS]
        print(f"{x:.4g}," + ",".join(f"{v:.4g}" for v in row))

    n = 50
    lam = run_batch(EnsembleSpec(beta=2.0, n_dim=n), 20_000, 3).samples
    # undo the edge scaling to get lambda_max / sqrt(N) on the [-2, 2] spectrum
    raw = (lam / n ** (1 / 6) + 2 * np.sqrt(n)) / np.sqrt(n)
    tail = tails.empirical_tail_function(raw, center=raw.mean())
    a, b, c = tails.concentration_params("GUE", n, slack=0.8)
    grid = np.linspace(0.2, 0.8, 13)
    verdict = tails.classify_id(tail, grid, 10.0, non_gaussian=True, bound=(a, b, c))
    print()
    print(f"GUE N={n}: {verdict.verdict.value}")


if __name__ == "__main__":
    main()
