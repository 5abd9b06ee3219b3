"""KS distance of scaled largest eigenvalues to the Tracy-Widom laws as N grows.

    python3 scripts/edge_universality.py --count 20000 --sizes 25 50 100 200
"""

import argparse

from betatw import painleve
from betatw.ensembles import EnsembleSpec
from betatw.montecarlo import batch_moments, ks_statistic, run_batch


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=20_000)
    ap.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100, 200])
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    sol = painleve.default_solution()
    print("beta,n_dim,ks,mean,var")
    for beta in painleve.BETAS:
        for n in args.sizes:
            batch = run_batch(EnsembleSpec(beta=beta, n_dim=n), args.count, args.seed)
            ks = ks_statistic(batch, lambda x: painleve.tw_cdf(beta, x, sol))
            m = batch_moments(batch)
            print(f"{beta},{n},{ks:.4f},{m['mean']:.4f},{m['var']:.4f}")


if __name__ == "__main__":
    main()
