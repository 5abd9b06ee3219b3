"""Tail fits of F2 on sliding windows, against the leading-order laws.

The fitted exponents drift toward 3/2 and 3 only slowly, because the true
tails carry algebraic prefactors (x^-3/2 on the right, x^-1/8 on the left)
that a pure exp(-k x^c) fit absorbs into c and k.

    python3 scripts/tail_fits.py
"""

import math

import numpy as np

from betatw import painleve
from betatw.montecarlo import fit_tail_log

WINDOWS = [(2.0, 4.0), (3.0, 5.0), (4.0, 7.0), (5.0, 8.0)]


def main():
    sol = painleve.default_solution()
    print("side,window,exponent,coefficient,target_exponent,target_coefficient")
    for lo, hi in WINDOWS:
        xs = np.linspace(lo, hi, 31)
        right = fit_tail_log(xs, [math.log(painleve.tw_sf(2, x, sol)) for x in xs])
        print(f"right,[{lo:g};{hi:g}],{right.exponent:.4f},{right.coefficient:.4f},1.5,{4 / 3:.4f}")
        if hi <= -sol.s_min:
            left = fit_tail_log(xs, [math.log(painleve.tw_cdf(2, -x, sol)) for x in xs])
            print(f"left,[{lo:g};{hi:g}],{left.exponent:.4f},{left.coefficient:.4f},3,{1 / 12:.4f}")

    print()
    print("x,left_share_of_two_sided")
    for x in (3.0, 4.0, 5.0, 6.0, 6.35, 7.0, 8.0):
        left, right = -(x**3) / 12, -(4 / 3) * x**1.5
        print(f"{x:g},{1 / (1 + math.exp(right - left)):.6g}")


if __name__ == "__main__":
    main()
