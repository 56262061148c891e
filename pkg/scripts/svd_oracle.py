#!/usr/bin/env python3
"""High-precision singular values of the default reference matrix.

Recomputes, with mpmath at 60 significant digits, the extreme singular
values frozen into tests/test_linalg.py. Run offline; needs mpmath.

The printed spectrum also documents why the smallest singular value cannot
be matched by any double-precision factorization: sigma_min is ~4.6e-20
while the fp64 SVD noise floor is ~2e-16 * sigma_max.
"""

import mpmath as mp

N, M, T = 10, 21, 6


def main() -> int:
    mp.mp.dps = 60
    L = T * (M - 1)
    lam = 2 * mp.pi / T
    a = mp.matrix(M, 2 * N + 1)
    for i in range(M):
        t = mp.mpf(i) * lam / (M - 1)
        for j, ell in enumerate(range(-N, N + 1)):
            a[i, j] = mp.e ** (1j * ell * t) / mp.sqrt(L)
    sigma = mp.svd_c(a, compute_uv=False)
    values = sorted((mp.mpf(sigma[k]) for k in range(sigma.rows)), reverse=True)
    for k, s in enumerate(values):
        print(f"sigma[{k:2d}] = {mp.nstr(s, 20)}")
    print()
    print(f"ORACLE_SIGMA_MAX = {mp.nstr(values[0], 20)}")
    print(f"ORACLE_SIGMA_MIN = {mp.nstr(values[-1], 20)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
