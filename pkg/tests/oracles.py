"""Regeneration script for the frozen oracle constants used in the tests.

Run `python tests/oracles.py` to recompute the brute-force partial sums
(1e7 terms, fsum, smallest terms first, elementary integral tails for the
log-weighted series). Not imported by the test suite.
"""

import math

import numpy as np


def log_integral(k: int, s: float, lower: float) -> float:
    val = lower ** (1.0 - s) / (s - 1.0)
    for j in range(1, k + 1):
        val = (math.log(lower) ** j * lower ** (1.0 - s) + j * val) / (s - 1.0)
    return val


def main():
    M = 10**7
    m = np.arange(1, M + 1, dtype=np.float64)
    lm = np.log(m)
    w2 = np.exp(-2.0 * lm)
    re = math.fsum((w2 * np.cos(lm))[::-1])
    im = -math.fsum((w2 * np.sin(lm))[::-1])
    print(f"BRUTE_ZETA_2_1 = complex({re!r}, {im!r})")
    print(f"BRUTE_ZETA_2_1_TAIL = {1.0 / M!r}")
    d1 = -math.fsum((lm * w2)[::-1]) - log_integral(1, 2.0, float(M))
    d2 = math.fsum((lm * lm * w2)[::-1]) + log_integral(2, 2.0, float(M))
    print(f"BRUTE_ZETA_D1_2 = {d1!r}")
    print(f"BRUTE_ZETA_D2_2 = {d2!r}")


if __name__ == "__main__":
    main()
