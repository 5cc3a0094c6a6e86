#!/usr/bin/env python3
"""Reference constants for the Rust test suite.

Computes high-precision values of zeta values, multiple zeta values,
multiple polylogarithms at 1/2, and gamma/digamma spot values with mpmath,
cross-checking each against an independent second route where one exists.
Output is meant to be frozen into the Rust tests; rerun only to regenerate.
"""

from mpmath import mp, mpf, zeta, log, pi, sqrt, gamma, digamma, nsum, inf, euler, polylog

mp.dps = 90
DIGITS = 70


def fmt(name, v):
    print(f"{name} = \"{mp.nstr(v, DIGITS)}\"")


def check(label, a, b, tol="1e-75"):
    d = abs(a - b)
    assert d < mpf(tol), f"{label}: mismatch {d}"
    print(f"# check ok: {label} (diff {mp.nstr(d, 3)})")


def mzv2(k1, k2):
    """zeta(k1, k2) = sum_{m>=1} m^-k1 * hurwitz_zeta(k2, m+1), inner variable larger."""
    return nsum(lambda m: zeta(k2, m + 1) / m ** k1, [1, inf])


def li_half(ks, n=600):
    """Multiple polylog Li_{k1,...,kr}(1/2), position 1 innermost, by direct DP."""
    r = len(ks)
    prev = [mpf(1)] * (n + 1)
    for j in range(1, r):
        cur = [mpf(0)] * (n + 1)
        s = mpf(0)
        for m in range(1, n + 1):
            s += prev[m - 1] / mpf(m) ** ks[j - 1]
            cur[m] = s
        prev = cur
    tot = mpf(0)
    for m in range(1, n + 1):
        tot += mpf(2) ** (-m) * prev[m - 1] / mpf(m) ** ks[r - 1]
    return tot


z2, z3, z4, z5, z6, z7, z8 = (zeta(k) for k in range(2, 9))
ln2 = log(2)

fmt("LN2", ln2)
fmt("SQRT_PI", sqrt(pi))
fmt("NEG_EULER", -euler)

fmt("GAMMA_QUARTER", gamma(mpf(1) / 4))
fmt("GAMMA_7_5", gamma(mpf(15) / 2))
check("digamma(1/4) closed form", digamma(mpf(1) / 4), -euler - 3 * ln2 - pi / 2)
fmt("DIGAMMA_QUARTER", digamma(mpf(1) / 4))
fmt("DIGAMMA_10_5", digamma(mpf(21) / 2))

for name, v in [("ZETA2", z2), ("ZETA3", z3), ("ZETA4", z4), ("ZETA5", z5),
                ("ZETA6", z6), ("ZETA7", z7), ("ZETA8", z8)]:
    fmt(name, v)

check("zeta(1,2) = zeta(3)", mzv2(1, 2), z3)
check("zeta(1,3) = zeta(4)/4", mzv2(1, 3), z4 / 4)
m22 = (z2 ** 2 - z4) / 2
check("zeta(2,2) stuffle", mzv2(2, 2), m22)
fmt("MZV_2_2", m22)
fmt("MZV_1_3", z4 / 4)
m23 = mzv2(2, 3)
m32 = mzv2(3, 2)
check("zeta(2,3)+zeta(3,2) = zeta(2)zeta(3)-zeta(5)", m23 + m32, z2 * z3 - z5)
fmt("MZV_2_3", m23)
fmt("MZV_3_2", m32)
fmt("ZSTAR_2_2", m22 + z4)
fmt("ZSTAR_3_2", m32 + z5)

li2h = polylog(2, mpf(1) / 2)
check("Li_2(1/2) closed form", li2h, z2 / 2 - ln2 ** 2 / 2)
check("Li_2(1/2) series", li_half([2]), li2h)
fmt("LI2_HALF", li2h)
li3h = polylog(3, mpf(1) / 2)
check("Li_3(1/2) closed form", li3h, 7 * z3 / 8 - z2 * ln2 / 2 + ln2 ** 3 / 6)
fmt("LI3_HALF", li3h)
li11 = li_half([1, 1])
check("Li_{1,1}(1/2) = ln^2(2)/2", li11, ln2 ** 2 / 2)
fmt("LI11_HALF", li11)
fmt("LI12_HALF", li_half([1, 2]))
fmt("LI21_HALF", li_half([2, 1]))
fmt("LI112_HALF", li_half([1, 1, 2]))
