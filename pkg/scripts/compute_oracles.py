"""Recompute the frozen expected values used in the test suite.

Everything here is evaluated with mpmath at 50 digits and does not import
blscaling, so the numbers are independent of the code they check.

    python scripts/compute_oracles.py
"""

import mpmath as mp

mp.mp.dps = 50
SQ3 = mp.sqrt(3)


def law(y, ln_re):
    return (ln_re / SQ3 + mp.mpf(5) / 2) * y ** (mp.mpf(3) / (2 * ln_re))


def geomspace(lo, hi, n):
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    return [lo * (hi / lo) ** (mp.mpf(i) / (n - 1)) for i in range(n)]


def ols(xs, ys):
    n = len(xs)
    xm = mp.fsum(xs) / n
    ym = mp.fsum(ys) / n
    sxx = mp.fsum((x - xm) ** 2 for x in xs)
    sxy = mp.fsum((x - xm) * (y - ym) for x, y in zip(xs, ys))
    b = sxy / sxx
    return b, ym - b * xm


def main():
    print("scaling law U+(100; ln Re 9.4)      =", mp.nstr(law(100, mp.mpf("9.4")), 17))
    print("scaling law U+(1; ln Re 9.4)        =", mp.nstr(law(1, mp.mpf("9.4")), 17))

    a = mp.mpf("0.15")
    psi = mp.log(2 * a * 10 / (SQ3 + 5 * a)) / a
    print("psi(U+=10, alpha=0.15)              =", mp.nstr(psi, 17))

    lam = mp.e ** mp.mpf("9.4") * mp.mpf("1.5e-5") / 20
    print("Lambda(ln Re 9.4, U 20, nu 1.5e-5)  =", mp.nstr(lam, 17))

    alpha = mp.mpf(3) / (2 * mp.mpf("9.4"))
    b_coef = law(1, mp.mpf("9.4")) * mp.mpf(300) ** (alpha - mp.mpf("0.226"))
    print("region-II prefactor B               =", mp.nstr(b_coef, 17))

    # psi collapse of a noiseless ln Re 9.4 profile on geomspace(30, 3000, 100)
    # evaluated with ln Re 9.9
    ys = geomspace(30, 3000, 100)
    us = [law(y, mp.mpf("9.4")) for y in ys]
    ap = mp.mpf(3) / (2 * mp.mpf("9.9"))
    d = [mp.log(2 * ap * u / (SQ3 + 5 * ap)) / ap - mp.log(y) for y, u in zip(ys, us)]
    print("collapse rms, ln Re +0.5            =", mp.nstr(mp.sqrt(mp.fsum(v * v for v in d) / len(d)), 17))

    # log-law fits of the scaling law on geomspace(1, 1e4, 200)
    ys = geomspace(1, 10_000, 200)
    for ln_re in ("10", "11.33", "12.5"):
        us = [law(y, mp.mpf(ln_re)) for y in ys]
        umax = max(us)
        delta = next(y for y, u in zip(ys, us) if u >= mp.mpf("0.95") * umax)
        for m1 in (50, 200):
            sel = [(mp.log(y), u) for y, u in zip(ys, us) if y >= m1 and y <= mp.mpf("0.15") * delta]
            b, c = ols([s[0] for s in sel], [s[1] for s in sel])
            print(f"log-law fit ln Re {ln_re:>5} M1={m1:<3}       kappa =", mp.nstr(1 / b, 17),
                  " B =", mp.nstr(c, 17), " n =", len(sel))

    kappa, bl = mp.mpf("0.38"), mp.mpf("4.1")
    u100 = mp.log(100) / kappa + bl
    print("log-law gamma at y+=100             =", mp.nstr(1 / (kappa * u100), 17))
    for y in (50, 500):
        u = mp.log(y) / kappa + bl
        print(f"log-law gamma at y+={y:<4}            =", mp.nstr(1 / (kappa * u), 17))


if __name__ == "__main__":
    main()
