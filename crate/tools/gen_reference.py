#!/usr/bin/env python3
"""Generate high-precision reference values for the test suite.

All Mittag-Leffler values come from a plain partial-sum oracle:
    E_{a,b}(z) = sum_{k=0}^{N} z^k / Gamma(a*k + b)
evaluated with mpmath at 50+ significant digits and N >= 200 terms,
independent of any library ML implementation.

Run:  python3 tools/gen_reference.py
"""

import mpmath as mp

mp.mp.dps = 80


def ml_series(a, b, z, terms=400):
    s = mp.mpf(0) if mp.im(z) == 0 else mp.mpc(0)
    zp = mp.mpf(1) if mp.im(z) == 0 else mp.mpc(1)
    for k in range(terms):
        s += zp / mp.gamma(a * k + b)
        zp *= z
    return s


def show(label, value, digits=20):
    print(f"{label:48s} {mp.nstr(value, digits)}")


print("# scalar Mittag-Leffler oracle values (>=400 terms, 80 dps)")
show("E_{1.5,0.5}(-1)", ml_series(1.5, 0.5, mp.mpf(-1)))
show("E_{1.5,2}(-1)", ml_series(1.5, 2.0, mp.mpf(-1)))
show("E_{1.5,1}(-1)", ml_series(1.5, 1.0, mp.mpf(-1)))
for t in ("0.5", "1.0", "2.0"):
    tt = mp.mpf(t)
    z = -(tt ** mp.mpf("1.5"))
    show(f"E_{{1.5,0.5}}(-{t}^1.5)", ml_series(1.5, 0.5, z))

print()
print("# large-argument values for the asymptotic branch (series at 80 dps)")
show("E_{1.5,0.5}(-30)", ml_series(1.5, 0.5, mp.mpf(-30), 600))
show("E_{1.5,0.5}(-100)", ml_series(1.5, 0.5, mp.mpf(-100), 900))
show("E_{1.5,2}(-100)", ml_series(1.5, 2.0, mp.mpf(-100), 900))
show("E_{1.25,1}(-50)", ml_series(1.25, 1.0, mp.mpf(-50), 900))
show("E_{1.75,1.5}(-200)", ml_series(1.75, 1.5, mp.mpf(-200), 900))
v = ml_series(1.5, 0.5, mp.mpc(0, 30), 600)
show("Re E_{1.5,0.5}(30i)", mp.re(v))
show("Im E_{1.5,0.5}(30i)", mp.im(v))

print()
print("# 2x2 rotation generator M = [[0,1],[-1,0]], E_{1.5,0.5}(M)")
# M^2 = -I so E(M) = aI + bM with a, b the even/odd partial sums.
a_sum = mp.mpf(0)
b_sum = mp.mpf(0)
sign = mp.mpf(1)
for j in range(200):
    a_sum += sign / mp.gamma(3 * j + mp.mpf("0.5"))
    b_sum += sign / mp.gamma(3 * j + 2)
    sign = -sign
show("diagonal entry a", a_sum)
show("off-diagonal entry b", b_sum)

print()
print("# Caputo alpha=1.99 vs cos(t): sup |E_{1.99,1}(-t^1.99) - cos t| on [0,3]")
worst = mp.mpf(0)
for i in range(0, 301):
    t = mp.mpf(i) / 100
    z = -(t ** mp.mpf("1.99")) if t > 0 else mp.mpf(0)
    d = abs(ml_series(1.99, 1.0, z, 400) - mp.cos(t))
    worst = max(worst, d)
show("sup deviation", worst)

print()
print("# Gauss-Jacobi weight moments  mu_0 = 2^(a+b+1) B(a+1,b+1)")
show("a=0,     b=0", mp.mpf(2))
show("a=-0.5,  b=-0.5", mp.pi)
a, b = mp.mpf("-0.5"), mp.mpf("-0.5")
show("check", 2 ** (a + b + 1) * mp.beta(a + 1, b + 1))
a, b = mp.mpf("1.0") - mp.mpf("1.5"), mp.mpf("1.5") - 2  # 1-alpha, alpha-2
show("a=1-1.5, b=1.5-2", 2 ** (a + b + 1) * mp.beta(a + 1, b + 1))

print()
print("# reciprocal gamma spot values")
for x in ("0.5", "-2.5", "30.25", "-0.99", "5"):
    show(f"1/Gamma({x})", 1 / mp.gamma(mp.mpf(x)))

print()
print("# Laplace transform sanity: a=-1, alpha=1.5")
lam = mp.mpf(2)
closed = lam / (lam ** mp.mpf("1.5") + 1)
show("closed form lam*(lam^a - a)^-1 at lam=2", closed)
f = lambda t: mp.e ** (-lam * t) * t ** mp.mpf("-0.5") * ml_series(
    1.5, 0.5, -(t ** mp.mpf("1.5")), 700
)
num = mp.quad(f, [0, 1, 5, 20, 60])
show("numerical transform", num)

print()
print("# fractional-integral trivial values")
show("J^1.5 1 at t=1: 1/Gamma(2.5)", 1 / mp.gamma(mp.mpf("2.5")))
show("D^1.5 t^2 coeff: Gamma(3)/Gamma(1.5)", mp.gamma(3) / mp.gamma(mp.mpf("1.5")))

print()
print("# corrupted-family resolvent residual floor (eps=1e-2, a=-1, alpha=1.5)")
# T_eps(t) = T(t) + eps*t ; J^a T_eps = J^a T + eps*t^(a+1)/Gamma(a+2) with a=alpha
alpha = mp.mpf("1.5")
eps = mp.mpf("0.01")
aa = mp.mpf(-1)


def fam(t):
    return t ** (alpha - 2) * ml_series(1.5, 0.5, aa * t ** alpha, 500)


def jfam(t):
    return t ** (2 * alpha - 2) * ml_series(1.5, 3.0, aa * t ** alpha, 500)


def fam_c(t):
    return fam(t) + eps * t


def jfam_c(t):
    return jfam(t) + eps * t ** (alpha + 1) / mp.gamma(alpha + 2)


grid = [mp.mpf("0.25"), mp.mpf("0.5"), mp.mpf(1), mp.mpf(2)]
worst = mp.mpf(0)
for t in grid:
    for s in grid:
        L = fam_c(s) * jfam_c(t) - jfam_c(s) * fam_c(t)
        R = s ** (alpha - 2) / mp.gamma(alpha - 1) * jfam_c(t) - t ** (
            alpha - 2
        ) / mp.gamma(alpha - 1) * jfam_c(s)
        rel = abs(L - R) / (1 + max(abs(L), abs(R)))
        worst = max(worst, rel)
show("max relative residual over default grid", worst)
