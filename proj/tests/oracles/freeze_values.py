"""Extended-precision oracles for the frozen expected values in the unit tests.

Run: python3 tests/oracles/freeze_values.py
"""
import mpmath as mp

mp.mp.dps = 40

# cutoff kappa: lambda0=1, size=5, delta=1e-2, n=1e8
d = mp.mpf('1e-2')
kappa = min(mp.mpf(1) / mp.sqrt(5) / mp.sqrt(d**2 * abs(mp.log(d))), mp.sqrt(mp.mpf('1e8')))
print('kappa(1,5,1e-2,1e8)   =', mp.nstr(kappa, 25))

# threshold tau: mu0=1, size=3, n=1e4
n = mp.mpf('1e4')
print('tau(1,3,1e4)          =', mp.nstr(mp.sqrt(3) * mp.sqrt(mp.log(n) / n), 25))

# max level: delta=1e-3, n=1e8, nu=2, d=2
print('L delta-term          =', mp.nstr((mp.mpf('1e-3')**2) ** (-mp.mpf(1) / 5), 25))
print('L n-term              =', mp.nstr(mp.mpf('1e8') ** (mp.mpf(1) / 6), 25))

# associated Legendre P_5^3(0.3), Condon-Shortley phase, via Rodrigues
x = mp.mpf('0.3')
from math import comb
def rodrigues(l, m, x):
    # exact coefficients of (u^2-1)^l, differentiated l+m times
    coeffs = {2 * j: comb(l, j) * (-1)**(l - j) for j in range(l + 1)}
    for _ in range(l + m):
        coeffs = {p - 1: c * p for p, c in coeffs.items() if p > 0}
    deriv = sum(mp.mpf(c) * x**p for p, c in coeffs.items())
    return (-1)**m * (1 - x**2)**(mp.mpf(m) / 2) * deriv / (2**l * mp.factorial(l))
print('P_5^3(0.3)            =', mp.nstr(rodrigues(5, 3, x), 25))
print('P_4^-2(-0.7)          =', mp.nstr((-1)**2 * mp.factorial(2) / mp.factorial(6) * rodrigues(4, 2, mp.mpf('-0.7')), 25))

# Sobolev norm, power-law signal exponent 5 on k in -1000..1000, s=4, level 1+|k|
acc = mp.mpf(1)
for k in range(1, 1001):
    acc += 2 * mp.mpf(k + 1)**8 * mp.mpf(k)**(-10)
print('sobolev(powerlaw5,s=4)=', mp.nstr(mp.sqrt(acc), 25))

# Gaussian bump C exp(-4|w-w1|^2), C=1/0.7854; coefficients in L2(mu) (probability) normalization
C = 1 / mp.mpf('0.7854')
f0 = lambda u: C * mp.exp(-8 * (1 - u))
print('surface integral      =', mp.nstr(C * mp.pi / 4 * (1 - mp.exp(-16)), 25))
print('L2(mu) norm           =', mp.nstr(mp.sqrt(C**2 * (1 - mp.exp(-32)) / 32), 25))
print('L2(surface) norm      =', mp.nstr(mp.sqrt(C**2 * mp.pi / 8 * (1 - mp.exp(-32))), 25))
for l in range(0, 8):
    c = mp.sqrt(2 * l + 1) / 2 * mp.quad(lambda u: f0(u) * mp.legendre(l, u), [-1, 0, 1])
    print(f'zonal c_{l}               =', mp.nstr(c, 25))
