"""Arbitrary-precision reference values frozen into the C++ tests.

Run with: python3 -u tests/oracles/freeze_values.py
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 25


def marcum_q1(a, b):
    f = lambda t: t * mp.exp(-(t * t + a * a) / 2) * mp.besseli(0, a * t)
    return mp.quad(f, [b, b + 10, mp.inf])


def max_sir_nakagami(L, m):
    def F(x):
        if x == 0:
            return mp.mpf(1)
        q = m / (x * x + m)
        return (q**m * (1 + m * x * x / (x * x + m))) ** L
    return mp.quad(F, [0, 1, 10, mp.inf])


def max_signal_nakagami_quad(m, M):
    f = lambda x: 2 * mp.gammainc(m, 0, m * x, regularized=True) * m**m * x ** (m - 1) * mp.exp(-m * x) / mp.gamma(m) / mp.sqrt(x)
    return mp.quad(f, [0, 1, 10, mp.inf]) * mp.gamma(M + 0.5) / mp.gamma(M)


def max_signal_nakagami_closed(m, M):
    h = mp.hyp2f1(m - 0.5, 2 * m - 0.5, m + 0.5, -1)
    d = 2 * mp.gamma(m - 0.5) * mp.sqrt(m) / mp.gamma(m) * (1 - h * mp.gamma(2 * m - 0.5) / (mp.gamma(m) * mp.gamma(m + 0.5)))
    return d * mp.gamma(M + 0.5) / mp.gamma(M)


def max_sir_correlated(rho):
    s = mp.sqrt(1 - rho**2)
    f = lambda x: 1 / (1 + x**2) - x**2 * s / ((1 + x**2) * mp.sqrt(1 - rho**2 + 2 * (1 + rho**2) * x**2 + (1 - rho**2) * x**4))
    return mp.quad(f, [0, 1, 10, mp.inf])


def max_signal_correlated(rho, M):
    # double-precision Marcum Q from the noncentral chi-square tail (2 dof)
    from scipy.stats import ncx2
    from scipy.integrate import quad
    c = 2 / (1 - rho**2)
    q = lambda a, b: ncx2.sf(b * b, 2, a * a) if a > 0 else np.exp(-b * b / 2)
    f = lambda t: 4 * np.exp(-t * t) * (1 - q(rho * np.sqrt(c) * t, np.sqrt(c) * t))
    v = sum(quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=200)[0] for lo, hi in [(0, 0.5), (0.5, 2), (2, 8)])
    return v * float(mp.gamma(M + 0.5) / mp.gamma(M))


print("lgamma(10.5)        ", mp.nstr(mp.loggamma(10.5), 20))
print("lgamma(1e-3)        ", mp.nstr(mp.loggamma(mp.mpf('1e-3')), 20))
print("lgamma(1234.5)      ", mp.nstr(mp.loggamma(1234.5), 20))
print("lgamma(1e4)         ", mp.nstr(mp.loggamma(10000), 20))
print("gamma_ratio(64.5,64)", mp.nstr(mp.gamma(64.5) / mp.gamma(64), 20))
print("Q(3.5, 2.25)        ", mp.nstr(mp.gammainc(3.5, 2.25, regularized=True), 20))
print("Q(0.3, 4.0)         ", mp.nstr(mp.gammainc(0.3, 4, regularized=True), 20))
print("Q(50, 45)           ", mp.nstr(mp.gammainc(50, 45, regularized=True), 20))
for a, b in [(1, 2), (2, 1), (5, 5), (0.5, 2)]:
    print(f"marcum_q1({a},{b})    ", mp.nstr(marcum_q1(a, b), 20))
for m in [0.75, 1.5, 2, 3, 5]:
    print(f"2f1 max_signal_nakagami m={m}      ", mp.nstr(mp.hyp2f1(m - 0.5, 2 * m - 0.5, m + 0.5, -1), 20))
for L, m in [(1, 2), (2, 2), (3, 3), (2, 0.5), (4, 0.5), (1, 1)]:
    print(f"max_sir_nakagami L={L} m={m}      ", mp.nstr(max_sir_nakagami(L, m), 20))
for m in [1, 2, 3, 0.75]:
    print(f"max_signal_nakagami m={m} M=1 quad/closed", mp.nstr(max_signal_nakagami_quad(m, 1), 20), mp.nstr(max_signal_nakagami_closed(m, 1), 20))
for rho in [0, 0.3, 0.6, 0.9, 0.99, 0.999, 0.9999]:
    print(f"max_sir_correlated rho={rho}      ", mp.nstr(max_sir_correlated(rho), 20))
for rho in [0, 0.3, 0.6, 0.9, 0.99, 0.999, 0.9999]:
    print(f"max_signal_correlated rho={rho} M=1  ", mp.nstr(max_signal_correlated(rho, 1), 20))
