"""High-precision reference values for the closed-form bounds.

Run with `python3 rate_oracle.py`; the printed numbers are frozen into
tests/bounds_test.cpp.
"""
from mpmath import mp, mpf, exp, binomial

mp.dps = 50


def eps_terms(n, k, p, phi, d):
    n, k, p, phi, d = map(mpf, (n, k, p, phi, d))
    s = 1 - 2 * p
    t1 = n * exp(-(s**2 * phi**4) / (512 * p * (1 - p) * d**3 + 11 * s * (1 - p) * d * phi**2))
    c = phi**2 / (16 * d)
    t2 = k * exp(-2 * s**2 / d * (c - (n - k)) ** 2)
    t3 = (n - k) * exp(-2 * s**2 / d * (c - (2 * k + d - n)) ** 2)
    return t1, t2, t3


def show(label, value):
    print(f"{label} = {mp.nstr(value, 20)}")


for args in [(100, 100, 0.1, 50, 99), (100, 90, 0.05, 300, 40), (22, 15, 0.2, 6, 8), (500, 400, 0.01, 2000, 100)]:
    t = eps_terms(*args)
    show(f"eps{args} terms", t)
    show(f"eps{args} total", sum(t))

show("chernoff m=n r=.5 n=100 t=10", exp(mpf(-2)))
show("stage2 n=10 q=.1", exp(-(1 - 2 * mpf("0.01")) * 5))
show("C(10,8)", binomial(10, 8))
