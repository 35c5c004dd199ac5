"""Reference values frozen into the C++ tests.

Computed with numpy/mpmath independently of the library: direct Gauss-Hermite
quadrature in Python, symbolic differentiation with sympy, and closed forms.
Run: python3 compute_oracles.py
"""
import mpmath as mp
import numpy as np
import sympy as sp
from numpy.polynomial.hermite import hermgauss
from math import factorial
from scipy.optimize import minimize

mp.mp.dps = 30


def toeplitz_entry(g, j, k, alpha=1.0, order=160):
    # (alpha/pi) int g e_k conj(e_j) e^{-alpha|z|^2}
    x, w = hermgauss(order)
    x = x / np.sqrt(alpha)
    X, Y = np.meshgrid(x, x, indexing="ij")
    W = np.outer(w, w) / np.pi
    Z = X + 1j * Y
    ek = np.sqrt(alpha**k / factorial(k)) * Z**k
    ej = np.sqrt(alpha**j / factorial(j)) * Z**j
    return np.sum(W * g(Z) * ek * np.conj(ej))


def two_point(g, z, w, alpha=1.0, order=160):
    # <g k_z, k_w> = int g(u) k_z(u) conj(k_w(u)) dlambda(u)
    x, wt = hermgauss(order)
    c = (z + w) / 2
    X, Y = np.meshgrid(x / np.sqrt(alpha), x / np.sqrt(alpha), indexing="ij")
    U = c + X + 1j * Y
    W = np.outer(wt, wt) / np.pi * np.exp(alpha * (np.abs(X + 1j * Y) ** 2 - np.abs(U) ** 2))
    kz = np.exp(alpha * U * np.conj(z) - alpha * abs(z) ** 2 / 2)
    kw = np.exp(alpha * U * np.conj(w) - alpha * abs(w) ** 2 / 2)
    return np.sum(W * g(U) * kz * np.conj(kw))


def main():
    print("exp(-1/2)                 ", mp.e ** mp.mpf(-0.5))
    print("-2/pi                     ", -2 / mp.pi)
    print("exp(pi^2/2)               ", mp.e ** (mp.pi**2 / 2))
    print("sqrt(4 pi)                ", mp.sqrt(4 * mp.pi))
    print("sqrt(pi)                  ", mp.sqrt(mp.pi))

    lam = (0.5, 0.25)
    pw = lambda Z: np.exp(2j * np.pi * (Z.real * lam[0] + Z.imag * lam[1]))
    for j, k in [(0, 0), (1, 0), (0, 1), (2, 1), (3, 3), (5, 2)]:
        v = toeplitz_entry(pw, j, k)
        print(f"T_b(0.5,0.25)[{j},{k}]      {v.real:.17g} {v.imag:.17g}")

    mg = lambda Z: np.exp(-0.5 * np.abs(Z) ** 2) * np.exp(2j * np.pi * (Z.real * 0.3 - Z.imag * 0.2))
    for j, k in [(0, 0), (2, 0), (1, 3)]:
        v = toeplitz_entry(mg, j, k)
        print(f"T_mg[{j},{k}]               {v.real:.17g} {v.imag:.17g}")
    for z, w in [(0.3 + 0.1j, -0.4 + 0.7j), (1.0 - 0.5j, 0.2 + 0.2j)]:
        v = two_point(mg, z, w)
        print(f"gtilde_mg({z},{w})  {v.real:.17g} {v.imag:.17g}")
    rp = lambda Z: np.abs(Z) ** 4 * np.exp(-np.abs(Z) ** 2)
    v = two_point(rp, 0.5 + 0.5j, -0.25 + 1j)
    print(f"gtilde_radial2(0.5+0.5i,-0.25+1i)  {v.real:.17g} {v.imag:.17g}")

    # main bound of b_(1,0): H_{1/2} b = e^{-pi^2/2} b, |J^{a,b}| = e^{-pi^2/2}(2pi)^a 0^b
    s = sum((2 * mp.pi) ** a * (1 if b == 0 else 0) for a in range(4) for b in range(4 - a))
    print("main_bound(b_(1,0))       ", mp.e ** (-mp.pi**2 / 2) * s)

    # sup of jets of e^{-|z|^2}, alpha=1: H_{1/2} g = (2/3) e^{-2|z|^2/3}
    x, y = sp.symbols("x y", real=True)
    h = sp.Rational(2, 3) * sp.exp(-sp.Rational(2, 3) * (x**2 + y**2))
    grid = np.linspace(-4, 4, 801)
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    total = 0.0
    for a in range(4):
        for b in range(4 - a):
            expr = sp.diff(h, x, a, y, b)
            d = sp.lambdify((x, y), expr, "numpy")
            vals = np.abs(d(X, Y) + 0 * X)
            i, j = np.unravel_index(np.argmax(vals), vals.shape)
            res = minimize(lambda p: -abs(d(p[0], p[1])), [X[i, j], Y[i, j]], method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000})
            total += -res.fun
    print("sum sup|J^{a,b} gauss|    ", float(total))
    # ||k_z||^2 lost to truncation at |z|^2 = N/(2 alpha): a Poisson(N/2) tail
    for n in (40, 60, 200):
        lam = mp.mpf(n) / 2
        print(f"kernel tail N={n}          ", mp.nsum(lambda k: mp.e**-lam * lam**k / mp.factorial(k), [n, mp.inf]))
    # chain ratio sup|J g| / sup|H_t g| for b_lambda, t = 0.25, alpha = 1
    for l1 in (0.5, 1.0):
        s2 = sum((2 * mp.pi * l1) ** a for a in range(4))
        print(f"chain second/third b_({l1},0)", mp.e ** (-mp.pi**2 * l1**2 * (mp.mpf(1) / 2 - mp.mpf(1) / 4)) * s2)
    print("1 - 2^-40                 ", 1 - mp.mpf(2) ** -40)


if __name__ == "__main__":
    main()
