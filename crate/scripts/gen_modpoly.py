#!/usr/bin/env python3
"""Generate classical modular polynomial tables Phi_l(X, Y).

Solves for the coefficients of Phi_l by requiring Phi_l(j(q), j(q^l)) = 0 as a
q-series, using exact rational linear algebra. Output format is one line per
monomial "i j coefficient" with i >= j.
"""
import sys
from fractions import Fraction


def sigma3(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(n - i):
            out[i + j] += x * b[j]
    return out


def j_coeffs(n):
    # j(q) = q^-1 * E4^3 / prod (1-q^k)^24 ; returns c with j = sum c[k] q^(k-1)
    e4 = [1] + [240 * sigma3(k) for k in range(1, n)]
    e4c = mul(mul(e4, e4, n), e4, n)
    eta = [1] + [0] * (n - 1)
    for k in range(1, n):
        f = [0] * n
        f[0] = 1
        f[k] = -1
        for _ in range(24):
            eta = mul(eta, f, n)
    inv = [0] * n
    inv[0] = 1
    for k in range(1, n):
        inv[k] = -sum(eta[i] * inv[k - i] for i in range(1, k + 1))
    return mul(e4c, inv, n)


def laurent_pow(series, val, k, n):
    # series given as (coeffs, valuation), raise to k-th power truncated to n terms
    out = [1] + [0] * (n - 1)
    for _ in range(k):
        out = mul(out, series, n)
    return out, val * k


def solve(ell):
    top = ell * (ell + 1)
    n = top + 2 * ell + 30
    jc = j_coeffs(n)
    # j(q^ell): coefficients on the q-grid, valuation -ell
    jl = [0] * n
    for k in range(n):
        if k * ell < n:
            jl[k * ell] = jc[k]
    xs = [laurent_pow(jc, -1, i, n) for i in range(ell + 2)]
    ys = [laurent_pow(jl, -ell, i, n) for i in range(ell + 2)]
    lo = -top
    hi = 5
    unknowns = [(i, j) for i in range(ell + 1) for j in range(i + 1) if (i, j) != (ell, ell)]

    def coeff(i, j, m):
        # coefficient of q^m in X^i Y^j
        a, va = xs[i]
        b, vb = ys[j]
        total = 0
        for s in range(m - va - vb + 1):
            t = m - va - vb - s
            if s < n and t < n and t >= 0:
                total += a[s] * b[t]
        return total

    rows = []
    for m in range(lo, hi + 1):
        row = []
        for (i, j) in unknowns:
            v = coeff(i, j, m)
            if i != j:
                v += coeff(j, i, m)
            row.append(Fraction(v))
        rhs = -(coeff(ell + 1, 0, m) + coeff(0, ell + 1, m) - coeff(ell, ell, m))
        rows.append(row + [Fraction(rhs)])
    ncol = len(unknowns)
    r = 0
    piv = []
    for c in range(ncol):
        p = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if p is None:
            raise SystemExit(f"singular at column {c}")
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        piv.append(c)
        r += 1
    for k in range(r, len(rows)):
        assert rows[k][-1] == 0, "inconsistent system"
    sol = {}
    for k, c in enumerate(piv):
        v = rows[k][-1]
        assert v.denominator == 1
        sol[unknowns[c]] = v.numerator
    sol[(ell + 1, 0)] = 1
    sol[(ell, ell)] = -1
    return sol


def main():
    for ell in map(int, sys.argv[1:]):
        sol = solve(ell)
        with open(f"phi{ell}.txt", "w") as fh:
            fh.write(f"# classical modular polynomial Phi_{ell}(X, Y)\n")
            fh.write("# i j coefficient   (monomial X^i Y^j, i >= j; symmetric)\n")
            for (i, j) in sorted(sol, reverse=True):
                if sol[(i, j)] != 0:
                    fh.write(f"{i} {j} {sol[(i, j)]}\n")


if __name__ == "__main__":
    main()
