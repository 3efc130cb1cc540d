#!/usr/bin/env python3
"""Generate classical modular polynomial files from q-expansions of j.

Usage: gen_modpoly.py N > phiN.txt

The roots of Phi_N(X, j(tau)) are j(N tau) and j((tau+k)/N), k = 0..N-1.
Power sums of these roots are computed as Laurent series in q, rewritten
as polynomials in j, and turned into elementary symmetric functions with
Newton's identities.
"""
import sys
from fractions import Fraction


def j_series(prec):
    # j = E4^3 / Delta, returned as coefficients of q^-1 .. q^(prec-2)
    def sigma3(n):
        return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)

    e4 = [1] + [240 * sigma3(n) for n in range(1, prec)]
    e4cube = mul(mul(e4, e4, prec), e4, prec)
    # Delta / q = prod (1 - q^n)^24
    eta = [1] + [0] * (prec - 1)
    for n in range(1, prec):
        for _ in range(24):
            for k in range(prec - 1, n - 1, -1):
                eta[k] -= eta[k - n]
    inv = [0] * prec
    inv[0] = 1
    for k in range(1, prec):
        inv[k] = -sum(eta[i] * inv[k - i] for i in range(1, k + 1))
    return mul(e4cube, inv, prec)


def mul(a, b, prec):
    out = [0] * prec
    for i, x in enumerate(a[:prec]):
        if x == 0:
            continue
        for k, y in enumerate(b[: prec - i]):
            out[i + k] += x * y
    return out


class Laurent:
    """Series sum c[i] q^(i+val), truncated at q^(val+len(c))."""

    def __init__(self, val, c):
        self.val, self.c = val, c

    def __mul__(self, o):
        prec = min(len(self.c), len(o.c))
        return Laurent(self.val + o.val, mul(self.c, o.c, prec))


def main():
    n = int(sys.argv[1])
    deg = n + 1
    top = n * deg  # largest pole order needed
    prec = top + 8
    jc = j_series(prec + 2)
    j = Laurent(-1, jc[:prec])
    jpow = [Laurent(0, [1] + [0] * (prec - 1))]
    for _ in range(top):
        jpow.append(jpow[-1] * j)

    # j(q^N) as a Laurent series in q
    jn_c = [0] * (prec * n)
    for i, x in enumerate(jc[: prec]):
        if i * n < len(jn_c):
            jn_c[i * n] = x
    jn = Laurent(-n, jn_c[:prec])

    power_sums = []  # each a dict: power of j -> integer coefficient
    jn_pow = Laurent(0, [1] + [0] * (prec - 1))
    jt_pow = Laurent(0, [1] + [0] * (prec * n - 1))
    jt = Laurent(-1, jc[: prec * n])
    for m in range(1, deg + 1):
        jn_pow = jn_pow * jn
        jt_pow = Laurent(jt_pow.val, jt_pow.c) * jt
        # sum over k of j((tau+k)/N)^m = N * sum_{N | e} [t^e] j(t)^m q^(e/N)
        series = {}
        for i, x in enumerate(jn_pow.c):
            series[i + jn_pow.val] = series.get(i + jn_pow.val, 0) + x
        for i, x in enumerate(jt_pow.c):
            e = i + jt_pow.val
            if e % n == 0:
                series[e // n] = series.get(e // n, 0) + n * x
        # rewrite as polynomial in j
        poly = {}
        for k in range(n * m, -1, -1):
            c = series.get(-k, 0)
            if c == 0:
                continue
            poly[k] = c
            jp = jpow[k]
            for i, x in enumerate(jp.c):
                e = i + jp.val
                series[e] = series.get(e, 0) - c * x
        for e in range(1, 4):
            assert series.get(e, 0) == 0, (m, e)
        power_sums.append(poly)

    # Newton: m e_m = sum_{i=1}^m (-1)^(i-1) e_{m-i} p_i
    elem = [{0: Fraction(1)}]
    for m in range(1, deg + 1):
        acc = {}
        for i in range(1, m + 1):
            sign = 1 if i % 2 == 1 else -1
            for a, x in elem[m - i].items():
                for b, y in power_sums[i - 1].items():
                    acc[a + b] = acc.get(a + b, 0) + sign * x * y
        elem.append({k: v / m for k, v in acc.items() if v != 0})

    # Phi(X, Y) = sum_m (-1)^m e_m(Y) X^(deg - m)
    coeffs = {}
    for m in range(deg + 1):
        for b, v in elem[m].items():
            assert v.denominator == 1
            c = (-1) ** m * v.numerator
            if c:
                coeffs[(deg - m, b)] = c
    for (i, k), c in coeffs.items():
        assert coeffs.get((k, i)) == c, "not symmetric"

    print(f"# classical modular polynomial Phi_{n}(X, Y)")
    print("# line format: i j c  (i >= j), meaning c*(X^i Y^j + X^j Y^i), or c*X^i Y^i when i = j")
    print(f"level {n}")
    for (i, k) in sorted(coeffs, reverse=True):
        if i >= k:
            print(i, k, coeffs[(i, k)])


if __name__ == "__main__":
    main()
