#!/usr/bin/env python3
"""Generate candidate maximal-order bases for the data/algebras files.

The C++ loader re-verifies every file (closure, integrality, discriminant and
ramification), so this script only needs to produce good candidates. It starts
from Z_F<1,i,j,k> (or a given seed) and adjoins elements x/p while the result
stays an integral ring, until the discriminant matches the target.
"""
import argparse
import itertools
import sys
from fractions import Fraction as Fr


class Field:
    def __init__(self, d):
        self.d = d
        if d == 0:
            self.n, self.t, self.s = 1, 0, 0
        elif d % 4 == 1:
            self.n, self.t, self.s = 2, 1, (d - 1) // 4
        else:
            self.n, self.t, self.s = 2, 0, d
        self.disc = 1 if d == 0 else (d if d % 4 == 1 else 4 * d)

    def mul(self, x, y):
        a, b = x
        c, e = y
        return (a * c + b * e * self.s, a * e + b * c + b * e * self.t)

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def scale(self, x, q):
        return (x[0] * q, x[1] * q)

    def integral(self, x):
        return x[0].denominator == 1 and x[1].denominator == 1

    def trace(self, x):
        if self.n == 1:
            return x[0]
        return 2 * x[0] + self.t * x[1]


class Algebra:
    def __init__(self, F, a, b):
        self.F, self.a, self.b = F, a, b
        self.ab = F.mul(a, b)

    def mul(self, x, y):
        F, a, b, ab = self.F, self.a, self.b, self.ab
        m = F.mul
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        r0 = F.add(F.add(m(x0, y0), m(a, m(x1, y1))), F.add(m(b, m(x2, y2)), F.neg(m(ab, m(x3, y3)))))
        r1 = F.add(F.add(m(x0, y1), m(x1, y0)), F.add(F.neg(m(b, m(x2, y3))), m(b, m(x3, y2))))
        r2 = F.add(F.add(m(x0, y2), m(x2, y0)), F.add(m(a, m(x1, y3)), F.neg(m(a, m(x3, y1)))))
        r3 = F.add(F.add(m(x0, y3), m(x3, y0)), F.add(m(x1, y2), F.neg(m(x2, y1))))
        return (r0, r1, r2, r3)

    def conj(self, x):
        F = self.F
        return (x[0], F.neg(x[1]), F.neg(x[2]), F.neg(x[3]))

    def trd(self, x):
        return self.F.scale(x[0], 2)

    def nrd(self, x):
        return self.mul(x, self.conj(x))[0]

    def to_vec(self, x):
        return [c for comp in x for c in comp[: self.F.n]]

    def from_vec(self, v):
        n = self.F.n
        comps = []
        for k in range(4):
            c = v[k * n:(k + 1) * n]
            comps.append((c[0], c[1] if n == 2 else Fr(0)))
        return tuple(comps)


def hnf(rows, ncols):
    """Row HNF of a list of rational vectors; returns a basis of the Z-span."""
    den = 1
    for r in rows:
        for c in r:
            den = den * c.denominator // gcd(den, c.denominator)
    mat = [[int(c * den) for c in r] for r in rows]
    basis = []
    for col in reversed(range(ncols)):
        piv = [r for r in mat if r[col] != 0]
        rest = [r for r in mat if r[col] == 0]
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            new = [p]
            for r in piv[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if r[col] != 0:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            piv = new
        if piv:
            p = piv[0]
            if p[col] < 0:
                p = [-x for x in p]
            basis.append(p)
        mat = rest
    # reduce entries at later pivot columns so the form is canonical
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            c = next(k for k in reversed(range(ncols)) if basis[j][k] != 0)
            q = basis[i][c] // basis[j][c]
            basis[i] = [x - q * y for x, y in zip(basis[i], basis[j])]
    return [[Fr(x, den) for x in r] for r in basis]


def gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def det(m):
    m = [row[:] for row in m]
    n = len(m)
    d = Fr(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fr(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return d


class Order:
    def __init__(self, A, vecs):
        self.A = A
        self.basis = hnf(vecs, 4 * A.F.n)

    def elements(self):
        return [self.A.from_vec(v) for v in self.basis]

    def disc(self):
        A, F = self.A, self.A.F
        els = self.elements()
        g = [[Fr(F.trace(A.trd(A.mul(x, A.conj(y))))) for y in els] for x in els]
        return abs(det(g))

    def integral(self):
        A, F = self.A, self.A.F
        for x in self.elements():
            if not (F.integral(A.trd(x)) and F.integral(A.nrd(x))):
                return False
        return True


def ring_closure(A, vecs, limit=20):
    cur = hnf(vecs, 4 * A.F.n)
    for _ in range(limit):
        els = [A.from_vec(v) for v in cur]
        prods = [A.to_vec(A.mul(x, y)) for x in els for y in els]
        nxt = hnf(cur + prods, 4 * A.F.n)
        if nxt == cur:
            return cur
        cur = nxt
        o = Order(A, cur)
        if not o.integral():
            return None
    return None


def maximalize(A, target, seed):
    order = Order(A, seed)
    n = A.F.n
    while order.disc() != target:
        d = order.disc()
        if d < target:
            sys.exit("overshot target discriminant")
        grew = False
        for p in (2, 3, 5, 7, 11, 13, 17):
            if d % (p * p) != 0:
                continue
            for coeffs in itertools.product(range(p), repeat=4 * n):
                if not any(coeffs):
                    continue
                v = [sum(Fr(c) * b[k] for c, b in zip(coeffs, order.basis)) / p for k in range(4 * n)]
                y = A.from_vec(v)
                if not (A.F.integral(A.trd(y)) and A.F.integral(A.nrd(y))):
                    continue
                closed = ring_closure(A, order.basis + [v])
                if closed is None:
                    continue
                order = Order(A, closed)
                grew = True
                break
            if grew:
                break
        if not grew:
            sys.exit("could not enlarge order")
    return order


def fmt(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=0)
    ap.add_argument("--a", type=int, nargs="+", required=True)
    ap.add_argument("--b", type=int, nargs="+", required=True)
    ap.add_argument("--ramified", type=int, default=1, help="norm of the finite discriminant")
    args = ap.parse_args()
    F = Field(args.d)
    a = tuple(Fr(x) for x in (args.a + [0])[:2])
    b = tuple(Fr(x) for x in (args.b + [0])[:2])
    A = Algebra(F, a, b)
    one, zero = (Fr(1), Fr(0)), (Fr(0), Fr(0))
    w = (Fr(0), Fr(1))
    units = [(one, zero, zero, zero), (zero, one, zero, zero), (zero, zero, one, zero), (zero, zero, zero, one)]
    seed = []
    for u in units:
        seed.append(A.to_vec(u))
        if F.n == 2:
            seed.append(A.to_vec(tuple(F.mul(w, c) for c in u)))
    target = Fr(F.disc ** 4 * args.ramified ** 2)
    order = maximalize(A, target, seed)
    print("a =", " ".join(fmt(x) for x in a[: F.n]))
    print("b =", " ".join(fmt(x) for x in b[: F.n]))
    print("basis")
    for v in order.basis:
        print(" ".join(fmt(x) for x in v))


if __name__ == "__main__":
    main()
