"""Search F_131 for a split genus-2 curve suitable as the test toy instance.

Wanted: J(F_q)[3] = (Z/3)^2 and J(F_q^2)[3] = (Z/3)^4, so that a maximal
isotropic V can mix a rational point with points defined over F_q^2.  Group
orders come from point counts through the L-polynomial; the 3-torsion ranks
are then confirmed with random points.  Prints the first hit as Python data.

    python3 scripts/find_toy_curve.py [--p 131] [--seed 0]
"""

import argparse
import random

import numpy as np

from isojac.algebra.poly import poly_mul
from isojac.algebra.rings import PrimeField, extension_field
from isojac.curve import Genus2Curve


def counts(p, roots):
    """(#C(F_p), #C(F_p^2)) for v^2 = prod (u - r), p = 3 mod 4 (F_p^2 = F_p[i])."""
    a, b = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    a, b = a.ravel(), b.ravel()
    ha, hb = np.ones_like(a), np.zeros_like(a)
    for r in roots:
        xa = (a - r) % p
        ha, hb = (ha * xa - hb * b) % p, (ha * b + hb * xa) % p
    norm = (ha * ha + hb * hb) % p
    chi = np.array([pow(int(n), (p - 1) // 2, p) if n else 0 for n in range(p)])
    chi = np.where(chi == p - 1, -1, chi)
    n2 = int(np.sum(1 + chi[norm])) + 1
    base = b == 0
    leg = chi[ha[base]]
    n1 = int(np.sum(1 + leg)) + 1
    return n1, n2


def orders(p, n1, n2):
    c1 = n1 - p - 1
    c2 = (c1 * c1 - (p * p + 1 - n2)) // 2
    L1 = 1 + c1 + c2 + p * c1 + p * p
    Lm1 = 1 - c1 + c2 - p * c1 + p * p
    return L1, L1 * Lm1


def three_torsion(C, R, order, rng, samples=16):
    """A basis of the 3-torsion found from random points, as a list."""
    m = order
    while m % 3 == 0:
        m //= 3
    basis, span = [], {C.zero(R).key()}
    for _ in range(samples):
        x = C.random_jacobian_point(rng, R) * m
        while not (x * 3).is_zero():
            x = x * 3
        if x.key() in span:
            continue
        basis.append(x)
        pts = [C.zero(R)]
        for g in basis:
            pts = [q + g * k for q in pts for k in range(3)]
        span = {q.key() for q in pts}
    return basis


def toy_kernel(C, L, o1, o2, rng):
    """t1 rational, t2 with Frobenius(t2) = -t2, and e_3(t1, t2) = 1."""
    from isojac.theta import pairing
    t1 = three_torsion(C, C.field, o1, rng)[0].change_ring(L)
    minus = []
    for x in three_torsion(C, L, o2, rng):
        y = x - x.frobenius()
        if not y.is_zero() and all(y != m and y != -m for m in minus):
            minus.append(y)
    for a in range(3):
        for b in range(3):
            t2 = minus[0] * a + minus[1] * b
            if t2.is_zero():
                continue
            if pairing(t1.change_ring(L), t2, 3) == L.one:
                return t1, t2
    raise RuntimeError("no isotropic partner")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=131)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tries", type=int, default=20000)
    args = ap.parse_args()
    p = args.p
    rng = random.Random(args.seed)
    F = PrimeField(p)
    L = extension_field(F, 2)
    for _ in range(args.tries):
        roots = sorted(rng.sample(range(p), 5))
        n1, n2 = counts(p, roots)
        o1, o2 = orders(p, n1, n2)
        if o1 % 9 or o2 % 81:
            continue
        h = [1]
        for r in roots:
            h = poly_mul(F, h, [(-r) % p, 1])
        C = Genus2Curve(F, h)
        r1 = len(three_torsion(C, F, o1, rng))
        r2 = len(three_torsion(C, L, o2, rng))
        print("roots", roots, "#J", o1, o2, "3-ranks", r1, r2)
        if r1 == 2 and r2 == 4:
            t1, t2 = toy_kernel(C, L, o1, o2, rng)
            print("ROOTS =", tuple(roots))
            print("ORDERS =", (o1, o2))
            print("MODULUS =", list(L.modulus))
            print("T1 =", t1.to_json())
            print("T2 =", t2.to_json())
            return


if __name__ == "__main__":
    main()
