"""The F_131 toy instance used by the property suites.

h = (u - 3)(u - 35)(u - 93)(u - 98)(u - 118); J(F_131)[3] has rank 2 and all of
J[3] is defined over F_131^2 = F_131[i]/(i^2 + 60 i + 41).  T1 is rational, T2
satisfies Frobenius(T2) = -T2 and e_3(T1, T2) = 1, so V = <T1, T2> is a
maximal isotropic subgroup with orbit degrees 1, 1, 1, 2, 2, 2.  Found by
scripts/find_toy_curve.py.
"""

from isojac.algebra.poly import poly_mul
from isojac.algebra.rings import FIELD_EXTENSION, PrimeField, QuotientAlgebra
from isojac.curve import Genus2Curve

P = 131
ROOTS = (3, 35, 93, 98, 118)
ORDERS = (16992, 288728064)  # #J(F_p), #J(F_p^2)
MODULUS = (41, 60, 1)
T1 = ([76, 62, 1], [92, 97])
T2 = ([(11, 0), (65, 0), (1, 0)], [(95, 25), (94, 73)])


def field():
    return PrimeField(P)


def ext():
    return QuotientAlgebra(field(), list(MODULUS), FIELD_EXTENSION)


def curve():
    F = field()
    h = [1]
    for r in ROOTS:
        h = poly_mul(F, h, [(-r) % P, 1])
    return Genus2Curve(F, h)


def kernel_points(C=None):
    C = C or curve()
    L = ext()
    t1 = C.jacobian_point(*T1)
    t2 = C.jacobian_point([tuple(c) for c in T2[0]], [tuple(c) for c in T2[1]], L)
    return t1, t2
