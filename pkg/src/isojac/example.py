"""Data of the worked example over F_1009: a (3,3)-isogeny from v^2 = u(u-1)(u-2)(u-3)(u-85)."""

from .algebra.poly import poly_mul
from .algebra.rings import PrimeField
from .curve import Genus2Curve

P = 1009
ROOTS_C = (0, 1, 2, 3, 85)
L = 3

T1 = ([67, 247, 1], [599, 261])
T2 = ([350, 903, 1], [692, 98])
B = ([49, 862, 1], [294, 602])

# level-2 relations eta_i = c_inf eta_inf + c_0 eta_0 + c_1 eta_1
RELATIONS = {2: (437, 241, 332), 3: (294, 246, 470), 85: (639, 827, 553)}

# quartic in Z_inf, Z_0, Z_1, Z_+ as {exponent tuple: coefficient}
KUMMER = {
    (2, 2, 0, 0): 597, (2, 1, 1, 0): 14, (2, 1, 0, 1): 781, (2, 0, 1, 1): 819,
    (2, 0, 2, 0): 835, (2, 0, 0, 2): 615, (1, 2, 1, 0): 401, (1, 2, 0, 1): 833,
    (1, 1, 1, 1): 553, (1, 1, 2, 0): 843, (1, 1, 0, 2): 206, (1, 0, 2, 1): 418,
    (1, 0, 1, 2): 321, (0, 2, 1, 1): 796, (0, 2, 2, 0): 1, (0, 2, 0, 2): 1000,
    (0, 1, 2, 1): 856, (0, 1, 1, 2): 655, (0, 0, 2, 2): 555,
}

# conic a Z0 Z1 + b Z0 Z+ + c Z1 Z+ inside Z_inf = 0, up to scaling
CONIC = (-1, 611, 581)

BRANCH_X = (0, None, 513, 51, 243, 987)
ROOTS_D = (0, 513, 51, 243, 987)

# rational fractions scalar * num / den in u, coefficients ascending
FRACTIONS = {
    "S": (354, [361, 73, 597, 931, 647, 1], [0, 420, 215, 811, 832, 1]),
    "P": (50, [314, 868, 770, 812, 262, 1], [0, 420, 215, 811, 832, 1]),
    "R": (304, [511, 3, 194, 64, 623, 437, 1], [0, 0, 191, 489, 214, 800, 983, 239, 1]),
    "T": (678, [130, 204, 859, 895, 263, 697, 1], [0, 0, 191, 489, 214, 800, 983, 239, 1]),
}

FORMAL_CENTER = 832
FORMAL_V = (361, 10, 14)
Q1 = ((973, 889, 57), (45, 209, 39))
Q2 = ((946, 897, 252), (911, 973, 734))
M = ((186, 864), (853, 640))


def field():
    return PrimeField(P)


def _from_roots(F, roots):
    h = [F.one]
    for r in roots:
        h = poly_mul(F, h, [F.neg(F.coerce(r)), F.one])
    return h


def curve_c():
    F = field()
    return Genus2Curve(F, _from_roots(F, ROOTS_C))


def curve_d():
    F = field()
    return Genus2Curve(F, _from_roots(F, ROOTS_D))


def kernel_points(C=None):
    C = C or curve_c()
    return C.jacobian_point(*T1), C.jacobian_point(*T2)


def base_point(C=None):
    C = C or curve_c()
    return C.jacobian_point(*B)


# ---------------------------------------------------------------------------
# checkpoint harness

STAGES = ("kernel", "relations", "kummer", "conic", "branch", "image", "matrix", "fractions",
          "annihilation")
# stages whose output can be corrupted by the fault injector
FAULTS = STAGES[:-1]


class Checkpoint:
    def __init__(self, name, ok, detail=""):
        self.name, self.ok, self.detail = name, ok, detail

    def __repr__(self):
        return "%s: %s" % (self.name, "PASS" if self.ok else "FAIL")


def _bump(K, value):
    """A wrong value for fault injection."""
    return K.add(value, K.one)


def reproduce(seed=0, fault=None):
    """Run the chain with the published choices and compare every checkpoint.

    ``fault`` names a stage whose output is corrupted before the next stage
    consumes it; the harness must then report that stage first.  Returns the
    list of checkpoints (stages after a failure that raised are reported as
    not reached) and the pipeline object.
    """
    import random as _random

    from .errors import IsojacError
    from .isogeny import (Pipeline, branch_points, extract_conic, fit_kummer, fit_restrictions,
                          formal_image, reconstruct, solve_matrix, extend_series, KummerModel)
    from .quotient import build_kernel, build_phi, build_section_basis
    from .theta import pairing

    if fault is not None and fault not in FAULTS:
        raise ValueError("unknown stage %r" % fault)
    C = curve_c()
    K = C.field
    g1, g2 = kernel_points(C)
    pipe = Pipeline(g1, g2, L, seed, b=base_point(C), P0=C.point(FORMAL_CENTER, FORMAL_V[0]))
    rng = _random.Random(seed)
    out = []

    def record(name, ok, detail=""):
        out.append(Checkpoint(name, ok, detail))

    if fault == "kernel":
        g2 = g1 * 2
    try:
        V = build_kernel(g1, g2, L, rng)
        e = pairing(g1, g2, L)
        ok = (g1 * 3).is_zero() and (g2 * 3).is_zero() and len(V) == 9 and e == K.one
        record("kernel", ok, "orbit degrees %s, e_3 = %s" % (V.degrees(), e))
        pipe.V = V
        pipe.phi = phi = build_phi(V, rng)
        pipe.basis2 = B2 = build_section_basis(2, phi, pipe.b, rng)
        if fault == "relations":
            name = sorted(B2.relations)[0]
            B2.relations[name][0] = _bump(K, B2.relations[name][0])
        got = {int(k): tuple(int(c) for c in v[:3]) for k, v in B2.relations.items()}
        ok = got == RELATIONS and all(int(v[3]) == 0 for v in B2.relations.values())
        record("relations", ok, str(got))
        km = fit_kummer(B2, rng)
        if fault == "kummer":
            m = sorted(km.coeffs)[0]
            km = KummerModel(K, {**km.coeffs, m: _bump(K, km.coeffs[m])})
        pipe.kummer = km
        got = {m: int(c) for m, c in km.coeffs.items()}
        record("kummer", got == KUMMER, "%d terms" % len(got))
        cn = extract_conic(km)
        if fault == "conic":
            m = (0, 1, 1)
            cn.coeffs[m] = _bump(K, cn.coeffs[m])
        pipe.conic = cn
        want = {(1, 1, 0): K.coerce(CONIC[0]), (1, 0, 1): CONIC[1], (0, 1, 1): CONIC[2]}
        record("conic", cn.coeffs == want, str({m: int(c) for m, c in cn.coeffs.items()}))
        br = branch_points(cn, B2.relations)
        if fault == "branch":
            br.values[1] = _bump(K, br.values[1])
        pipe.branch = br
        want_vals = sorted(v for v in BRANCH_X if v is not None)
        got_vals = sorted(int(v) for v in br.values if v is not None)
        ok = got_vals == want_vals and None in br.values and br.curve() == curve_d()
        record("branch", ok, "finite values %s" % got_vals)
        pipe.D = D = br.curve()
        pipe.basis3 = B3 = build_section_basis(3, phi, pipe.b, rng)
        pipe.restriction = rm = fit_restrictions(B3, B2, phi, D, rng, pipe.pairs)
        P_t = C.formal_point(pipe.P0, 3)
        Q = formal_image(P_t, B3, phi, rm, pipe.b, rng)
        if fault == "image":
            Q0 = Q[0]
            Q = (type(Q0)(Q0.curve, Q0.ring, Q0.u, Q0.ring.add(Q0.v, Q0.ring.one), check=False), Q[1])
        pipe.Q = Q
        got = tuple((tuple(int(c) for c in P.u), tuple(int(c) for c in P.v)) for P in Q)
        record("image", got == (Q1, Q2), "Q1 = %s, Q2 = %s" % got)
        M_ = solve_matrix(Q[0], Q[1], P_t)
        if fault == "matrix":
            M_ = ((_bump(K, M_[0][0]), M_[0][1]), M_[1])
        pipe.M = M_
        record("matrix", tuple(tuple(int(m) for m in row) for row in M_) == M, str(M_))
        Q1s, Q2s = extend_series(M_, Q[0], Q[1], P_t, pipe.N, D)
        desc = reconstruct(Q1s, Q2s, C.formal_point(pipe.P0, pipe.N), L, M_, C)
        if fault == "fractions":
            desc.S = desc.S + 1
        pipe.description = desc
        ok = True
        for name, (scalar, num, den) in FRACTIONS.items():
            f = desc.fractions[name]
            ok = ok and (int(f.scalar), [int(c) for c in f.num], [int(c) for c in f.den]) == (scalar, num, den)
        try:
            desc.check_identities()
            desc.check_degree_bounds()
        except IsojacError:
            ok = False
        record("fractions", ok, "Q = h_C (T^2 + R^2 P + S R T), degree bounds")
        ok = desc.image(g1).is_zero() and desc.image(g2).is_zero()
        record("annihilation", ok, "F(T1) = F(T2) = 0 on J_D")
        desc.provenance = pipe.provenance()
    except IsojacError as exc:
        done = {c.name for c in out}
        failed = [s for s in STAGES if s not in done]
        out.append(Checkpoint(failed[0], False, "%s: %s" % (type(exc).__name__, exc)))
        for s in failed[1:]:
            out.append(Checkpoint(s, False, "not reached"))
    return out, pipe
