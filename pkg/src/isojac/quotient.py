"""Functions on the quotient J/V by a maximal isotropic subgroup V of J[l].

Phi_V is a V-invariant function with divisor X - l W_{-o}; it is the sum
over v in V of theta_v(x) tau(x - v) for a random Tau function tau.  Eta
functions relative to X are then products of an ordinary Eta function and
translates of Phi_V.  Points of V are grouped into Frobenius orbits and
each orbit is handled by one trace from its field of definition.
"""

import random as _random

from .algebra.linalg import rank, solve
from .algebra.poly import poly_roots, trim
from .algebra.rings import FIELD_EXTENSION, PrimeField, QuotientAlgebra, SeriesRing, extension_field
from .curve import JacobianPoint, ZeroCycle
from .errors import (AlgebraMismatch, DivisorMeetsSupport, EvaluationFailed, Exhausted,
                     NotIsotropic, NotMaximal, NotTorsion, OnDivisor, RankDeficient,
                     RetryLimit, NonUnit)
from .eta import RETRIES, EtaFunction, canonicalize_cycle, joint_ring, same_ring, tau_cycle
from .theta import ThetaFunction, pairing

EVAL_ERRORS = (OnDivisor, EvaluationFailed, DivisorMeetsSupport, NonUnit)


# ---------------------------------------------------------------------------
# the kernel


def _restrict_to_subfield(L, d, x_coeffs, cache):
    """Rewrite elements of the extension L lying in its degree-d subfield over F_{q^d}."""
    K = L.base
    if d == 1:
        return K, [c[0] for c in x_coeffs]
    if d == L.degree:
        return L, list(x_coeffs)
    if d not in cache:
        M = extension_field(K, d)
        rho = poly_roots(L, [L.from_base(c) for c in M.modulus])[0]
        powers = [L.one]
        for _ in range(d - 1):
            powers.append(L.mul(powers[-1], rho))
        cache[d] = (M, powers)
    M, powers = cache[d]
    out = []
    mat = [[powers[j][i] for j in range(d)] for i in range(L.degree)]
    for c in x_coeffs:
        out.append(tuple(solve(K, mat, list(c))))
    return M, out


def minimal_model(w):
    """The point w over the smallest field containing its Mumford coefficients."""
    R = w.ring
    if isinstance(R, PrimeField):
        return w, 1
    d = 1
    while d < R.degree:
        if R.degree % d == 0 and w.frobenius(d) == w:
            break
        d += 1
    coeffs = list(w.a) + list(w.b)
    F, small = _restrict_to_subfield(R, d, coeffs, {})
    na = len(w.a)
    return JacobianPoint(w.curve, F, trim(F, small[:na]), trim(F, small[na:])), d


class IsotropicKernel:
    """A maximal isotropic subgroup V of J[l] with its Frobenius orbits.

    ``orbits`` lists ``(w, d)``: a representative w over a field of degree d
    over K, one per Galois orbit; the orbit of 0 comes first.
    """

    def __init__(self, l, gen1, gen2, points, orbits):
        self.l = l
        self.gens = (gen1, gen2)
        self.points = points
        self.orbits = orbits

    @property
    def curve(self):
        return self.gens[0].curve

    def __len__(self):
        return len(self.points)

    def degrees(self):
        return [d for _, d in self.orbits]

    def to_json(self):
        return {"l": self.l, "gen1": self.gens[0].to_json(), "gen2": self.gens[1].to_json()}


def build_kernel(gen1, gen2, l, rng=None, check_pairing=True):
    """Enumerate V = <gen1, gen2> and split it into Frobenius orbits."""
    gen1, gen2 = same_ring(gen1, gen2)
    if l < 3 or l % 2 == 0:
        raise ValueError("l must be an odd prime")
    for g in (gen1, gen2):
        if g.is_zero() or not (g * l).is_zero():
            raise NotTorsion("generator is not a point of order l")
    points = {}
    for a in range(l):
        row = gen1 * a
        for b in range(l):
            points[row] = (a, b)
            row = row + gen2
    if len(points) != l * l:
        raise NotMaximal("the generators are dependent")
    if check_pairing and pairing(gen1, gen2, l, rng) != gen1.ring.one:
        raise NotIsotropic("the pairing of the generators is not trivial")
    R = gen1.ring
    seen = set()
    orbits = []
    ordered = sorted(points, key=lambda w: (not w.is_zero(), points[w]))
    for w in ordered:
        if w in seen:
            continue
        orbit = [w]
        if not isinstance(R, PrimeField):
            z = w.frobenius()
            while z != w:
                orbit.append(z)
                z = z.frobenius()
        seen.update(orbit)
        m, d = minimal_model(w)
        if d != len(orbit):
            raise AlgebraMismatch("orbit length and field of definition differ")
        orbits.append((m, d))
    if sum(d for _, d in orbits) != l * l:
        raise NotMaximal("orbit degrees do not sum to l^2")
    return IsotropicKernel(l, gen1, gen2, list(points), orbits)


# ---------------------------------------------------------------------------
# Phi_V


def _trace_down(R, value, K):
    """Trace from R (an extension, or series over one) down to K or K[t]/t^N."""
    if isinstance(R, SeriesRing):
        B = R.base
        if B == K:
            return R, value
        if isinstance(B, QuotientAlgebra) and B.kind == FIELD_EXTENSION and B.base == K:
            S = SeriesRing(K, R.degree)
            return S, tuple(B.trace(c) for c in value)
        raise AlgebraMismatch("trace from %r is not supported" % R)
    if R == K:
        return R, value
    if isinstance(R, QuotientAlgebra) and R.kind == FIELD_EXTENSION and R.base == K:
        return K, R.trace(value)
    raise AlgebraMismatch("trace from %r is not supported" % R)


class PhiFunction:
    """Phi_V(x) = sum over orbits of Tr(theta_w(x) tau(x - w))."""

    def __init__(self, V, u, y):
        self.V = V
        self.u, self.y = u, y
        l = V.l
        self.tau = EtaFunction(tau_cycle(u, l), retries=RETRIES)
        self.thetas = [ThetaFunction(w, l, check=False) for w, _ in V.orbits]
        self._conjugates = {}

    def _term(self, k, x):
        w, d = self.V.orbits[k]
        base = self.V.curve.field
        if d > 1 and not _over(x.ring, base):
            # x is not rational: sum over the conjugates instead of taking a trace
            return self._orbit_sum(k, x)
        x1, w1 = same_ring(x, w)
        R = x1.ring
        t = self.tau(x1 - w1, self.y.change_ring(R), check=False)
        val = R.mul(self.thetas[k](x1), t)
        if d == 1:
            return R, val
        return _trace_down(R, val, base)

    def _orbit_sum(self, k, x):
        w, d = self.V.orbits[k]
        if k not in self._conjugates:
            self._conjugates[k] = [ThetaFunction(w.frobenius(j), self.V.l, check=False)
                                   for j in range(d)]
        total, ring = None, None
        for th in self._conjugates[k]:
            x1, w1 = same_ring(x, th.u)
            R = x1.ring
            v = R.mul(th(x1), self.tau(x1 - w1, self.y.change_ring(R), check=False))
            if total is None:
                total, ring = v, R
            else:
                J = joint_ring(ring, R)
                total, ring = J.add(J.embed(total, ring), J.embed(v, R)), J
        return ring, total

    def __call__(self, x):
        """Phi_V(x); x is over K, an extension, or series over K."""
        total, ring = None, None
        for k in range(len(self.V.orbits)):
            R, v = self._term(k, x)
            if total is None:
                total, ring = v, R
            else:
                J = joint_ring(ring, R)
                total = J.add(J.embed(total, ring), J.embed(v, R))
                ring = J
        return _narrow(ring, total, x.ring)

    def is_zero_at(self, x):
        R = x.ring
        v = self(x)
        return R.is_zero(v) if not isinstance(R, SeriesRing) else R.base.is_zero(v[0])


def _over(R, K):
    """True when R is K or a series ring over K."""
    return R == K or (isinstance(R, SeriesRing) and R.base == K)


def _narrow(R, value, target):
    if R == target:
        return value
    J = joint_ring(R, target)
    if J == target:
        return target.embed(value, R)
    return value


def build_phi(V, rng=None, tries=20, checks=5):
    """A random Phi_V, rejected while it vanishes at one of ``checks`` random points."""
    rng = rng or _random.Random(0)
    C = V.curve
    K = C.field
    for _ in range(tries):
        u = C.random_jacobian_point(rng)
        y = C.random_jacobian_point(rng)
        if u.degree < 2 or y.degree < 2:
            continue
        phi = PhiFunction(V, u, y)
        ok = 0
        for _ in range(4 * checks):
            x = C.random_jacobian_point(rng)
            try:
                v = phi(x)
            except EVAL_ERRORS:
                continue
            if K.is_zero(v):
                break
            ok += 1
            if ok == checks:
                return phi
    raise RetryLimit("no nonzero Phi_V found; the field may be too small")


# ---------------------------------------------------------------------------
# Eta functions relative to X


class EtaX:
    """eta_X[cycle, y] = eta[cycle, y]^l * prod Phi(x - u_i)^e_i / prod Phi(y - u_i)^e_i."""

    def __init__(self, cycle, y, phi, name=None):
        C = phi.V.curve
        terms = list(cycle)
        zero = C.zero(terms[0][1].ring) if terms else C.zero()
        self.cycle = canonicalize_cycle(cycle, zero)
        self.y = y
        self.phi = phi
        self.name = name
        self.eta = EtaFunction(self.cycle, retries=RETRIES)
        self._ny = None

    def _phi_product(self, x, regularize=0):
        R = x.ring
        val = R.one
        for e, u in self.cycle:
            if u.is_zero():
                e += regularize
                if e == 0:
                    continue
            x1, u1 = same_ring(x, u)
            ph = self.phi(x1 - u1)
            J = joint_ring(R, x1.ring)
            val = J.mul(J.embed(val, R), J.pow(J.embed(ph, x1.ring), e))
            R = J
        return R, val

    def _y_factor(self):
        if self._ny is None:
            self._ny = self._phi_product(self.y)
        return self._ny

    def __call__(self, x, regularize=0):
        """eta_X[cycle, y](x), times Phi(x)^regularize when that is asked for."""
        if not len(self.cycle):
            return x.ring.one
        e = self.eta(x, self.y)
        R = joint_ring(joint_ring(x.ring, self.y.ring), self.cycle.ring())
        e = R.pow(_as(R, e), self.phi.V.l)
        Rx, px = self._phi_product(x, regularize)
        Ry, py = self._y_factor()
        J = joint_ring(joint_ring(R, Rx), Ry)
        return J.div(J.mul(J.embed(e, R), J.embed(px, Rx)), J.embed(py, Ry))


def _as(R, v):
    """A value of a prime field or of R, as an element of R."""
    if isinstance(v, int):
        return R.coerce(v) if R.base is None else R.embed(v, R.prime_field)
    return v


def eta_X_eval(cycle, y, x, phi):
    return EtaX(cycle, y, phi)(x)


# ---------------------------------------------------------------------------
# section bases


def level2_functions(phi, b):
    """The seven level-2 functions named inf, r_0, ..., r_4 and '+'.

    eta_w = eta_X[2[w] - 2[0], b] for w the 2-torsion classes P_i - O, and
    P_0 + P_1 - 2O for '+'; eta_inf = 1.  Order: inf, r_0, r_1, +, r_2, r_3, r_4.
    """
    C = phi.V.curve
    roots = C.weierstrass_roots()
    if len(roots) != 5:
        raise AlgebraMismatch("level-2 functions need all Weierstrass points rational")
    ws = [C.point(r, 0).to_jacobian() for r in roots]
    names = ["inf", str(roots[0]), str(roots[1]), "+"] + [str(r) for r in roots[2:]]
    pts = [None, ws[0], ws[1], ws[0] + ws[1]] + ws[2:]
    out = []
    for name, w in zip(names, pts):
        if w is None:
            out.append(ConstantFunction(name))
        else:
            out.append(EtaX(ZeroCycle([(2, w), (-2, C.zero())]), b, phi, name))
    return out


class ConstantFunction:
    def __init__(self, name="1"):
        self.name = name
        self.cycle = ZeroCycle([])

    def __call__(self, x, regularize=0):
        if regularize:
            raise AlgebraMismatch("the constant function has no regularized form")
        return x.ring.one


def sample_points(C, rng, count, funcs, R=None, max_tries=None):
    """Random points where every function evaluates, with the values (rows)."""
    pts, rows = [], []
    max_tries = max_tries or 20 * count + 50
    for _ in range(max_tries):
        x = C.random_jacobian_point(rng, R)
        if x.degree < 2:
            continue
        try:
            row = [f(x) for f in funcs]
        except EVAL_ERRORS:
            continue
        pts.append(x)
        rows.append(row)
        if len(pts) == count:
            return pts, rows
    raise Exhausted("not enough valid sample points")


class SectionBasis:
    """A basis of H^0(A, O(kY)) made of eta_X functions, with dual points.

    ``functions[:size]`` is the basis; ``relations`` maps every other candidate
    name to its coordinates in the basis.
    """

    def __init__(self, level, functions, dual_points, matrix, relations=None):
        self.level = level
        self.functions = functions
        self.dual_points = dual_points
        self.matrix = matrix
        self.relations = relations or {}

    @property
    def size(self):
        return len(self.matrix)

    def evaluate(self, x, regularize=0):
        return [f(x, regularize) if regularize else f(x) for f in self.functions[:self.size]]

    def coordinates(self, values):
        """Coordinates of a function given by its values at the dual points."""
        K = self.dual_points[0].curve.field
        return solve(K, self.matrix, list(values))


def _relation(K, rows, basis_idx, target_idx, check_rows):
    A = [[r[i] for i in basis_idx] for r in rows]
    rhs = [r[target_idx] for r in rows]
    sol = solve(K, A, rhs)
    for r in check_rows:
        lhs = sum(K.mul(c, r[i]) for c, i in zip(sol, basis_idx)) % K.p
        if lhs != r[target_idx]:
            raise RankDeficient("linear relation does not hold at a check point")
    return sol


def build_section_basis(level, phi, b, rng=None, extra=6, tries=40):
    """Level 2: the four functions inf, r_0, r_1, + and relations for r_2, r_3, r_4.

    Level 3: 1 and random eta_X[[z] + [z'] + [z'']] with z + z' + z'' = 0,
    grown until the evaluation matrix at random dual points has rank 9.
    """
    rng = rng or _random.Random(0)
    C = phi.V.curve
    K = C.field
    if level == 2:
        funcs = level2_functions(phi, b)
        pts, rows = sample_points(C, rng, 4 + extra, funcs)
        basis_idx = [0, 1, 2, 3]
        if rank(K, [r[:4] for r in rows]) != 4:
            raise RankDeficient("the level-2 candidates do not span a 4-dimensional space")
        rel = {}
        for j in range(4, len(funcs)):
            rel[funcs[j].name] = _relation(K, rows[:4], basis_idx, j, rows[4:])
        mat = [r[:4] for r in rows[:4]]
        return SectionBasis(2, funcs, pts[:4], mat, rel)
    if level != 3:
        raise ValueError("level must be 2 or 3")
    funcs = [ConstantFunction("1")]
    size = 9
    pts, rows = sample_points(C, rng, size + extra, funcs)
    for _ in range(tries):
        z1 = C.random_jacobian_point(rng)
        z2 = C.random_jacobian_point(rng)
        f = EtaX(ZeroCycle([(1, z1), (1, z2), (1, -(z1 + z2))]), b, phi, "f%d" % len(funcs))
        try:
            cand = _extend_rows(C, rng, funcs + [f], pts, rows, f)
        except EVAL_ERRORS:
            continue
        if rank(K, cand) < len(funcs) + 1:
            continue
        funcs.append(f)
        rows = cand
        if len(funcs) == size:
            chosen = _independent_rows(K, rows, size)
            return SectionBasis(3, funcs, [pts[i] for i in chosen], [rows[i] for i in chosen])
    raise RankDeficient("level-3 basis not found within the retry limit")


def _extend_rows(C, rng, funcs, pts, rows, f, swaps=4):
    """Rows with a column for f; a sample point where f fails is swapped for a fresh one."""
    out = []
    for i, x in enumerate(pts):
        try:
            out.append(rows[i] + [f(x)])
            continue
        except EVAL_ERRORS:
            if swaps == 0:
                raise
            swaps -= 1
        y, row = sample_points(C, rng, 1, funcs)
        pts[i] = y[0]
        out.append(row[0])
    return out


def _independent_rows(K, rows, size):
    chosen = []
    for i in range(len(rows)):
        if rank(K, [rows[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == size:
                return chosen
    raise RankDeficient("dual points are degenerate")
