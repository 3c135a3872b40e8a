"""Alpha, Beta and Eta functions on the Jacobian of a genus-2 curve.

``eta[u, y]`` is the function on J with divisor
``sum e_i W_{-o+u_i} - W_{-o+s(u)} - (deg(u) - 1) W_{-o}`` normalized to 1 at y.
Two evaluation routes are provided.

* :func:`eta_eval` follows the determinant decomposition step by step:
  disjoint representatives D_i, a function h with divisor sum e_i D_i found
  by Riemann-Roch, bases of L(D_i), 2x2 determinants at D_x and D_y, and
  the Alpha values of h.  When D_x is a double point, it is deformed into
  two points over K[t]/t^M.
* :func:`eta_eval_fast` takes D_i = U_i + (3 - d_i) O.  Then
  L(D_i) = <1, (v + b_i)/a_i> and the determinant reduces to the
  u-coefficient of one residue, while h is produced by a Miller loop, so
  the cost is logarithmic in the multiplicities.  It raises
  :class:`EvaluationFailed` when an intermediate factor meets D_x or D_y.
"""

import random as _random

from .algebra.poly import deg, poly_eval, poly_exact_div, poly_map, poly_mul, poly_sub, trim
from .algebra.rings import SeriesRing
from .algebra.series import hensel_root
from .curve import (EffectiveDivisor, ZeroCycle, find_disjoint_representative, inv_quadratic,
                    mul_quadratic, principal_from_classes, residue_quadratic, rr_basis)
from .errors import (EvaluationFailed, NonReducible, NonUnit, OnDivisor,
                     NotPrincipal, Exhausted)


# re-randomized Miller chains tried by callers that must not fail
RETRIES = 3


# ---------------------------------------------------------------------------
# cycles and the W test


def canonicalize_cycle(cycle, zero=None):
    """``u - [s(u)] - (deg(u) - 1)[0]``: a cycle of degree 0 and sum 0."""
    terms = list(cycle)
    if not terms and zero is None:
        return ZeroCycle([])
    if zero is None:
        u = terms[0][1]
        zero = u.curve.zero(u.ring)
    s = zero
    for e, u in terms:
        s = s + u * e
    d = sum(e for e, _ in terms)
    return ZeroCycle(terms + [(-1, s), (-(d - 1), zero)])


def residue_point(x):
    """The reduction of a point over K[t]/t^N modulo t (identity otherwise)."""
    R = x.ring
    if isinstance(R, SeriesRing):
        B = R.base
        a = trim(B, [c[0] for c in x.a])
        b = trim(B, [c[0] for c in x.b])
        from .curve import JacobianPoint
        return JacobianPoint(x.curve, B, a, b)
    return x


def _lift_point(u, S):
    return u.change_ring(S) if u.ring != S else u


def in_W(z, w=None):
    """True when z lies on W_{-o+w}, i.e. z - w has a representative of degree <= 1."""
    z0 = residue_point(z)
    if w is None:
        return z0.degree <= 1
    z0, w0 = same_ring(z0, residue_point(w))
    return (z0 - w0).degree <= 1


def check_off(x, cycle):
    for _, u in cycle:
        if in_W(x, u):
            raise OnDivisor("the point lies on a translate W_{-o+u} of the cycle")


# ---------------------------------------------------------------------------
# Alpha and Beta


def alpha_eval(f, x):
    """alpha[f](x): the norm of f along D_x, for a Factored or CurveFunction."""
    if deg(x.a) != 2:
        raise OnDivisor("D_x has degree < 2")
    try:
        return f.alpha(x)
    except NonUnit as exc:
        from .errors import DivisorMeetsSupport
        raise DivisorMeetsSupport("D_x meets the support of the function") from exc


def beta_det(basis, x):
    """Determinant of (f_k(X_l)) divided by u(X_2) - u(X_1).

    With f_k = c0_k + c1_k u on D_x the full determinant is
    (u_2 - u_1)(c0_1 c1_2 - c1_1 c0_2); the Vandermonde factor is common
    to every determinant of a degree-0 combination and is dropped.  The
    reduced value stays meaningful when D_x is a double point.
    """
    if len(basis) != 2:
        raise ValueError("a basis of size 2 is expected")
    S = x.ring
    (a0, a1), (b0, b1) = (f.residue(S, x) for f in basis)
    return S.sub(S.mul(a0, b1), S.mul(a1, b0))


def _double_point(x):
    """(r, s) when D_x = 2(r, s) over a field, else None."""
    R = x.ring
    if not R.is_field or deg(x.a) != 2:
        return None
    a0, a1 = x.a[0], x.a[1]
    disc = R.sub(R.mul(a1, a1), R.mul(R.from_int(4), a0))
    if not R.is_zero(disc):
        return None
    r = R.div(R.neg(a1), R.from_int(2))
    b = x.b
    s = R.add(b[0] if b else R.zero, R.mul(b[1], r) if len(b) > 1 else R.zero)
    return r, s


def _deformed_points(x, M, scalars=(1, 2)):
    """D_x = 2A deformed into X_1(t) + X_2(t) with u(X_m) = u_A + a_m t."""
    r, s = _double_point(x)
    R = x.ring
    if R.is_zero(s):
        raise OnDivisor("a reduced double point cannot be a Weierstrass point")
    S = SeriesRing(R, M)
    h = x.curve.h_in(S)
    pts = []
    for a in scalars:
        u = S.from_coeffs([r, R.from_int(a)])
        hu = poly_eval(S, h, u)
        v = hensel_root(S, [S.neg(hu), S.zero, S.one], s)
        pts.append((u, v))
    return S, pts


def _value_at(f, S, u, v, F):
    A = poly_map(S, F, f.A)
    B = poly_map(S, F, f.B)
    den = poly_map(S, F, f.den)
    num = S.add(poly_eval(S, A, u), S.mul(poly_eval(S, B, u), v))
    return S.div(num, poly_eval(S, den, u))


# ---------------------------------------------------------------------------
# slow evaluation


class _SlowData:
    """Representatives, h and bases for one cycle and a set of avoided supports."""

    def __init__(self, cycle, avoid, rng):
        terms = list(cycle)
        curve = terms[0][1].curve
        F = curve.field
        self.curve = curve
        self.terms = []
        pos = EffectiveDivisor(curve, [F.one], [])
        neg = EffectiveDivisor(curve, [F.one], [])
        for e, u in terms:
            D, _ = find_disjoint_representative(u, avoid, rng)
            basis = rr_basis(curve, 0, pos=D)
            if len(basis) != 2:
                raise Exhausted("L(D) should have dimension 2")
            self.terms.append((e, D, basis))
            if e > 0:
                neg = neg + D * e
            else:
                pos = pos + D * (-e)
        hs = rr_basis(curve, 0, pos=pos, neg=neg)
        if len(hs) != 1:
            raise NotPrincipal("sum e_i D_i is not principal")
        self.h = hs[0]


def eta_eval(cycle, y, x, rng=None, deform=True):
    """eta[cycle, y](x) by the determinant decomposition.

    The cycle, x and y are over the base field.  When D_x or D_y is a
    double point and ``deform`` holds, that divisor is replaced by a
    deformation over K[t]/t^M, M = |e| + 2, the common power of t is
    divided out and t set to 0.  Otherwise the reduced determinant of
    :func:`beta_det` is used, which gives the same value.
    """
    cyc = canonicalize_cycle(cycle, x.curve.zero(x.ring))
    if not len(cyc):
        return x.ring.one
    check_off(x, cyc)
    check_off(y, cyc)
    if deg(x.a) < 2 or deg(y.a) < 2:
        raise OnDivisor("evaluation point on W_{-o}")
    rng = rng or _random.Random(0)
    data = _SlowData(cyc, [x.a, y.a], rng)
    norm_e = sum(abs(e) for e, _ in cyc)
    vx = _slow_value(data, x, norm_e, deform)
    vy = _slow_value(data, y, norm_e, deform)
    R = x.ring
    return R.div(vx, vy)


def _slow_value(data, x, norm_e, deform):
    R = x.ring
    if deform and _double_point(x) is not None:
        F = data.curve.field
        M = norm_e + 2
        S, pts = _deformed_points(x, M)
        val = S.one
        for u, v in pts:
            val = S.mul(val, _value_at(data.h, S, u, v, F))
        total = val[0]
        for e, _, basis in data.terms:
            m = [[_value_at(f, S, u, v, F) for (u, v) in pts] for f in basis]
            d = S.sub(S.mul(m[0][0], m[1][1]), S.mul(m[0][1], m[1][0]))
            if S.valuation(d) != 1:
                raise OnDivisor("determinant valuation differs from 1")
            total = R.mul(total, R.pow(d[1], e))
        # u(X_2) - u(X_1) = t: each determinant above already had it divided out
        return total
    val = alpha_eval(data.h, x)
    for e, _, basis in data.terms:
        d = beta_det(basis, x)
        if not R.is_unit(d):
            raise OnDivisor("x lies on the divisor of a determinant")
        val = R.mul(val, R.pow(d, e))
    return val


# ---------------------------------------------------------------------------
# fast evaluation


class _MillerChain:
    """alpha[H] times the reduced determinants, for one cycle of sum 0."""

    def __init__(self, cycle):
        self.H = principal_from_classes(cycle)
        self.gens = []
        for e, u in cycle:
            if u.degree == 2:
                R = u.ring
                hr = u.curve.h_in(R)
                # (v + b)/a = a'/(v - b) with a' = (h - b^2)/a
                a2 = poly_exact_div(R, poly_sub(R, hr, poly_mul(R, u.b, u.b)), u.a)
                self.gens.append((e, u, a2))

    def raw(self, x, require_unit=True):
        S = x.ring
        if deg(x.a) != 2:
            raise OnDivisor("D_x has degree < 2")
        try:
            val = self.H.alpha(x)
            for e, u, a2 in self.gens:
                val = S.mul(val, S.pow(_slope(x, u, a2), e))
        except NonUnit as exc:
            raise EvaluationFailed("an intermediate factor meets D_x") from exc
        if require_unit and not S.is_unit(val):
            raise EvaluationFailed("value is not a unit")
        return val


def _slope(x, u, a2):
    """The u-coefficient of (v + b_U)/a_U restricted to D_x."""
    S, R = x.ring, u.ring
    a0, a1 = x.a[0], x.a[1]
    bx = x.b
    bxx = (bx[0] if bx else S.zero, bx[1] if len(bx) > 1 else S.zero)
    bU = residue_quadratic(S, poly_map(S, R, u.b), a0, a1)
    try:
        d = residue_quadratic(S, poly_map(S, R, u.a), a0, a1)
        n = (S.add(bU[0], bxx[0]), S.add(bU[1], bxx[1]))
        return mul_quadratic(S, n, inv_quadratic(S, d[0], d[1], a0, a1), a0, a1)[1]
    except NonUnit:
        # D_x meets the opposite of U, where the first form is 0/0
        n = residue_quadratic(S, poly_map(S, R, a2), a0, a1)
        d = (S.sub(bxx[0], bU[0]), S.sub(bxx[1], bU[1]))
        return mul_quadratic(S, n, inv_quadratic(S, d[0], d[1], a0, a1), a0, a1)[1]


class EtaFunction:
    """The fast evaluator for one cycle; Miller functions are built once.

    With ``retries > 0`` a failed evaluation is repeated on translates:
    eta[u, y](x) = eta[u + r, y + r](x + r) for random r, which moves every
    intermediate support.
    """

    def __init__(self, cycle, zero=None, retries=0):
        self.cycle = canonicalize_cycle(cycle, zero)
        self.retries = retries
        self._variants = []
        self._ycache = {}

    def _variant(self, k):
        while len(self._variants) <= k:
            n = len(self._variants)
            if n == 0:
                self._variants.append((None, _MillerChain(self.cycle)))
                continue
            rng = _random.Random(7919 * n)
            u0 = self.cycle.terms[0][1]
            R = u0.ring
            F = R.base if isinstance(R, SeriesRing) else R
            r = u0.curve.random_jacobian_point(rng, F).change_ring(R)
            shifted = ZeroCycle([(e, u + r) for e, u in self.cycle])
            self._variants.append((r, _MillerChain(shifted)))
        return self._variants[k]

    def _raw(self, k, x, require_unit=True):
        r, chain = self._variant(k)
        if r is not None:
            try:
                x = x + r.change_ring(x.ring)
            except NonReducible as exc:
                raise EvaluationFailed("translate is not in general position") from exc
        return chain.raw(x, require_unit)

    def raw(self, x, require_unit=True):
        """alpha[H](x) times the reduced determinants at x (up to a constant)."""
        return self._raw(0, x, require_unit)

    def _raw_y(self, k, y):
        key = (k, y, y.ring)
        if key not in self._ycache:
            self._ycache[key] = self._raw(k, y)
        return self._ycache[key]

    def __call__(self, x, y, check=True):
        """eta[cycle, y](x)."""
        if not len(self.cycle):
            return joint_ring(x.ring, y.ring).one
        if check:
            check_off(x, self.cycle)
            check_off(y, self.cycle)
        R = self.cycle.ring()
        x = x.change_ring(joint_ring(R, x.ring))
        y = y.change_ring(joint_ring(R, y.ring))
        for k in range(self.retries + 1):
            try:
                vx = self._raw(k, x, require_unit=False)
                vy = self._raw_y(k, y)
            except (EvaluationFailed, OnDivisor):
                if k == self.retries:
                    raise
                continue
            return _ratio(x.ring, vx, y.ring, vy)


def _ratio(Rx, vx, Ry, vy):
    R = joint_ring(Rx, Ry)
    return R.div(R.embed(vx, Rx), R.embed(vy, Ry))


def eta_eval_fast(cycle, y, x):
    """eta[cycle, y](x) by the Miller-style route; may raise EvaluationFailed."""
    return EtaFunction(cycle, x.curve.zero(x.ring) if not len(cycle) else None)(x, y)


def eta(cycle, y, x, rng=None):
    """Fast evaluation with the slow route as fallback."""
    try:
        return EtaFunction(cycle, x.curve.zero(x.ring), retries=RETRIES)(x, y)
    except EvaluationFailed:
        return eta_eval(cycle, y, x, rng)


def tau_cycle(u, l, a=1, b=None):
    b = l - a if b is None else b
    return ZeroCycle([(b, u * a), (a, u * (-b))])


def tau_eval(u, y, x, l, a=1, b=None):
    """tau[u, y](x) = eta[b[au] + a[-bu], y](x)."""
    return eta_eval_fast(tau_cycle(u, l, a, b), y, x)


def random_valid_point(curve, cycles, rng, R=None, tries=1000):
    """A random point of J(R) off every W-translate of the given cycles."""
    for _ in range(tries):
        y = curve.random_jacobian_point(rng, R)
        if y.degree < 2:
            continue
        if all(not in_W(y, u) for cyc in cycles for _, u in cyc):
            return y
    raise Exhausted("no valid point found")


def joint_ring(R, S):
    """The smallest algebra among R, S and series over a field that holds both."""
    if R == S:
        return R
    for big, small in ((R, S), (S, R)):
        try:
            big.embed(small.one, small)
            return big
        except Exception:
            pass
    if isinstance(R, SeriesRing) and not isinstance(S, SeriesRing):
        return SeriesRing(joint_ring(R.base, S), R.degree)
    if isinstance(S, SeriesRing) and not isinstance(R, SeriesRing):
        return SeriesRing(joint_ring(R, S.base), S.degree)
    if isinstance(R, SeriesRing) and isinstance(S, SeriesRing) and R.degree == S.degree:
        return SeriesRing(joint_ring(R.base, S.base), R.degree)
    from .errors import AlgebraMismatch
    raise AlgebraMismatch("no common algebra for %r and %r" % (R, S))


def same_ring(*points):
    """The points moved into one common algebra."""
    R = points[0].ring
    for P in points[1:]:
        R = joint_ring(R, P.ring)
    return [P.change_ring(R) for P in points]
