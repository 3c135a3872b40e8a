"""Genus-2 curves y^2 = h(x), Mumford divisors and Jacobian arithmetic.

The domain curve has ``deg h = 5``.  Its single place at infinity ``O`` is a
Weierstrass point, a Jacobian class is written ``D - deg(D) O`` with ``D`` a
reduced effective divisor in Mumford form ``(a(u), v - b(u))``.

Cantor composition and reduction optionally report the functions they
divide out.  Multiplying those functions together, as in Miller's
algorithm, gives a :class:`FactoredFunction` with a prescribed divisor.
"""

import random as _random

from .algebra.poly import (deg, poly_add, poly_divmod, poly_eval, poly_exact_div,
                           poly_factor, poly_gcd, poly_inv_mod, poly_map, poly_mod,
                           poly_monic, poly_mul, poly_neg, poly_scale, poly_sub,
                           poly_xgcd, poly_deriv, trim)
from .algebra.rings import PrimeField, SeriesRing
from .algebra.series import hensel_root
from .algebra.linalg import kernel
from .errors import (Exhausted, NonReducible, NonUnit, NotPrincipal, OnDivisor,
                     WeierstrassPoint, MalformedInput)


class Genus2Curve:
    """The curve v^2 = h(u) over a prime field (or a finite field extension)."""

    genus = 2

    def __init__(self, field, h):
        F = field
        h = trim(F, [F.coerce(c) for c in h])
        if deg(h) not in (5, 6):
            raise MalformedInput("h must have degree 5 or 6")
        if deg(h) == 5 and h[-1] != F.one:
            raise MalformedInput("a degree-5 h must be monic")
        if len(poly_gcd(F, h, poly_deriv(F, h))) > 1:
            raise MalformedInput("h must be squarefree")
        self.field = F
        self.h = h
        self._h_cache = {F: h}

    def __eq__(self, other):
        return isinstance(other, Genus2Curve) and self.field == other.field and self.h == other.h

    def __hash__(self):
        return hash((self.field, tuple(self.h)))

    def __repr__(self):
        return "Genus2Curve(p=%d, h=%s)" % (self.field.p, self.h)

    @property
    def p(self):
        return self.field.p

    def h_in(self, R):
        """h with coefficients mapped into the algebra R."""
        try:
            return self._h_cache[R]
        except KeyError:
            hr = poly_map(R, self.field, self.h)
            self._h_cache[R] = hr
            return hr

    def to_json(self):
        return {"p": self.field.p, "h": [int(c) for c in self.h]}

    @classmethod
    def from_json(cls, doc):
        try:
            F = PrimeField(int(doc["p"]))
            return cls(F, [int(c) for c in doc["h"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput("bad curve document: %s" % exc) from exc

    # points -------------------------------------------------------------
    def point(self, u, v, R=None):
        R = R or self.field
        return CurvePoint(self, R, R.coerce(u), R.coerce(v))

    def zero(self, R=None):
        R = R or self.field
        return JacobianPoint(self, R, [R.one], [])

    def jacobian_point(self, a, b, R=None, check=True):
        R = R or self.field
        a = trim(R, [R.coerce(c) for c in a])
        b = trim(R, [R.coerce(c) for c in b])
        D = JacobianPoint(self, R, a, b)
        if check:
            D.validate()
        return D

    def weierstrass_roots(self):
        from .algebra.poly import poly_roots
        return poly_roots(self.field, self.h)

    def random_point(self, rng, R=None):
        """A random affine point over the finite field R (default: base field)."""
        R = R or self.field
        hr = self.h_in(R)
        while True:
            u = R.random(rng)
            y2 = poly_eval(R, hr, u)
            if R.is_zero(y2) or not R.is_square(y2):
                continue
            v = R.sqrt(y2)
            if rng.randrange(2):
                v = R.neg(v)
            return CurvePoint(self, R, u, v)

    def random_jacobian_point(self, rng, R=None):
        """Sum of two random affine points minus 2O; retries on degenerate sums."""
        R = R or self.field
        P1 = self.random_point(rng, R).to_jacobian()
        P2 = self.random_point(rng, R).to_jacobian()
        return P1 + P2

    def affine_points(self, R=None):
        """All affine points over a small finite field (brute force)."""
        R = R or self.field
        if not isinstance(R, PrimeField):
            raise ValueError("enumeration is only provided over prime fields")
        hr = self.h_in(R)
        out = []
        for u in range(R.p):
            y2 = poly_eval(R, hr, u)
            if y2 == 0:
                out.append(CurvePoint(self, R, u, 0))
            elif R.is_square(y2):
                v = R.sqrt(y2)
                out.append(CurvePoint(self, R, u, v))
                out.append(CurvePoint(self, R, u, R.neg(v)))
        return out

    def formal_point(self, P0, N):
        """The point (u0 + t, v(t)) over F[t]/t^N with v(0) = v0."""
        F = P0.ring
        if F.is_zero(P0.v):
            raise WeierstrassPoint("formal parameter u - u0 needs v0 != 0")
        S = SeriesRing(F, N)
        u = S.add(S.from_base(P0.u), S.gen()) if N > 1 else S.from_base(P0.u)
        hu = poly_eval(S, self.h_in(S), u)
        v = hensel_root(S, [S.neg(hu), S.zero, S.one], P0.v)
        return CurvePoint(self, S, u, v)


class CurvePoint:
    """An affine point (u, v) over an algebra."""

    __slots__ = ("curve", "ring", "u", "v")

    def __init__(self, curve, ring, u, v, check=True):
        self.curve, self.ring, self.u, self.v = curve, ring, u, v
        if check:
            R = ring
            if R.sub(R.mul(v, v), poly_eval(R, curve.h_in(R), u)) != R.zero:
                raise MalformedInput("point is not on the curve")

    def __eq__(self, other):
        return (isinstance(other, CurvePoint) and self.ring == other.ring
                and self.u == other.u and self.v == other.v)

    def __hash__(self):
        return hash((self.u, self.v))

    def __repr__(self):
        return "(%s, %s)" % (self.u, self.v)

    def opposite(self):
        return CurvePoint(self.curve, self.ring, self.u, self.ring.neg(self.v), check=False)

    def to_jacobian(self):
        """The class of P - O."""
        R = self.ring
        return JacobianPoint(self.curve, R, [R.neg(self.u), R.one], trim(R, [self.v]))


class JacobianPoint:
    """Class of D - deg(D) O with D = (a, b) reduced."""

    __slots__ = ("curve", "ring", "a", "b", "_hash")

    def __init__(self, curve, ring, a, b):
        self.curve, self.ring = curve, ring
        self.a, self.b = a, b
        self._hash = None

    def validate(self):
        R = self.ring
        if not self.a or self.a[-1] != R.one or deg(self.a) > 2:
            raise MalformedInput("a must be monic of degree <= 2")
        if len(self.b) > max(deg(self.a), 0):
            raise MalformedInput("deg b must be < deg a")
        hr = self.curve.h_in(R)
        if poly_mod(R, poly_sub(R, poly_mul(R, self.b, self.b), hr), self.a):
            raise MalformedInput("b^2 != h mod a")
        return self

    @property
    def degree(self):
        return deg(self.a)

    def is_zero(self):
        return len(self.a) == 1

    def key(self):
        return (tuple(self.a), tuple(self.b))

    def __eq__(self, other):
        return (isinstance(other, JacobianPoint) and self.ring == other.ring
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self.a), tuple(self.b)))
        return self._hash

    def __repr__(self):
        return "<%s, %s>" % (self.a, self.b)

    def __neg__(self):
        R = self.ring
        return JacobianPoint(self.curve, R, self.a, poly_neg(R, self.b))

    def __add__(self, other):
        return jac_add(self, other)

    def __sub__(self, other):
        return jac_add(self, -other)

    def __mul__(self, n):
        return scalar_mul(self, n)

    __rmul__ = __mul__

    def change_ring(self, S):
        """The same class with coordinates in an algebra S containing the ring."""
        if S == self.ring:
            return self
        R = self.ring
        return JacobianPoint(self.curve, S, poly_map(S, R, self.a), poly_map(S, R, self.b))

    def frobenius(self, k=1):
        R = self.ring
        return JacobianPoint(self.curve, R, [R.frobenius(c, k) for c in self.a],
                             [R.frobenius(c, k) for c in self.b])

    def to_json(self):
        R = self.ring
        return {"a": [R.to_json(c) for c in self.a], "b": [R.to_json(c) for c in self.b]}


# ---------------------------------------------------------------------------
# functions on the curve


class FactoredFunction:
    """A product of powers of base functions A(u) + B(u) v over an algebra.

    Factors are triples ``(A, B, e)`` with ``B == []`` for polynomials in u.
    Functions are handled up to a nonzero constant.
    """

    __slots__ = ("ring", "factors", "_lifted")

    def __init__(self, ring, factors=()):
        self.ring = ring
        self.factors = tuple((tuple(A), tuple(B), e) for A, B, e in factors if e)
        self._lifted = {}

    def __mul__(self, other):
        return FactoredFunction(self.ring, self.factors + other.factors)

    def __pow__(self, n):
        return FactoredFunction(self.ring, [(A, B, e * n) for A, B, e in self.factors])

    def inverse(self):
        return self ** -1

    def __len__(self):
        return len(self.factors)

    def lifted(self, S):
        """Factors with coefficients mapped into S (cached)."""
        try:
            return self._lifted[S]
        except KeyError:
            R = self.ring
            out = [(poly_map(S, R, A), poly_map(S, R, B), e) for A, B, e in self.factors]
            self._lifted[S] = out
            return out

    def at_point(self, P):
        """Value at an affine point (raises NonUnit at a pole)."""
        S = P.ring
        val = S.one
        for A, B, e in self.lifted(S):
            f = S.add(poly_eval(S, A, P.u), S.mul(poly_eval(S, B, P.u), P.v))
            val = S.mul(val, S.pow(f, e))
        return val

    def alpha(self, x):
        """Norm of the function along D_x, the effective divisor of the class x.

        This is the product of the values at the two points of D_x, computed
        in ``S[u]/a_x`` without splitting a_x.
        """
        S = x.ring
        a = x.a
        if deg(a) != 2:
            raise OnDivisor("the class has an effective representative of degree < 2")
        a0, a1 = a[0], a[1]
        b = x.b
        bb = (b[0] if b else S.zero, b[1] if len(b) > 1 else S.zero)
        val = S.one
        for A, B, e in self.lifted(S):
            c0, c1 = residue_quadratic(S, A, a0, a1)
            if B:
                d0, d1 = residue_quadratic(S, B, a0, a1)
                m0, m1 = mul_quadratic(S, (d0, d1), bb, a0, a1)
                c0, c1 = S.add(c0, m0), S.add(c1, m1)
            n = norm_quadratic(S, c0, c1, a0, a1)
            val = S.mul(val, S.pow(n, e))
        return val


def residue_quadratic(S, f, a0, a1):
    """f mod (u^2 + a1 u + a0) as the pair (c0, c1)."""
    c0, c1 = S.zero, S.zero
    if S.base is None:
        p = S.p
        for c in reversed(f):
            c0, c1 = (c - a0 * c1) % p, (c0 - a1 * c1) % p
        return c0, c1
    for c in reversed(f):
        c0, c1 = S.sub(c, S.mul(a0, c1)), S.sub(c0, S.mul(a1, c1))
    return c0, c1


def mul_quadratic(S, x, y, a0, a1):
    """Product of two residues mod u^2 + a1 u + a0."""
    x0, x1 = x
    y0, y1 = y
    t = S.mul(x1, y1)
    return (S.sub(S.mul(x0, y0), S.mul(a0, t)),
            S.sub(S.add(S.mul(x0, y1), S.mul(x1, y0)), S.mul(a1, t)))


def norm_quadratic(S, c0, c1, a0, a1):
    """Norm of c0 + c1 u from S[u]/(u^2 + a1 u + a0) to S."""
    return S.add(S.sub(S.mul(c0, c0), S.mul(a1, S.mul(c0, c1))), S.mul(a0, S.mul(c1, c1)))


def inv_quadratic(S, c0, c1, a0, a1):
    n = norm_quadratic(S, c0, c1, a0, a1)
    ni = S.inv(n)
    return S.mul(S.sub(c0, S.mul(c1, a1)), ni), S.neg(S.mul(c1, ni))


# ---------------------------------------------------------------------------
# Cantor arithmetic


def _check_same(x, y):
    if x.ring != y.ring or x.curve is not y.curve and x.curve != y.curve:
        from .errors import AlgebraMismatch
        raise AlgebraMismatch("points live on different curves or algebras")


def _monic_unit(R, f):
    if not f:
        raise NonReducible("zero polynomial in reduction")
    if not R.is_unit(f[-1]):
        raise NonReducible("leading coefficient is not a unit")
    return poly_monic(R, f)


def compose(curve, R, a1, b1, a2, b2):
    """Cantor composition.  Returns (a, b, d) with D1 + D2 = (a, b) + (zeros of d)."""
    hr = curve.h_in(R)
    if len(a1) == 1:
        return a2, b2, [R.one]
    if len(a2) == 1:
        return a1, b1, [R.one]
    if R.is_field:
        d1, e1, e2 = poly_xgcd(R, a1, a2)
        if len(d1) == 1:
            a = poly_mul(R, a1, a2)
            b = poly_mod(R, poly_add(R, poly_mul(R, poly_mul(R, e1, a1), b2),
                                     poly_mul(R, poly_mul(R, e2, a2), b1)), a)
            return a, b, [R.one]
        d, c1, c2 = poly_xgcd(R, d1, poly_add(R, b1, b2))
        s1, s2, s3 = poly_mul(R, c1, e1), poly_mul(R, c1, e2), c2
        a = poly_exact_div(R, poly_mul(R, a1, a2), poly_mul(R, d, d))
        num = poly_add(R, poly_add(R, poly_mul(R, poly_mul(R, s1, a1), b2),
                                   poly_mul(R, poly_mul(R, s2, a2), b1)),
                       poly_mul(R, s3, poly_add(R, poly_mul(R, b1, b2), hr)))
        b = poly_exact_div(R, num, d)
        b = poly_mod(R, b, a) if len(a) > 1 else []
        return a, b, d
    # non-field algebras: generic position only
    if a1 == a2:
        if b1 == b2:
            two_b = poly_scale(R, R.from_int(2), b1)
            try:
                inv = poly_inv_mod(R, two_b, a1)
            except NonUnit as exc:
                raise NonReducible("doubling needs 2b invertible mod a") from exc
            k = poly_mod(R, poly_mul(R, poly_exact_div(R, poly_sub(R, hr, poly_mul(R, b1, b1)), a1), inv), a1)
            a = poly_mul(R, a1, a1)
            return a, poly_mod(R, poly_add(R, b1, poly_mul(R, k, a1)), a), [R.one]
        if not poly_mod(R, poly_add(R, b1, b2), a1):
            return [R.one], [], a1
        raise NonReducible("divisors overlap partially")
    try:
        inv = poly_inv_mod(R, a1, a2)
    except NonUnit as exc:
        raise NonReducible("supports are not coprime over the algebra") from exc
    a = poly_mul(R, a1, a2)
    b = poly_add(R, b1, poly_mul(R, poly_mod(R, poly_mul(R, poly_sub(R, b2, b1), inv), a2), a1))
    return a, poly_mod(R, b, a), [R.one]


def reduce_divisor(curve, R, a, b, factors=None):
    """Reduce a semi-reduced (a, b); appends the functions (v - b)/a' to factors."""
    hr = curve.h_in(R)
    b = poly_mod(R, b, a) if len(a) > 1 else []
    while deg(a) > 2:
        a2 = poly_exact_div(R, poly_sub(R, hr, poly_mul(R, b, b)), a)
        a2 = _monic_unit(R, a2)
        if factors is not None:
            factors.append((poly_neg(R, b), [R.one], 1))
            factors.append((a2, [], -1))
        b = poly_mod(R, poly_neg(R, b), a2) if len(a2) > 1 else []
        a = a2
    return a, b


def add_with_function(x, y):
    """x + y together with F such that D_x + D_y = D_{x+y} + div(F) (degree-0 parts)."""
    _check_same(x, y)
    R = x.ring
    a, b, d = compose(x.curve, R, x.a, x.b, y.a, y.b)
    factors = []
    if len(d) > 1:
        factors.append((d, [], 1))
    a, b = reduce_divisor(x.curve, R, a, b, factors)
    return JacobianPoint(x.curve, R, a, b), FactoredFunction(R, factors)


def _plain_add(x, y):
    R = x.ring
    a, b, _ = compose(x.curve, R, x.a, x.b, y.a, y.b)
    a, b = reduce_divisor(x.curve, R, a, b)
    return JacobianPoint(x.curve, R, a, b)


def jac_add(x, y):
    """x + y.  Over K[t]/t^N the supports must be coprime modulo t; when they
    are not, the sum is taken as (x + r) + (y - r) for rational translates r."""
    _check_same(x, y)
    try:
        return _plain_add(x, y)
    except NonReducible:
        if not isinstance(x.ring, SeriesRing):
            raise
    R = x.ring
    rng = _random.Random(7919)
    for _ in range(8):
        r = x.curve.random_jacobian_point(rng, R.base).change_ring(R)
        try:
            return _plain_add(_plain_add(x, r), _plain_add(y, -r))
        except NonReducible:
            continue
    raise NonReducible("no translate puts the supports in general position")


def jac_neg(x):
    return -x


def scalar_mul(x, n):
    if n < 0:
        return scalar_mul(-x, -n)
    result = x.curve.zero(x.ring)
    addend = x
    while n:
        if n & 1:
            result = jac_add(result, addend)
        n >>= 1
        if n:
            addend = jac_add(addend, addend)
    return result


def mul_with_function(x, n):
    """n x together with F such that n (D_x - dO) = (D_nx - d'O) + div(F)."""
    R = x.ring
    if n == 0:
        return x.curve.zero(R), FactoredFunction(R)
    if n < 0:
        y, F = mul_with_function(-x, -n)
        # -(D - dO) = (iota D - dO) - div(a)
        if len(x.a) > 1:
            F = F * FactoredFunction(R, [(x.a, [], n)])
        return y, F
    acc, F = x, FactoredFunction(R)
    for bit in bin(n)[3:]:
        acc, G = add_with_function(acc, acc)
        F = (F ** 2) * G
        if bit == "1":
            acc, G = add_with_function(acc, x)
            F = F * G
    return acc, F


class ZeroCycle:
    """A formal integer combination of Jacobian points."""

    def __init__(self, terms):
        merged = {}
        order = []
        for e, u in terms:
            if u not in merged:
                merged[u] = 0
                order.append(u)
            merged[u] += int(e)
        self.terms = tuple((merged[u], u) for u in order if merged[u])

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        return ZeroCycle(self.terms + other.terms)

    def __neg__(self):
        return ZeroCycle([(-e, u) for e, u in self.terms])

    def __eq__(self, other):
        return isinstance(other, ZeroCycle) and dict((u, e) for e, u in self.terms) == dict(
            (u, e) for e, u in other.terms)

    def __hash__(self):
        return hash(frozenset((u, e) for e, u in self.terms))

    def __repr__(self):
        return " + ".join("%d[%r]" % (e, u) for e, u in self.terms) or "0"

    @property
    def degree(self):
        return sum(e for e, _ in self.terms)

    def sum(self, curve=None, R=None):
        if not self.terms:
            return curve.zero(R)
        total = None
        for e, u in self.terms:
            t = scalar_mul(u, e)
            total = t if total is None else total + t
        return total

    def points(self):
        return [u for _, u in self.terms]

    def ring(self):
        return self.terms[0][1].ring if self.terms else None

    def change_ring(self, S):
        return ZeroCycle([(e, u.change_ring(S)) for e, u in self.terms])

    def to_json(self):
        return [{"e": e, "point": u.to_json()} for e, u in self.terms]


def principal_from_classes(cycle):
    """F with div(F) = sum e_i (U_i - d_i O) for a cycle with sum 0.

    ``U_i`` is the reduced divisor of the point ``u_i``.  Raises
    :class:`NotPrincipal` when the group sum of the cycle is not zero.
    """
    terms = list(cycle)
    if not terms:
        raise NotPrincipal("empty cycle")
    R = terms[0][1].ring
    F = FactoredFunction(R)
    acc = None
    for e, u in terms:
        y, G = mul_with_function(u, e)
        F = F * G
        if acc is None:
            acc = y
        else:
            acc, G = add_with_function(acc, y)
            F = F * G
    if not acc.is_zero():
        raise NotPrincipal("the cycle does not sum to zero in the Jacobian")
    # sum e_i(U_i - d_i O) = div(F): the accumulated relation reads
    # sum (e_i parts) = acc + div(products)
    return F


# ---------------------------------------------------------------------------
# exact divisors (for checks and for the Riemann-Roch layer)


class Divisor:
    """Formal sum of places over a finite field, stored in normal form.

    A finite place is ``(pi, beta)`` with ``pi`` a monic irreducible in u
    (as a tuple) and ``beta`` the residue of v modulo pi (tuple), or
    ``(pi, None)`` for a place of degree 2 deg pi that is inert over pi.
    The place at infinity is ``"O"``.
    """

    def __init__(self, field, mults=None):
        self.field = field
        self.mults = {k: v for k, v in (mults or {}).items() if v}

    def __add__(self, other):
        m = dict(self.mults)
        for k, v in other.mults.items():
            m[k] = m.get(k, 0) + v
        return Divisor(self.field, m)

    def __neg__(self):
        return Divisor(self.field, {k: -v for k, v in self.mults.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n):
        return Divisor(self.field, {k: v * n for k, v in self.mults.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.mults == other.mults

    def __repr__(self):
        return "Divisor(%r)" % (self.mults,)

    def degree(self):
        total = 0
        for k, v in self.mults.items():
            if k == "O":
                total += v
            else:
                pi, beta = k
                d = len(pi) - 1
                total += v * (2 * d if beta is None else d)
        return total

    def is_effective(self):
        return all(v > 0 for v in self.mults.values())


def _places_of_mumford(F, curve, a, b):
    """Places of the semi-reduced divisor (a, b) with multiplicities."""
    out = {}
    if len(a) <= 1:
        return out
    _, facs = poly_factor(F, a)
    for pi, m in facs:
        beta = tuple(poly_mod(F, b, pi)) if len(pi) > 1 else ()
        key = (tuple(pi), _pad(F, beta, len(pi) - 1))
        out[key] = out.get(key, 0) + m
    return out


def _pad(F, t, n):
    t = tuple(t)
    return t + (F.zero,) * (n - len(t))


def _places_of_vertical(F, curve, c):
    """Places of div_0(c(u)) (every place above the roots of c)."""
    from .algebra.rings import QuotientAlgebra, FIELD_EXTENSION
    out = {}
    if len(c) <= 1:
        return out
    _, facs = poly_factor(F, c)
    for pi, m in facs:
        d = len(pi) - 1
        hmod = poly_mod(F, curve.h, pi)
        if not hmod:
            out[(tuple(pi), _pad(F, (), d))] = out.get((tuple(pi), _pad(F, (), d)), 0) + 2 * m
            continue
        L = QuotientAlgebra(F, pi, FIELD_EXTENSION)
        hv = L.from_coeffs(hmod)
        if L.is_square(hv):
            r = L.sqrt(hv)
            for beta in (r, L.neg(r)):
                k = (tuple(pi), tuple(beta))
                out[k] = out.get(k, 0) + m
        else:
            k = (tuple(pi), None)
            out[k] = out.get(k, 0) + m
    return out


def function_divisor_parts(F, curve, A, B):
    """div(A(u) + B(u) v) as an exact :class:`Divisor`."""
    A, B = trim(F, A), trim(F, B)
    hr = curve.h
    if not B:
        if not A:
            raise ValueError("the zero function has no divisor")
        m = _places_of_vertical(F, curve, A)
        m["O"] = -2 * deg(A)
        return Divisor(F, m)
    g = poly_gcd(F, A, B) if A else poly_monic(F, B)
    total = Divisor(F)
    if len(g) > 1:
        total = function_divisor_parts(F, curve, g, [])
        A = poly_exact_div(F, A, g)
        B = poly_exact_div(F, B, g)
    N = poly_sub(F, poly_mul(F, A, A), poly_mul(F, poly_mul(F, B, B), hr))
    pole = deg(N)
    zeros = {}
    if pole > 0:
        a = poly_monic(F, N)
        b = poly_mod(F, poly_neg(F, poly_mul(F, A, poly_inv_mod(F, B, a))), a)
        # ramified places can appear with multiplicity > 1 in a; split them off
        zeros = _places_of_line(F, curve, a, b, A, B)
    zeros["O"] = zeros.get("O", 0) - pole
    return total + Divisor(F, zeros)


def _places_of_line(F, curve, a, b, A, B):
    """Zeros of A + B v (A, B coprime) with a = norm, b = -A/B mod a."""
    out = {}
    _, facs = poly_factor(F, a)
    for pi, m in facs:
        d = len(pi) - 1
        beta = _pad(F, poly_mod(F, b, pi), d)
        hm = poly_mod(F, curve.h, pi)
        if not hm:
            # ramified: u - r has order 2 there, and the norm counts the
            # place with multiplicity m, the function vanishes to order m
            out[(tuple(pi), beta)] = out.get((tuple(pi), beta), 0) + m
        else:
            out[(tuple(pi), beta)] = out.get((tuple(pi), beta), 0) + m
    return out


def mumford_divisor(curve, a, b):
    """The effective divisor (a, v - b) as a :class:`Divisor`."""
    return Divisor(curve.field, _places_of_mumford(curve.field, curve, a, b))


def class_divisor(x):
    """D_x - deg(D_x) O for a Jacobian point over the base field."""
    m = _places_of_mumford(x.curve.field, x.curve, x.a, x.b)
    m["O"] = m.get("O", 0) - deg(x.a)
    return Divisor(x.curve.field, m)


def factored_divisor(curve, F):
    total = Divisor(curve.field)
    for A, B, e in F.factors:
        total = total + function_divisor_parts(curve.field, curve, list(A), list(B)) * e
    return total


# ---------------------------------------------------------------------------
# effective divisors with vertical parts, Riemann-Roch spaces


class EffectiveDivisor:
    """Effective divisor S + div_0(c) + o O with S = (a, b) semi-reduced.

    ``c`` is a monic polynomial in u; its zero divisor contains every place
    above each root.  ``o`` is the multiplicity of the place at infinity.
    """

    __slots__ = ("curve", "a", "b", "c", "o")

    def __init__(self, curve, a, b, c=None, o=0):
        F = curve.field
        self.curve = curve
        self.a = a
        self.b = poly_mod(F, b, a) if len(a) > 1 else []
        self.c = c if c is not None else [F.one]
        self.o = o

    @classmethod
    def from_point(cls, x):
        return cls(x.curve, x.a, x.b)

    def degree(self):
        return deg(self.a) + 2 * deg(self.c) + self.o

    def __add__(self, other):
        F = self.curve.field
        a, b, d = compose(self.curve, F, self.a, self.b, other.a, other.b)
        c = poly_mul(F, poly_mul(F, self.c, other.c), d)
        return EffectiveDivisor(self.curve, a, b, c, self.o + other.o)

    def __mul__(self, n):
        F = self.curve.field
        out = EffectiveDivisor(self.curve, [F.one], [])
        for _ in range(n):
            out = out + self
        return out

    __rmul__ = __mul__

    def opposite(self):
        F = self.curve.field
        return EffectiveDivisor(self.curve, self.a, poly_neg(F, self.b), self.c, self.o)

    def finite_support(self):
        """Product of the u-polynomials carrying the finite support."""
        return poly_mul(self.curve.field, self.a, self.c)

    def to_divisor(self):
        F = self.curve.field
        d = Divisor(F, _places_of_mumford(F, self.curve, self.a, self.b))
        d = d + Divisor(F, _places_of_vertical(F, self.curve, self.c))
        return d + Divisor(F, {"O": self.o})

    def __repr__(self):
        return "EffectiveDivisor(a=%s, b=%s, c=%s, o=%d)" % (self.a, self.b, self.c, self.o)


class CurveFunction:
    """(A(u) + B(u) v) / den(u) over the base field."""

    __slots__ = ("A", "B", "den")

    def __init__(self, A, B, den):
        self.A, self.B, self.den = A, B, den

    def __repr__(self):
        return "(%s + (%s) v)/(%s)" % (self.A, self.B, self.den)

    def factored(self, F):
        factors = [(self.A, self.B, 1)]
        if len(self.den) > 1:
            factors.append((self.den, [], -1))
        return FactoredFunction(F, factors)

    def divisor(self, curve):
        d = function_divisor_parts(curve.field, curve, self.A, self.B)
        if len(self.den) > 1:
            d = d - function_divisor_parts(curve.field, curve, self.den, [])
        return d

    def residue(self, S, x):
        """The function restricted to D_x, as c0 + c1 u mod a_x."""
        a0, a1 = x.a[0], x.a[1]
        F = x.curve.field
        A = poly_map(S, F, self.A)
        B = poly_map(S, F, self.B)
        den = poly_map(S, F, self.den)
        b = x.b
        bb = (b[0] if b else S.zero, b[1] if len(b) > 1 else S.zero)
        c = residue_quadratic(S, A, a0, a1)
        if B:
            m = mul_quadratic(S, residue_quadratic(S, B, a0, a1), bb, a0, a1)
            c = (S.add(c[0], m[0]), S.add(c[1], m[1]))
        if len(den) > 1:
            d0, d1 = residue_quadratic(S, den, a0, a1)
            i0, i1 = inv_quadratic(S, d0, d1, a0, a1)
            c = mul_quadratic(S, c, (i0, i1), a0, a1)
        return c

    def alpha(self, x):
        """Norm of the function along D_x."""
        S = x.ring
        c0, c1 = self.residue(S, x)
        return norm_quadratic(S, c0, c1, x.a[0], x.a[1])

    def at_point(self, P):
        S = P.ring
        F = P.curve.field
        A = poly_map(S, F, self.A)
        B = poly_map(S, F, self.B)
        den = poly_map(S, F, self.den)
        num = S.add(poly_eval(S, A, P.u), S.mul(poly_eval(S, B, P.u), P.v))
        return S.div(num, poly_eval(S, den, P.u))


def lnO_basis(curve, N, vanish_on=None):
    """Basis of {A + Bv : pole order at O <= N, vanishing on a finite effective divisor}.

    Sorted by pole order so the basis is deterministic.
    """
    F = curve.field
    nA = N // 2 + 1 if N >= 0 else 0
    nB = (N - 5) // 2 + 1 if N >= 5 else 0
    cols = [(k, 0) for k in range(nA)] + [(k, 1) for k in range(nB)]
    if not cols:
        return []
    # order columns by decreasing pole order so that the kernel basis read off
    # the echelon form has distinct leading pole orders
    cols.sort(key=lambda kt: -(2 * kt[0] + 5 * kt[1]))
    rows = _vanishing_rows(curve, cols, vanish_on) if vanish_on is not None else []
    n = len(cols)
    vecs = kernel(F, rows, n) if rows else [
        [F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    out = []
    for v in vecs:
        A = trim(F, _collect(F, v, cols, 0))
        B = trim(F, _collect(F, v, cols, 1))
        out.append((A, B))
    out.sort(key=lambda AB: _pole(AB[0], AB[1]))
    return out


def _collect(F, v, cols, t):
    n = max([k for k, tt in cols if tt == t], default=-1) + 1
    out = [F.zero] * n
    for x, (k, tt) in zip(v, cols):
        if tt == t:
            out[k] = x
    return out


def _pole(A, B):
    return max(2 * deg(A) if A else -1, 2 * deg(B) + 5 if B else -1)


def _vanishing_rows(curve, cols, E):
    F = curve.field
    rows = []
    c = E.c
    if len(c) > 1:
        # c | A and c | B
        dc = deg(c)
        for t in (0, 1):
            images = []
            for k, tt in cols:
                if tt != t:
                    images.append([])
                else:
                    images.append(poly_mod(F, [F.zero] * k + [F.one], c))
            for r in range(dc):
                rows.append([im[r] if r < len(im) else F.zero for im in images])
    if len(E.a) > 1:
        # given c | A and c | B:  (A + B b)/c = 0 mod a  <=>  A + B b = 0 mod a c
        mod = poly_mul(F, E.a, c)
        images = []
        for k, t in cols:
            mono = [F.zero] * k + [F.one]
            if t == 1:
                mono = poly_mul(F, mono, E.b)
            images.append(poly_mod(F, mono, mod))
        for r in range(deg(mod)):
            rows.append([im[r] if r < len(im) else F.zero for im in images])
    return rows


def rr_basis(curve, m, pos=None, neg=None):
    """Basis of L(m O + pos - neg) for effective divisors pos, neg.

    Functions are returned as :class:`CurveFunction` objects ``(A + Bv)/den``
    where den is the vertical polynomial clearing the finite poles.  The
    space is computed inside L(N O) by linear conditions modulo Mumford
    ideals.
    """
    F = curve.field
    one = [F.one]
    pos = pos if pos is not None else EffectiveDivisor(curve, one, [])
    neg = neg if neg is not None else EffectiveDivisor(curve, one, [])
    m = m + pos.o - neg.o
    # f in L(mO + pos - neg)  <=>  f * phi in L((m + 2k)O - neg - iota(S))
    # with pos = S + div_0(c), phi = a_S c and k = deg(phi)
    phi = poly_mul(F, pos.a, pos.c)
    N = m + 2 * deg(phi)
    if N < 0:
        return []
    target = EffectiveDivisor(curve, neg.a, neg.b, neg.c) + EffectiveDivisor(
        curve, pos.a, poly_neg(F, pos.b))
    basis = lnO_basis(curve, N, target)
    return [CurveFunction(A, B, phi) for A, B in basis]


def _mumford_of_zeros(curve, A, B):
    """Semi-reduced divisor of zeros of A + B v with gcd(A, B) = 1, B != 0."""
    F = curve.field
    N = poly_sub(F, poly_mul(F, A, A), poly_mul(F, poly_mul(F, B, B), curve.h))
    a = poly_monic(F, N)
    b = poly_mod(F, poly_neg(F, poly_mul(F, A, poly_inv_mod(F, B, a))), a)
    return a, b


def zeros_of(curve, A, B):
    """The zero divisor of A + B v as an EffectiveDivisor (finite part only)."""
    F = curve.field
    A, B = trim(F, A), trim(F, B)
    if not B:
        return EffectiveDivisor(curve, [F.one], [], poly_monic(F, A))
    g = poly_gcd(F, A, B) if A else poly_monic(F, B)
    A1, B1 = poly_exact_div(F, A, g), poly_exact_div(F, B, g)
    N = poly_sub(F, poly_mul(F, A1, A1), poly_mul(F, poly_mul(F, B1, B1), curve.h))
    if len(N) <= 1:
        return EffectiveDivisor(curve, [F.one], [], g)
    a, b = _mumford_of_zeros(curve, A1, B1)
    return EffectiveDivisor(curve, a, b, g)


def divisor_plus(curve, f, E):
    """div(f) + E for f in L(E), returned as an EffectiveDivisor."""
    F = curve.field
    Z = zeros_of(curve, f.A, f.B)
    pole = _pole(trim(F, f.A), trim(F, f.B))
    # div(A + Bv) = Z - pole O ;  div(den) = div_0(den) - 2 deg(den) O
    # E = pos part cleared by den: for den = a_S c, div_0(den) = S + iota S + div_0(c)
    if len(f.den) > 1:
        # div(den) = S + iota(S) + div_0(c) - 2 deg(den) O, so
        # div(f) + E = Z - iota(S) + (o + 2 deg(den) - pole) O
        Z = _subtract(curve, Z, EffectiveDivisor(curve, E.a, poly_neg(F, E.b)))
        if Z is None:
            return None
        o = E.o + 2 * deg(f.den) - pole
        if o < 0:
            return None
        return EffectiveDivisor(curve, Z.a, Z.b, Z.c, Z.o + o)
    o = E.o - pole
    if o < 0:
        return None
    return Z + EffectiveDivisor(curve, E.a, E.b, E.c, o)


def _subtract(curve, Z, E):
    """Z - E for a semi-reduced E contained in Z."""
    F = curve.field
    if len(E.a) <= 1:
        return Z
    q, r = poly_divmod(F, Z.a, E.a)
    if not r and not poly_mod(F, poly_sub(F, Z.b, E.b), E.a):
        return EffectiveDivisor(curve, q, Z.b, Z.c, Z.o)
    # E sits (partly) in the vertical part; peel one irreducible factor at a time
    g = poly_gcd(F, Z.a, E.a)
    if len(g) > 1 and not poly_mod(F, poly_sub(F, Z.b, E.b), g):
        rest = _subtract(curve, EffectiveDivisor(curve, poly_exact_div(F, Z.a, g), Z.b, Z.c, Z.o),
                         EffectiveDivisor(curve, poly_exact_div(F, E.a, g), E.b))
        return rest
    q2, r2 = poly_divmod(F, Z.c, E.a)
    if r2:
        return None
    rest = EffectiveDivisor(curve, Z.a, Z.b, q2, Z.o)
    return rest + EffectiveDivisor(curve, E.a, poly_neg(F, E.b))


def find_disjoint_representative(u, avoid=(), rng=None, tries=300):
    """Effective divisor D of degree 3 with D - 3O in the class u.

    Random f in L(U + (3 - d) O), d = deg U, are tried until
    ``div(f) + U + (3 - d) O`` has finite support coprime to every
    polynomial in ``avoid``.  D may contain vertical pairs and O.
    Returns ``(D, f)``.
    """
    curve = u.curve
    F = curve.field
    rng = rng or _random.Random(0)
    E = EffectiveDivisor(curve, u.a, u.b, None, 3 - u.degree)
    basis = rr_basis(curve, 0, pos=E)
    for _ in range(tries):
        coeffs = [F.random(rng) for _ in basis]
        if all(c == 0 for c in coeffs):
            continue
        A, B = [], []
        for c, f in zip(coeffs, basis):
            A = poly_add(F, A, poly_scale(F, c, f.A))
            B = poly_add(F, B, poly_scale(F, c, f.B))
        f = CurveFunction(A, B, basis[0].den)
        D = divisor_plus(curve, f, E)
        if D is None or D.degree() != 3:
            continue
        supp = D.finite_support()
        if any(len(poly_gcd(F, supp, av)) > 1 for av in avoid):
            continue
        return D, f
    raise Exhausted("no representative avoids the given supports")


def principal_function(curve, parts):
    """A :class:`FactoredFunction` with divisor sum n_j (M_j - deg(M_j) O).

    ``parts`` is a list of ``(n_j, a_j, b_j)`` with (a_j, b_j) semi-reduced
    Mumford divisors over the base field.  Raises :class:`NotPrincipal` if
    the class of the combination is not trivial.
    """
    F = curve.field
    total = FactoredFunction(F)
    cycle = []
    for n, a, b in parts:
        fac = []
        ar, br = reduce_divisor(curve, F, a, poly_mod(F, b, a) if len(a) > 1 else [], fac)
        # M - deg(M) O = (R - deg(R) O) + div(fac)
        total = total * (FactoredFunction(F, fac) ** n)
        cycle.append((n, JacobianPoint(curve, F, ar, br)))
    return total * principal_from_classes(ZeroCycle(cycle))
