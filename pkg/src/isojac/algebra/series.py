"""Truncated power series helpers, Hensel lifting, rational fractions and Padé.

Series live in :class:`~isojac.algebra.rings.SeriesRing` objects, whose
accuracy is fixed per ring; changing accuracy is always explicit.
"""

from ..errors import AccuracyTooLow, NoPadeSolution, NonUnit, SingularLift
from .poly import (deg, poly_add, poly_deriv, poly_divmod, poly_eval, poly_gcd,
                   poly_monic, poly_mul, poly_neg, poly_scale, poly_sub,
                   poly_to_json, trim, poly_exact_div, poly_shift)
from .rings import SeriesRing


def series_from_poly(S, f):
    """Image in the series ring S of a polynomial in t over S.base."""
    return S.from_coeffs(list(f)[: S.degree])


def hensel_root(S, f, x0):
    """Lift a simple root of ``f`` (coefficients in S) from the residue field.

    ``x0`` is a root of f mod t in ``S.base``.  Newton iteration doubles the
    number of correct coefficients each round.
    """
    B = S.base
    x = S.from_base(x0)
    df = poly_deriv(S, f)
    residue = poly_eval(S, df, x)
    if not S.is_unit(residue):
        raise SingularLift("derivative vanishes at the residue root")
    if not B.is_zero(poly_eval(S, f, x)[0]):
        raise SingularLift("x0 is not a root modulo t")
    known = 1
    while known < S.degree:
        x = S.sub(x, S.div(poly_eval(S, f, x), poly_eval(S, df, x)))
        known *= 2
    if not S.is_zero(poly_eval(S, f, x)):
        raise SingularLift("Newton iteration did not converge")
    return x


def series_sqrt(S, s, x0=None):
    """Square root of s in S with constant term x0 (default: designated root)."""
    B = S.base
    if x0 is None:
        x0 = B.sqrt(s[0])
    return hensel_root(S, [S.neg(s), S.zero, S.one], x0)


def series_compose_poly(S, f, x):
    """f(x) for a polynomial f over S.base and a series x in S."""
    out = S.zero
    for c in reversed(f):
        out = S.add(S.mul(out, x), S.from_base(c))
    return out


class RationalFraction:
    """``scalar * num / den`` over a prime field with num, den monic, coprime."""

    __slots__ = ("field", "num", "den", "scalar")

    def __init__(self, field, num, den=None, normalize=True):
        F = field
        num = trim(F, [F.coerce(c) for c in num])
        den = trim(F, [F.coerce(c) for c in (den if den is not None else [1])])
        if not den:
            raise NonUnit("zero denominator")
        self.field = F
        if normalize:
            if num:
                g = poly_gcd(F, num, den)
                if len(g) > 1:
                    num = poly_exact_div(F, num, g)
                    den = poly_exact_div(F, den, g)
                scalar = F.div(num[-1], den[-1])
                num = poly_monic(F, num)
            else:
                scalar = F.zero
                num = []
                den = [F.one]
            den = poly_monic(F, den)
        else:
            scalar = F.one
        self.num, self.den, self.scalar = num, den, scalar

    @classmethod
    def from_parts(cls, field, scalar, num, den):
        return cls(field, poly_scale(field, field.coerce(scalar), [field.coerce(c) for c in num]), den)

    # polynomials that represent the fraction exactly
    def numerator(self):
        return poly_scale(self.field, self.scalar, self.num)

    def degree(self):
        """max(deg numerator, deg denominator); the zero fraction has degree 0."""
        return max(deg(self.num), deg(self.den), 0)

    def _make(self, num, den):
        return RationalFraction(self.field, num, den)

    def _lift(self, other):
        if isinstance(other, RationalFraction):
            return other
        return RationalFraction(self.field, other if isinstance(other, list) else [other])

    def __add__(self, other):
        o = self._lift(other)
        F = self.field
        return self._make(poly_add(F, poly_mul(F, self.numerator(), o.den),
                                   poly_mul(F, o.numerator(), self.den)),
                          poly_mul(F, self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return self._make(poly_neg(self.field, self.numerator()), self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        F = self.field
        return self._make(poly_mul(F, self.numerator(), o.numerator()), poly_mul(F, self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        F = self.field
        if not o.num:
            raise NonUnit("division by the zero fraction")
        return self._make(poly_mul(F, self.numerator(), o.den), poly_mul(F, self.den, o.numerator()))

    def __eq__(self, other):
        if not isinstance(other, RationalFraction):
            other = self._lift(other)
        return (self.field == other.field and self.num == other.num and self.den == other.den
                and self.scalar == other.scalar)

    def __hash__(self):
        return hash((tuple(self.num), tuple(self.den), self.scalar))

    def __call__(self, x):
        F = self.field
        d = poly_eval(F, self.den, x)
        return F.div(F.mul(self.scalar, poly_eval(F, self.num, x)), d)

    def eval_in(self, R, x):
        """Evaluate at an element x of an algebra R containing the field."""
        num = [R.embed(c, self.field) for c in self.numerator()]
        den = [R.embed(c, self.field) for c in self.den]
        return R.div(poly_eval(R, num, x), poly_eval(R, den, x))

    def expand(self, center, N):
        """Taylor expansion at ``center`` as an element of F[t]/t^N."""
        F = self.field
        S = SeriesRing(F, N)
        num = poly_shift(F, self.numerator(), F.coerce(center))
        den = poly_shift(F, self.den, F.coerce(center))
        return S.div(series_from_poly(S, num), series_from_poly(S, den))

    def to_json(self):
        F = self.field
        return {"num": poly_to_json(F, self.num), "den": poly_to_json(F, self.den),
                "scalar": F.to_json(self.scalar)}

    @classmethod
    def from_json(cls, field, doc):
        return cls.from_parts(field, int(doc["scalar"]), [int(c) for c in doc["num"]],
                              [int(c) for c in doc["den"]])

    def __repr__(self):
        return "%s*(%s)/(%s)" % (self.scalar, _fmt(self.num), _fmt(self.den))


def _fmt(f, var="u"):
    terms = []
    for k in range(len(f) - 1, -1, -1):
        c = f[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else "%s^%d" % (var, k))
        if mono and c == 1:
            terms.append(mono)
        elif mono:
            terms.append("%s%s" % (c, mono))
        else:
            terms.append(str(c))
    return "+".join(terms) if terms else "0"


def pade_reconstruct(s, max_num_deg, max_den_deg, S=None):
    """Rational reconstruction of a series over a field.

    ``s`` is an element of the series ring ``S`` (accuracy N).  Returns
    ``(num, den)`` as polynomials in t with den(0) = 1, or raises
    :class:`NoPadeSolution`.  The reconstruction is checked by re-expansion
    to the full accuracy.
    """
    F = S.base
    N = S.degree
    if N < max_num_deg + max_den_deg + 2:
        raise AccuracyTooLow("need accuracy %d, have %d" % (max_num_deg + max_den_deg + 2, N))
    # extended Euclid on (t^N, s): r_i = u_i t^N + v_i s
    r0, r1 = [F.zero] * N + [F.one], trim(F, list(s))
    v0, v1 = [], [F.one]
    while r1 and deg(r1) > max_num_deg:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        v0, v1 = v1, poly_sub(F, v0, poly_mul(F, q, v1))
    if not r1:
        # s is a polynomial of degree <= max_num_deg times the current v1 ... or zero
        if not trim(F, list(s)):
            return [], [F.one]
        raise NoPadeSolution("no admissible pair")
    num, den = r1, v1
    if deg(den) > max_den_deg or not den or F.is_zero(den[0]):
        raise NoPadeSolution("no admissible pair within the degree bounds")
    g = poly_gcd(F, num, den)
    if len(g) > 1:
        num, den = poly_exact_div(F, num, g), poly_exact_div(F, den, g)
    c = F.inv(den[0])
    num, den = poly_scale(F, c, num), poly_scale(F, c, den)
    check = S.div(series_from_poly(S, num), series_from_poly(S, den))
    if check != tuple(s):
        raise NoPadeSolution("reconstruction does not match the series")
    return num, den


def pade_fraction(s, S, max_num_deg, max_den_deg, center=0):
    """Padé reconstruction recentred so that t = u - center, as a fraction in u."""
    F = S.base
    num, den = pade_reconstruct(s, max_num_deg, max_den_deg, S)
    c = F.coerce(center)
    num = poly_shift(F, num, F.neg(c))
    den = poly_shift(F, den, F.neg(c))
    return RationalFraction(F, num, den)
