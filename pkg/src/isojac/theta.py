"""Canonical Theta functions of l-torsion points and the pairings they define.

For u with l u = 0 and v = ((l + 1)/2) u,

    theta_u(x) = eta[l[v], v - x](x - v),

so one Eta evaluation gives one Theta value.  The commutator pairing is
read off the addition law theta_{u+v} = f_l(u, v) theta_v (theta_u o t_{-v}).
"""

import random as _random

from .algebra.rings import PrimeField
from .curve import ZeroCycle
from .errors import EvaluationFailed, Inconsistent, NotTorsion, OnDivisor, DivisorMeetsSupport
from .eta import RETRIES, EtaFunction, eta_eval, same_ring


def _check_torsion(u, l):
    if l < 3 or l % 2 == 0:
        raise ValueError("l must be an odd prime")
    if not (u * l).is_zero():
        raise NotTorsion("the point is not killed by l")


class ThetaFunction:
    """theta_u for one l-torsion point u; the Miller data is built on first use."""

    def __init__(self, u, l, check=True):
        if check:
            _check_torsion(u, l)
        self.u, self.l = u, l
        self.v = u * ((l + 1) // 2)
        self.trivial = u.is_zero()
        self._eta = None

    @property
    def eta(self):
        if self._eta is None:
            self._eta = EtaFunction(ZeroCycle([(self.l, self.v)]), self.u.curve.zero(self.u.ring),
                                    retries=RETRIES)
        return self._eta

    def __call__(self, x, rng=None):
        if self.trivial:
            return x.ring.one
        x, v = same_ring(x, self.v)
        z = x - v
        try:
            return self.eta(z, -z)
        except EvaluationFailed:
            if not isinstance(x.ring, PrimeField):
                raise
        return eta_eval(ZeroCycle([(self.l, v)]), -z, z, rng)


def theta_eval(u, x, l, rng=None):
    """theta_u(x)."""
    return ThetaFunction(u, l)(x, rng)


def _pairing_at(tu, tv, x):
    u, v = tu.u, tv.u
    x, u, v = same_ring(x, u, v)
    num = x.ring.mul(tu(x), tv(x - u))
    den = x.ring.mul(tv(x), tu(x - v))
    R = x.ring
    return R.div(num, den)


def pairing(u, v, l, rng=None, samples=2, tries=50):
    """The commutator pairing e_l(u, v), checked at ``samples`` random points."""
    _check_torsion(u, l)
    _check_torsion(v, l)
    rng = rng or _random.Random(0)
    tu, tv = ThetaFunction(u, l, False), ThetaFunction(v, l, False)
    u, v = same_ring(u, v)
    R = u.ring
    values = []
    for _ in range(tries):
        x = u.curve.random_jacobian_point(rng, R)
        try:
            values.append(_pairing_at(tu, tv, x))
        except (OnDivisor, EvaluationFailed, DivisorMeetsSupport):
            continue
        if len(values) == samples:
            break
    if len(values) < samples:
        raise OnDivisor("no valid sample point found")
    e = values[0]
    if any(w != e for w in values[1:]):
        raise Inconsistent("pairing depends on the sample point")
    if R.pow(e, l) != R.one:
        raise Inconsistent("pairing value is not an l-th root of unity")
    return e


def half_pairing(u, v, l, rng=None):
    """f_l(u, v) = e_l(u, v)^((l + 1)/2)."""
    e = pairing(u, v, l, rng)
    R = same_ring(u, v)[0].ring
    return R.pow(e, (l + 1) // 2)
