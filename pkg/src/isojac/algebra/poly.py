"""Univariate polynomials over an algebra.

A polynomial is a list of raw coefficients in ascending degree with no
trailing zeros; the zero polynomial is ``[]``.  Every function takes the
coefficient algebra ``R`` as first argument.
"""

import random as _random

from ..errors import NonUnit


def trim(R, f):
    f = list(f)
    while f and R.is_zero(f[-1]):
        f.pop()
    return f


def deg(f):
    return len(f) - 1


def poly_const(R, c):
    return [] if R.is_zero(c) else [c]


def poly_x(R):
    return [R.zero, R.one]


def poly_add(R, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = R.add(out[i], c)
    return trim(R, out)


def poly_sub(R, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else R.zero
        b = g[i] if i < len(g) else R.zero
        out.append(R.sub(a, b))
    return trim(R, out)


def poly_neg(R, f):
    return [R.neg(c) for c in f]


def poly_scale(R, c, f):
    return trim(R, [R.mul(c, a) for a in f])


def poly_mul(R, f, g):
    if not f or not g:
        return []
    if R.base is None:
        p = R.p
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] += a * b
        return trim(R, [c % p for c in out])
    out = [R.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if R.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = R.add(out[i + j], R.mul(a, b))
    return trim(R, out)


def poly_pow(R, f, n):
    out = [R.one]
    while n:
        if n & 1:
            out = poly_mul(R, out, f)
        n >>= 1
        if n:
            f = poly_mul(R, f, f)
    return out


def poly_divmod(R, f, g):
    """Quotient and remainder; the leading coefficient of g must be a unit."""
    if not g:
        raise NonUnit("division by the zero polynomial")
    lc = g[-1]
    if R.is_unit(lc):
        ilc = R.inv(lc)
    else:
        raise NonUnit("leading coefficient is not a unit")
    f = list(f)
    dg = len(g) - 1
    if len(f) <= dg:
        return [], trim(R, f)
    q = [R.zero] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if R.is_zero(c):
            continue
        c = R.mul(c, ilc)
        q[k - dg] = c
        for j in range(dg + 1):
            f[k - dg + j] = R.sub(f[k - dg + j], R.mul(c, g[j]))
    return trim(R, q), trim(R, f[:dg])


def poly_mod(R, f, g):
    return poly_divmod(R, f, g)[1]


def poly_exact_div(R, f, g):
    q, r = poly_divmod(R, f, g)
    if r:
        raise ValueError("polynomial division is not exact")
    return q


def poly_eval(R, f, x):
    out = R.zero
    for c in reversed(f):
        out = R.add(R.mul(out, x), c)
    return out


def poly_deriv(R, f):
    return trim(R, [R.mul(R.from_int(k), f[k]) for k in range(1, len(f))])


def poly_monic(R, f):
    if not f:
        return []
    ilc = R.inv(f[-1])
    return [R.mul(ilc, c) for c in f[:-1]] + [R.one]


def poly_compose(R, f, g):
    """f(g(x))."""
    out = []
    for c in reversed(f):
        out = poly_add(R, poly_mul(R, out, g), poly_const(R, c))
    return out


def poly_shift(R, f, c):
    """f(x + c)."""
    return poly_compose(R, f, trim(R, [c, R.one]))


def poly_map(R, S, f):
    """Map the coefficients of f from the subalgebra S into R."""
    return trim(R, [R.embed(c, S) for c in f])


def poly_gcd(R, f, g):
    """Monic gcd over a field."""
    f, g = trim(R, f), trim(R, g)
    while g:
        f, g = g, poly_mod(R, f, g)
    return poly_monic(R, f)


def poly_xgcd(R, f, g):
    """(d, s, t) with s*f + t*g = d monic, over a field."""
    r0, r1 = trim(R, f), trim(R, g)
    s0, s1, t0, t1 = [R.one], [], [], [R.one]
    while r1:
        q, r = poly_divmod(R, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(R, s0, poly_mul(R, q, s1))
        t0, t1 = t1, poly_sub(R, t0, poly_mul(R, q, t1))
    if not r0:
        return [], s0, t0
    ilc = R.inv(r0[-1])
    return (poly_scale(R, ilc, r0), poly_scale(R, ilc, s0), poly_scale(R, ilc, t0))


def poly_inv_mod(R, f, m):
    """Inverse of f modulo the monic m.

    Over a field this is the extended Euclidean algorithm.  Over other rings
    the multiplication map on ``R[x]/m`` is inverted by linear algebra, which
    works exactly when the resultant of f and m is a unit.
    """
    f = poly_mod(R, f, m)
    if R.is_field:
        d, s, _ = poly_xgcd(R, f, m)
        if len(d) != 1:
            raise NonUnit("polynomial is not invertible modulo m")
        return poly_mod(R, s, m)
    from .linalg import solve
    n = len(m) - 1
    cols = []
    x = f
    for k in range(n):
        col = list(x) + [R.zero] * (n - len(x))
        cols.append(col)
        x = poly_mod(R, poly_mul(R, x, [R.zero, R.one]), m)
    M = [[cols[j][i] for j in range(n)] for i in range(n)]
    rhs = [R.one] + [R.zero] * (n - 1)
    try:
        sol = solve(R, M, rhs)
    except Exception as exc:
        raise NonUnit("polynomial is not invertible modulo m") from exc
    return trim(R, sol)


def poly_powmod(R, f, n, m):
    out = [R.one]
    f = poly_mod(R, f, m)
    while n:
        if n & 1:
            out = poly_mod(R, poly_mul(R, out, f), m)
        n >>= 1
        if n:
            f = poly_mod(R, poly_mul(R, f, f), m)
    return out


def poly_resultant(R, f, g):
    """Resultant over a field (Euclidean algorithm)."""
    f, g = trim(R, f), trim(R, g)
    if not f or not g:
        return R.zero
    res = R.one
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return R.mul(res, R.pow(g[0], df))
        r = poly_mod(R, f, g)
        if not r:
            return R.zero
        dr = len(r) - 1
        # res(f, g) = (-1)^(df*dg) lc(g)^(df-dr) res(g, r)
        res = R.mul(res, R.pow(g[-1], df - dr))
        if df * dg % 2:
            res = R.neg(res)
        f, g = g, r


def poly_squarefree(R, f):
    """Squarefree part of a polynomial over a prime-characteristic field.

    Only valid when deg f < p, which is the only case used here.
    """
    g = poly_gcd(R, f, poly_deriv(R, f))
    return poly_monic(R, poly_exact_div(R, f, g))


def is_irreducible(R, f):
    """Irreducibility over a finite field (Ben-Or style test)."""
    f = poly_monic(R, trim(R, f))
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    q = R.order
    x = [R.zero, R.one]
    h = x
    for _ in range(n // 2):
        h = poly_powmod(R, h, q, f)
        if len(poly_gcd(R, f, poly_sub(R, h, x))) > 1:
            return False
    return True


def poly_roots(R, f, rng=None):
    """Distinct roots of f in the finite field R, sorted canonically."""
    f = trim(R, f)
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    if len(f) == 1:
        return []
    f = poly_monic(R, f)
    q = R.order
    x = [R.zero, R.one]
    g = poly_gcd(R, f, poly_sub(R, poly_powmod(R, x, q, f), x))
    rng = rng or _random.Random(len(f) * 7919 + q)
    roots = []
    _split_linear(R, g, rng, roots)
    roots.sort(key=R.key)
    return roots


def _split_linear(R, g, rng, out):
    d = len(g) - 1
    if d <= 0:
        return
    if d == 1:
        out.append(R.neg(g[0]))
        return
    if d == 2 and R.p != 2:
        b, c = g[1], g[0]
        disc = R.sub(R.mul(b, b), R.mul(R.from_int(4), c))
        s = R.sqrt(disc)
        half = R.inv(R.from_int(2))
        out.append(R.mul(R.sub(s, b), half))
        out.append(R.mul(R.sub(R.neg(s), b), half))
        return
    q = R.order
    while True:
        delta = R.random(rng)
        h = poly_powmod(R, [delta, R.one], (q - 1) // 2, g)
        k = poly_gcd(R, g, poly_sub(R, h, [R.one]))
        if 0 < len(k) - 1 < d:
            _split_linear(R, k, rng, out)
            _split_linear(R, poly_exact_div(R, g, k), rng, out)
            return


def poly_to_json(R, f):
    return [R.to_json(c) for c in f]


def poly_factor(R, f, rng=None):
    """Factor a nonzero polynomial over a finite field into monic irreducibles.

    Returns ``(leading_coefficient, [(factor, multiplicity), ...])`` with the
    factors sorted by degree and then canonically.  Assumes deg f < p so that
    Yun's squarefree decomposition applies.
    """
    f = trim(R, f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    lc = f[-1]
    f = poly_monic(R, f)
    rng = rng or _random.Random(len(f) * 104729 + R.order)
    out = []
    for part, mult in _yun(R, f):
        for dd, g in _distinct_degree(R, part):
            for irr in _equal_degree(R, g, dd, rng):
                out.append((irr, mult))
    out.sort(key=lambda fm: (len(fm[0]), [R.key(c) for c in fm[0]], fm[1]))
    return lc, out


def _yun(R, f):
    out = []
    df = poly_deriv(R, f)
    a = poly_gcd(R, f, df)
    b = poly_exact_div(R, f, a)
    c = poly_exact_div(R, df, a)
    d = poly_sub(R, c, poly_deriv(R, b))
    i = 1
    while len(b) > 1:
        a = poly_gcd(R, b, d)
        b = poly_exact_div(R, b, a)
        c = poly_exact_div(R, d, a)
        d = poly_sub(R, c, poly_deriv(R, b))
        if len(a) > 1:
            out.append((a, i))
        i += 1
    return out


def _distinct_degree(R, f):
    out = []
    q = R.order
    x = [R.zero, R.one]
    h = x
    d = 0
    while 2 * (d + 1) <= len(f) - 1:
        d += 1
        h = poly_powmod(R, h, q, f)
        g = poly_gcd(R, f, poly_sub(R, h, x))
        if len(g) > 1:
            out.append((d, g))
            f = poly_exact_div(R, f, g)
            h = poly_mod(R, h, f) if len(f) > 1 else h
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def _equal_degree(R, g, d, rng):
    n = len(g) - 1
    if n == d:
        return [g]
    q = R.order
    while True:
        r = trim(R, [R.random(rng) for _ in range(n)])
        if len(r) < 2:
            continue
        e = (q ** d - 1) // 2
        k = poly_gcd(R, g, poly_sub(R, poly_powmod(R, r, e, g), [R.one]))
        if 0 < len(k) - 1 < n:
            return (_equal_degree(R, k, d, rng)
                    + _equal_degree(R, poly_exact_div(R, g, k), d, rng))
