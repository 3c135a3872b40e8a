"""Brute-force reference computations for the small test curves.

Nothing here calls into isojac: polynomials are plain int lists mod p
(ascending coefficients), F_p^2 is F_p[i] with i^2 = -1 (so p = 3 mod 4),
and divisor classes are (a, b) Mumford pairs of int tuples.
"""


# ---------------------------------------------------------------------------
# polynomials over F_p


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def padd(p, f, g):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def pneg(p, f):
    return [-c % p for c in f]


def psub(p, f, g):
    return padd(p, f, pneg(p, g))


def pmul(p, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim([c % p for c in out])


def pdivmod(p, f, g):
    f, g = trim(f), trim(g)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g) and r:
        c = r[-1] * inv % p
        k = len(r) - len(g)
        q[k] = c
        for i, x in enumerate(g):
            r[k + i] = (r[k + i] - c * x) % p
        r = trim(r)
    return trim(q), r


def pmonic(p, f):
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def pinv_mod(p, f, m):
    """f^-1 mod m by the extended Euclidean algorithm."""
    r0, r1, s0, s1 = trim(m), pdivmod(p, f, m)[1], [], [1]
    while r1:
        q, r = pdivmod(p, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(p, s0, pmul(p, q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("not invertible")
    c = pow(r0[0], -1, p)
    return [x * c % p for x in s0]


def peval(p, f, x):
    out = 0
    for c in reversed(f):
        out = (out * x + c) % p
    return out


def from_roots(p, roots):
    h = [1]
    for r in roots:
        h = pmul(p, h, [-r % p, 1])
    return h


# ---------------------------------------------------------------------------
# F_p^2 = F_p[i], i^2 = -1


def cmul(p, x, y):
    return ((x[0] * y[0] - x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)


def ceval(p, f, z):
    out = (0, 0)
    for c in reversed(f):
        out = cmul(p, out, z)
        out = ((out[0] + c) % p, out[1])
    return out


def legendre(p, a):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_table(p):
    table = {}
    for v in range(p):
        table.setdefault(v * v % p, []).append(v)
    return table


# ---------------------------------------------------------------------------
# point counts and the group order


def count_points(p, h):
    """(#C(F_p), #C(F_p^2)) for v^2 = h(u), h monic of degree 5."""
    n1 = 1 + sum(1 + legendre(p, peval(p, h, u)) for u in range(p))
    n2 = 1
    for a in range(p):
        for b in range(p):
            z = ceval(p, h, (a, b))
            n2 += 1 + legendre(p, z[0] * z[0] + z[1] * z[1])
    return n1, n2


def jacobian_orders(p, n1, n2):
    """(#J(F_p), #J(F_p^2)) from the two point counts via the L-polynomial."""
    c1 = n1 - p - 1
    c2 = (c1 * c1 - (p * p + 1 - n2)) // 2
    L1 = 1 + c1 + c2 + p * c1 + p * p
    Lm1 = 1 - c1 + c2 - p * c1 + p * p
    return L1, L1 * Lm1


# ---------------------------------------------------------------------------
# divisor classes


def _line(p, P, Q):
    (u1, v1), (u2, v2) = P, Q
    s = (v2 - v1) * pow(u2 - u1, -1, p) % p
    return trim([(v1 - s * u1) % p, s])


def enumerate_classes(p, h):
    """Every reduced Mumford pair (a, b) of J(F_p), listed point by point."""
    roots = sqrt_table(p)
    pts = [(u, v) for u in range(p) for v in roots.get(peval(p, h, u), [])]
    out = {((1,), ())}
    for u, v in pts:
        out.add(((-u % p, 1), tuple(trim([v]))))
    dh = trim([(k * c) % p for k, c in enumerate(h)][1:])
    for i, P in enumerate(pts):
        for Q in pts[i:]:
            if P[0] == Q[0]:
                if P[1] != Q[1] or P[1] == 0:
                    continue
                # tangent line: b(u) = v, b'(u) = h'(u) / 2v
                u, v = P
                s = peval(p, dh, u) * pow(2 * v, -1, p) % p
                b = trim([(v - s * u) % p, s])
            else:
                b = _line(p, P, Q)
            a = pmul(p, [-P[0] % p, 1], [-Q[0] % p, 1])
            out.add((tuple(a), tuple(b)))
    # conjugate pairs over F_p^2 with u outside F_p
    for x in range(p):
        for y in range(1, p):
            hz = ceval(p, h, (x, y))
            for w in _csqrt(p, hz, roots):
                # a = (U - z)(U - zbar), b the line through (z, w), (zbar, wbar)
                a = (x * x + y * y) % p, (-2 * x) % p, 1
                s = w[1] * pow(y, -1, p) % p
                c = (w[0] - s * x) % p
                out.add((a, tuple(trim([c, s]))))
    return out


def _csqrt(p, z, roots):
    """Square roots of z in F_p[i]."""
    n = (z[0] * z[0] + z[1] * z[1]) % p
    out = []
    for m in roots.get(n, []):
        # w = s + t i, s^2 - t^2 = z0, 2 s t = z1, s^2 + t^2 = m
        s2 = (z[0] + m) * pow(2, -1, p) % p
        for s in roots.get(s2, []):
            if s:
                t = z[1] * pow(2 * s, -1, p) % p
                if (s * s - t * t) % p == z[0] % p:
                    out.append((s, t))
            elif z[1] == 0:
                for t in roots.get((-z[0]) % p, []):
                    out.append((0, t))
    return sorted(set(out))


def add_classes(p, h, D1, D2):
    """D1 + D2 for coprime supports: CRT interpolation, then residual reduction."""
    (a1, b1), (a2, b2) = [(list(a), list(b)) for a, b in (D1, D2)]
    if len(a1) == 1:
        return D2
    if len(a2) == 1:
        return D1
    # b = b1 + a1 * ((b2 - b1) a1^-1 mod a2)
    k = pdivmod(p, pmul(p, psub(p, b2, b1), pinv_mod(p, a1, a2)), a2)[1]
    a = pmul(p, a1, a2)
    b = padd(p, b1, pmul(p, a1, k))
    while len(a) > 3:
        q, r = pdivmod(p, psub(p, h, pmul(p, b, b)), a)
        assert not r
        a = pmonic(p, q)
        b = pdivmod(p, pneg(p, b), a)[1]
    b = pdivmod(p, b, a)[1] if len(a) > 1 else []
    return tuple(a), tuple(b)


def coprime(p, a1, a2):
    r0, r1 = trim(a1), trim(a2)
    while r1:
        r0, r1 = r1, pdivmod(p, r0, r1)[1]
    return len(r0) == 1


# ---------------------------------------------------------------------------
# the quadratic twist, used to reach the Frobenius-anti-invariant torsion


def twist_roots(p, roots, d):
    """Roots of the monic model V^2 = H(U) of d v^2 = h(u), via U = d u."""
    return [d * r % p for r in roots]


def least_nonresidue(p):
    return next(d for d in range(2, p) if legendre(p, d) == -1)
