"""Prime fields and finite commutative algebras presented as quotient rings.

Each algebra object is an immutable descriptor that performs arithmetic on
raw values: plain ``int`` for :class:`PrimeField`, tuples of base values for
:class:`QuotientAlgebra` and :class:`ProductAlgebra`.  The raw interface is
what the hot loops of the library use.  :class:`Element` wraps a raw value
together with its algebra and gives operator overloading for interactive use.
"""

import random as _random

from ..errors import AlgebraMismatch, NoSquareRoot, NonUnit


class Algebra:
    """Common interface of all algebras."""

    base = None
    p = None
    degree = 1
    is_field = False

    # descriptors compare structurally so independently built copies agree
    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def __call__(self, value):
        return Element(self, self.coerce(value))

    def coerce(self, value):
        """Turn an int, a raw value or an :class:`Element` into a raw value."""
        if isinstance(value, Element):
            if value.ring == self:
                return value.value
            return self.embed(value.value, value.ring)
        if isinstance(value, int):
            return self.from_int(value)
        return value

    @property
    def absolute_degree(self):
        d, R = 1, self
        while R.base is not None:
            d *= R.degree
            R = R.base
        return d

    @property
    def prime_field(self):
        R = self
        while R.base is not None:
            R = R.base
        return R

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def eq(self, a, b):
        return a == b

    def from_base(self, c):
        raise AlgebraMismatch("%r has no base algebra" % self)

    def embed(self, x, src):
        """Map a raw value of a subalgebra ``src`` into this algebra."""
        if src == self:
            return x
        if self.base is not None:
            try:
                return self.from_base(self.base.embed(x, src))
            except AlgebraMismatch:
                pass
        raise AlgebraMismatch("cannot embed %r into %r" % (src, self))

    def norm(self, x):
        raise NotImplementedError

    def trace(self, x):
        raise NotImplementedError

    def absolute_norm(self, x):
        R = self
        while R.base is not None:
            x = R.norm(x)
            R = R.base
        return x

    def absolute_trace(self, x):
        R = self
        while R.base is not None:
            x = R.trace(x)
            R = R.base
        return x


class PrimeField(Algebra):
    """The field F_p; elements are ints in ``[0, p)``."""

    is_field = True

    def __init__(self, p):
        p = int(p)
        if p < 3 or p % 2 == 0 or not _is_probable_prime(p):
            raise ValueError("p must be an odd prime, got %d" % p)
        self.p = p
        self.zero = 0
        self.one = 1
        self.order = p

    def _key(self):
        return (self.p,)

    def __repr__(self):
        return "PrimeField(%d)" % self.p

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise NonUnit("0 is not invertible in F_%d" % self.p)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, n):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def is_unit(self, a):
        return a % self.p != 0

    def random(self, rng):
        return rng.randrange(self.p)

    def norm(self, x):
        return x

    def trace(self, x):
        return x

    def key(self, x):
        return x

    def is_square(self, a):
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a):
        """Designated square root: the smaller of the two representatives."""
        a %= self.p
        if a == 0:
            return 0
        p = self.p
        if pow(a, (p - 1) // 2, p) != 1:
            raise NoSquareRoot("%d is not a square mod %d" % (a, p))
        if p % 4 == 3:
            r = pow(a, (p + 1) // 4, p)
        else:
            r = _tonelli_shanks(a, p)
        return min(r, p - r)

    def to_json(self, x):
        return str(x)


def _tonelli_shanks(a, p):
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _is_probable_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


FIELD_EXTENSION = "field-extension"
LOCAL_SERIES = "local-series"
GENERIC = "generic"


class QuotientAlgebra(Algebra):
    """``base[t]/(f(t))`` for a monic ``f``; elements are coefficient tuples."""

    def __init__(self, base, modulus, kind=GENERIC):
        if kind not in (FIELD_EXTENSION, LOCAL_SERIES, GENERIC):
            raise ValueError("unknown kind %r" % kind)
        modulus = [base.coerce(c) for c in modulus]
        while len(modulus) > 1 and base.is_zero(modulus[-1]):
            modulus.pop()
        if len(modulus) < 2 or not base.eq(modulus[-1], base.one):
            raise ValueError("modulus must be monic of degree >= 1")
        if kind == FIELD_EXTENSION and not base.is_field:
            raise ValueError("a field extension needs a field as base")
        self.base = base
        self.p = base.p
        self.kind = kind
        self.modulus = tuple(modulus)
        self.degree = d = len(modulus) - 1
        self.is_field = kind == FIELD_EXTENSION
        self.zero = (base.zero,) * d
        self.one = (base.one,) + (base.zero,) * (d - 1)
        self._fp = isinstance(base, PrimeField)
        # t^k mod f for k = d .. 2d-2, precomputed for reduction
        self._tail = tuple(base.neg(c) for c in self.modulus[:-1])
        if self.is_field:
            self.order = base.order ** d
        if kind == LOCAL_SERIES and any(not base.is_zero(c) for c in self.modulus[:-1]):
            raise ValueError("a local-series modulus must be t^N")

    def _key(self):
        return (self.base._key(), type(self.base).__name__, self.modulus, self.kind)

    def __repr__(self):
        return "QuotientAlgebra(%r, %s, %s)" % (self.base, list(self.modulus), self.kind)

    # construction helpers
    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero,) * (self.degree - 1)

    def from_base(self, c):
        return (c,) + (self.base.zero,) * (self.degree - 1)

    def gen(self):
        """The class of the variable t."""
        if self.degree == 1:
            return (self.base.neg(self.modulus[0]),)
        return (self.base.zero, self.base.one) + (self.base.zero,) * (self.degree - 2)

    def from_coeffs(self, coeffs):
        B = self.base
        coeffs = [B.coerce(c) for c in coeffs]
        if len(coeffs) > self.degree:
            return self._reduce(coeffs)
        return tuple(coeffs) + (B.zero,) * (self.degree - len(coeffs))

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.degree))

    def key(self, x):
        return tuple(self.base.key(c) for c in x)

    def is_zero(self, a):
        return all(self.base.is_zero(c) for c in a)

    def eq(self, a, b):
        return a == b

    # ring operations
    def add(self, a, b):
        if self._fp:
            p = self.p
            return tuple((x + y) % p for x, y in zip(a, b))
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        if self._fp:
            p = self.p
            return tuple((x - y) % p for x, y in zip(a, b))
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        if self._fp:
            p = self.p
            return tuple(-x % p for x in a)
        return tuple(self.base.neg(x) for x in a)

    def scale(self, c, a):
        """Multiply by a base element."""
        if self._fp:
            p = self.p
            return tuple(c * x % p for x in a)
        B = self.base
        return tuple(B.mul(c, x) for x in a)

    def mul(self, a, b):
        d = self.degree
        if self._fp:
            p = self.p
            if self.kind == LOCAL_SERIES:
                out = [0] * d
                for i, x in enumerate(a):
                    if x:
                        for j in range(d - i):
                            out[i + j] += x * b[j]
                return tuple(c % p for c in out)
            prod = [0] * (2 * d - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] += x * y
            return self._reduce_fp(prod)
        B = self.base
        if self.kind == LOCAL_SERIES:
            out = [B.zero] * d
            for i, x in enumerate(a):
                if not B.is_zero(x):
                    for j in range(d - i):
                        out[i + j] = B.add(out[i + j], B.mul(x, b[j]))
            return tuple(out)
        prod = [B.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if not B.is_zero(x):
                for j, y in enumerate(b):
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        return self._reduce(prod)

    def _reduce_fp(self, prod):
        d, p, tail = self.degree, self.p, self._tail
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(d):
                    prod[k - d + j] += c * tail[j]
        return tuple(c % p for c in prod[:d])

    def _reduce(self, prod):
        if self._fp:
            return self._reduce_fp([c % self.p for c in prod])
        B, d, tail = self.base, self.degree, self._tail
        prod = list(prod)
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if not B.is_zero(c):
                for j in range(d):
                    prod[k - d + j] = B.add(prod[k - d + j], B.mul(c, tail[j]))
        prod = prod[:d]
        return tuple(prod) + (B.zero,) * (d - len(prod))

    def is_unit(self, a):
        if self.kind == FIELD_EXTENSION:
            return not self.is_zero(a)
        if self.kind == LOCAL_SERIES:
            return self.base.is_unit(a[0])
        return self.base.is_unit(self.norm(a))

    def inv(self, a):
        B = self.base
        if self.kind == LOCAL_SERIES:
            if not B.is_unit(a[0]):
                raise NonUnit("series with non-unit constant term")
            d = self.degree
            if self._fp:
                p = self.p
                i0 = pow(a[0], -1, p)
                out = [i0]
                for n in range(1, d):
                    s = 0
                    for k in range(1, n + 1):
                        s += a[k] * out[n - k]
                    out.append(-s * i0 % p)
                return tuple(out)
            i0 = B.inv(a[0])
            out = [i0]
            for n in range(1, d):
                s = B.zero
                for k in range(1, n + 1):
                    s = B.add(s, B.mul(a[k], out[n - k]))
                out.append(B.neg(B.mul(s, i0)))
            return tuple(out)
        if self.kind == FIELD_EXTENSION:
            if self.is_zero(a):
                raise NonUnit("0 is not invertible")
            if self._fp and self.degree == 2:
                # conjugate of x + y t is x - c1 y - y t; their product is the norm
                p = self.p
                c0, c1 = self.modulus[0], self.modulus[1]
                x, y = a
                n = (x * x - c1 * x * y + c0 * y * y) % p
                ni = pow(n, -1, p)
                return ((x - c1 * y) * ni % p, -y * ni % p)
            from .poly import poly_inv_mod
            inv = poly_inv_mod(B, list(a), list(self.modulus))
            return tuple(inv) + (B.zero,) * (self.degree - len(inv))
        from .linalg import solve
        M = self.mult_matrix(a)
        try:
            x = solve(B, M, list(self.one))
        except Exception as exc:
            raise NonUnit("element is not a unit") from exc
        return tuple(x)

    def mult_matrix(self, a):
        """Matrix (rows) of multiplication by ``a`` on the basis 1, t, ..."""
        cols = []
        x = a
        t = self.gen() if self.degree > 1 else None
        for k in range(self.degree):
            cols.append(x)
            if k + 1 < self.degree:
                x = self.mul(x, t)
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def norm(self, x):
        B = self.base
        if self.kind == LOCAL_SERIES:
            return B.pow(x[0], self.degree)
        from .linalg import determinant
        return determinant(B, self.mult_matrix(x))

    def trace(self, x):
        B = self.base
        if self.kind == LOCAL_SERIES:
            return B.mul(B.from_int(self.degree), x[0])
        M = self.mult_matrix(x)
        s = B.zero
        for i in range(self.degree):
            s = B.add(s, M[i][i])
        return s

    def embed(self, x, src):
        if src == self:
            return x
        if (isinstance(src, QuotientAlgebra) and src.kind == self.kind == LOCAL_SERIES
                and src.degree == self.degree):
            try:
                return tuple(self.base.embed(c, src.base) for c in x)
            except AlgebraMismatch:
                pass
        return Algebra.embed(self, x, src)

    # finite-field specific helpers
    def frobenius(self, x, k=1):
        """x -> x^(p^k) for an extension of a prime field."""
        for _ in range(k):
            x = self.pow(x, self.p)
        return x

    def is_square(self, a):
        if self.is_zero(a):
            return True
        return self.pow(a, (self.order - 1) // 2) == self.one

    def sqrt(self, a):
        """Designated square root in a finite field extension."""
        if not self.is_field:
            raise NoSquareRoot("sqrt in a non-field algebra needs hensel_root")
        if self.is_zero(a):
            return self.zero
        q = self.order
        if self.pow(a, (q - 1) // 2) != self.one:
            raise NoSquareRoot("element is not a square")
        if q % 4 == 3:
            r = self.pow(a, (q + 1) // 4)
        else:
            r = self._tonelli_shanks(a)
        s = self.neg(r)
        return r if self.key(r) <= self.key(s) else s

    def _tonelli_shanks(self, a):
        q1, s = self.order - 1, 0
        while q1 % 2 == 0:
            q1 //= 2
            s += 1
        rng = _random.Random(self.order)
        while True:
            z = self.random(rng)
            if not self.is_zero(z) and self.pow(z, (self.order - 1) // 2) != self.one:
                break
        m, c, t, r = s, self.pow(z, q1), self.pow(a, q1), self.pow(a, (q1 + 1) // 2)
        while t != self.one:
            i, t2 = 0, t
            while t2 != self.one:
                t2 = self.mul(t2, t2)
                i += 1
            b = c
            for _ in range(m - i - 1):
                b = self.mul(b, b)
            m, c = i, self.mul(b, b)
            t, r = self.mul(t, c), self.mul(r, b)
        return r

    def to_json(self, x):
        return [self.base.to_json(c) for c in x]


class SeriesRing(QuotientAlgebra):
    """Truncated power series ``base[t]/(t^N)``; the accuracy is N."""

    def __init__(self, base, N):
        if N < 1:
            raise ValueError("accuracy must be positive")
        modulus = [base.zero] * N + [base.one]
        QuotientAlgebra.__init__(self, base, modulus, LOCAL_SERIES)

    @property
    def accuracy(self):
        return self.degree

    def __repr__(self):
        return "SeriesRing(%r, %d)" % (self.base, self.degree)

    def derivative(self, x):
        """d/dt; the result is only meaningful to accuracy N-1."""
        B = self.base
        out = [B.mul(B.from_int(k), x[k]) for k in range(1, self.degree)]
        return tuple(out) + (B.zero,)

    def truncate(self, x, target):
        """Change accuracy: shrink exactly, or pad with zeros (caller's claim)."""
        if target.base != self.base:
            raise AlgebraMismatch("different coefficient algebras")
        x = tuple(x[: target.degree])
        return x + (self.base.zero,) * (target.degree - len(x))

    def valuation(self, x):
        for k, c in enumerate(x):
            if not self.base.is_zero(c):
                return k
        return self.degree


def extension_field(base, degree, rng=None):
    """A field extension of ``base`` of the given degree (random irreducible)."""
    from .poly import is_irreducible, poly_monic
    rng = rng or _random.Random(base.order * 1000003 + degree)
    if degree == 1:
        return QuotientAlgebra(base, [base.zero, base.one], FIELD_EXTENSION)
    while True:
        f = [base.random(rng) for _ in range(degree)] + [base.one]
        if is_irreducible(base, f):
            return QuotientAlgebra(base, poly_monic(base, f), FIELD_EXTENSION)


class ProductAlgebra(Algebra):
    """Finite product of quotient algebras over a common base."""

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a product algebra needs at least one factor")
        base = factors[0].base
        if any(f.base != base for f in factors):
            raise ValueError("factors must share the same base")
        self.factors = factors
        self.base = base
        self.p = base.p
        self.degree = sum(f.degree for f in factors)
        self.zero = tuple(f.zero for f in factors)
        self.one = tuple(f.one for f in factors)

    def _key(self):
        return tuple(f._key() for f in self.factors)

    def __repr__(self):
        return "ProductAlgebra(%r)" % (list(self.factors),)

    def from_int(self, n):
        return tuple(f.from_int(n) for f in self.factors)

    def from_base(self, c):
        return tuple(f.from_base(c) for f in self.factors)

    def random(self, rng):
        return tuple(f.random(rng) for f in self.factors)

    def key(self, x):
        return tuple(f.key(c) for f, c in zip(self.factors, x))

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def sub(self, a, b):
        return tuple(f.sub(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def is_zero(self, a):
        return all(f.is_zero(x) for f, x in zip(self.factors, a))

    def is_unit(self, a):
        return all(f.is_unit(x) for f, x in zip(self.factors, a))

    def norm(self, x):
        B = self.base
        out = B.one
        for f, c in zip(self.factors, x):
            out = B.mul(out, f.norm(c))
        return out

    def trace(self, x):
        B = self.base
        out = B.zero
        for f, c in zip(self.factors, x):
            out = B.add(out, f.trace(c))
        return out

    def to_json(self, x):
        return [f.to_json(c) for f, c in zip(self.factors, x)]


class Element:
    """An algebra element with operator overloading."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def _other(self, other):
        if isinstance(other, Element):
            if other.ring != self.ring:
                raise AlgebraMismatch("%r and %r" % (self.ring, other.ring))
            return other.value
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def _wrap(self, v):
        return Element(self.ring, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.ring.neg(self.value))

    def __pow__(self, n):
        return self._wrap(self.ring.pow(self.value, n))

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return False
        return self.ring.eq(self.value, o)

    def __hash__(self):
        return hash((self.ring, self.value))

    def __int__(self):
        if isinstance(self.ring, PrimeField):
            return self.value
        raise TypeError("only prime field elements convert to int")

    def inverse(self):
        return self._wrap(self.ring.inv(self.value))

    def sqrt(self):
        return self._wrap(self.ring.sqrt(self.value))

    def norm(self):
        return Element(self.ring.base or self.ring, self.ring.norm(self.value))

    def trace(self):
        return Element(self.ring.base or self.ring, self.ring.trace(self.value))

    def is_unit(self):
        return self.ring.is_unit(self.value)

    def __repr__(self):
        return "%s" % (self.value,)
