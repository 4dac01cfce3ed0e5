"""Exact arithmetic in finite fields F_q for prime powers q.

Elements of F_q (q = p^k) are encoded as plain integers 0..q-1, read as
base-p digit vectors of polynomial coefficients over F_p, low degree first.
0 is the additive identity and 1 the multiplicative identity.  A field is
fully described by a FieldCtx; all operations are pure functions of the
context and the operand encodings, so contexts can be shared freely across
threads and processes.

The extension modulus is always the lexicographically smallest monic
irreducible polynomial of the right degree (coefficients compared low to
high), which makes the encoding reproducible without external tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

Q_LIMIT = 1 << 20
# Largest q for which dense add/mul lookup tables are built on demand.
TABLE_LIMIT = 256


class NotPrime(ValueError):
    pass


class TooLarge(ValueError):
    pass


class DegreeZero(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldCtx:
    """A concrete finite field F_q, q = p^k, with integer-coded elements."""

    p: int
    k: int
    q: int
    modulus: tuple[int, ...]  # monic, degree k, coefficients low to high

    _tables: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    # -- element codec -------------------------------------------------

    def digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def undigits(self, ds) -> int:
        x = 0
        for d in reversed(ds):
            x = x * self.p + d
        return x

    def embed(self, n: int) -> int:
        """Reduce an integer literal into the prime subfield."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    # -- arithmetic ----------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x + y) % self.p
        p = self.p
        return self.undigits([(a + b) % p for a, b in zip(self.digits(x), self.digits(y))])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def neg(self, x: int) -> int:
        if self.k == 1:
            return (-x) % self.p
        p = self.p
        return self.undigits([(-a) % p for a in self.digits(x)])

    def mul(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x * y) % self.p
        if x == 0 or y == 0:
            return 0
        p, k = self.p, self.k
        xd, yd = self.digits(x), self.digits(y)
        prod = [0] * (2 * k - 1)
        for i, xi in enumerate(xd):
            if xi:
                for j, yj in enumerate(yd):
                    prod[i + j] = (prod[i + j] + xi * yj) % p
        # reduce against the monic modulus, top coefficient down
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i in range(k):
                    prod[d - k + i] = (prod[d - k + i] - c * self.modulus[i]) % p
        return self.undigits(prod[:k])

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        if self.k == 1:
            return pow(x, self.p - 2, self.p)
        return self.pow(x, self.q - 2)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        r = 1
        b = x
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    # -- dense tables for vectorised consumers -------------------------

    def tables(self):
        """(ADD, MUL, NEG) lookup arrays; only available for q <= TABLE_LIMIT."""
        if "t" not in self._tables:
            if self.q > TABLE_LIMIT:
                raise TooLarge(f"no dense tables for q={self.q} > {TABLE_LIMIT}")
            q = self.q
            add = np.empty((q, q), dtype=np.int16)
            mul = np.empty((q, q), dtype=np.int16)
            neg = np.empty(q, dtype=np.int16)
            for a in range(q):
                neg[a] = self.neg(a)
                for b in range(a, q):
                    s = self.add(a, b)
                    m = self.mul(a, b)
                    add[a, b] = add[b, a] = s
                    mul[a, b] = mul[b, a] = m
            self._tables["t"] = (add, mul, neg)
        return self._tables["t"]


# -- field construction -----------------------------------------------


def _poly_gcd_fp(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = [c % p for c in a], [c % p for c in b]
    while any(b):
        while b and b[-1] == 0:
            b.pop()
        if not b:
            break
        # a mod b
        inv_lead = pow(b[-1], p - 2, p)
        a = a[:]
        while len(a) >= len(b) and any(a):
            while a and a[-1] == 0:
                a.pop()
            if len(a) < len(b):
                break
            c = a[-1] * inv_lead % p
            off = len(a) - len(b)
            for i, bi in enumerate(b):
                a[off + i] = (a[off + i] - c * bi) % p
        a, b = b, a
    return a


def _poly_mulmod_fp(a, b, mod, p):
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(k):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    out = prod[:k]
    out += [0] * (k - len(out))
    return out


def _xq_pow_mod(mod: list[int], p: int, e: int) -> list[int]:
    """x^(p^e) reduced mod the given monic polynomial over F_p."""
    k = len(mod) - 1
    r = [0, 1] if k > 1 else [0]
    r += [0] * (k - len(r))
    for _ in range(e):
        # raise to the p-th power by square-and-multiply
        acc = [1] + [0] * (k - 1)
        base = r
        n = p
        while n:
            if n & 1:
                acc = _poly_mulmod_fp(acc, base, mod, p)
            base = _poly_mulmod_fp(base, base, mod, p)
            n >>= 1
        r = acc
    return r


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """coeffs is monic of degree k >= 2, low-to-high."""
    k = len(coeffs) - 1
    if coeffs[0] == 0:
        return False  # divisible by x
    if k <= 3:
        # degree 2 or 3: reducible iff it has a root
        for x in range(p):
            v = 0
            for c in reversed(coeffs):
                v = (v * x + c) % p
            if v == 0:
                return False
        return True
    mod = list(coeffs)
    # Rabin: x^(p^k) == x, and gcd(x^(p^(k/l)) - x, f) = 1 for prime l | k
    xpk = _xq_pow_mod(mod, p, k)
    minus_x = xpk[:]
    minus_x[1] = (minus_x[1] - 1) % p
    if any(minus_x):
        return False
    ell = 2
    kk = k
    prime_divs = set()
    while ell * ell <= kk:
        if kk % ell == 0:
            prime_divs.add(ell)
            while kk % ell == 0:
                kk //= ell
        ell += 1
    if kk > 1:
        prime_divs.add(kk)
    for ell in prime_divs:
        g = _xq_pow_mod(mod, p, k // ell)
        g = g[:]
        g[1] = (g[1] - 1) % p
        if len(_poly_gcd_fp(g, mod, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def make_field(p: int, k: int) -> FieldCtx:
    """Deterministic context for F_(p^k); repeated calls share one object."""
    if k < 1:
        raise DegreeZero(f"extension degree must be >= 1, got {k}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    q = p**k
    if q > Q_LIMIT:
        raise TooLarge(f"q = {p}^{k} = {q} exceeds the {Q_LIMIT} cap")
    if k == 1:
        return FieldCtx(p=p, k=1, q=q, modulus=(0, 1))
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if _is_irreducible(cand, p):
            return FieldCtx(p=p, k=k, q=q, modulus=cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# -- univariate polynomials and exhaustive root counting ----------------


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial over a FieldCtx; coeffs[i] is the x^i term."""

    coeffs: tuple[int, ...]

    @staticmethod
    def of(coeffs) -> "UniPoly":
        return UniPoly(tuple(coeffs))

    def degree(self) -> int | None:
        """Largest index with nonzero coefficient, None for the zero poly."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return None

    def eval(self, ctx: FieldCtx, x: int) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = ctx.add(ctx.mul(v, x), c)
        return v


def count_roots(f, ctx: FieldCtx) -> int:
    """Number of x in F_q with f(x) = 0, by exhaustive scan over the field.

    The zero polynomial vanishes everywhere and returns q.  The scan is the
    unconditional ground truth used by everything else in the package; it is
    never replaced by factorisation.
    """
    coeffs = tuple(f.coeffs) if isinstance(f, UniPoly) else tuple(f)
    deg = None
    for i in range(len(coeffs) - 1, -1, -1):
        if coeffs[i]:
            deg = i
            break
    if deg is None:
        return ctx.q
    if deg == 0:
        return 0
    if ctx.k == 1 and ctx.q >= 64:
        # Horner over a numpy vector of all field elements; p^2 < 2^63 so
        # int64 products never overflow between reductions.
        x = np.arange(ctx.q, dtype=np.int64)
        v = np.zeros(ctx.q, dtype=np.int64)
        for c in reversed(coeffs[: deg + 1]):
            v = (v * x + c) % ctx.p
        return int(np.count_nonzero(v == 0))
    if 16 <= ctx.q <= TABLE_LIMIT:
        # same Horner scan, via the dense lookup tables
        add_t, mul_t, _ = ctx.tables()
        x = np.arange(ctx.q, dtype=np.int16)
        v = np.zeros(ctx.q, dtype=np.int16)
        for c in reversed(coeffs[: deg + 1]):
            v = add_t[mul_t[v, x], c]
        return int(np.count_nonzero(v == 0))
    poly = UniPoly(coeffs)
    return sum(1 for x in range(ctx.q) if poly.eval(ctx, x) == 0)
