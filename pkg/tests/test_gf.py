import itertools
import random

import pytest

from fqzeta.gf import (DegreeZero, DivisionByZero, FieldCtx, NotPrime,
                       TooLarge, UniPoly, count_roots, make_field)


def brute_poly_eval_fp(coeffs, x, p):
    v = 0
    for c in reversed(coeffs):
        v = (v * x + c) % p
    return v


def brute_is_irreducible_quadratic_fp(coeffs, p):
    # degree-2 polynomial over F_p is reducible iff it has a root
    return all(brute_poly_eval_fp(coeffs, x, p) for x in range(p))


def test_prime_field_basics():
    F5 = make_field(5, 1)
    assert F5.q == 5 and list(F5.elements()) == [0, 1, 2, 3, 4]
    assert F5.mul(2, 3) == 1
    assert F5.add(3, 4) == 2
    assert F5.neg(2) == 3


def test_f4_modulus_is_smallest_irreducible():
    # oracle: scan the 4 monic quadratics over F_2 in low-to-high lex order
    expected = None
    for c0, c1 in itertools.product(range(2), repeat=2):
        if brute_is_irreducible_quadratic_fp([c0, c1, 1], 2):
            expected = (c0, c1, 1)
            break
    assert expected == (1, 1, 1)  # x^2 + x + 1
    assert make_field(2, 2).modulus == expected


def test_f4_multiplication():
    F4 = make_field(2, 2)
    assert F4.mul(2, 2) == 3  # x * x = x + 1
    assert F4.mul(2, 3) == 1  # x (x+1) = x^2 + x = 1


def test_inverse_examples_and_axiom():
    F7 = make_field(7, 1)
    assert F7.inv(3) == 5
    for q, (p, k) in {5: (5, 1), 8: (2, 3), 9: (3, 2), 25: (5, 2)}.items():
        ctx = make_field(p, k)
        for x in range(1, q):
            assert ctx.mul(x, ctx.inv(x)) == 1
    with pytest.raises(DivisionByZero):
        F7.inv(0)


def test_construction_errors():
    with pytest.raises(NotPrime):
        make_field(4, 1)
    with pytest.raises(NotPrime):
        make_field(1, 1)
    with pytest.raises(DegreeZero):
        make_field(5, 0)
    with pytest.raises(TooLarge):
        make_field(2, 21)


def test_construction_is_deterministic():
    # two independent constructions agree on every product, exhaustively
    for p, k in [(2, 2), (2, 3), (3, 2), (2, 6), (7, 2)]:
        a = make_field(p, k)
        b = make_field.__wrapped__(p, k)  # bypass the cache
        assert a.modulus == b.modulus
        if a.q <= 64:
            for x in range(a.q):
                for y in range(a.q):
                    assert a.mul(x, y) == b.mul(x, y)
                    assert a.add(x, y) == b.add(x, y)


def test_field_axioms_sampled():
    rng = random.Random(20240811)
    for p, k in [(3, 1), (2, 3), (3, 2), (5, 2), (11, 1)]:
        ctx = make_field(p, k)
        for _ in range(200):
            x, y, z = (rng.randrange(ctx.q) for _ in range(3))
            assert ctx.add(x, y) == ctx.add(y, x)
            assert ctx.mul(x, y) == ctx.mul(y, x)
            assert ctx.mul(x, ctx.add(y, z)) == ctx.add(ctx.mul(x, y), ctx.mul(x, z))
            assert ctx.add(x, ctx.neg(x)) == 0


def test_fermat_lagrange():
    for p, k in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (13, 1)]:
        ctx = make_field(p, k)
        for x in range(1, ctx.q):
            assert ctx.pow(x, ctx.q - 1) == 1


def test_count_roots_examples():
    F5 = make_field(5, 1)
    # x^2 - 1 over F_5: scan all five elements by hand
    expected = sum(1 for x in range(5) if (x * x - 1) % 5 == 0)
    assert expected == 2
    assert count_roots([-1 % 5, 0, 1], F5) == 2
    # degree one always has exactly one root
    for p, k in [(2, 1), (3, 1), (2, 2), (7, 1), (3, 2)]:
        ctx = make_field(p, k)
        assert count_roots([1, 1], ctx) == 1
    # the non-PORC witness value at p = 31 = 2^2 + 27
    assert count_roots([1, 0, 0, 2], make_field(31, 1)) == 3


def test_count_roots_zero_poly_and_degree_bound():
    rng = random.Random(7)
    for p, k in [(3, 1), (2, 2), (5, 1)]:
        ctx = make_field(p, k)
        assert count_roots([], ctx) == ctx.q
        assert count_roots([0, 0], ctx) == ctx.q
        for _ in range(30):
            deg = rng.randrange(1, 5)
            coeffs = [rng.randrange(ctx.q) for _ in range(deg)] + [
                rng.randrange(1, ctx.q)]
            assert count_roots(coeffs, ctx) <= deg


def _poly_mul(f, g, ctx):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
    return out


def test_count_roots_of_products_is_union():
    rng = random.Random(99)
    for p, k in [(5, 1), (3, 1), (2, 2)]:
        ctx = make_field(p, k)
        for _ in range(40):
            f = [rng.randrange(ctx.q) for _ in range(3)] + [rng.randrange(1, ctx.q)]
            g = [rng.randrange(ctx.q) for _ in range(2)] + [rng.randrange(1, ctx.q)]
            fg = _poly_mul(f, g, ctx)
            roots_f = {x for x in range(ctx.q) if UniPoly.of(f).eval(ctx, x) == 0}
            roots_g = {x for x in range(ctx.q) if UniPoly.of(g).eval(ctx, x) == 0}
            assert count_roots(fg, ctx) == len(roots_f | roots_g)


def test_count_roots_fast_path_matches_scalar():
    # q >= 64 prime triggers the vectorised Horner scan
    ctx = make_field(101, 1)
    rng = random.Random(3)
    for _ in range(20):
        coeffs = [rng.randrange(101) for _ in range(4)]
        slow = sum(1 for x in range(101)
                   if UniPoly.of(coeffs).eval(ctx, x) == 0)
        assert count_roots(coeffs, ctx) == slow


def test_count_roots_table_path_matches_scalar():
    # 16 <= q <= 256 goes through the dense-table Horner scan
    rng = random.Random(5)
    for p, k in [(7, 2), (5, 2), (3, 3), (2, 5), (17, 1)]:
        ctx = make_field(p, k)
        for _ in range(25):
            coeffs = [rng.randrange(ctx.q) for _ in range(rng.randrange(1, 6))]
            slow = sum(1 for x in range(ctx.q)
                       if UniPoly.of(coeffs).eval(ctx, x) == 0)
            assert count_roots(coeffs, ctx) == slow, (p, k, coeffs)


def test_unipoly_degree():
    assert UniPoly.of([0, 0]).degree() is None
    assert UniPoly.of([1]).degree() == 0
    assert UniPoly.of([0, 2, 0]).degree() == 1


def test_big_extension_field_modulus_is_irreducible():
    # k = 4 exercises the gcd-based test; verify against a brute factor scan
    ctx = make_field(3, 4)
    p = 3
    mod = ctx.modulus

    # brute force: no monic divisor of degree 1 or 2 divides the modulus
    def poly_mod(num, den):
        num = list(num)
        while len(num) >= len(den) and any(num):
            while num and num[-1] == 0:
                num.pop()
            if len(num) < len(den):
                break
            c = num[-1] * pow(den[-1], p - 2, p) % p
            off = len(num) - len(den)
            for i, d in enumerate(den):
                num[off + i] = (num[off + i] - c * d) % p
        return num

    for deg in (1, 2):
        for tail in itertools.product(range(p), repeat=deg):
            den = list(tail) + [1]
            rem = poly_mod(list(mod), den)
            assert any(rem), f"{mod} divisible by {den}"


def test_embed_reduces_integer_literals():
    F9 = make_field(3, 2)
    assert F9.embed(5) == 2
    assert F9.embed(-1) == 2
    F7 = make_field(7, 1)
    assert F7.embed(10) == 3
