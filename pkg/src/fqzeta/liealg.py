"""F_q-Lie algebras given by structure constants, plus the small solvable catalog.

A LieAlgebra stores the full tensor sc[i][j][k] with [e_i, e_j] = sum_k
sc[i][j][k] e_k over a FieldCtx.  Construction always checks antisymmetry and
the Jacobi identity exhaustively, so an accepted object really is a Lie
algebra.  The catalog covers every solvable family of dimension <= 4 used by
the closed-form zeta tables: the abelian algebras, the two 2-dimensional
algebras, the L-families in dimension 3 and the M-families in dimension 4.

Catalog parameters are field elements of the target context (encodings
0..q-1), not integers.  Use FieldCtx.embed to reduce integer literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .gf import FieldCtx, count_roots

MAX_DIM = 8


class AntisymmetryViolation(ValueError):
    pass


class JacobiViolation(ValueError):
    pass


class BadArity(ValueError):
    pass


class M9ParamReducible(ValueError):
    """x^2 - x - a has a root, so M9(a) does not define a new algebra."""


class BadCatalogId(ValueError):
    pass


@dataclass(frozen=True)
class LieAlgebra:
    ctx: FieldCtx
    n: int
    sc: tuple  # sc[i][j][k], all indices 0-based
    name: str = ""
    params: tuple[int, ...] = ()
    warnings: tuple[str, ...] = ()

    def bracket(self, x, y) -> list[int]:
        """Bilinear extension of the structure constants to coefficient vectors."""
        ctx = self.ctx
        out = [0] * self.n
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.sc[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = ctx.mul(xi, yj)
                for k, s in enumerate(row[j]):
                    if s:
                        out[k] = ctx.add(out[k], ctx.mul(c, s))
        return out

    def adjoint_matrices(self) -> list[list[list[int]]]:
        """C_j for j = 1..n; row i of C_j is the coefficient vector of [e_i, e_j]."""
        return [[list(self.sc[i][j]) for i in range(self.n)] for j in range(self.n)]

    def basis(self) -> list[list[int]]:
        return [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]

    def describe(self) -> str:
        if not self.params:
            return self.name
        keys = "ab"
        inner = ",".join(f"{keys[i]}={v}" for i, v in enumerate(self.params))
        return f"{self.name}({inner})"


def from_structure_constants(ctx: FieldCtx, n: int, sc, name: str = "",
                             params=(), warnings=()) -> LieAlgebra:
    """Validate and freeze an n x n x n structure-constant tensor."""
    if not (1 <= n <= MAX_DIM):
        raise ValueError(f"dimension {n} outside 1..{MAX_DIM}")
    tens = tuple(tuple(tuple(int(c) for c in row) for row in plane) for plane in sc)
    if len(tens) != n or any(len(p) != n or any(len(r) != n for r in p) for p in tens):
        raise ValueError("structure tensor is not n x n x n")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c = tens[i][j][k]
                if not 0 <= c < ctx.q:
                    raise ValueError(f"entry ({i},{j},{k}) not a field element")
                if tens[j][i][k] != ctx.neg(c) or (i == j and c != 0):
                    raise AntisymmetryViolation(f"at (i,j,k)=({i + 1},{j + 1},{k + 1})")
    alg = LieAlgebra(ctx=ctx, n=n, sc=tens, name=name, params=tuple(params),
                     warnings=tuple(warnings))
    e = alg.basis()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s = alg.bracket(alg.bracket(e[i], e[j]), e[k])
                s2 = alg.bracket(alg.bracket(e[j], e[k]), e[i])
                s3 = alg.bracket(alg.bracket(e[k], e[i]), e[j])
                for t in range(n):
                    if ctx.add(s[t], ctx.add(s2[t], s3[t])) != 0:
                        raise JacobiViolation(f"at (i,j,k)=({i + 1},{j + 1},{k + 1})")
    return alg


# -- catalog ------------------------------------------------------------
#
# Bracket maps use the 1-based generator indices of the presentations;
# "all other unlisted commutators are trivial" up to antisymmetry.
# Parameter coefficients are computed inside the target field.

FAMILIES: dict[str, tuple[int, int]] = {
    # family -> (dimension, arity)
    "L11": (1, 0),
    "L21": (2, 0),
    "L22": (2, 0),
    "L1": (3, 0),
    "L2": (3, 0),
    "L3": (3, 1),
    "L4": (3, 1),
    "M1": (4, 0),
    "M2": (4, 0),
    "M3": (4, 1),
    "M4": (4, 0),
    "M5": (4, 0),
    "M6": (4, 2),
    "M7": (4, 2),
    "M8": (4, 0),
    "M9": (4, 1),
    "M12": (4, 0),
    "M13": (4, 1),
    "M14": (4, 1),
}


def _brackets(family: str, ctx: FieldCtx, params: tuple[int, ...]):
    one = 1
    if family in ("L11", "L21", "L1", "M1"):
        return {}
    if family == "L22":
        return {(1, 2): {2: one}}
    if family == "L2":
        return {(3, 1): {1: one}, (3, 2): {2: one}}
    if family == "L3":
        a = params[0]
        return {(3, 1): {2: one}, (3, 2): {1: a, 2: one}}
    if family == "L4":
        a = params[0]
        return {(3, 1): {2: one}, (3, 2): {1: a}}
    if family == "M2":
        return {(4, 1): {1: one}, (4, 2): {2: one}, (4, 3): {3: one}}
    if family == "M3":
        a = params[0]
        return {(4, 1): {1: one}, (4, 2): {3: one},
                (4, 3): {2: ctx.neg(a), 3: ctx.add(a, one)}}
    if family == "M4":
        return {(4, 2): {3: one}, (4, 3): {3: one}}
    if family == "M5":
        return {(4, 2): {3: one}}
    if family == "M6":
        a, b = params
        return {(4, 1): {2: one}, (4, 2): {3: one},
                (4, 3): {1: ctx.neg(a), 2: b, 3: one}}
    if family == "M7":
        a, b = params
        return {(4, 1): {2: one}, (4, 2): {3: one},
                (4, 3): {1: ctx.neg(a), 2: b}}
    if family == "M8":
        return {(1, 2): {2: one}, (3, 4): {4: one}}
    if family == "M9":
        a = params[0]
        return {(4, 1): {1: one, 2: a}, (4, 2): {1: one},
                (3, 1): {1: one}, (3, 2): {2: one}}
    if family == "M12":
        two = ctx.embed(2)
        return {(4, 1): {1: one}, (4, 2): {2: two}, (4, 3): {3: one},
                (3, 1): {2: one}}
    if family == "M13":
        a = params[0]
        return {(4, 1): {1: one, 3: a}, (4, 2): {2: one}, (4, 3): {1: one},
                (3, 1): {2: one}}
    if family == "M14":
        a = params[0]
        return {(4, 1): {3: a}, (4, 3): {1: one}, (3, 1): {2: one}}
    raise BadCatalogId(family)


def m9_param_ok(a: int, ctx: FieldCtx) -> bool:
    """True when x^2 - x - a has no root in the field."""
    return count_roots([ctx.neg(a), ctx.neg(1), 1], ctx) == 0


def catalog(family: str, params, ctx: FieldCtx) -> LieAlgebra:
    """Construct a catalog algebra with exactly the recorded catalog brackets."""
    if family not in FAMILIES:
        raise BadCatalogId(f"unknown family {family!r}")
    n, arity = FAMILIES[family]
    params = tuple(int(v) for v in params)
    if len(params) != arity:
        raise BadArity(f"{family} takes {arity} parameter(s), got {len(params)}")
    for v in params:
        if not 0 <= v < ctx.q:
            raise ValueError(f"parameter {v} is not an element of F_{ctx.q}")
    if family == "M9" and not m9_param_ok(params[0], ctx):
        raise M9ParamReducible(
            f"x^2 - x - {params[0]} has a root in F_{ctx.q}; "
            "M9 requires it to be irreducible")
    warnings = ()
    if family == "M12" and ctx.p == 2:
        # the bracket constant 2 vanishes; the recorded formulas assume char != 2
        warnings = ("char2-degenerate-constant",)
    sc = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (i, j), comps in _brackets(family, ctx, params).items():
        for k, c in comps.items():
            sc[i - 1][j - 1][k - 1] = c
            sc[j - 1][i - 1][k - 1] = ctx.neg(c)
    return from_structure_constants(ctx, n, sc, name=family, params=params,
                                    warnings=warnings)


def valid_params(family: str, ctx: FieldCtx):
    """All parameter tuples the verification sweeps run for this family.

    M9 keeps only the irreducible side condition; M14 is swept over nonzero a
    (the presentations define it for a in F_q^x, and a = 0 reproduces the
    maximal-class nilpotent algebra already covered by M7 at a = b = 0).
    """
    arity = FAMILIES[family][1]
    if arity == 0:
        return [()]
    if family == "M9":
        return [(a,) for a in range(ctx.q) if m9_param_ok(a, ctx)]
    if family == "M14":
        return [(a,) for a in range(1, ctx.q)]
    if arity == 1:
        return [(a,) for a in range(ctx.q)]
    return [(a, b) for a in range(ctx.q) for b in range(ctx.q)]


_SPEC_RE = re.compile(r"^\s*([A-Za-z0-9]+)\s*(?:\(\s*(.*?)\s*\))?\s*$")
_KV_RE = re.compile(r"^([A-Za-z]\w*)\s*=\s*(-?\d+)$")


def parse_algebra_spec(text: str) -> tuple[str, dict[str, int]]:
    """Parse "M6(a=2,b=0)"-style catalog references into (family, kwargs)."""
    m = _SPEC_RE.match(text)
    if not m:
        raise BadCatalogId(f"cannot parse algebra spec {text!r}")
    family, inner = m.group(1), m.group(2)
    if family not in FAMILIES:
        raise BadCatalogId(f"unknown family {family!r}")
    kwargs: dict[str, int] = {}
    if inner:
        for part in inner.split(","):
            kv = _KV_RE.match(part.strip())
            if not kv:
                raise BadCatalogId(f"bad parameter {part.strip()!r} in {text!r}")
            kwargs[kv.group(1)] = int(kv.group(2))
    arity = FAMILIES[family][1]
    expected = ["a", "b"][:arity]
    if sorted(kwargs) != sorted(expected):
        raise BadArity(f"{family} takes parameters {expected}, got {sorted(kwargs)}")
    return family, kwargs


def catalog_from_spec(text: str, ctx: FieldCtx) -> LieAlgebra:
    family, kwargs = parse_algebra_spec(text)
    arity = FAMILIES[family][1]
    params = [ctx.embed(kwargs[k]) for k in ["a", "b"][:arity]]
    return catalog(family, params, ctx)


# -- structural predicates ----------------------------------------------


def _reduce_rows(rows, ctx: FieldCtx) -> list[list[int]]:
    """Row-reduce over F_q; returns a reduced basis of the row span."""
    basis: list[list[int]] = []
    pivots: list[int] = []
    for vec in rows:
        v = list(vec)
        for b, pc in zip(basis, pivots):
            if v[pc]:
                c = v[pc]
                v = [ctx.sub(x, ctx.mul(c, y)) for x, y in zip(v, b)]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = ctx.inv(v[piv])
        v = [ctx.mul(inv, x) for x in v]
        basis.append(v)
        pivots.append(piv)
    return basis


def _bracket_span(L: LieAlgebra, left_basis, right_basis) -> list[list[int]]:
    prods = [L.bracket(x, y) for x in left_basis for y in right_basis]
    return _reduce_rows(prods, L.ctx)


def derived_series(L: LieAlgebra) -> list[int]:
    """Dimensions of L, [L,L], [[L,L],[L,L]], ...; stops at 0 or a repeat."""
    dims = [L.n]
    basis = L.basis()
    while True:
        basis = _bracket_span(L, basis, basis)
        d = len(basis)
        dims.append(d)
        if d == 0 or d == dims[-2]:
            return dims


def lower_central_series(L: LieAlgebra) -> list[int]:
    """Dimensions of L, [L,L], [L,[L,L]], ...; stops at 0 or a repeat."""
    dims = [L.n]
    full = L.basis()
    basis = full
    while True:
        basis = _bracket_span(L, full, basis)
        d = len(basis)
        dims.append(d)
        if d == 0 or d == dims[-2]:
            return dims


def is_solvable(L: LieAlgebra) -> bool:
    return derived_series(L)[-1] == 0


def is_nilpotent(L: LieAlgebra) -> bool:
    return lower_central_series(L)[-1] == 0
