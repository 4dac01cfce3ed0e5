"""Closed-form zeta templates, named variety counters and q-binomials.

The symbolic formulas live in tables/zeta_branches.txt as data rather than
code so they can be audited line by line.  A record's guard picks the branch
from the parameters, compared inside the field; the coefficient expressions
are integer polynomials in q plus weighted counts of F_q-roots of the fixed
defining polynomials below.  evaluate() turns a template into the exact
coefficient vector for one concrete field.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .gf import FieldCtx, count_roots
from .zetapoly import ZetaPoly


class UnknownBranch(LookupError):
    pass


class BranchTableError(ValueError):
    pass


def gaussian_binomial(n: int, i: int, q: int) -> int:
    """Number of i-dimensional subspaces of an n-dimensional F_q space."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if i < 0 or i > n:
        return 0
    num = den = 1
    for t in range(i):
        num *= q ** (n - t) - 1
        den *= q ** (t + 1) - 1
    assert num % den == 0
    return num // den


# -- named varieties ------------------------------------------------------
#
# Coefficient builders are written against abstract ring ops so the same
# definitions serve both field reductions and the literal integer
# polynomials used by the residue-class scans.


def _variety_coeffs(tag: str, params, add, mul, neg, one):
    def lift(n):
        # small nonnegative integer constant, built from 1 by addition
        v = add(one, neg(one))
        for _ in range(n):
            v = add(v, one)
        return v

    if tag == "V3":
        (a,) = params
        return [neg(one), neg(one), a]  # a x^2 - x - 1
    if tag == "V4":
        (a,) = params
        return [neg(one), lift(0), a]  # a x^2 - 1
    if tag == "V13":
        (a,) = params
        return [neg(a), one, one]  # x^2 + x - a
    if tag == "V14":
        (a,) = params
        return [neg(a), lift(0), one]  # x^2 - a
    a, b = params
    two_ab = mul(lift(2), mul(a, b))
    if tag == "V6_1":
        return [one, b, a, neg(mul(a, a))]  # -a^2 x^3 + a x^2 + b x + 1
    if tag == "V6_2":
        return [one, one, neg(b), a]  # a x^3 - b x^2 + x + 1
    if tag == "V6_3":
        return [mul(a, a), two_ab, add(a, mul(b, b)), add(a, b)]
    if tag == "V6_4":
        return [mul(a, a), two_ab, add(a, mul(b, b))]
    if tag == "V7_1":
        return [neg(one), neg(b), lift(0), mul(a, a)]  # a^2 x^3 - b x - 1
    if tag == "V7_2":
        return [one, lift(0), neg(b), a]  # a x^3 - b x^2 + 1
    if tag == "V7_3":
        return [mul(a, a), two_ab, mul(b, b), a]
    raise UnknownBranch(f"unknown variety tag {tag!r}")


VARIETY_TAGS = ("V3", "V4", "V6_1", "V6_2", "V6_3", "V6_4",
                "V7_1", "V7_2", "V7_3", "V13", "V14")


@dataclass(frozen=True)
class VarietyId:
    tag: str
    params: tuple[int, ...]


def variety_poly(vid: VarietyId, ctx: FieldCtx) -> list[int]:
    """Defining polynomial of the variety over ctx, coefficients low to high."""
    return _variety_coeffs(vid.tag, vid.params, ctx.add, ctx.mul, ctx.neg, 1)


def variety_poly_int(tag: str, params) -> list[int]:
    """The same polynomial with literal integer coefficients."""
    return _variety_coeffs(tag, tuple(params),
                           lambda x, y: x + y, lambda x, y: x * y,
                           lambda x: -x, 1)


def variety_count(vid: VarietyId, ctx: FieldCtx) -> int:
    return count_roots(variety_poly(vid, ctx), ctx)


# -- integer polynomials in q ---------------------------------------------


@dataclass(frozen=True)
class QPoly:
    coeffs: tuple[int, ...]

    @staticmethod
    def of(coeffs) -> "QPoly":
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return QPoly(tuple(cs))

    @staticmethod
    def const(c: int) -> "QPoly":
        return QPoly.of([c])

    def __add__(self, other: "QPoly") -> "QPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return QPoly.of([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "QPoly":
        return QPoly.of([-c for c in self.coeffs])

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if not self.coeffs or not other.coeffs:
            return QPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly.of(out)

    def eval(self, q: int) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * q + c
        return v

    def is_zero(self) -> bool:
        return not self.coeffs

    def display(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                x = "q" if i == 1 else f"q^{i}"
                if c == 1:
                    parts.append(x)
                elif c == -1:
                    parts.append(f"-{x}")
                else:
                    parts.append(f"{c}{x}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


# -- symbolic templates ----------------------------------------------------


@dataclass(frozen=True)
class ZetaTerm:
    base: QPoly
    varieties: tuple[tuple[QPoly, str, tuple[str, ...]], ...]
    # each entry: (integer-poly weight, variety tag, parameter names)

    def display(self) -> str:
        parts = []
        if not self.base.is_zero() or not self.varieties:
            parts.append(self.base.display())
        for w, tag, names in self.varieties:
            v = f"|{tag}({','.join(names)})|"
            wd = w.display()
            if wd == "1":
                parts.append(v)
            elif " " in wd:
                parts.append(f"({wd})*{v}")
            else:
                parts.append(f"{wd}*{v}")
        return " + ".join(parts)


@dataclass(frozen=True)
class SymbolicZeta:
    family: str
    kind: str
    guard: str
    n: int
    terms: tuple[ZetaTerm, ...]

    def display(self) -> str:
        chunks = []
        for i, term in enumerate(self.terms):
            td = term.display()
            if td == "0":
                continue
            if i == 0:
                chunks.append(td)
            else:
                t = "t" if i == 1 else f"t^{i}"
                if td == "1":
                    chunks.append(t)
                elif " " in td or "*" in td:
                    chunks.append(f"({td}){t}")
                else:
                    chunks.append(f"{td}{t}")
        return " + ".join(chunks) if chunks else "0"


# -- expression parser -------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z]\w*|\(|\)|\+|-|\*|\^|,)")


class _Sym:
    """base + sum of weight * variety, weights and base in Z[q]."""

    __slots__ = ("base", "vs")

    def __init__(self, base=None, vs=None):
        self.base = base if base is not None else QPoly(())
        self.vs: dict[tuple[str, tuple[str, ...]], QPoly] = dict(vs or {})

    def __add__(self, other):
        vs = dict(self.vs)
        for k, w in other.vs.items():
            vs[k] = vs.get(k, QPoly(())) + w
        return _Sym(self.base + other.base, vs)

    def __neg__(self):
        return _Sym(-self.base, {k: -w for k, w in self.vs.items()})

    def __mul__(self, other):
        if self.vs and other.vs:
            raise BranchTableError("product of two variety counts is not allowed")
        if other.vs:
            self, other = other, self
        # other is now a pure q-polynomial
        vs = {k: w * other.base for k, w in self.vs.items()}
        return _Sym(self.base * other.base, vs)


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise BranchTableError(f"bad character in expression: {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


def _parse_expr(tokens: list[str]) -> _Sym:
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        t = tokens[pos]
        pos += 1
        return t

    def atom() -> _Sym:
        t = take()
        if t == "(":
            v = expr()
            if take() != ")":
                raise BranchTableError("missing )")
            return v
        if t.isdigit():
            return _Sym(QPoly.const(int(t)))
        if t == "q":
            return _Sym(QPoly.of([0, 1]))
        if t in VARIETY_TAGS:
            if take() != "(":
                raise BranchTableError(f"{t} needs parameters")

            def pname():
                s = take()
                if s == "-":
                    s += take()
                if s.lstrip("-") not in ("a", "b"):
                    raise BranchTableError(f"bad variety parameter {s!r}")
                return s

            names = [pname()]
            while peek() == ",":
                take()
                names.append(pname())
            if take() != ")":
                raise BranchTableError("missing ) after variety parameters")
            return _Sym(QPoly(()), {(t, tuple(names)): QPoly.const(1)})
        raise BranchTableError(f"unexpected token {t!r}")

    def factor() -> _Sym:
        v = atom()
        while peek() == "^":
            take()
            e = take()
            if not e.isdigit():
                raise BranchTableError("exponent must be a literal integer")
            out = _Sym(QPoly.const(1))
            for _ in range(int(e)):
                out = out * v
            v = out
        return v

    def term() -> _Sym:
        v = factor()
        while peek() == "*":
            take()
            v = v * factor()
        return v

    def expr() -> _Sym:
        neg = False
        if peek() == "-":
            take()
            neg = True
        v = term()
        if neg:
            v = -v
        while peek() in ("+", "-"):
            op = take()
            w = term()
            v = v + (-w if op == "-" else w)
        return v

    v = expr()
    if pos != len(tokens):
        raise BranchTableError(f"trailing tokens {tokens[pos:]!r}")
    return v


# -- branch table -----------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    family: str
    kind: str
    guard: str
    terms: tuple[ZetaTerm, ...]


_GUARD_ATOMS = ("a=0", "a!=0", "a=1", "a!=1", "b=0", "b!=0",
                "a=-b", "a!=-b", "a=b", "a!=b")


def _guard_holds(guard: str, params, ctx: FieldCtx | None) -> bool:
    """ctx=None evaluates the guard over the integers instead of the field."""
    if guard == "any":
        return True

    def val(name):
        return params[{"a": 0, "b": 1}[name]]

    def atom(s):
        if s not in _GUARD_ATOMS:
            raise BranchTableError(f"unknown guard atom {s!r}")
        neg = "!=" in s
        lhs, rhs = s.replace("!=", "=").split("=")
        x = val(lhs)
        if rhs == "-b":
            hit = (x + val("b") == 0) if ctx is None else (ctx.add(x, val("b")) == 0)
        elif rhs == "b":
            hit = x == val("b")
        else:
            target = int(rhs)
            hit = (x == target) if ctx is None else (x == ctx.embed(target))
        return hit != neg

    return all(atom(s.strip()) for s in guard.split(","))


def _parse_table(text: str) -> dict[tuple[str, str], list[Branch]]:
    table: dict[tuple[str, str], list[Branch]] = {}
    saw_version = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("version"):
            if line.split() != ["version", "1"]:
                raise BranchTableError(f"unsupported table version: {line!r}")
            saw_version = True
            continue
        try:
            head, body = line.split(":", 1)
            family, kind, guard = head.split()
            exprs = [e.strip() for e in body.split("|")]
            terms = []
            for e in exprs:
                sym = _parse_expr(_tokenize(e))
                vs = tuple((w, tag, names) for (tag, names), w in sorted(sym.vs.items()))
                terms.append(ZetaTerm(sym.base, vs))
        except BranchTableError:
            raise
        except Exception as exc:
            raise BranchTableError(f"line {lineno}: cannot parse {raw!r}") from exc
        kind = {"sub": "subalgebra", "ideal": "ideal"}[kind]
        table.setdefault((family, kind), []).append(
            Branch(family, kind, guard, tuple(terms)))
    if not saw_version:
        raise BranchTableError("branch table has no version line")
    return table


@lru_cache(maxsize=4)
def _load_table(path: str | None) -> dict[tuple[str, str], list[Branch]]:
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = (resources.files("fqzeta") / "tables" / "zeta_branches.txt").read_text()
    return _parse_table(text)


def branch_table() -> dict[tuple[str, str], list[Branch]]:
    """Active table; FQZETA_BRANCH_TABLE overrides the packaged file."""
    return _load_table(os.environ.get("FQZETA_BRANCH_TABLE") or None)


def _normalize_kind(kind: str) -> str:
    k = {"sub": "subalgebra", "subalgebra": "subalgebra", "ideal": "ideal"}.get(kind)
    if k is None:
        raise ValueError(f"kind must be 'subalgebra' or 'ideal', got {kind!r}")
    return k


def select_branch(family: str, params, kind: str, ctx: FieldCtx | None) -> Branch:
    """The unique branch whose guard matches; ctx=None uses integer semantics."""
    kind = _normalize_kind(kind)
    branches = branch_table().get((family, kind))
    if not branches:
        raise UnknownBranch(f"no closed form for {family} / {kind}")
    for br in branches:
        if _guard_holds(br.guard, params, ctx):
            return br
    raise UnknownBranch(f"no branch of {family} / {kind} matches params {params}")


def closed_form(family: str, params, kind: str, ctx: FieldCtx) -> SymbolicZeta:
    """The matching formula branch as a symbolic template."""
    params = tuple(params)
    br = select_branch(family, params, kind, ctx)
    return SymbolicZeta(family=family, kind=br.kind, guard=br.guard,
                        n=len(br.terms) - 1, terms=br.terms)


def _resolve(names: tuple[str, ...], params, ctx: FieldCtx) -> tuple[int, ...]:
    out = []
    for n in names:
        v = params[{"a": 0, "b": 1}[n.lstrip("-")]]
        out.append(ctx.neg(v) if n.startswith("-") else v)
    return tuple(out)


def evaluate(sz: SymbolicZeta, params, ctx: FieldCtx) -> ZetaPoly:
    """Substitute q and the concrete variety counts; exact integers."""
    q = ctx.q
    coeffs = []
    for term in sz.terms:
        v = term.base.eval(q)
        for w, tag, names in term.varieties:
            vid = VarietyId(tag, _resolve(names, params, ctx))
            v += w.eval(q) * variety_count(vid, ctx)
        coeffs.append(v)
    return ZetaPoly.of(q, coeffs)


def zeta_formula(family: str, params, kind: str, ctx: FieldCtx) -> ZetaPoly:
    params = tuple(params)
    return evaluate(closed_form(family, params, kind, ctx), params, ctx)


def realized_q_polynomial(sz: SymbolicZeta, params, ctx: FieldCtx) -> tuple:
    """Coefficient vector as polynomials in q after fixing the variety counts.

    Two instances realize the same member of the family's formula list
    exactly when these vectors agree, which is what the period estimates
    compare.
    """
    out = []
    for term in sz.terms:
        poly = term.base
        for w, tag, names in term.varieties:
            vid = VarietyId(tag, _resolve(names, params, ctx))
            poly = poly + w * QPoly.const(variety_count(vid, ctx))
        out.append(poly.coeffs)
    return tuple(out)


# -- the extra-variety identities ------------------------------------------
#
# The subalgebra formulas of M6/M7 carry extra root counts (V6_3, V6_4,
# V7_3) that the ideal formulas do not.  These identities tie each extra
# count back to one already present, which is what keeps the subalgebra
# and ideal formula lists the same size per family.


@dataclass(frozen=True)
class ExtraVarietyReport:
    """clause -> None when its hypothesis fails, else whether it held."""

    clause1: bool | None  # a,b != 0, a != -b:  |V6_2| = |V6_3|
    clause2: bool | None  # a = -b != 0:        |V6_2| - 1 = |V6_4|
    clause3: bool | None  # a,b != 0:           |V7_2| = |V7_3|

    def all_hold(self) -> bool:
        return all(c is not False for c in (self.clause1, self.clause2, self.clause3))


def extra_variety_identities(a: int, b: int, ctx: FieldCtx) -> ExtraVarietyReport:
    def cnt(tag):
        return variety_count(VarietyId(tag, (a, b)), ctx)

    nonzero = a != 0 and b != 0
    a_is_minus_b = ctx.add(a, b) == 0
    clause1 = clause2 = clause3 = None
    if nonzero and not a_is_minus_b:
        clause1 = cnt("V6_2") == cnt("V6_3")
    if a != 0 and a_is_minus_b:
        clause2 = cnt("V6_2") - 1 == cnt("V6_4")
    if nonzero:
        clause3 = cnt("V7_2") == cnt("V7_3")
    return ExtraVarietyReport(clause1, clause2, clause3)
