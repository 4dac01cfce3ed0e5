import itertools

import pytest

from fqzeta.formulas import (BranchTableError, QPoly, UnknownBranch,
                             VarietyId, _guard_holds, _parse_table,
                             branch_table, closed_form, evaluate,
                             gaussian_binomial, realized_q_polynomial,
                             select_branch, extra_variety_identities,
                             variety_count, variety_poly, variety_poly_int,
                             zeta_formula)
from fqzeta.gf import make_field
from fqzeta.liealg import FAMILIES, catalog, valid_params
from fqzeta.oracle import zeta_oracle

ODD_PRIME_POWERS_LE_49 = [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31,
                          37, 41, 43, 47, 49]


def field_of(q):
    from fqzeta.analysis import factor_prime_power
    p, k = factor_prime_power(q)
    return make_field(p, k)


def test_gaussian_binomial_against_subspace_oracle():
    # 35 two-dimensional subspaces of F_2^4, counted independently
    z = zeta_oracle(catalog("M1", (), make_field(2, 1)), "ideal")
    assert z.coeffs[2] == 35
    assert gaussian_binomial(4, 2, 2) == 35


def test_gaussian_binomial_edges_and_factorization():
    for n, q in [(1, 2), (4, 3), (6, 5)]:
        assert gaussian_binomial(n, 0, q) == 1
        assert gaussian_binomial(n, n, q) == 1
        assert gaussian_binomial(n, n + 1, q) == 0
        assert gaussian_binomial(n, -1, q) == 0
    for q in (2, 3, 5, 7):
        assert gaussian_binomial(4, 2, q) == (1 + q + q * q) * (1 + q * q)


def test_gaussian_binomial_symmetry():
    for n in range(7):
        for i in range(n + 1):
            for q in (2, 3, 4):
                assert gaussian_binomial(n, i, q) == gaussian_binomial(n, n - i, q)


def test_variety_counts_examples():
    for q in (2, 3, 4, 5, 7, 9):
        ctx = field_of(q)
        assert variety_count(VarietyId("V3", (0,)), ctx) == 1
    assert variety_count(VarietyId("V4", (1,)), make_field(5, 1)) == 2
    # |V13(0)| = 2 in every characteristic: x^2+x = x(x+1)
    for q in (2, 3, 4, 5, 7, 8, 9, 11):
        ctx = field_of(q)
        assert variety_count(VarietyId("V13", (0,)), ctx) == 2


def test_variety_degree_bounds():
    for q in (3, 5, 7):
        ctx = make_field(q, 1)
        for a in range(q):
            for b in range(q):
                for tag in ("V6_1", "V7_1"):
                    assert variety_count(VarietyId(tag, (a, b)), ctx) <= 3
            for tag in ("V3", "V4", "V13", "V14"):
                assert variety_count(VarietyId(tag, (a,)), ctx) <= 2


def test_variety_poly_int_matches_field_reduction():
    for tag, params in [("V3", (2,)), ("V6_3", (1, 2)), ("V7_3", (3, 1)),
                        ("V13", (4,))]:
        ints = variety_poly_int(tag, params)
        for q in (5, 7, 11):
            ctx = make_field(q, 1)
            fparams = tuple(ctx.embed(t) for t in params)
            assert [c % q for c in ints] == variety_poly(
                VarietyId(tag, fparams), ctx)


def test_closed_form_examples():
    ctx = make_field(7, 1)
    m8 = closed_form("M8", (), "ideal", ctx)
    assert [t.base.coeffs for t in m8.terms] == [(1,), (1, 1), (3,), (2,), (1,)]
    assert all(not t.varieties for t in m8.terms)

    l3 = closed_form("L3", (2,), "ideal", ctx)
    assert l3.guard == "a!=0"
    assert l3.terms[2].base.coeffs == ()
    assert l3.terms[2].varieties[0][1] == "V3"

    m9 = closed_form("M9", (1,), "ideal", ctx)
    assert [t.base.eval(7) for t in m9.terms] == [1, 8, 1, 0, 1]


def test_evaluate_examples():
    assert zeta_formula("M8", (), "ideal", make_field(7, 1)).coeffs == (1, 8, 3, 2, 1)
    assert zeta_formula("L1", (), "ideal", make_field(2, 1)).coeffs == (1, 7, 7, 1)
    # M7(2,0) ideal at p=31: both cubic counts are 3 since 31 = 2^2 + 27
    z = zeta_formula("M7", (2, 0), "ideal", make_field(31, 1))
    assert z.coeffs == (1, 1, 3, 3, 1)


def test_branch_guards_partition_every_family():
    table = branch_table()
    for q in (2, 3, 5):
        ctx = make_field(q, 1)
        for (family, kind), branches in table.items():
            for params in valid_params(family, ctx):
                hits = [br for br in branches
                        if _guard_holds(br.guard, params, ctx)]
                assert len(hits) == 1, (family, kind, params, q)


def test_templates_have_unit_endpoints():
    for (family, kind), branches in branch_table().items():
        for br in branches:
            for term in (br.terms[0], br.terms[-1]):
                assert term.base.coeffs == (1,) and not term.varieties, \
                    (family, kind, br.guard)


def test_select_branch_unknown():
    with pytest.raises(UnknownBranch):
        select_branch("XXX", (), "ideal", None)


def test_extra_variety_identity_examples():
    F5 = make_field(5, 1)
    rep = extra_variety_identities(1, 1, F5)
    assert rep.clause1 is True and rep.clause3 is True and rep.clause2 is None
    F7 = make_field(7, 1)
    rep2 = extra_variety_identities(3, 4, F7)  # 3 = -4 in F_7
    assert rep2.clause2 is True and rep2.clause1 is None
    rep3 = extra_variety_identities(0, 2, F7)
    assert (rep3.clause1, rep3.clause2, rep3.clause3) == (None, None, None)


def test_extra_variety_identities_small_fields():
    for q in (3, 5, 9):
        ctx = field_of(q)
        for a in range(1, q):
            for b in range(1, q):
                assert extra_variety_identities(a, b, ctx).all_hold(), (q, a, b)


def test_intro_and_body_groupings_agree():
    # |V6_2(0,b)| = |V3(b)| and |V7_2(0,b)| = |V4(b)|: the two ways of
    # writing the a=0 rows count the same roots
    for q in (2, 3, 4, 5, 7, 9, 11, 13, 16, 25):
        ctx = field_of(q)
        for b in range(1, ctx.q):
            assert variety_count(VarietyId("V6_2", (0, b)), ctx) == \
                variety_count(VarietyId("V3", (b,)), ctx)
            assert variety_count(VarietyId("V7_2", (0, b)), ctx) == \
                variety_count(VarietyId("V4", (b,)), ctx)


def test_qpoly_arithmetic():
    p = QPoly.of([1, 2]) * QPoly.of([0, 1]) + QPoly.const(3)
    assert p.coeffs == (3, 1, 2)
    assert p.eval(5) == 58
    assert (QPoly.of([1, 1]) - QPoly.of([1, 1])).is_zero()
    assert QPoly.of([1, 0, 2]).display() == "1 + 2q^2"
    assert QPoly.of([0, -1]).display() == "-q"


def test_realized_q_polynomial_separates_branch_instances():
    ctx = make_field(7, 1)
    sz1 = closed_form("L3", (1,), "ideal", ctx)   # disc 5 non-square: 0 roots
    sz2 = closed_form("L3", (2,), "ideal", ctx)   # disc 9 square: 2 roots
    r1 = realized_q_polynomial(sz1, (1,), ctx)
    r2 = realized_q_polynomial(sz2, (2,), ctx)
    assert r1 != r2
    assert r1[2] == () and r2[2] == (2,)


def test_table_loader_rejects_garbage():
    with pytest.raises(BranchTableError):
        _parse_table("L22 ideal any : 1 | 1 | 1\n")  # missing version line
    with pytest.raises(BranchTableError):
        _parse_table("version 1\nL22 ideal any : 1 | V3(a)*V4(a) | 1\n")
    with pytest.raises(BranchTableError):
        _parse_table("version 2\n")
    with pytest.raises(BranchTableError):
        _guard_holds("a<b", (1,), None)  # unknown guard atom


def test_env_override_table(tmp_path, monkeypatch):
    alt = tmp_path / "alt.txt"
    alt.write_text("version 1\nL22 ideal any : 1 | 5 | 1\n")
    monkeypatch.setenv("FQZETA_BRANCH_TABLE", str(alt))
    ctx = make_field(3, 1)
    assert zeta_formula("L22", (), "ideal", ctx).coeffs == (1, 5, 1)
    monkeypatch.delenv("FQZETA_BRANCH_TABLE")
    assert zeta_formula("L22", (), "ideal", ctx).coeffs == (1, 1, 1)


def test_formula_matches_oracle_spot_sample():
    # full equivalence is the acceptance gate; keep a small cross-check here
    for q, (p, k) in {3: (3, 1), 4: (2, 2)}.items():
        ctx = make_field(p, k)
        for fam in ("L22", "L3", "M3", "M6", "M13"):
            for params in valid_params(fam, ctx)[:4]:
                for kind in ("ideal", "subalgebra"):
                    assert zeta_formula(fam, params, kind, ctx).coeffs == \
                        zeta_oracle(catalog(fam, params, ctx), kind).coeffs
