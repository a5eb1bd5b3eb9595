"""Symbolic layer: sigma-log expansion, zeta relations, assembled systems.

The expansion coefficients and closed-form relations asserted below were
worked out by hand family by family; they are exact in the lambda symbols
and independent of the stretching index m, which the tests exercise by
comparing the smallest two members of each family.
"""
import json
from fractions import Fraction as F

import pytest

from nscurves.abelian import (
    AbelianExpr,
    build_inversion_system,
    emit_system,
    log_sigma_derivative_expansion,
    system_payload,
    wp,
    zeta,
)
from nscurves.algebra import WeightedPoly
from nscurves.curves import make_family
from nscurves.errors import OrderExceedsSupport
from nscurves.expansions import expand_at_infinity, first_kind_basis

L = WeightedPoly.gen


def combo(*parts):
    out = AbelianExpr.zero()
    for sym, coeff in parts:
        if not isinstance(coeff, WeightedPoly):
            coeff = WeightedPoly.const(coeff)
        out = out.add_symbol(sym, coeff)
    return out


def neg(*parts):
    return -combo(*parts)


# -- symbols and expressions -------------------------------------------------


def test_symbol_normalization():
    assert wp(2, 1) == wp(1, 2)
    assert wp(3, 1, 1).indices == (1, 1, 3)
    assert zeta(2).weight == 2
    assert wp(1, 1, 3).weight == 5


def test_expr_weight_counts_lambda():
    expr = combo((zeta(2), 1), (zeta(1), L(1)), (wp(1, 1), F(1, 2)))
    assert expr.weight == 2
    mixed = combo((zeta(2), 1), (wp(1, 3), 1))
    assert mixed.weight is None


def test_differentiate_rules():
    expr = combo((zeta(2), F(1, 2)), (wp(1, 1), L(1)))
    out = expr.differentiate(3)
    assert out == combo((wp(2, 3), F(-1, 2)), (wp(1, 1, 3), L(1)))


def test_differentiate_rank_cap():
    expr = combo((wp(1, 1, 1, 1, 1), 1))
    with pytest.raises(OrderExceedsSupport):
        expr.differentiate(1)


def test_expansion_order_cap():
    chart = expand_at_infinity(make_family(3, 4), 8)
    first = first_kind_basis(chart)
    with pytest.raises(OrderExceedsSupport):
        log_sigma_derivative_expansion(first, 4)
    with pytest.raises(ValueError):
        log_sigma_derivative_expansion(first, -1)


# -- the sigma-log expansion, family by family -------------------------------

# inside-parens content of T_p = -( ... ) for p = 1, 2, 3 as supported
T_TABLES = {
    (2, 5): [[(wp(1, 1), 1)]],
    (2, 7): [[(wp(1, 1), 1)]],
    (3, 4): [[(zeta(2), 1), (wp(1, 1), 1)]],
    (3, 7): [[(zeta(2), 1), (wp(1, 1), 1)]],
    (3, 5): [[(zeta(2), 1), (zeta(1), -L(1) / 3), (wp(1, 1), 1)]],
    (3, 8): [[(zeta(2), 1), (zeta(1), -L(1) / 3), (wp(1, 1), 1)]],
    (4, 5): [
        [(zeta(2), 1), (wp(1, 1), 1)],
        [
            (zeta(3), 1),
            (zeta(1), L(2) / 4),
            (wp(1, 2), F(3, 2)),
            (wp(1, 1, 1), F(-1, 2)),
        ],
    ],
    (4, 7): [
        [(zeta(2), 1), (zeta(1), -L(1) / 2), (wp(1, 1), 1)],
        [
            (zeta(3), 1),
            (zeta(2), -L(1) / 4),
            (zeta(1), -(L(2) / 4 - L(1) ** 2 * F(5, 32))),
            (wp(1, 2), F(3, 2)),
            (wp(1, 1), L(1) * F(-3, 4)),
            (wp(1, 1, 1), F(-1, 2)),
        ],
    ],
    (5, 6): [
        [(zeta(2), 1), (wp(1, 1), 1)],
        [
            (zeta(3), 1),
            (zeta(1), L(2) * F(2, 5)),
            (wp(1, 2), F(3, 2)),
            (wp(1, 1, 1), F(-1, 2)),
        ],
        [
            (zeta(4), 1),
            (zeta(2), L(2) / 5),
            (zeta(1), L(3) / 5),
            (wp(2, 2), F(1, 2)),
            (wp(1, 3), F(4, 3)),
            (wp(1, 1), L(2) * F(8, 15)),
            (wp(1, 1, 2), -1),
            (wp(1, 1, 1, 1), F(1, 6)),
        ],
    ],
    (5, 7): [
        [(zeta(2), 1), (zeta(1), -L(1) / 5), (wp(1, 1), 1)],
        [
            (zeta(3), 1),
            (zeta(2), L(1) / 5),
            (zeta(1), L(1) ** 2 * F(-2, 25)),
            (wp(1, 2), F(3, 2)),
            (wp(1, 1), L(1) * F(-3, 10)),
            (wp(1, 1, 1), F(-1, 2)),
        ],
        [
            (zeta(4), 1),
            (zeta(3), L(1) * F(-2, 5)),
            (zeta(2), L(1) ** 2 * F(-3, 25)),
            (zeta(1), -(L(3) * F(2, 5) - L(1) ** 3 * F(7, 125))),
            (wp(2, 2), F(1, 2)),
            (wp(1, 3), F(4, 3)),
            (wp(1, 2), L(1) / 15),
            (wp(1, 1), L(1) ** 2 * F(-13, 150)),
            (wp(1, 1, 2), -1),
            (wp(1, 1, 1), L(1) / 5),
            (wp(1, 1, 1, 1), F(1, 6)),
        ],
    ],
    (5, 8): [
        [(zeta(2), 1), (zeta(1), L(1) / 5), (wp(1, 1), 1)],
        [
            (zeta(3), 1),
            (zeta(2), -L(1) / 5),
            (zeta(1), -(L(2) / 5 + L(1) ** 2 * F(2, 25))),
            (wp(1, 2), F(3, 2)),
            (wp(1, 1), L(1) * F(3, 10)),
            (wp(1, 1, 1), F(-1, 2)),
        ],
        [
            (zeta(4), 1),
            (zeta(3), L(1) * F(2, 5)),
            (zeta(2), (L(2) / 5 + L(1) ** 2 / 25) * -3),
            (zeta(1), -(L(2) * L(1) * F(6, 25) + L(1) ** 3 * F(7, 125))),
            (wp(2, 2), F(1, 2)),
            (wp(1, 3), F(4, 3)),
            (wp(1, 2), -L(1) / 15),
            (wp(1, 1), -(L(2) * F(4, 15) + L(1) ** 2 * F(13, 150))),
            (wp(1, 1, 2), -1),
            (wp(1, 1, 1), -L(1) / 5),
            (wp(1, 1, 1, 1), F(1, 6)),
        ],
    ],
    (5, 9): [
        [(zeta(2), 1), (zeta(1), L(1) * F(-3, 5)), (wp(1, 1), 1)],
        [
            (zeta(3), 1),
            (zeta(2), L(1) * F(-2, 5)),
            (zeta(1), -(L(2) * F(2, 5) - L(1) ** 2 * F(7, 25))),
            (wp(1, 2), F(3, 2)),
            (wp(1, 1), L(1) * F(-9, 10)),
            (wp(1, 1, 1), F(-1, 2)),
        ],
        [
            (zeta(4), 1),
            (zeta(3), -L(1) / 5),
            (zeta(2), -(L(2) / 5 - L(1) ** 2 * F(3, 25))),
            (
                zeta(1),
                -(
                    L(3) / 5
                    - L(2) * L(1) * F(6, 25)
                    + L(1) ** 3 * F(11, 125)
                ),
            ),
            (wp(2, 2), F(1, 2)),
            (wp(1, 3), F(4, 3)),
            (wp(1, 2), L(1) * F(-17, 15)),
            (wp(1, 1), -(L(2) * F(8, 15) - L(1) ** 2 * F(83, 150))),
            (wp(1, 1, 2), -1),
            (wp(1, 1, 1), L(1) * F(3, 5)),
            (wp(1, 1, 1, 1), F(1, 6)),
        ],
    ],
}


@pytest.mark.parametrize("n,s", sorted(T_TABLES))
def test_log_sigma_expansion(n, s):
    chart = expand_at_infinity(make_family(n, s), 10)
    first = first_kind_basis(chart)
    table = T_TABLES[(n, s)]
    expansion = log_sigma_derivative_expansion(first, len(table))
    assert expansion[0] == neg((zeta(1), 1))
    for p, parts in enumerate(table, start=1):
        assert expansion[p] == neg(*parts), f"T_{p}"


@pytest.mark.parametrize("n,s", sorted(T_TABLES))
def test_expansion_weight_homogeneous(n, s):
    chart = expand_at_infinity(make_family(n, s), 10)
    first = first_kind_basis(chart)
    expansion = log_sigma_derivative_expansion(first, 3)
    for p, t in enumerate(expansion):
        assert t.weight == p + 1


# -- closed-form relations ---------------------------------------------------

R1 = neg((zeta(1), 1))
R2_HYP = neg((wp(1, 1), 1))
R2 = neg((zeta(2), 1), (wp(1, 1), 1))


def R3(extra=None):
    parts = [(zeta(3), 1), (wp(1, 2), F(3, 2)), (wp(1, 1, 1), F(-1, 2))]
    if extra is not None:
        parts.append((wp(1, 1), extra))
    return neg(*parts)


def R4(c12, c11, c111=None):
    parts = [
        (zeta(4), 1),
        (wp(2, 2), F(1, 2)),
        (wp(1, 3), F(4, 3)),
        (wp(1, 1, 2), -1),
        (wp(1, 1, 1, 1), F(1, 6)),
    ]
    if c12 is not None:
        parts.append((wp(1, 2), c12))
    if c11 is not None:
        parts.append((wp(1, 1), c11))
    if c111 is not None:
        parts.append((wp(1, 1, 1), c111))
    return neg(*parts)


RELATION_TABLES = {
    (2, 5, False): [R1, R2_HYP],
    (2, 7, False): [R1, R2_HYP],
    (2, 9, False): [R1, R2_HYP],
    (3, 4, False): [R1, R2],
    (3, 4, True): [R1, R2],
    (3, 5, False): [R1, R2],
    (3, 7, False): [R1, R2],
    (3, 8, False): [R1, R2],
    (4, 5, False): [R1, R2, R3()],
    (4, 7, False): [R1, R2, R3(-L(1) / 2)],
    (5, 6, False): [R1, R2, R3(), R4(None, L(2) / 3)],
    (5, 7, False): [
        R1,
        R2,
        R3(-L(1) / 2),
        R4(L(1) * F(2, 3), -(L(1) ** 2) / 6),
    ],
    (5, 8, False): [
        R1,
        R2,
        R3(L(1) / 2),
        R4(L(1) * F(-2, 3), (L(2) - L(1) ** 2 / 2) / 3),
    ],
    (5, 9, False): [
        R1,
        R2,
        R3(-L(1) / 2),
        R4(L(1) * F(-5, 6), -(L(2) - L(1) ** 2) / 3, L(1) / 2),
    ],
}


@pytest.mark.parametrize("n,s,ext", sorted(RELATION_TABLES))
def test_zeta_relations_closed_form(n, s, ext):
    system = build_inversion_system(make_family(n, s, extended=ext))
    expected = RELATION_TABLES[(n, s, ext)]
    assert len(system.zeta_rel) == len(expected)
    for level, (got, want) in enumerate(zip(system.zeta_rel, expected), 1):
        assert got == want, f"R_{level}"
        assert got.weight == level


def test_relations_do_not_depend_on_stretching():
    for n, s_small, s_big in [(3, 4, 7), (3, 5, 8)]:
        small = build_inversion_system(make_family(n, s_small))
        big = build_inversion_system(make_family(n, s_big))
        assert small.zeta_rel == big.zeta_rel


# -- assembled systems -------------------------------------------------------


def test_r_function_assembly_genus_two():
    # weight-4 function: x^2 - wp_11 x - wp_13; weight-5: 2y + wp_111 x + wp_113
    fam = make_family(2, 5)
    system = build_inversion_system(fam)
    x2 = fam.monomial_of_label(1)
    y1 = fam.monomial_of_label(2)
    x1 = fam.monomial_of_label(-1)
    one = fam.monomial_of_label(-3)
    assert (x2.j, x2.i) == (0, 2)
    assert (y1.j, y1.i) == (1, 0)
    fn1, fn2 = system.r_functions
    assert (fn1.level, fn1.weight) == (1, 4)
    assert fn1.terms == {
        x2: AbelianExpr.from_constant(1),
        x1: combo((wp(1, 1), -1)),
        one: combo((wp(1, 3), -1)),
    }
    assert (fn2.level, fn2.weight) == (2, 5)
    assert fn2.terms == {
        y1: AbelianExpr.from_constant(2),
        x1: combo((wp(1, 1, 1), 1)),
        one: combo((wp(1, 1, 3), 1)),
    }


def test_r_function_gap_coefficients_trigonal():
    # level 2 of (3,5): entire part 2x^3 + l1 yx, gap-1 coefficient
    # -d R_2 / d u_1 = -(wp_12 - wp_111)
    fam = make_family(3, 5)
    system = build_inversion_system(fam)
    fn2 = system.r_functions[1]
    assert fn2.terms[fam.monomial_of_label(2)] == AbelianExpr.from_constant(2)
    assert fn2.terms[fam.monomial_of_label(1)] == AbelianExpr.from_constant(
        L(1)
    )
    assert fn2.terms[fam.monomial_of_label(-1)] == combo(
        (wp(1, 2), -1), (wp(1, 1, 1), 1)
    )


def test_r_function_weights_are_homogeneous():
    for n, s in [(3, 5), (4, 7), (5, 8)]:
        fam = make_family(n, s)
        system = build_inversion_system(fam)
        genus = fam.genus
        for fn in system.r_functions:
            assert fn.weight == 2 * genus - 1 + fn.level
            for mono, coeff in fn.terms.items():
                assert coeff.weight is not None, (mono, coeff)
                assert mono.sato_weight + coeff.weight == fn.weight


# -- emission ----------------------------------------------------------------


def test_emission_is_deterministic():
    a = emit_system(build_inversion_system(make_family(3, 4)), fmt="json")
    b = emit_system(build_inversion_system(make_family(3, 4)), fmt="json")
    assert a == b
    assert a.endswith("\n")


def test_json_payload_shape():
    fam = make_family(4, 5)
    system = build_inversion_system(fam)
    data = json.loads(emit_system(system, fmt="json"))
    assert data == system_payload(system)
    assert (data["n"], data["s"], data["m"]) == (4, 5, 1)
    assert data["genus"] == 6
    assert data["extended"] is False
    assert data["gaps"] == [1, 2, 3, 6, 7, 11]
    assert len(data["functions"]) == 3
    weights = [fn["weight"] for fn in data["functions"]]
    assert weights == [12, 13, 14]
    for fn in data["functions"]:
        svals = [
            fn_term["monomial"]["j"] * 5 + fn_term["monomial"]["i"] * 4
            for fn_term in fn["terms"]
        ]
        assert svals == sorted(svals, reverse=True)


def test_latex_emission_pins():
    out = emit_system(build_inversion_system(make_family(2, 5)), fmt="latex")
    assert out.splitlines() == [
        r"\begin{align*}",
        r"R_{4}(u) &= x^{2} - \wp_{1,1} x - \wp_{1,3} \\",
        r"R_{5}(u) &= 2 y + \wp_{1,1,1} x + \wp_{1,1,3}",
        r"\end{align*}",
    ]
    out34 = emit_system(build_inversion_system(make_family(3, 4)), fmt="latex")
    assert (
        r"R_{7}(u) &= 2 y x - \left( \wp_{1,2} - \wp_{1,1,1} \right) y"
        in out34
    )


def test_unknown_format_rejected():
    system = build_inversion_system(make_family(2, 5))
    with pytest.raises(ValueError):
        emit_system(system, fmt="yaml")
