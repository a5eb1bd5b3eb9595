"""Curve family construction: gaps, monomial order, lambda indexing, fibers."""
import math
from fractions import Fraction

import pytest

from nscurves.algebra import WeightedPoly
from nscurves.curves import (
    admissible_indices,
    check_nondegenerate,
    family_from_text,
    family_to_text,
    make_family,
)
from nscurves.errors import (
    BranchCollision,
    InvalidLambdaIndex,
    NotCoprime,
    SymbolicLambda,
)


def test_family_validation():
    with pytest.raises(NotCoprime):
        make_family(2, 4)
    with pytest.raises(NotCoprime):
        make_family(3, 6)
    with pytest.raises(NotCoprime):
        make_family(4, 3)
    with pytest.raises(NotCoprime):
        make_family(1, 5)


def test_genus_and_gaps_small_families():
    cases = {
        (2, 3): (1, (1,)),
        (2, 5): (2, (1, 3)),
        (2, 7): (3, (1, 3, 5)),
        (3, 4): (3, (1, 2, 5)),
        (3, 5): (4, (1, 2, 4, 7)),
        (4, 5): (6, (1, 2, 3, 6, 7, 11)),
        (5, 6): (10, (1, 2, 3, 4, 7, 8, 9, 13, 14, 19)),
    }
    for (n, s), (genus, gaps) in cases.items():
        fam = make_family(n, s)
        assert fam.genus == genus == (n - 1) * (s - 1) // 2
        assert fam.gaps == gaps
        assert max(gaps) == 2 * genus - 1


def test_gap_structure_general():
    for n, s in [(2, 9), (3, 7), (3, 8), (4, 7), (5, 9)]:
        fam = make_family(n, s)
        if n == 2:
            assert fam.gaps == tuple(range(1, 2 * fam.genus, 2))
        else:
            # the first n-1 positive integers are always gaps for n >= 3
            assert fam.gaps[: n - 1] == tuple(range(1, n))


def test_monomial_order_and_labels_34():
    fam = make_family(3, 4)
    basis = fam.monomial_basis(2 * fam.genus)
    texts = [m.as_text() for m in basis]
    assert texts == ["1", "x", "y", "x^2", "y*x", "y^2"]
    assert [m.sato_weight for m in basis] == [0, 3, 4, 6, 7, 8]
    assert [m.label for m in basis] == [-5, -2, -1, 1, 2, 3]
    # labels of the constant-to-first-gap block complement the gap sequence
    assert fam.monomial_of_label(1).as_text() == "x^2"
    assert fam.monomial_of_label(-5).as_text() == "1"
    assert fam.monomial_of_weight(5) is None  # 5 is a gap


def test_monomial_weights_cover_nongaps():
    fam = make_family(4, 7)
    basis = fam.monomial_basis(30)
    weights = [m.sato_weight for m in basis]
    assert weights == sorted(weights)
    nongaps = [w for w in range(weights[-1] + 1) if w not in fam.gaps]
    assert weights == nongaps


def test_admissible_indices_34():
    canonical = admissible_indices(3, 4)
    assert set(canonical) == {2, 5, 6, 8, 9, 12}
    assert canonical[2] == (1, 2)
    assert canonical[12] == (0, 0)
    ext = admissible_indices(3, 4, extended=True)
    assert set(ext) == {1, 2, 3, 4, 5, 6, 8, 9, 12}
    assert ext[1] == (2, 1)
    assert ext[3] == (0, 3)
    assert ext[4] == (2, 0)


def test_lambda_index_weight_consistency():
    for n, s in [(2, 5), (3, 5), (4, 5), (5, 9)]:
        for k, (j, i) in admissible_indices(n, s).items():
            assert k == n * s - j * s - i * n
            assert k > 0 and 0 <= j <= n - 2 and 0 <= i <= s - 2


def test_invalid_lambda_rejected():
    with pytest.raises(InvalidLambdaIndex):
        make_family(3, 4, {1: 1})
    with pytest.raises(InvalidLambdaIndex):
        make_family(3, 4, {7: 1})
    fam = make_family(3, 4, {1: Fraction(1, 2)}, extended=True)
    assert fam.lam[1] == WeightedPoly.const(Fraction(1, 2))


def test_exact_vs_numeric_lambda():
    sym = make_family(3, 4)
    assert sym.is_exact()
    with pytest.raises(SymbolicLambda):
        sym.numeric_lambda()
    num = make_family(2, 5, {4: 0.5, 6: -1.0, 8: 0.0, 10: 2.0})
    assert num.numeric_lambda()[4] == 0.5
    with pytest.raises(SymbolicLambda):
        num.exact_lambda()
    exact = make_family(2, 5, {4: Fraction(1, 2), 6: -1})
    assert exact.numeric_lambda() == {4: 0.5, 6: -1.0}
    assert exact.exact_lambda()[6] == WeightedPoly.const(-1)


def test_symbolic_twin_keeps_shape():
    fam = make_family(3, 4, {1: 0.5}, extended=True)
    twin = fam.symbolic_twin()
    assert twin.extended and twin.is_exact()
    assert set(twin.lam) == set(admissible_indices(3, 4, extended=True))


def test_eval_and_fiber_25():
    # y^2 = x^5 - x: lambda_8 = -1, so f = -y^2 + x^5 - x
    fam = make_family(2, 5, {8: -1})
    x = 2.0
    points = fam.lift_x_to_points(x)
    assert len(points) == 2
    for p in points:
        assert abs(fam.eval_f(p.x, p.y)) < 1e-9
        assert abs(p.y ** 2 - (x ** 5 - x)) < 1e-9
    assert abs(fam.eval_dyf(points[0].x, points[0].y) + 2 * points[0].y) < 1e-12


def test_fiber_full_size_at_generic_x():
    fam = make_family(3, 4, {2: 1.0, 5: -0.5})
    points = fam.lift_x_to_points(1.3 + 0.2j)
    assert len(points) == 3
    for p in points:
        assert abs(fam.eval_f(p.x, p.y)) < 1e-8


def test_curve_file_roundtrip():
    text = """
    # a tetragonal curve
    n = 4
    s = 5
    lambda.2 = 1/2
    lambda.7 = -3
    lambda.10 = sym
    """
    fam = family_from_text(text)
    assert (fam.n, fam.s) == (4, 5)
    assert fam.lam[2] == WeightedPoly.const(Fraction(1, 2))
    assert fam.lam[10] == WeightedPoly.gen(10)
    again = family_from_text(family_to_text(fam))
    assert again.lam == fam.lam and again.n == fam.n and again.s == fam.s


def test_curve_file_errors():
    with pytest.raises(ValueError):
        family_from_text("n = 3")
    with pytest.raises(ValueError):
        family_from_text("n = 3\ns = 4\nbogus = 1")


def test_nondegeneracy_check():
    good = make_family(2, 3, {4: -1.0, 6: 0.0})
    assert check_nondegenerate(good) > 0.5
    cusp = make_family(2, 3, {4: 0.0, 6: 0.0})
    with pytest.raises(BranchCollision):
        check_nondegenerate(cusp)
    smooth5 = make_family(2, 5, {4: -5.0, 6: 0.0, 8: 4.0, 10: 0.0})
    # y^2 = x^5 - 5 x^3 + 4 x = x(x^2-1)(x^2-4): branch points -2,-1,0,1,2
    assert check_nondegenerate(smooth5) == pytest.approx(1.0, rel=1e-6)
