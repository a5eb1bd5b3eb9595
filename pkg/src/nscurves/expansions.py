"""Series expansions in the local parameter at the place at infinity.

With x = xi^-n and y = xi^-s h(xi), the curve equation becomes

    -h^n + 1 + sum_k lambda_k xi^k h^(j_k) = 0,        h(0) = 1,

solved by Newton iteration on h.  Everything else is series bookkeeping on
top of h: each basis monomial y^j x^i pulls back to xi^(-weight) h^j, the
form dx/(df/dy) pulls back to xi^(2g-1) (1 + ...) dxi, and the two
differential bases are

    du_w  = M_(2g-1-w) dx/(df/dy) = xi^(w-1) (1 + ...) dxi,   w a gap,
    dr_l  = (l M_l + corrections) dx/(df/dy) = l xi^(-l-1) (1 + ...) dxi.

The corrections, supported on monomials of lower label, are fixed by the
residue pairing: res(u_w dr_l) must vanish for every gap w < l.  Solving for
them is triangular because adding M_kappa only disturbs residues against
gaps w <= kappa.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import LaurentSeries, WeightedPoly, residue_of_product
from .curves import CurveFamily, EntireRationalFn, Monomial
from .errors import NewtonStall, UnsolvableCorrection


def default_order(fam: CurveFamily) -> int:
    """Truncation order used when none is requested: 2g + n + 2."""
    return 2 * fam.genus + fam.n + 2


@dataclass
class InfinityChart:
    """Cached series data of one family at one truncation order."""

    fam: CurveFamily
    order: int
    h_series: LaurentSeries
    x_series: LaurentSeries
    y_series: LaurentSeries
    dyf_series: LaurentSeries
    dx_series: LaurentSeries
    dxdyf_series: LaurentSeries

    def __post_init__(self):
        n = self.fam.n
        self._h_pow = [LaurentSeries.one(self.order)]
        for _ in range(1, n):
            self._h_pow.append(self._h_pow[-1] * self.h_series)
        self._hj_dxdyf = [p * self.dxdyf_series for p in self._h_pow]

    def mono_series(self, mono: Monomial) -> LaurentSeries:
        """The pullback of y^j x^i: xi^(-sato_weight) h^j."""
        return self._h_pow[mono.j].shift(-mono.sato_weight)

    def mono_dxdyf(self, mono: Monomial) -> LaurentSeries:
        """The pullback of y^j x^i dx/(df/dy), per dxi."""
        return self._hj_dxdyf[mono.j].shift(
            -mono.j * self.fam.s - mono.i * self.fam.n
        )

    def fn_dxdyf(self, fn: EntireRationalFn) -> LaurentSeries:
        total = LaurentSeries.zero(self.order)
        for mono, coeff in fn.sorted_terms():
            total = total + self.mono_dxdyf(mono).scale(coeff)
        return total


def expand_at_infinity(fam: CurveFamily, order: int | None = None) -> InfinityChart:
    """Solve the branch at infinity to the given relative order."""
    if order is None:
        order = default_order(fam)
    if order < 2:
        raise ValueError("expansion order must be at least 2")
    n, s = fam.n, fam.s
    lam = fam.exact_lambda()
    terms = [(k, j) for k, j, _, _ in fam.lambda_terms()]

    def curve_eq(h: LaurentSeries) -> LaurentSeries:
        val = LaurentSeries.one(order) - h ** n
        for k, j in terms:
            val = val + (h ** j).shift(k).scale(lam[k]).truncated(order)
        return val

    def curve_eq_dy(h: LaurentSeries) -> LaurentSeries:
        val = (h ** (n - 1)).scale(-n)
        for k, j in terms:
            if j:
                val = val + (h ** (j - 1)).shift(k).scale(lam[k] * j).truncated(order)
        return val

    h = LaurentSeries.one(order)
    for _ in range(order.bit_length() + 4):
        defect = curve_eq(h)
        if defect.is_zero():
            break
        h = (h - defect * curve_eq_dy(h).invert()).truncated(order)
    else:
        raise NewtonStall(
            f"branch solve at infinity did not converge at order {order}"
        )

    x_series = LaurentSeries.monomial(-n, 1, -n + order)
    y_series = h.shift(-s)
    # df/dy = xi^(s-ns) * (the h-derivative of the transformed equation)
    dyf_series = curve_eq_dy(h).shift(s - n * s)
    dx_series = LaurentSeries.monomial(-n - 1, -n, -n - 1 + order)
    dxdyf_series = dx_series * dyf_series.invert()
    lead_exp, lead = dxdyf_series.leading()
    assert lead_exp == n * s - n - s - 1 and lead == WeightedPoly.one()
    return InfinityChart(
        fam, order, h, x_series, y_series, dyf_series, dx_series, dxdyf_series
    )


@dataclass
class FirstKindBasis:
    """Holomorphic differentials du_w, one per gap, normalized at infinity."""

    fam: CurveFamily
    gaps: tuple[int, ...]
    numerators: list[Monomial]
    du_series: list[LaurentSeries]
    u_series: list[LaurentSeries]

    def u_of_gap(self, w: int) -> LaurentSeries:
        return self.u_series[self.gaps.index(w)]


def first_kind_basis(chart: InfinityChart) -> FirstKindBasis:
    fam = chart.fam
    numerators, du_series, u_series = [], [], []
    for w in fam.gaps:
        mono = fam.monomial_of_weight(2 * fam.genus - 1 - w)
        assert mono is not None, "gap symmetry guarantees this weight is realized"
        du = chart.mono_dxdyf(mono)
        exp, lead = du.leading()
        assert exp == w - 1 and lead == WeightedPoly.one()
        numerators.append(mono)
        du_series.append(du)
        u_series.append(du.integrate())
    return FirstKindBasis(fam, fam.gaps, numerators, du_series, u_series)


@dataclass
class SecondKindBasis:
    """Second-kind differentials dr_l with poles only at infinity.

    Numerator l carries leading term l M_l; corrections on lower labels
    enforce res(u_w dr_l) = 0 for gaps w < l.  The list has n-1 entries,
    except n = 2 where two are needed.
    """

    fam: CurveFamily
    numerators: list[EntireRationalFn]
    dr_series: list[LaurentSeries]
    r_series: list[LaurentSeries]


def second_kind_count(fam: CurveFamily) -> int:
    return 2 if fam.n == 2 else fam.n - 1


def associated_second_kind(
    chart: InfinityChart, first: FirstKindBasis
) -> SecondKindBasis:
    fam = chart.fam
    numerators, dr_series, r_series = [], [], []
    for level in range(1, second_kind_count(fam) + 1):
        coeffs: dict[Monomial, WeightedPoly] = {}
        mono = fam.monomial_of_label(level)
        coeffs[mono] = WeightedPoly.const(level)
        dr = chart.mono_dxdyf(mono).scale(level)
        # residues against gaps w > kappa are blind to an M_kappa correction,
        # so sweeping kappa = level-1 .. 1 never disturbs a solved condition
        for w in range(level - 1, 0, -1):
            u_w = first.u_of_gap(w)
            basis_mono = fam.monomial_of_label(w)
            unit = residue_of_product(u_w, chart.mono_dxdyf(basis_mono))
            if unit != WeightedPoly.const(Fraction(1, w)):
                raise UnsolvableCorrection(
                    f"diagonal residue for label {w} is {unit.to_text()}, not 1/{w}"
                )
            mismatch = residue_of_product(u_w, dr)
            if mismatch.is_zero():
                continue
            fix = mismatch * WeightedPoly.const(-w)
            coeffs[basis_mono] = fix
            dr = dr + chart.mono_dxdyf(basis_mono).scale(fix)
        numerators.append(EntireRationalFn(coeffs))
        dr_series.append(dr)
        # res(dr) = 0 is forced (single pole); integrate() would raise otherwise
        r_series.append(dr.integrate())
    return SecondKindBasis(fam, numerators, dr_series, r_series)


def check_rcond(
    first: FirstKindBasis, second: SecondKindBasis
) -> list[list[WeightedPoly]]:
    """The full residue pairing matrix: rows gaps, columns dr levels.

    Row i, column l holds res(u_(w_i) dr_(l+1)); the first columns of the
    identity matrix certify the normalization.
    """
    return [
        [residue_of_product(u, dr) for dr in second.dr_series]
        for u in first.u_series
    ]
