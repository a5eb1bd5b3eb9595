"""Symbolic calculus of sigma-quotients and the derived inversion systems.

The only facts used about the sigma function are structural: zeta_w is its
w-th logarithmic derivative, the functions wp_{i,j,...} = -d^r log sigma are
symmetric in their indices, and differentiating raises the rank by one,

    d zeta_a / d u_w   = -wp_{a,w},
    d wp_S / d u_w     =  wp_{S + (w,)}.

Pulling the divisor point through the Abel map gives the expansion

    T(xi) = d/dxi log sigma(u - A(xi)) = -sum_i A_i'(xi) zeta_(w_i)(u - A(xi)),

a Laurent-in-xi object whose coefficients are linear in the symbols above
with exact series coefficients.  Pairing T against the second-kind integrals
r_l and taking residues produces, for each level l, a closed expression

    R_l(u) = -res(r_l T) = -zeta_l - (rank >= 2 terms),

and differentiating those by u_w assembles the inversion system itself.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebra import WeightedPoly
from .curves import CurveFamily, EntireRationalFn, Monomial
from .errors import OrderExceedsSupport, ZetaLeakage
from .expansions import (
    FirstKindBasis,
    SecondKindBasis,
    associated_second_kind,
    expand_at_infinity,
    first_kind_basis,
    second_kind_count,
)

MAX_WP_RANK = 5


@dataclass(frozen=True)
class AbelianSymbol:
    """zeta_w or wp_{i1,...,ir}; indices are gap values, kept sorted."""

    kind: str  # "zeta" | "wp"
    indices: tuple[int, ...]

    def __post_init__(self):
        if self.kind == "zeta":
            assert len(self.indices) == 1
        elif self.kind == "wp":
            assert 2 <= len(self.indices) <= MAX_WP_RANK
            assert self.indices == tuple(sorted(self.indices))
        else:
            raise ValueError(f"unknown symbol kind {self.kind!r}")

    @property
    def json_kind(self) -> str:
        return "zeta" if self.kind == "zeta" else f"wp{len(self.indices)}"

    @property
    def weight(self) -> int:
        return sum(self.indices)

    def sort_key(self) -> tuple:
        return (self.kind != "zeta", len(self.indices), self.indices)

    def to_latex(self) -> str:
        body = ",".join(str(i) for i in self.indices)
        if self.kind == "zeta":
            return f"\\zeta_{{{body}}}"
        return f"\\wp_{{{body}}}"

    def to_text(self) -> str:
        body = ",".join(str(i) for i in self.indices)
        return ("zeta[" if self.kind == "zeta" else "wp[") + body + "]"


def zeta(w: int) -> AbelianSymbol:
    return AbelianSymbol("zeta", (w,))


def wp(*indices: int) -> AbelianSymbol:
    return AbelianSymbol("wp", tuple(sorted(indices)))


class AbelianExpr:
    """A finite sum  constant + sum c_sym * sym  with WeightedPoly weights."""

    __slots__ = ("terms", "constant")

    def __init__(
        self,
        terms: Mapping[AbelianSymbol, WeightedPoly] | None = None,
        constant: WeightedPoly | None = None,
    ):
        self.terms = {
            s: c for s, c in (terms or {}).items() if not c.is_zero()
        }
        self.constant = constant if constant is not None else WeightedPoly.zero()

    @classmethod
    def zero(cls) -> "AbelianExpr":
        return cls()

    @classmethod
    def from_constant(cls, value: WeightedPoly | int | Fraction) -> "AbelianExpr":
        if not isinstance(value, WeightedPoly):
            value = WeightedPoly.const(value)
        return cls(constant=value)

    @classmethod
    def from_symbol(
        cls, sym: AbelianSymbol, coeff: WeightedPoly | int | Fraction = 1
    ) -> "AbelianExpr":
        if not isinstance(coeff, WeightedPoly):
            coeff = WeightedPoly.const(coeff)
        return cls({sym: coeff})

    def is_zero(self) -> bool:
        return not self.terms and self.constant.is_zero()

    def __add__(self, other: "AbelianExpr") -> "AbelianExpr":
        terms = dict(self.terms)
        for sym, c in other.terms.items():
            acc = terms.get(sym, WeightedPoly.zero()) + c
            if acc.is_zero():
                terms.pop(sym, None)
            else:
                terms[sym] = acc
        return AbelianExpr(terms, self.constant + other.constant)

    def __neg__(self) -> "AbelianExpr":
        return AbelianExpr(
            {s: -c for s, c in self.terms.items()}, -self.constant
        )

    def __sub__(self, other: "AbelianExpr") -> "AbelianExpr":
        return self + (-other)

    def scale(self, factor: WeightedPoly | int | Fraction) -> "AbelianExpr":
        if not isinstance(factor, WeightedPoly):
            factor = WeightedPoly.const(factor)
        return AbelianExpr(
            {s: c * factor for s, c in self.terms.items()},
            self.constant * factor,
        )

    def add_symbol(self, sym: AbelianSymbol, coeff: WeightedPoly) -> "AbelianExpr":
        return self + AbelianExpr.from_symbol(sym, coeff)

    def differentiate(self, w: int) -> "AbelianExpr":
        """d/du_w; constants vanish, zeta drops to -wp, wp gains an index."""
        out = AbelianExpr.zero()
        for sym, c in self.terms.items():
            if sym.kind == "zeta":
                out = out.add_symbol(wp(sym.indices[0], w), -c)
            else:
                if len(sym.indices) + 1 > MAX_WP_RANK:
                    raise OrderExceedsSupport(
                        f"differentiation would need wp of rank {len(sym.indices) + 1}"
                    )
                out = out.add_symbol(wp(*sym.indices, w), c)
        return out

    @property
    def weight(self) -> int | None:
        """Common weight of all contributions, counting wgt u_w = -w."""
        weights = set()
        if not self.constant.is_zero():
            cw = self.constant.weight
            if cw is None:
                return None
            weights.add(cw)
        for sym, c in self.terms.items():
            cw = c.weight
            if cw is None:
                return None
            weights.add(cw + sym.weight)
        if len(weights) == 1:
            return weights.pop()
        return None

    def zeta_terms(self) -> dict[int, WeightedPoly]:
        return {
            s.indices[0]: c for s, c in self.terms.items() if s.kind == "zeta"
        }

    def canonical_terms(self) -> list[tuple[AbelianSymbol, WeightedPoly]]:
        return sorted(self.terms.items(), key=lambda sc: sc[0].sort_key())

    def eval_numeric(
        self,
        symbol_values: Mapping[AbelianSymbol, complex],
        lam: Mapping[int, complex],
    ) -> complex:
        total = self.constant.eval_numeric(lam)
        for sym, c in self.terms.items():
            total += c.eval_numeric(lam) * complex(symbol_values[sym])
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbelianExpr):
            return NotImplemented
        return self.terms == other.terms and self.constant == other.constant

    def __hash__(self) -> int:
        return hash((frozenset(self.terms.items()), self.constant))

    def __repr__(self) -> str:
        return f"AbelianExpr({self.to_text()})"

    def to_text(self) -> str:
        chunks = []
        if not self.constant.is_zero():
            chunks.append(self.constant.to_text())
        for sym, c in self.canonical_terms():
            coeff = c.to_text()
            if coeff == "1":
                chunks.append(sym.to_text())
            elif coeff == "-1":
                chunks.append(f"-{sym.to_text()}")
            else:
                if " " in coeff:
                    coeff = f"({coeff})"
                chunks.append(f"{coeff}*{sym.to_text()}")
        if not chunks:
            return "0"
        text = chunks[0]
        for chunk in chunks[1:]:
            text += f" - {chunk[1:]}" if chunk.startswith("-") else f" + {chunk}"
        return text


def _multisets_bounded(values: tuple[int, ...], budget: int) -> list[tuple[int, ...]]:
    """All nondecreasing tuples from values (with repeats) of sum <= budget."""
    out: list[tuple[int, ...]] = [()]

    def rec(prefix: tuple[int, ...], start: int, left: int):
        for idx in range(start, len(values)):
            a = values[idx]
            if a > left:
                break
            seq = prefix + (a,)
            out.append(seq)
            rec(seq, idx, left - a)

    rec((), 0, budget)
    return out


def log_sigma_derivative_expansion(
    first: FirstKindBasis, order: int
) -> list[AbelianExpr]:
    """Coefficients T_0 .. T_order of d/dxi log sigma(u - A(xi)).

    Order p demands symbols of rank up to p+1, so order <= 4 - 1 = 3 is the
    ceiling the symbol table supports.
    """
    if order < 0:
        raise ValueError("expansion order must be nonnegative")
    if order + 1 >= MAX_WP_RANK:
        raise OrderExceedsSupport(
            f"order {order} needs wp symbols of rank {order + 1} after pairing"
        )
    gaps = first.gaps
    small_gaps = tuple(a for a in gaps if a <= order)
    out = [AbelianExpr.zero() for _ in range(order + 1)]
    for i, w in enumerate(gaps):
        if w - 1 > order:
            continue
        du = first.du_series[i].truncated(order + 1)
        for S in _multisets_bounded(small_gaps, order - (w - 1)):
            series = du
            for a in S:
                series = series * (-first.u_of_gap(a).truncated(order + 1))
            mult = 1
            for a in set(S):
                mult *= math.factorial(S.count(a))
            if mult != 1:
                series = series.scale(Fraction(1, mult))
            if S:
                sym, sign = wp(*S, w), 1
            else:
                sym, sign = zeta(w), -1
            for p in range(order + 1):
                c = series.coeff(p)
                if not c.is_zero():
                    out[p] = out[p].add_symbol(sym, c if sign > 0 else -c)
    return out


def zeta_relations(
    second: SecondKindBasis, expansion: list[AbelianExpr]
) -> list[AbelianExpr]:
    """R_l = -res(r_l T) for each level; exact in the symbols.

    The pairing normalization guarantees the first-order content of R_l is
    exactly -zeta_l when l is a gap and empty otherwise; anything else
    raises ZetaLeakage.
    """
    fam = second.fam
    out = []
    for idx, r in enumerate(second.r_series):
        level = idx + 1
        if level - 1 >= len(expansion):
            raise OrderExceedsSupport(
                f"level {level} needs the expansion through order {level - 1}"
            )
        acc = AbelianExpr.zero()
        for p, t_p in enumerate(expansion):
            c = r.coeff(-1 - p)
            if not c.is_zero():
                acc = acc - t_p.scale(c)
        zetas = acc.zeta_terms()
        if level in fam.gaps:
            expected = {level: WeightedPoly.const(-1)}
        else:
            expected = {}
        if zetas != expected:
            raise ZetaLeakage(
                f"level {level}: first-order content {zetas} != {expected}"
            )
        out.append(acc)
    return out


@dataclass
class RFunction:
    """One inversion function: entire part minus wp-corrections, weight 2g-1+l."""

    level: int
    weight: int
    terms: dict[Monomial, AbelianExpr]

    def sorted_terms(self) -> list[tuple[Monomial, AbelianExpr]]:
        return sorted(self.terms.items(), key=lambda mc: -mc[0].sato_weight)

    def eval_numeric(
        self,
        x: complex,
        y: complex,
        symbol_values: Mapping[AbelianSymbol, complex],
        lam: Mapping[int, complex],
    ) -> complex:
        total = 0j
        for mono, coeff in self.terms.items():
            total += coeff.eval_numeric(symbol_values, lam) * mono.eval(x, y)
        return total


@dataclass
class InversionSystem:
    """The derived solution of the inversion problem for one family."""

    fam: CurveFamily
    first: FirstKindBasis
    second: SecondKindBasis
    zeta_rel: list[AbelianExpr]
    r_functions: list[RFunction]


def build_inversion_system(
    fam: CurveFamily, order: int | None = None
) -> InversionSystem:
    """Derive the full inversion system of a family from scratch.

    The default expansion order min(2g+n+2, n+6) is enough for every
    residue this derivation takes: the pairing windows close at exponent
    distances bounded by n, independently of the genus.
    """
    if order is None:
        order = min(2 * fam.genus + fam.n + 2, fam.n + 6)
    count = second_kind_count(fam)
    chart = expand_at_infinity(fam, order)
    first = first_kind_basis(chart)
    second = associated_second_kind(chart, first)
    expansion = log_sigma_derivative_expansion(first, count - 1)
    relations = zeta_relations(second, expansion)
    genus = fam.genus
    r_functions = []
    for idx, relation in enumerate(relations):
        level = idx + 1
        terms: dict[Monomial, AbelianExpr] = {
            mono: AbelianExpr.from_constant(c)
            for mono, c in second.numerators[idx].coefficients.items()
        }
        for i, w in enumerate(fam.gaps):
            coeff = -relation.differentiate(w)
            if coeff.is_zero():
                continue
            mono = first.numerators[i]
            assert mono not in terms
            terms[mono] = coeff
        r_functions.append(RFunction(level, 2 * genus - 1 + level, terms))
    return InversionSystem(fam, first, second, relations, r_functions)


# -- canonical emission -----------------------------------------------------

def _lambda_payload(key: tuple[tuple[int, int], ...]) -> dict[str, int]:
    return {str(k): e for k, e in key}


def _coefficient_payload(expr: AbelianExpr) -> dict:
    payload: dict = {}
    const_rat = expr.constant.constant_value()
    if const_rat:
        payload["constant"] = str(const_rat)
    symbols = []
    for key, q in expr.constant.sorted_terms():
        if key == ():
            continue
        symbols.append(
            {
                "kind": "const",
                "indices": [],
                "lambda": _lambda_payload(key),
                "rational": str(q),
            }
        )
    for sym, coeff in expr.canonical_terms():
        for key, q in coeff.sorted_terms():
            symbols.append(
                {
                    "kind": sym.json_kind,
                    "indices": list(sym.indices),
                    "lambda": _lambda_payload(key),
                    "rational": str(q),
                }
            )
    payload["symbols"] = symbols
    return payload


def system_payload(system: InversionSystem) -> dict:
    fam = system.fam
    functions = []
    for fn in system.r_functions:
        terms = []
        for mono, coeff in fn.sorted_terms():
            terms.append(
                {
                    "monomial": {"j": mono.j, "i": mono.i},
                    "coefficient": _coefficient_payload(coeff),
                }
            )
        functions.append({"weight": fn.weight, "terms": terms})
    return {
        "n": fam.n,
        "s": fam.s,
        "m": fam.s // fam.n,
        "genus": fam.genus,
        "extended": fam.extended,
        "gaps": list(fam.gaps),
        "functions": functions,
    }


def _raw_chunks(expr: AbelianExpr) -> list[tuple[tuple, Fraction, str]]:
    """(lambda key, rational, symbol latex) triples in canonical order."""
    chunks: list[tuple[tuple, Fraction, str]] = []
    for key, q in expr.constant.sorted_terms():
        chunks.append((key, q, ""))
    for sym, coeff in expr.canonical_terms():
        for key, q in coeff.sorted_terms():
            chunks.append((key, q, sym.to_latex()))
    return chunks


def _latex_chunk(
    key: tuple, q: Fraction, sym_tex: str, mono_tex: str = ""
) -> str:
    sign = "-" if q < 0 else "+"
    q = abs(q)
    factors = []
    for k, e in key:
        factors.append(f"\\lambda_{{{k}}}" + (f"^{{{e}}}" if e > 1 else ""))
    if sym_tex:
        factors.append(sym_tex)
    if mono_tex and mono_tex != "1":
        factors.append(mono_tex)
    if q != 1 or not factors:
        if q.denominator == 1:
            factors.insert(0, str(q.numerator))
        else:
            factors.insert(0, f"\\tfrac{{{q.numerator}}}{{{q.denominator}}}")
    return f"{sign} " + " ".join(factors)


def system_latex(system: InversionSystem) -> str:
    lines = ["\\begin{align*}"]
    for fn in system.r_functions:
        parts: list[str] = []
        for mono, coeff in fn.sorted_terms():
            mono_tex = mono.as_latex()
            raw = _raw_chunks(coeff)
            if not raw:
                continue
            if len(raw) == 1:
                key, q, sym_tex = raw[0]
                parts.append(_latex_chunk(key, q, sym_tex, mono_tex))
            else:
                # factor the sign of the first chunk out of the parentheses
                outer = "-" if raw[0][1] < 0 else "+"
                flip = -1 if raw[0][1] < 0 else 1
                inner = " ".join(
                    _latex_chunk(key, flip * q, sym_tex) for key, q, sym_tex in raw
                )
                if inner.startswith("+ "):
                    inner = inner[2:]
                tail = "" if mono_tex == "1" else f" {mono_tex}"
                parts.append(f"{outer} \\left( {inner} \\right){tail}")
        body = " ".join(parts)
        if body.startswith("+ "):
            body = body[2:]
        lines.append(f"R_{{{fn.weight}}}(u) &= {body} \\\\")
    if lines[-1].endswith(" \\\\"):
        lines[-1] = lines[-1][:-3]
    lines.append("\\end{align*}")
    return "\n".join(lines) + "\n"


def emit_system(system: InversionSystem, fmt: str = "latex") -> str:
    """Canonical text for one derived system; byte-stable across runs."""
    if fmt == "json":
        return json.dumps(system_payload(system), indent=1) + "\n"
    if fmt == "latex":
        return system_latex(system)
    raise ValueError(f"unknown format {fmt!r}; use 'latex' or 'json'")
