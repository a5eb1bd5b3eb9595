"""Exact coefficient arithmetic: weighted lambda-polynomials and Laurent series.

Everything in the symbolic pipeline is computed over ``fractions.Fraction``,
so downstream identity checks are exact, never approximate.  Two types live
here:

``WeightedPoly``
    a sparse polynomial in the curve parameters lambda_k.  The grading
    wgt lambda_k = k makes weight bookkeeping automatic: a polynomial is
    homogeneous iff all its terms share one weight, and products add weights.

``LaurentSeries``
    a truncated Laurent series in the local parameter xi with WeightedPoly
    coefficients.  The truncation order is part of the value: coefficients at
    exponents >= ``trunc`` are unknown, coefficients below ``low`` are exactly
    zero.  Operations propagate the provable truncation, and reading past it
    raises ``TruncationTooShallow`` instead of silently returning garbage.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    ExponentNotDivisible,
    NonUnitLeadingCoefficient,
    ResidueObstruction,
    TruncationTooShallow,
)

Rat = Union[int, Fraction]

# A term key is a sorted tuple of (subscript, exponent) pairs, all exponents > 0.
# The empty tuple keys the constant term.
TermKey = tuple[tuple[int, int], ...]


def as_fraction(value: Rat) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _term_weight(key: TermKey) -> int:
    return sum(k * e for k, e in key)


def _merge_keys(a: TermKey, b: TermKey) -> TermKey:
    exps: dict[int, int] = dict(a)
    for k, e in b:
        exps[k] = exps.get(k, 0) + e
    return tuple(sorted(exps.items()))


class WeightedPoly:
    """Sparse polynomial in the parameters lambda_k over Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[TermKey, Rat] | None = None):
        clean: dict[TermKey, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                q = as_fraction(coeff)
                if q:
                    clean[tuple(key)] = q
        self.terms: dict[TermKey, Fraction] = clean

    # -- constructors --

    @classmethod
    def const(cls, value: Rat) -> "WeightedPoly":
        return cls({(): value})

    @classmethod
    def zero(cls) -> "WeightedPoly":
        return cls()

    @classmethod
    def one(cls) -> "WeightedPoly":
        return cls({(): 1})

    @classmethod
    def gen(cls, k: int) -> "WeightedPoly":
        """The generator lambda_k, of weight k."""
        if k <= 0:
            raise ValueError("lambda subscripts are positive")
        return cls({((k, 1),): 1})

    # -- predicates and metadata --

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {()}

    def constant_value(self) -> Fraction:
        """The coefficient of the empty monomial."""
        return self.terms.get((), Fraction(0))

    @property
    def weight(self) -> int | None:
        """Common Sato weight of all terms, or None if mixed or zero."""
        weights = {_term_weight(key) for key in self.terms}
        if len(weights) == 1:
            return weights.pop()
        return None

    def lambda_subscripts(self) -> set[int]:
        return {k for key in self.terms for k, _ in key}

    # -- ring operations --

    def __add__(self, other: "WeightedPoly | Rat") -> "WeightedPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = terms.get(key, Fraction(0)) + coeff
            if acc:
                terms[key] = acc
            else:
                terms.pop(key, None)
        out = WeightedPoly.__new__(WeightedPoly)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self) -> "WeightedPoly":
        out = WeightedPoly.__new__(WeightedPoly)
        out.terms = {key: -c for key, c in self.terms.items()}
        return out

    def __sub__(self, other: "WeightedPoly | Rat") -> "WeightedPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "WeightedPoly | Rat") -> "WeightedPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: "WeightedPoly | Rat") -> "WeightedPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[TermKey, Fraction] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                key = _merge_keys(ka, kb)
                acc = terms.get(key, Fraction(0)) + ca * cb
                if acc:
                    terms[key] = acc
                else:
                    terms.pop(key, None)
        out = WeightedPoly.__new__(WeightedPoly)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __truediv__(self, other: Rat) -> "WeightedPoly":
        q = as_fraction(other)
        if not q:
            raise ZeroDivisionError("division of a WeightedPoly by zero")
        out = WeightedPoly.__new__(WeightedPoly)
        out.terms = {key: c / q for key, c in self.terms.items()}
        return out

    def __pow__(self, n: int) -> "WeightedPoly":
        if n < 0:
            raise ValueError("negative power of a WeightedPoly")
        out = WeightedPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WeightedPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == WeightedPoly.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- evaluation and display --

    def eval_numeric(self, lam: Mapping[int, complex]) -> complex:
        """Substitute numbers for the lambda_k; absent subscripts read as 0."""
        total = 0j
        for key, coeff in self.terms.items():
            value = complex(coeff)
            for k, e in key:
                value *= complex(lam.get(k, 0)) ** e
            total += value
        return total

    def substitute(self, lam: Mapping[int, "WeightedPoly | Rat"]) -> "WeightedPoly":
        """Substitute exact values (or other polynomials) for the lambda_k."""
        total = WeightedPoly.zero()
        for key, coeff in self.terms.items():
            term = WeightedPoly.const(coeff)
            for k, e in key:
                base = _coerce_poly(lam.get(k, 0))
                for _ in range(e):
                    term = term * base
            total = total + term
        return total

    def sorted_terms(self) -> list[tuple[TermKey, Fraction]]:
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        return f"WeightedPoly({self.to_text()})"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for key, coeff in self.sorted_terms():
            factors = "*".join(
                f"l{k}" + (f"^{e}" if e > 1 else "") for k, e in key
            )
            if not factors:
                chunks.append(str(coeff))
            elif coeff == 1:
                chunks.append(factors)
            elif coeff == -1:
                chunks.append(f"-{factors}")
            else:
                chunks.append(f"{coeff}*{factors}")
        text = chunks[0]
        for chunk in chunks[1:]:
            text += f" - {chunk[1:]}" if chunk.startswith("-") else f" + {chunk}"
        return text

    def to_latex(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for key, coeff in self.sorted_terms():
            factors = " ".join(
                f"\\lambda_{{{k}}}" + (f"^{{{e}}}" if e > 1 else "")
                for k, e in key
            )
            body = _latex_rat(coeff, bare_one=not factors)
            chunks.append(f"{body} {factors}".strip())
        text = chunks[0]
        for chunk in chunks[1:]:
            text += f" {chunk}" if chunk.startswith("-") else f" + {chunk}"
        return text


def _latex_rat(q: Fraction, bare_one: bool = True) -> str:
    sign = "-" if q < 0 else ""
    q = abs(q)
    if q.denominator == 1:
        body = str(q.numerator)
        if q.numerator == 1 and not bare_one:
            body = ""
    else:
        body = f"\\frac{{{q.numerator}}}{{{q.denominator}}}"
    return sign + body


def _coerce_poly(value) -> WeightedPoly:
    if isinstance(value, WeightedPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return WeightedPoly.const(value)
    return NotImplemented


ZERO = WeightedPoly.zero()
ONE = WeightedPoly.one()


class LaurentSeries:
    """Truncated Laurent series in xi with WeightedPoly coefficients.

    ``coeffs[t]`` is the coefficient of xi**(low + t); the tuple always spans
    exponents ``low .. trunc - 1``.  Exponents below ``low`` are exactly zero,
    exponents at or above ``trunc`` are unknown.  For a series with no known
    nonzero coefficient, ``low == trunc`` and the tuple is empty.
    """

    __slots__ = ("low", "coeffs", "trunc")

    def __init__(self, low: int, coeffs: Iterable[WeightedPoly | Rat], trunc: int):
        polys = [_require_poly(c) for c in coeffs]
        # normalize: strip known-zero leading coefficients
        start = 0
        while start < len(polys) and polys[start].is_zero():
            start += 1
        if start == len(polys):
            low = trunc
            polys = []
        else:
            low += start
            polys = polys[start:]
        if low + len(polys) != trunc:
            raise ValueError("coefficient span must cover low .. trunc-1")
        self.low = low
        self.coeffs = tuple(polys)
        self.trunc = trunc

    # -- constructors --

    @classmethod
    def zero(cls, trunc: int) -> "LaurentSeries":
        return cls(trunc, (), trunc)

    @classmethod
    def monomial(cls, exp: int, coeff: WeightedPoly | Rat, trunc: int) -> "LaurentSeries":
        if exp >= trunc:
            raise ValueError("monomial exponent must lie below the truncation")
        return cls.from_terms({exp: coeff}, trunc)

    @classmethod
    def one(cls, trunc: int) -> "LaurentSeries":
        return cls.monomial(0, 1, trunc)

    @classmethod
    def from_terms(cls, terms: Mapping[int, WeightedPoly | Rat], trunc: int) -> "LaurentSeries":
        polys = {e: _require_poly(c) for e, c in terms.items()}
        polys = {e: c for e, c in polys.items() if not c.is_zero()}
        if not polys:
            return cls.zero(trunc)
        low = min(polys)
        if max(polys) >= trunc:
            raise ValueError("term exponent at or above the truncation")
        coeffs = [polys.get(e, ZERO) for e in range(low, trunc)]
        return cls(low, coeffs, trunc)

    # -- access --

    def coeff(self, exp: int) -> WeightedPoly:
        """Coefficient of xi**exp; raises if exp is past the truncation."""
        if exp >= self.trunc:
            raise TruncationTooShallow(
                f"coefficient at xi^{exp} requested, series truncated at xi^{self.trunc}"
            )
        if exp < self.low:
            return ZERO
        return self.coeffs[exp - self.low]

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> tuple[int, WeightedPoly]:
        """(exponent, coefficient) of the lowest nonzero term."""
        if not self.coeffs:
            raise ValueError("zero series has no leading term")
        return self.low, self.coeffs[0]

    def items(self) -> Iterator[tuple[int, WeightedPoly]]:
        for t, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield self.low + t, c

    def relative_order(self) -> int:
        return self.trunc - self.low

    # -- arithmetic --

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        low = min(self.low, other.low, trunc)
        coeffs = [
            self._get(e) + other._get(e) for e in range(low, trunc)
        ]
        return LaurentSeries(low, coeffs, trunc)

    def _get(self, exp: int) -> WeightedPoly:
        if self.low <= exp < self.trunc:
            return self.coeffs[exp - self.low]
        return ZERO

    def __neg__(self) -> "LaurentSeries":
        out = LaurentSeries.__new__(LaurentSeries)
        out.low = self.low
        out.coeffs = tuple(-c for c in self.coeffs)
        out.trunc = self.trunc
        return out

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        # for a zero series low == trunc, so this is also the right provable
        # order for products with one or both factors identically zero
        trunc = min(self.low + other.trunc, other.low + self.trunc)
        low = self.low + other.low
        acc = [ZERO] * (trunc - low)
        for ea, ca in enumerate(self.coeffs):
            base = self.low + ea + other.low
            if base >= trunc:
                break
            stop = min(len(other.coeffs), trunc - base)
            for eb in range(stop):
                cb = other.coeffs[eb]
                if cb.is_zero() or ca.is_zero():
                    continue
                acc[base + eb - low] = acc[base + eb - low] + ca * cb
        return LaurentSeries(low, acc, trunc)

    def scale(self, factor: WeightedPoly | Rat) -> "LaurentSeries":
        factor = _require_poly(factor)
        if factor.is_zero():
            return LaurentSeries.zero(self.trunc)
        coeffs = [c * factor for c in self.coeffs]
        return LaurentSeries(self.low, coeffs, self.trunc)

    def shift(self, offset: int) -> "LaurentSeries":
        """Multiply by xi**offset."""
        out = LaurentSeries.__new__(LaurentSeries)
        out.low = self.low + offset
        out.coeffs = self.coeffs
        out.trunc = self.trunc + offset
        return out

    def truncated(self, trunc: int) -> "LaurentSeries":
        """Forget coefficients at exponents >= trunc."""
        if trunc >= self.trunc:
            return self
        low = min(self.low, trunc)
        return LaurentSeries(low, [self._get(e) for e in range(low, trunc)], trunc)

    def __pow__(self, n: int) -> "LaurentSeries":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = LaurentSeries.one(self.relative_order() or 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.low == other.low
            and self.trunc == other.trunc
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.low, self.trunc, self.coeffs))

    # -- the named series operations --

    def invert(self) -> "LaurentSeries":
        """Multiplicative inverse; the lead coefficient must be a nonzero rational."""
        if self.is_zero():
            raise NonUnitLeadingCoefficient("cannot invert the zero series")
        v, lead = self.leading()
        if not lead.is_constant():
            raise NonUnitLeadingCoefficient(
                f"leading coefficient {lead.to_text()} is not a rational constant"
            )
        c0 = lead.constant_value()
        rel = self.relative_order()
        # long-division recurrence on the tail: (c0 + t)(b) = 1
        inv: list[WeightedPoly] = [WeightedPoly.const(1 / c0)]
        for k in range(1, rel):
            acc = ZERO
            for j in range(1, k + 1):
                tj = self.coeffs[j] if j < len(self.coeffs) else ZERO
                if tj.is_zero() or inv[k - j].is_zero():
                    continue
                acc = acc + tj * inv[k - j]
            inv.append(acc * WeightedPoly.const(-1 / c0))
        return LaurentSeries(-v, inv, -v + rel)

    def nth_root(self, n: int) -> "LaurentSeries":
        """Series n-th root; needs n | low and leading coefficient 1."""
        if n <= 0:
            raise ValueError("root index must be positive")
        if self.is_zero():
            raise NonUnitLeadingCoefficient("cannot take a root of the zero series")
        v, lead = self.leading()
        if v % n != 0:
            raise ExponentNotDivisible(
                f"lowest exponent {v} is not divisible by {n}"
            )
        if not (lead.is_constant() and lead.constant_value() == 1):
            raise NonUnitLeadingCoefficient(
                f"n-th root requires leading coefficient 1, got {lead.to_text()}"
            )
        rel = self.relative_order()
        # Solve r**n = a for a power series r = 1 + ..., one order at a time:
        # the xi^k coefficient of r**n is n*r_k plus terms in lower r_j only.
        a = self.shift(-v)  # power series with constant term 1
        root: list[WeightedPoly] = [ONE]
        for k in range(1, rel):
            partial = LaurentSeries(0, root + [ZERO] * (rel - k), rel) ** n
            defect = a.coeff(k) - partial.coeff(k)
            root.append(defect / n)
        return LaurentSeries(v // n, root, v // n + rel)

    def differentiate(self) -> "LaurentSeries":
        coeffs = [
            c * WeightedPoly.const(self.low + t)
            for t, c in enumerate(self.coeffs)
        ]
        return LaurentSeries(self.low - 1, coeffs, self.trunc - 1)

    def integrate(self) -> "LaurentSeries":
        """Term-wise antiderivative with zero constant term."""
        res = self._get(-1)
        if not res.is_zero():
            raise ResidueObstruction(
                f"nonzero residue {res.to_text()} blocks term-wise integration"
            )
        terms = {
            e + 1: c / (e + 1) for e, c in self.items() if e != -1
        }
        # the constant of integration is fixed to zero; exponent 0 stays empty
        return LaurentSeries.from_terms(terms, self.trunc + 1)

    def residue(self) -> WeightedPoly:
        """Coefficient of xi**-1; zero when the series provably starts above it."""
        if self.trunc <= -1:
            raise TruncationTooShallow(
                "series truncated before xi^-1; residue is not determined"
            )
        return self._get(-1)

    # -- display --

    def __repr__(self) -> str:
        return f"LaurentSeries({self.to_text()})"

    def to_text(self, var: str = "xi") -> str:
        chunks = []
        for e, c in self.items():
            coeff = c.to_text()
            if "+" in coeff or coeff.lstrip("-").count("-"):
                coeff = f"({coeff})"
            if e == 0:
                chunks.append(coeff)
            else:
                power = f"{var}^{e}" if e != 1 else var
                chunks.append(power if coeff == "1" else f"{coeff}*{power}")
        chunks.append(f"O({var}^{self.trunc})")
        return " + ".join(chunks)


def _require_poly(value) -> WeightedPoly:
    poly = _coerce_poly(value)
    if poly is NotImplemented:
        raise TypeError(f"expected WeightedPoly or rational, got {type(value).__name__}")
    return poly


def residue_of_product(a: LaurentSeries, b: LaurentSeries) -> WeightedPoly:
    """res(a*b) without forming the full product."""
    return (a * b).residue()
