"""Plane (n,s) curve families.

A family is the affine curve

    f(x, y) = -y^n + x^s + sum lambda_k y^j x^i = 0,    gcd(n, s) = 1, n < s,

with one smooth place at infinity.  Under the grading wgt x = n, wgt y = s,
wgt lambda_k = k every term of f has weight ns, and the subscript of each
lambda is pinned by its monomial: k = ns - js - in.  The canonical shape
restricts to j <= n-2, i <= s-2; the extended shape admits every monomial of
positive lambda-weight with j <= n-1, which covers curves carrying y^(n-1)
terms.

The gap sequence of the point at infinity is the complement of the numerical
semigroup <n, s>; monomials y^j x^i with 0 <= j < n, ordered by weight
js + in, realize exactly the non-gaps as pole orders.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from .algebra import WeightedPoly, as_fraction
from .errors import (
    BranchCollision,
    InvalidLambdaIndex,
    NotCoprime,
    RootFindingFailure,
    SymbolicLambda,
)

LambdaValue = Union[WeightedPoly, complex]


@dataclass(frozen=True)
class Monomial:
    """y^j x^i with its Sato weight js + in and label = weight - (2g-1)."""

    j: int
    i: int
    sato_weight: int
    label: int

    def as_text(self) -> str:
        parts = []
        if self.j:
            parts.append("y" + (f"^{self.j}" if self.j > 1 else ""))
        if self.i:
            parts.append("x" + (f"^{self.i}" if self.i > 1 else ""))
        return "*".join(parts) if parts else "1"

    def as_latex(self) -> str:
        parts = []
        if self.j:
            parts.append("y" + (f"^{{{self.j}}}" if self.j > 1 else ""))
        if self.i:
            parts.append("x" + (f"^{{{self.i}}}" if self.i > 1 else ""))
        return " ".join(parts) if parts else "1"

    def eval(self, x: complex, y: complex) -> complex:
        return (y ** self.j) * (x ** self.i)


@dataclass(frozen=True)
class CurvePoint:
    x: complex
    y: complex


class EntireRationalFn:
    """A finite sum  sum c_M * M  of basis monomials with exact coefficients.

    These are regular away from infinity; the weight, when every term agrees,
    is max pole order at infinity.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Mapping[Monomial, WeightedPoly]):
        self.coefficients = {
            m: c for m, c in coefficients.items() if not c.is_zero()
        }

    @property
    def weight(self) -> int | None:
        weights = set()
        for m, c in self.coefficients.items():
            cw = c.weight
            if cw is None:
                return None
            weights.add(m.sato_weight + cw)
        if len(weights) == 1:
            return weights.pop()
        return None

    def sorted_terms(self) -> list[tuple[Monomial, WeightedPoly]]:
        """Terms by descending monomial weight: leading pole first."""
        return sorted(
            self.coefficients.items(), key=lambda mc: -mc[0].sato_weight
        )

    def eval(self, x: complex, y: complex, lam: Mapping[int, complex]) -> complex:
        total = 0j
        for m, c in self.coefficients.items():
            total += c.eval_numeric(lam) * m.eval(x, y)
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntireRationalFn):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(frozenset(self.coefficients.items()))

    def as_text(self) -> str:
        parts = []
        for m, c in self.sorted_terms():
            coeff = c.to_text()
            if coeff == "1":
                chunk = m.as_text()
            elif coeff == "-1":
                chunk = f"-{m.as_text()}"
            else:
                if " " in coeff:
                    coeff = f"({coeff})"
                chunk = coeff if m.as_text() == "1" else f"{coeff}*{m.as_text()}"
            parts.append(chunk)
        if not parts:
            return "0"
        text = parts[0]
        for chunk in parts[1:]:
            text += f" - {chunk[1:]}" if chunk.startswith("-") else f" + {chunk}"
        return text

    def __repr__(self) -> str:
        return f"EntireRationalFn({self.as_text()})"


class CurveFamily:
    """An (n,s) curve with exact (possibly symbolic) or numeric coefficients."""

    __slots__ = ("n", "s", "extended", "lam", "genus", "gaps", "_index_map", "_monomials")

    def __init__(
        self,
        n: int,
        s: int,
        lam: Mapping[int, LambdaValue],
        extended: bool,
        index_map: Mapping[int, tuple[int, int]],
    ):
        self.n = n
        self.s = s
        self.extended = extended
        self.lam = dict(lam)
        self._index_map = dict(index_map)
        self.genus = (n - 1) * (s - 1) // 2
        self.gaps = _gap_sequence(n, s)
        assert len(self.gaps) == self.genus
        self._monomials: list[Monomial] = []

    # -- basis bookkeeping --

    def monomial_of_weight(self, w: int) -> Monomial | None:
        """The unique y^j x^i (0 <= j < n) with js + in = w, if it exists."""
        if w < 0:
            return None
        s_inv = pow(self.s, -1, self.n)
        j = (w * s_inv) % self.n
        i, rem = divmod(w - j * self.s, self.n)
        if rem or i < 0:
            return None
        return Monomial(j, i, w, w - (2 * self.genus - 1))

    def monomial_of_label(self, label: int) -> Monomial:
        mono = self.monomial_of_weight(label + 2 * self.genus - 1)
        if mono is None:
            raise ValueError(f"no monomial carries label {label}")
        return mono

    def monomial_basis(self, count: int) -> list[Monomial]:
        """The first ``count`` monomials ordered by increasing pole order."""
        w = self._monomials[-1].sato_weight + 1 if self._monomials else 0
        while len(self._monomials) < count:
            mono = self.monomial_of_weight(w)
            if mono is not None:
                self._monomials.append(mono)
            w += 1
        return self._monomials[:count]

    def gap_index(self, w: int) -> int:
        """Position of the gap w in the ordered gap sequence (0-based)."""
        return self.gaps.index(w)

    # -- coefficient access --

    def lambda_terms(self) -> list[tuple[int, int, int, LambdaValue]]:
        """(k, j, i, value) for every lambda term actually present."""
        out = []
        for k in sorted(self.lam, reverse=True):
            j, i = self._index_map[k]
            out.append((k, j, i, self.lam[k]))
        return out

    def is_exact(self) -> bool:
        return all(isinstance(v, WeightedPoly) for v in self.lam.values())

    def exact_lambda(self) -> dict[int, WeightedPoly]:
        vals = {}
        for k, v in self.lam.items():
            if not isinstance(v, WeightedPoly):
                raise SymbolicLambda(
                    f"lambda_{k} = {v!r} is a float; exact arithmetic needs rationals"
                )
            vals[k] = v
        return vals

    def numeric_lambda(self) -> dict[int, complex]:
        vals = {}
        for k, v in self.lam.items():
            if isinstance(v, WeightedPoly):
                if not v.is_constant():
                    raise SymbolicLambda(
                        f"lambda_{k} is symbolic; numeric evaluation impossible"
                    )
                vals[k] = complex(v.constant_value())
            else:
                vals[k] = complex(v)
        return vals

    def symbolic_twin(self) -> "CurveFamily":
        """The same (n, s, shape) with every admissible lambda left symbolic."""
        return make_family(self.n, self.s, "sym", extended=self.extended)

    # -- numeric curve evaluation --

    def y_poly(self, x: complex) -> np.ndarray:
        """Coefficients (highest first) of f(x, .) as a polynomial in y."""
        lam = self.numeric_lambda()
        coeffs = np.zeros(self.n + 1, dtype=complex)
        coeffs[0] = -1.0
        coeffs[self.n] = x ** self.s
        for k, j, i, _ in self.lambda_terms():
            coeffs[self.n - j] += lam[k] * x ** i
        return coeffs

    def eval_f(self, x: complex, y: complex) -> complex:
        return complex(np.polyval(self.y_poly(x), y))

    def eval_dyf(self, x: complex, y: complex) -> complex:
        return complex(np.polyval(np.polyder(self.y_poly(x)), y))

    def lift_x_to_points(self, x: complex) -> list[CurvePoint]:
        """All n points of the fiber over x, sorted for determinism."""
        poly = self.y_poly(x)
        roots = np.roots(poly)
        if len(roots) != self.n:
            raise RootFindingFailure(f"fiber over x={x} did not yield {self.n} roots")
        scale = max(1.0, float(np.max(np.abs(poly))))
        for y in roots:
            if abs(self.eval_f(x, y)) > 1e-6 * scale * max(1.0, abs(y)) ** self.n:
                raise RootFindingFailure(f"fiber root at x={x} fails the residual check")
        return [CurvePoint(complex(x), complex(y)) for y in sorted(roots, key=lambda z: (z.real, z.imag))]

    # -- display --

    def family_label(self) -> str:
        return f"({self.n},{self.s})" + ("+" if self.extended else "")

    def f_text(self) -> str:
        parts = [f"-y^{self.n}", f"x^{self.s}"]
        for k, j, i, v in self.lambda_terms():
            mono = Monomial(j, i, 0, 0).as_text()
            if isinstance(v, WeightedPoly):
                coeff = v.to_text()
            else:
                coeff = repr(v)
            head = coeff if mono == "1" else f"{coeff}*{mono}"
            parts.append(head)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"CurveFamily({self.family_label()}, genus={self.genus})"


def _gap_sequence(n: int, s: int) -> tuple[int, ...]:
    top = (n - 1) * (s - 1)  # 2g; every integer >= 2g is a non-gap
    reachable = [False] * (top + 1)
    for j in range(n):
        base = j * s
        if base > top:
            break
        for w in range(base, top + 1, n):
            reachable[w] = True
    return tuple(w for w in range(1, top) if not reachable[w])


def admissible_indices(n: int, s: int, extended: bool = False) -> dict[int, tuple[int, int]]:
    """Map from admissible lambda subscript k to its monomial (j, i)."""
    out: dict[int, tuple[int, int]] = {}
    j_top = n - 1 if extended else n - 2
    for j in range(j_top + 1):
        i = 0
        while True:
            k = n * s - j * s - i * n
            if k <= 0:
                break
            if extended or i <= s - 2:
                out[k] = (j, i)
            i += 1
    return out


def make_family(
    n: int,
    s: int,
    lam: Union[str, Mapping[int, object]] = "sym",
    extended: bool = False,
) -> CurveFamily:
    """Build a curve family; ``lam`` is "sym" or a map k -> value.

    Values may be exact (int, Fraction, WeightedPoly, or the string "sym")
    or numeric (float, complex).  Subscripts outside the admissible set for
    the chosen shape raise InvalidLambdaIndex.
    """
    if n < 2 or s <= n:
        raise NotCoprime(f"need 2 <= n < s, got n={n}, s={s}")
    if math.gcd(n, s) != 1:
        raise NotCoprime(f"n={n} and s={s} share a factor")
    index_map = admissible_indices(n, s, extended)
    if lam == "sym":
        values: dict[int, LambdaValue] = {k: WeightedPoly.gen(k) for k in index_map}
    else:
        values = {}
        for key, raw in dict(lam).items():
            k = int(key)
            if k not in index_map:
                raise InvalidLambdaIndex(
                    f"lambda_{k} is not admissible for the "
                    f"{'extended ' if extended else ''}({n},{s}) shape"
                )
            values[k] = _coerce_lambda_value(k, raw)
    return CurveFamily(n, s, values, extended, index_map)


def _coerce_lambda_value(k: int, raw: object) -> LambdaValue:
    if raw == "sym":
        return WeightedPoly.gen(k)
    if isinstance(raw, WeightedPoly):
        return raw
    if isinstance(raw, (int, Fraction)):
        return WeightedPoly.const(as_fraction(raw))
    if isinstance(raw, (float, complex)):
        return complex(raw)
    if isinstance(raw, str):
        return WeightedPoly.const(Fraction(raw))
    raise TypeError(f"cannot read lambda_{k} value {raw!r}")


# -- curve description files --

_LINE = re.compile(r"^\s*([A-Za-z_.0-9]+)\s*=\s*(.+?)\s*$")


def family_from_text(text: str) -> CurveFamily:
    """Parse the key=value curve format (n, s, extended, lambda.k lines)."""
    n = s = None
    extended = False
    lam: dict[int, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        match = _LINE.match(body)
        if not match:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = match.group(1), match.group(2)
        if key == "n":
            n = int(value)
        elif key == "s":
            s = int(value)
        elif key == "extended":
            extended = value.lower() in ("1", "true", "yes")
        elif key.startswith("lambda."):
            k = int(key.split(".", 1)[1])
            if value == "sym":
                lam[k] = "sym"
            else:
                try:
                    lam[k] = Fraction(value)
                except ValueError:
                    lam[k] = complex(value)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if n is None or s is None:
        raise ValueError("curve description must set both n and s")
    return make_family(n, s, lam, extended=extended)


def family_to_text(fam: CurveFamily) -> str:
    lines = [f"n = {fam.n}", f"s = {fam.s}"]
    if fam.extended:
        lines.append("extended = true")
    for k in sorted(fam.lam):
        v = fam.lam[k]
        if isinstance(v, WeightedPoly):
            if v == WeightedPoly.gen(k):
                lines.append(f"lambda.{k} = sym")
            else:
                lines.append(f"lambda.{k} = {v.constant_value()}")
        else:
            value = v if v.imag else v.real
            lines.append(f"lambda.{k} = {value!r}")
    return "\n".join(lines) + "\n"


# -- non-degeneracy ---------------------------------------------------------

def discriminant_roots(fam: CurveFamily) -> np.ndarray:
    """Roots in x of the discriminant of f(x, .), for numeric families.

    The resultant of f and df/dy in y is sampled on a circle and its
    coefficients recovered by an inverse DFT; exact interpolation since the
    degree bound (2n-1)s is respected.
    """
    n, s = fam.n, fam.s
    degree = (2 * n - 1) * s
    count = degree + 1
    radius = 1.25
    nodes = radius * np.exp(2j * np.pi * np.arange(count) / count)
    values = np.array([_sylvester_det(fam, x) for x in nodes])
    powers = np.outer(np.arange(count), np.arange(count))
    dft = np.exp(-2j * np.pi * powers / count)
    coeffs = dft @ values / count / radius ** np.arange(count)
    norm = np.max(np.abs(coeffs))
    if norm == 0:
        raise BranchCollision("discriminant vanishes identically")
    trimmed = np.trim_zeros(np.where(np.abs(coeffs) > 1e-10 * norm, coeffs, 0), "b")
    return np.roots(trimmed[::-1])


def _sylvester_det(fam: CurveFamily, x: complex) -> complex:
    p = fam.y_poly(x)
    q = np.polyder(p)
    n, m = len(p) - 1, len(q) - 1
    size = n + m
    mat = np.zeros((size, size), dtype=complex)
    for r in range(m):
        mat[r, r : r + n + 1] = p
    for r in range(n):
        mat[m + r, r : r + m + 1] = q
    return complex(np.linalg.det(mat))


def check_nondegenerate(fam: CurveFamily, tol: float = 1e-8) -> float:
    """Smallest spacing between discriminant roots; raises if below tol."""
    roots = discriminant_roots(fam)
    if len(roots) < 2:
        return math.inf
    spacing = min(
        abs(a - b) for t, a in enumerate(roots) for b in roots[t + 1 :]
    )
    if spacing < tol:
        raise BranchCollision(
            f"discriminant roots {spacing:.2e} apart; curve is degenerate"
        )
    return float(spacing)
